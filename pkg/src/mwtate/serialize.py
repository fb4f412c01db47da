"""JSON codecs for the documented wire schemas.

Complexes:    {"cells": [{"id": str, "weight": int}],
               "attach": [{"from": str, "to": str, "coeff": int}]}
Normal forms: [{"kind": "free", "weight": i},
               {"kind": "dyadic", "t": t, "weight": i},
               {"kind": "odd", "p": p, "r": r, "shift": s}]
Graded groups: [{"degree": int, "free": int, "torsion": [int]}], wrapped
with a model tag for integral hom answers.
Pages:        {"page": i, "towers": [{"p", "q", "height", "label"}],
               "differential": [{"from": idx, "to": idx, "rho_power": j}]}
"""

from __future__ import annotations

from .bockstein.pages import Page
from .exactalg import FormalGroup, GradedGroup
from .motives import DyadicEta, Free, NormalForm, OddTorsion, TateComplex
from .wittring import GWElement

MODEL_TAG = "minimal-euclidean"


def complex_to_json(c: TateComplex) -> dict:
    return {
        "cells": [{"id": cid, "weight": w} for cid, w in c.cells],
        "attach": [
            {"from": hi, "to": lo, "coeff": v}
            for (hi, lo), v in sorted(c.attach.items())
        ],
    }


def complex_from_json(data) -> TateComplex:
    if not isinstance(data, dict) or "cells" not in data:
        raise ValueError("complex JSON needs a 'cells' list")
    cells = [(str(c["id"]), int(c["weight"])) for c in data["cells"]]
    attach = {}
    for entry in data.get("attach", []):
        attach[(str(entry["from"]), str(entry["to"]))] = int(entry["coeff"])
    return TateComplex(cells, attach)


def normal_form_to_json(a: NormalForm) -> list:
    out = []
    for b in a.blocks:
        if isinstance(b, Free):
            out.append({"kind": "free", "weight": b.weight})
        elif isinstance(b, DyadicEta):
            out.append({"kind": "dyadic", "t": b.t, "weight": b.weight})
        else:
            out.append({"kind": "odd", "p": b.p, "r": b.r, "shift": b.shift})
    return out


def normal_form_from_json(data) -> NormalForm:
    if not isinstance(data, list):
        raise ValueError("normal form JSON must be a list of blocks")
    blocks = []
    for entry in data:
        kind = entry.get("kind")
        if kind == "free":
            blocks.append(Free(int(entry["weight"])))
        elif kind == "dyadic":
            blocks.append(DyadicEta(int(entry["t"]), int(entry["weight"])))
        elif kind == "odd":
            blocks.append(
                OddTorsion(int(entry["p"]), int(entry["r"]), int(entry["shift"]))
            )
        else:
            raise ValueError(f"unknown block kind {kind!r}")
    return NormalForm(blocks)


def formal_group_to_json(g: FormalGroup) -> dict:
    return {"free": g.free_rank, "torsion": list(g.torsion)}


def graded_group_to_json(g: GradedGroup, model: bool = False):
    groups = [
        {"degree": d, "free": grp.free_rank, "torsion": list(grp.torsion)}
        for d, grp in g.items()
    ]
    if model:
        return {"model": MODEL_TAG, "groups": groups}
    return groups


def gw_to_json(e: GWElement) -> dict:
    return {"rank": e.rank, "signature": e.signature}


def gw_from_json(data) -> GWElement:
    return GWElement(int(data["rank"]), int(data["signature"]))


def page_to_json(pg: Page) -> dict:
    towers = sorted(pg.towers)
    index = {}
    tower_list = []
    for k, t in enumerate(towers):
        index.setdefault(t, []).append(k)
        tower_list.append(
            {
                "p": t.p,
                "q": t.q,
                "height": "inf" if t.height is None else t.height,
                "label": t.label,
            }
        )
    used_src = {t: 0 for t in index}
    used_dst = {t: 0 for t in index}
    diffs = []
    for src, dst, power in sorted(pg.arrows, key=lambda a: (a[0], a[1], a[2])):
        si = index[src][min(used_src[src], len(index[src]) - 1)]
        used_src[src] += 1
        di = index[dst][min(used_dst[dst], len(index[dst]) - 1)]
        used_dst[dst] += 1
        diffs.append({"from": si, "to": di, "rho_power": power})
    return {"page": pg.index, "towers": tower_list, "differential": diffs}
