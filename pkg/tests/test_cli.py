import json

import pytest

from mwtate import serialize
from mwtate.cli import main
from mwtate.motives import DyadicEta, Free, NormalForm, OddTorsion, TateComplex, decompose
from mwtate.wittring import GWElement


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


COMPLEX_JSON = json.dumps(
    {
        "cells": [{"id": "a", "weight": 0}, {"id": "b", "weight": 1}],
        "attach": [{"from": "b", "to": "a", "coeff": 6}],
    }
)


class TestSerialization:
    def test_complex_round_trip(self):
        c = TateComplex([("a", 0), ("b", 1)], {("b", "a"): 6})
        again = serialize.complex_from_json(serialize.complex_to_json(c))
        assert again == c

    def test_normal_form_round_trip(self):
        a = NormalForm([Free(0), DyadicEta(2, 1), OddTorsion(3, 1, -1)])
        again = serialize.normal_form_from_json(serialize.normal_form_to_json(a))
        assert again == a

    def test_gw_round_trip(self):
        e = GWElement(2, -4)
        assert serialize.gw_from_json(serialize.gw_to_json(e)) == e

    def test_page_json_shape(self):
        from mwtate.bockstein import pages

        pg = pages(NormalForm([DyadicEta(2, 0)]), 3)
        data = serialize.page_to_json(pg)
        assert data["page"] == 3
        assert data["differential"][0]["rho_power"] == 2
        heights = {t["height"] for t in data["towers"]}
        assert heights == {"inf"}


class TestCLI:
    def test_decompose_file(self, tmp_path, capsys):
        path = tmp_path / "cx.json"
        path.write_text(COMPLEX_JSON)
        code, out, _ = run(capsys, "decompose", "--in", str(path))
        assert code == 0
        assert json.loads(out) == [
            {"kind": "dyadic", "t": 1, "weight": 0},
            {"kind": "odd", "p": 3, "r": 1, "shift": 0},
        ]

    def test_pages_table(self, capsys):
        code, out, _ = run(
            capsys,
            "pages",
            "--blocks",
            '[{"kind":"dyadic","t":2,"weight":0}]',
            "--page",
            "4",
            "--format",
            "table",
        )
        assert code == 0
        assert "height: 2" in out and "label: v" in out

    def test_classify(self, capsys):
        code, out, _ = run(capsys, "classify-hp1", "--rank", "2", "--euler", "0,4")
        assert code == 0
        data = json.loads(out)
        assert data["is_free"] is False
        assert data["stably_free_nontrivial"] is True

    def test_check_suite(self, capsys):
        code, out, _ = run(capsys, "check", "--suite", "hp1", "--seed", "7")
        assert code == 0
        assert out.startswith("pass")

    def test_validation_failure_exit_two(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(
            json.dumps(
                {
                    "cells": [{"id": "a", "weight": 0}, {"id": "b", "weight": 2}],
                    "attach": [{"from": "b", "to": "a", "coeff": 1}],
                }
            )
        )
        code, out, _ = run(capsys, "decompose", "--in", str(path))
        assert code == 2
        assert "NonAdjacent" in out

    def test_malformed_input_exit_one(self, tmp_path, capsys):
        path = tmp_path / "junk.json"
        path.write_text("{not json")
        code, _, err = run(capsys, "decompose", "--in", str(path))
        assert code == 1

    def test_usage_error_exit_64(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["pages", "--bogus"])
        assert exc.value.code == 64
        capsys.readouterr()

    def test_tensor_round_trip_determinism(self, capsys):
        args = (
            "tensor",
            "--blocks",
            '[{"kind":"dyadic","t":1,"weight":0}]',
            "--blocks",
            '[{"kind":"dyadic","t":2,"weight":0}]',
        )
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        assert out1 == out2

    def test_decompose_realize_round_trip_via_codec(self, tmp_path, capsys):
        from mwtate.motives import realize

        a = NormalForm([Free(0), DyadicEta(3, 2)])
        path = tmp_path / "cx.json"
        path.write_text(json.dumps(serialize.complex_to_json(realize(a))))
        code, out, _ = run(capsys, "decompose", "--in", str(path))
        assert code == 0
        assert serialize.normal_form_from_json(json.loads(out)) == a

    def test_blowup(self, tmp_path, capsys):
        payload = {
            "ambient": {
                "cells": [
                    {"id": "x0", "weight": 0},
                    {"id": "x1", "weight": 1},
                    {"id": "x2", "weight": 2},
                ],
                "attach": [],
            },
            "thom": {"cells": [{"id": "t", "weight": 1}], "attach": []},
            "centre": [{"kind": "free", "weight": 0}],
            "codim": 2,
            "gysin": [{"from": "x2", "to": "t", "coeff": 1}],
        }
        path = tmp_path / "blowup.json"
        path.write_text(json.dumps(payload))
        code, out, _ = run(capsys, "blowup", "--in", str(path))
        assert code == 0
        data = json.loads(out)
        assert data["eta_check"] is True
        assert {"kind": "dyadic", "t": 0, "weight": 1} in data["blocks"]

    def test_cohomology_model_tag(self, capsys):
        code, out, _ = run(
            capsys,
            "cohomology",
            "--blocks",
            '[{"kind":"free","weight":0}]',
            "--theory",
            "witt",
        )
        assert code == 0
        assert json.loads(out)["model"] == "minimal-euclidean"
