"""Batch command-line front end.

Verbs: decompose, tensor, pages, cohomology, classify-hp1, pbundle-hp1,
blowup, check.  Input is a JSON file (--in, '-' for stdin) or inline
JSON (--blocks); output is deterministic JSON (sorted keys) or a plain
table.  Exit codes: 0 success, 1 malformed input, 2 validation or check
failure, 64 usage error.  MWTATE_LOG sets the log level.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import __version__, checks, serialize
from .bockstein import degeneracy_page, pages
from .cohomology import chow, mod2_motivic, mw_diagonal, witt_cohomology
from .geometry import blowup_eta_check, blowup_motive, hp1_classify, projective_bundle_hp1
from .motives import InvalidComplex, NormalForm, decompose, tensor, validate_complex
from .wittring import GWElement, InvalidParity

log = logging.getLogger("mwtate")

USAGE_EXIT = 64
INPUT_EXIT = 1
VALIDATION_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _emit(data, fmt: str):
    if fmt == "json":
        print(json.dumps(data, sort_keys=True, separators=(",", ":")))
    else:
        _print_table(data)


def _print_table(data, indent=0):
    pad = "  " * indent
    if isinstance(data, dict):
        for key in sorted(data):
            value = data[key]
            if isinstance(value, (dict, list)):
                print(f"{pad}{key}:")
                _print_table(value, indent + 1)
            else:
                print(f"{pad}{key}: {value}")
    elif isinstance(data, list):
        for item in data:
            if isinstance(item, (dict, list)):
                _print_table(item, indent)
                print()
            else:
                print(f"{pad}{item}")
    else:
        print(f"{pad}{data}")


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _InputError(str(exc)) from exc


class _InputError(Exception):
    pass


def _blocks_arg(raw: str) -> NormalForm:
    try:
        return serialize.normal_form_from_json(json.loads(raw))
    except (json.JSONDecodeError, ValueError, KeyError, TypeError) as exc:
        raise _InputError(f"bad blocks JSON: {exc}") from exc


def _euler_arg(raw: str) -> GWElement:
    try:
        rank, sig = raw.split(",")
        return GWElement(int(rank), int(sig))
    except InvalidParity:
        raise
    except Exception as exc:
        raise _InputError(f"bad Euler class {raw!r}; expected 'rank,signature'") from exc


def _page_range(args) -> list[int]:
    if args.range:
        try:
            lo, hi = (int(x) for x in args.range.split(":"))
        except ValueError as exc:
            raise _InputError(f"bad range {args.range!r}; expected LO:HI") from exc
        if hi < lo or hi - lo > 64:
            raise _InputError("range must be finite and ascending")
        return list(range(lo, hi + 1))
    return [args.page]


def build_parser() -> _Parser:
    p = _Parser(prog="mwtate", description=__doc__)
    p.add_argument("--version", action="version", version=f"mwtate {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, blocks=False, infile=False):
        sp.add_argument("--format", choices=("json", "table"), default="json")
        sp.add_argument("--model", default="minimal-euclidean",
                        help="coefficient model (only minimal-euclidean exists)")
        sp.add_argument("--seed", type=int, default=0)
        if blocks:
            sp.add_argument("--blocks", action="append", default=[],
                            help="inline JSON normal form (repeatable)")
        if infile:
            sp.add_argument("--in", dest="infile", help="input JSON file or -")

    sp = sub.add_parser("decompose", help="normal form of a cell complex")
    common(sp, blocks=False, infile=True)

    sp = sub.add_parser("tensor", help="fuse two normal forms")
    common(sp, blocks=True)

    sp = sub.add_parser("pages", help="Bockstein page tables of a normal form")
    common(sp, blocks=True)
    sp.add_argument("--page", type=int, default=2)
    sp.add_argument("--range", help="page range LO:HI")

    sp = sub.add_parser("cohomology", help="invariants of a normal form")
    common(sp, blocks=True)
    sp.add_argument(
        "--theory",
        choices=("chow", "chow2", "witt", "mod2", "mw-diagonal"),
        default="witt",
    )
    sp.add_argument("--modulus", type=int, default=0, help="0 or a power of 2")
    sp.add_argument("--range", help="diagonal degree range LO:HI", default=None)
    sp.add_argument("--page", type=int, default=0, help=argparse.SUPPRESS)

    sp = sub.add_parser("classify-hp1", help="classify a rank-n bundle on HP^1")
    common(sp)
    sp.add_argument("--rank", type=int, required=True)
    sp.add_argument("--euler", help="rank,signature of the Euler class")
    sp.add_argument("--c2", type=int, help="second Chern number (rank >= 3)")

    sp = sub.add_parser("pbundle-hp1", help="P(E) complex for a rank-2 bundle")
    common(sp)
    sp.add_argument("--euler", required=True)

    sp = sub.add_parser("blowup", help="assemble a blow-up normal form")
    common(sp, infile=True)

    sp = sub.add_parser("check", help="run a named verification suite")
    common(sp)
    sp.add_argument("--suite", default="all",
                    help=f"one of {sorted(checks.SUITES)} or 'all'")
    return p


def _cmd_decompose(args) -> int:
    data = _read_json(args.infile or "-")
    c = serialize.complex_from_json(data)
    report = validate_complex(c)
    if not report.ok:
        print(json.dumps({"valid": False, "violations": str(report)}, sort_keys=True))
        return VALIDATION_EXIT
    _emit(serialize.normal_form_to_json(decompose(c)), args.format)
    return 0


def _cmd_tensor(args) -> int:
    if len(args.blocks) != 2:
        raise _InputError("tensor needs exactly two --blocks arguments")
    a = _blocks_arg(args.blocks[0])
    b = _blocks_arg(args.blocks[1])
    _emit(serialize.normal_form_to_json(tensor(a, b)), args.format)
    return 0


def _cmd_pages(args) -> int:
    if len(args.blocks) != 1:
        raise _InputError("pages needs exactly one --blocks argument")
    a = _blocks_arg(args.blocks[0])
    out = [serialize.page_to_json(pages(a, i)) for i in _page_range(args)]
    out = out[0] if len(out) == 1 else out
    _emit(out, args.format)
    return 0


def _cmd_cohomology(args) -> int:
    if len(args.blocks) != 1:
        raise _InputError("cohomology needs exactly one --blocks argument")
    a = _blocks_arg(args.blocks[0])
    if args.theory == "chow":
        _emit(serialize.graded_group_to_json(chow(a), model=True), args.format)
    elif args.theory == "chow2":
        _emit(serialize.graded_group_to_json(chow(a, mod2=True)), args.format)
    elif args.theory == "witt":
        try:
            g = witt_cohomology(a, args.modulus)
        except ValueError as exc:
            raise _InputError(str(exc)) from exc
        _emit(serialize.graded_group_to_json(g, model=True), args.format)
    elif args.theory == "mod2":
        gens = mod2_motivic(a).generators
        _emit([{"p": p, "q": q} for p, q in gens], args.format)
    else:
        if not args.range:
            raise _InputError("mw-diagonal needs --range LO:HI of weights")
        lo, hi = (int(x) for x in args.range.split(":"))
        out = {
            "model": serialize.MODEL_TAG,
            "groups": [
                dict(degree=n, **serialize.formal_group_to_json(mw_diagonal(a, n)))
                for n in range(lo, hi + 1)
            ],
        }
        _emit(out, args.format)
    return 0


def _cmd_classify(args) -> int:
    if args.rank == 2:
        if not args.euler:
            raise _InputError("rank 2 needs --euler rank,signature")
        cls = hp1_classify(2, _euler_arg(args.euler))
        out = {
            "rank": 2,
            "euler": serialize.gw_to_json(cls.euler),
            "is_free": cls.is_free,
            "stably_free_nontrivial": cls.stably_free_nontrivial,
        }
    else:
        if args.c2 is None:
            raise _InputError("rank >= 3 needs --c2")
        cls = hp1_classify(args.rank, args.c2)
        out = {
            "rank": cls.rank,
            "c2": cls.c2,
            "is_free": cls.is_free,
            "stably_free_nontrivial": cls.stably_free_nontrivial,
        }
    _emit(out, args.format)
    return 0


def _cmd_pbundle(args) -> int:
    e = _euler_arg(args.euler)
    c = projective_bundle_hp1(e)
    blocks = decompose(c)
    out = {
        "complex": serialize.complex_to_json(c),
        "blocks": serialize.normal_form_to_json(blocks),
        "degeneracy_page": degeneracy_page(blocks),
    }
    _emit(out, args.format)
    return 0


def _cmd_blowup(args) -> int:
    data = _read_json(args.infile or "-")
    try:
        x = serialize.complex_from_json(data["ambient"])
        th = serialize.complex_from_json(data["thom"])
        z = serialize.normal_form_from_json(data.get("centre", []))
        n = int(data["codim"])
        g = {
            (str(e["from"]), str(e["to"])): int(e["coeff"])
            for e in data.get("gysin", [])
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise _InputError(f"bad blow-up input: {exc}") from exc
    blocks = blowup_motive(x, z, n, th, g)
    eta = blowup_eta_check(blocks)
    out = {
        "blocks": serialize.normal_form_to_json(blocks),
        "eta_check": eta.holds,
    }
    _emit(out, args.format)
    return 0


def _cmd_check(args) -> int:
    names = sorted(checks.SUITES) if args.suite == "all" else [args.suite]
    failed = False
    for name in names:
        if name not in checks.SUITES:
            raise _InputError(f"unknown suite {name!r}")
        result = checks.run_suite(name, seed=args.seed)
        print(result.line())
        failed = failed or not result.passed
    return VALIDATION_EXIT if failed else 0


_COMMANDS = {
    "decompose": _cmd_decompose,
    "tensor": _cmd_tensor,
    "pages": _cmd_pages,
    "cohomology": _cmd_cohomology,
    "classify-hp1": _cmd_classify,
    "pbundle-hp1": _cmd_pbundle,
    "blowup": _cmd_blowup,
    "check": _cmd_check,
}


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("MWTATE_LOG", "WARNING").upper())
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.model != "minimal-euclidean":
        print(f"error: unsupported model {args.model!r}", file=sys.stderr)
        return USAGE_EXIT
    try:
        return _COMMANDS[args.verb](args)
    except _InputError as exc:
        log.debug("input error", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_EXIT
    except (InvalidComplex, InvalidParity) as exc:
        print(json.dumps({"valid": False, "violations": str(exc)}, sort_keys=True))
        return VALIDATION_EXIT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_EXIT


if __name__ == "__main__":
    sys.exit(main())
