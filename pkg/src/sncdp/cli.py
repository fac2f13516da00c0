"""Command-line entry point producing deterministic JSON reports.

    sncdp classify --rank {2|3} [--nmax N] [--bmax B]
    sncdp example {f1f1|p2f6} [--show-intermediates]
    sncdp eval FILE [--show-intermediates]
    sncdp dump {f1f1|p2f6}

Exit status: 0 success, 1 domain error, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .bps_local import BPSError, SheafModuli, gv_table, multiple_cover_check
from .chow_ring import ParseError, RingError, format_rational
from .gw_local import (
    FamilySetup,
    SetupError,
    builtin_example,
    evaluate_genus0,
    family_index_bundle,
    simplified_gw_genus0,
)
from .ktheory import KClass, trivial
from .setup_format import FormatError, dumps, load
from .snc_delpezzo import ConfigurationError, classify

SCHEMA = 1


def builtin_bps(name: str, setup: FamilySetup) -> SheafModuli:
    # Both worked families have sheaf moduli isomorphic to the stable-map moduli.
    return SheafModuli(setup.moduli, label=setup.curve_class_label, hilbert_chow_embedding=True)


def _q(x: Fraction | int) -> str:
    return format_rational(Fraction(x))


def _envelope(command: str, inputs: dict, results: dict) -> dict:
    return {
        "schema": SCHEMA,
        "engine": f"sncdp {__version__}",
        "command": command,
        "inputs": inputs,
        "results": results,
    }


def family_report(
    setup: FamilySetup,
    bps: SheafModuli | None,
    e_characters: list[KClass] | None = None,
    show_intermediates: bool = False,
) -> dict:
    res = evaluate_genus0(setup, e_characters)
    checks = {"setup_consistent": "pass", "virtual_rank_zero": "pass", "integral_chern_classes": "pass"}
    o_index = family_index_bundle(setup, [trivial(c.variety.ring) for c in setup.surface.components])
    checks["index_of_structure_sheaf_is_1"] = "pass" if o_index.ch == 1 else "fail"
    if setup.name == "f1f1":
        simple = simplified_gw_genus0(setup)
        checks["simplified_route_agrees"] = "pass" if simple == res.value else "fail"
    results: dict = {
        "setup": setup.name,
        "surface": setup.surface.describe(),
        "curve_class": setup.curve_class_label,
        "moduli": setup.moduli.label,
        "N0": _q(res.value),
    }
    if bps is not None:
        table = gv_table(bps)
        mc = multiple_cover_check(res.value, table, primitive=True)
        results["n0"] = _q(table.n0)
        results["gv"] = [_q(v) for v in table.as_list()]
        results["polarization"] = f"{bps.polarization} (independence assumed, not checked)"
        results["multiple_cover"] = mc.verdict
        checks["multiple_cover_primitive"] = mc.verdict
    results["checks"] = checks
    if show_intermediates:
        results["intermediates"] = res.intermediates()
    return results


def _cmd_classify(args) -> dict:
    result = classify(args.rank, args.nmax, args.bmax)
    results = {
        "rank": result.rank,
        "n_max": result.n_max,
        "b_max": result.b_max,
        "complete": result.complete,
        "count": len(result.configurations),
        "configurations": [c.to_dict() for c in result.configurations],
    }
    if result.note:
        results["note"] = result.note
    inputs = {"rank": args.rank, "nmax": args.nmax, "bmax": args.bmax}
    return _envelope("classify", inputs, results)


def _cmd_example(args) -> dict:
    setup = builtin_example(args.name)
    results = family_report(setup, builtin_bps(args.name, setup), None, args.show_intermediates)
    inputs = {"example": args.name, "show_intermediates": args.show_intermediates}
    return _envelope("example", inputs, results)


def _cmd_eval(args) -> dict:
    parsed = load(args.file)
    results = family_report(parsed.setup, parsed.bps, parsed.e_characters, args.show_intermediates)
    inputs = {"file": args.file, "show_intermediates": args.show_intermediates}
    return _envelope("eval", inputs, results)


def _cmd_dump(args) -> str:
    setup = builtin_example(args.name)
    return dumps(setup, None, builtin_bps(args.name, setup))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sncdp",
        description="Local snc del Pezzo surfaces: classification and local GW/BPS invariants.",
    )
    parser.add_argument("--version", action="version", version=f"sncdp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="enumerate local snc del Pezzo configurations")
    p.add_argument("--rank", type=int, choices=(2, 3), required=True)
    p.add_argument("--nmax", type=int, default=8, help="largest Hirzebruch index searched")
    p.add_argument("--bmax", type=int, default=8, help="largest fiber coefficient of e+bf curves")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("example", help="evaluate a built-in family")
    p.add_argument("name", choices=("f1f1", "p2f6"))
    p.add_argument("--show-intermediates", action="store_true")
    p.set_defaults(func=_cmd_example)

    p = sub.add_parser("eval", help="evaluate a family described in a declarative file")
    p.add_argument("file")
    p.add_argument("--show-intermediates", action="store_true")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("dump", help="print a built-in family in the declarative format")
    p.add_argument("name", choices=("f1f1", "p2f6"))
    p.set_defaults(func=_cmd_dump)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out = args.func(args)
    except (ParseError, FormatError) as exc:
        print(f"sncdp: parse error: {exc}", file=stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"sncdp: {exc}", file=stderr)
        return 1
    except SetupError as exc:
        print(f"sncdp: inconsistent setup, failed invariant {exc.invariant!r}: {exc}", file=stderr)
        return 1
    except (RingError, BPSError, ConfigurationError, ValueError, KeyError) as exc:
        print(f"sncdp: error: {exc}", file=stderr)
        return 1
    if isinstance(out, str):
        stdout.write(out)
    else:
        stdout.write(json.dumps(out, indent=2, ensure_ascii=False) + "\n")
    return 0


def main() -> None:
    sys.exit(run())
