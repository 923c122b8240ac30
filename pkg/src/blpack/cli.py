"""Command line interface.

Exit codes: 0 success, 1 violation (invalid structure, failed check,
non-equivalent packings), 2 input error.  Setting BLPACK_DETERMINISTIC=1
pins the (already default) strictly sequential mode.
"""

from __future__ import annotations

import argparse
import sys

from . import jsonio
from .errors import BlpackError, ParseError
from .experiments import (
    experiment_approximation,
    experiment_distortion,
    experiment_schwarz,
    parse_branch_spec,
)
from .maps import (
    CpMap,
    automorphism_parameters,
    cp_map_eval,
    equivalent_mod_mobius,
    local_distortion,
    per_face_dilatation,
    ratio_map,
    valence,
)
from .render import render_svg
from .solver import normalize, pack
from .triangulation import BranchStructure, validate_branch_structure


def _parse_levels(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",") if x.strip()]


def _parse_zeros(text: str) -> list[complex]:
    return [complex(part.strip().replace("i", "j"))
            for part in text.split(",") if part.strip()]


def _load_complex(path: str):
    return jsonio.complex_from_json(jsonio.read_text(path))


def _load_packing(path: str):
    return jsonio.packing_from_json(jsonio.read_text(path))


def _cmd_validate(args) -> int:
    tri, branch = _load_complex(args.file)
    ok, witness = validate_branch_structure(tri, branch)
    if ok:
        print(jsonio.dumps({"valid": True}))
        return 0
    print(jsonio.dumps({"valid": False, "witness": list(witness)}))
    return 1


def _cmd_pack(args) -> int:
    tri, branch = _load_complex(args.file)
    if args.branch is not None:
        branch = BranchStructure(parse_branch_spec(args.branch))
    p = pack(tri, branch, args.tol)
    if args.normalize is not None:
        p = normalize(p, args.normalize[0], args.normalize[1])
    text = jsonio.packing_to_json(p)
    if args.output:
        jsonio.write_text(args.output, text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_map(args) -> int:
    dom = _load_packing(args.domain)
    ran = _load_packing(args.range)
    f = CpMap(dom, ran)
    if args.eval is not None:
        x, y = (float(t) for t in args.eval.split(","))
        w = cp_map_eval(f, complex(x, y))
        print(jsonio.dumps({"op": "eval", "z": [x, y],
                            "value": [w.real, w.imag]}))
    if args.mu:
        for v in range(ran.tri.n_vertices):
            print(jsonio.dumps({"op": "mu", "v": v,
                                "mu": local_distortion(ran, v),
                                "ratio": ratio_map(f, v)}))
    if args.valence:
        print(jsonio.dumps({"op": "valence", "value": valence(ran)}))
    if args.dilatation:
        print(jsonio.dumps({"op": "dilatation",
                            "value": per_face_dilatation(f)}))
    if args.check_mobius is not None:
        other = _load_packing(args.check_mobius)
        same, g = equivalent_mod_mobius(dom, other, 1e-6)
        a, theta = automorphism_parameters(g)
        print(jsonio.dumps({
            "op": "check-mobius", "equivalent": same,
            "a": [a.real, a.imag], "theta": theta,
        }))
        if not same:
            return 1
    return 0


def _cmd_approx(args) -> int:
    report = experiment_approximation(
        _parse_zeros(args.zeros), _parse_levels(args.levels)
    )
    _emit_report(report, args.output)
    return 0 if all(report.verdicts.values()) else 1


def _cmd_distortion(args) -> int:
    report = experiment_distortion(_parse_levels(args.levels), args.branch)
    _emit_report(report, args.output)
    return 0 if all(report.verdicts.values()) else 1


def _cmd_schwarz(args) -> int:
    tri, branch = _load_complex(args.file)
    if args.branch is not None:
        branch = BranchStructure(parse_branch_spec(args.branch))
    v0 = args.v0 if args.v0 is not None else tri.interior[0]
    report = experiment_schwarz(tri, branch, v0)
    _emit_report(report, args.output)
    return 0 if all(report.verdicts.values()) else 1


def _cmd_render(args) -> int:
    render_svg(_load_packing(args.file), args.output)
    return 0


def _cmd_check(args) -> int:
    return 0 if __import__("blpack.checks", fromlist=["run_checks"]).run_checks() else 1


def _emit_report(report, output) -> None:
    text = report.to_json()
    if output:
        jsonio.write_text(output, text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="blpack",
        description="Branched circle packings of the unit disc and "
                    "discrete Blaschke products",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a branch structure")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("pack", help="compute a packing")
    p.add_argument("file")
    p.add_argument("--branch", help="override, e.g. 'center:1' or '0:1,7:2'")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--normalize", nargs=2, type=int, metavar=("U0", "U1"))
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_pack)

    p = sub.add_parser("map", help="query a discrete Blaschke product")
    p.add_argument("domain")
    p.add_argument("range")
    p.add_argument("--eval", metavar="X,Y")
    p.add_argument("--mu", action="store_true")
    p.add_argument("--valence", action="store_true")
    p.add_argument("--dilatation", action="store_true")
    p.add_argument("--check-mobius", metavar="OTHER")
    p.set_defaults(fn=_cmd_map)

    p = sub.add_parser("approx", help="approximation experiment")
    p.add_argument("--zeros", required=True)
    p.add_argument("--levels", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_approx)

    p = sub.add_parser("distortion", help="distortion/dilatation sweep")
    p.add_argument("--levels", required=True)
    p.add_argument("--branch", default="center:1")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_distortion)

    p = sub.add_parser("schwarz", help="radius comparison at a vertex")
    p.add_argument("file")
    p.add_argument("--branch")
    p.add_argument("--v0", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_schwarz)

    p = sub.add_parser("render", help="write an SVG of a packing")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=_cmd_render)

    p = sub.add_parser("check", help="run the invariant suite")
    p.set_defaults(fn=_cmd_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BlpackError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
