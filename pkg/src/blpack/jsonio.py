"""JSON round-tripping for complexes, packings, and experiment reports.

Floats are printed with 17 significant digits so the round trip is
bit-exact; serialization is byte-deterministic for fixed input.  Writes go
through a temp file and an atomic rename.
"""

from __future__ import annotations

import json
import math
import os

from .errors import ParseError
from .geometry import EuclideanCircle
from .solver import Packing, SolveReport, _make_packing
from .triangulation import BranchStructure, Triangulation, build_triangulation


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"cannot serialize {x}")
    return format(float(x), ".17g")


def dumps(obj) -> str:
    """Deterministic JSON text; dict keys keep insertion order."""
    out: list[str] = []
    _write(obj, out)
    return "".join(out)


def _write(obj, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_fmt_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(str(k)))
            out.append(": ")
            _write(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", ")
            _write(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj)}")


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc


def write_text(path: str, text: str) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


# ---------------------------------------------------------------------------
# complexes


def complex_to_obj(tri: Triangulation, branch: BranchStructure) -> dict:
    return {
        "faces": [list(f) for f in tri.faces],
        "branch": [list(e) for e in branch.entries],
    }


def complex_to_json(tri: Triangulation, branch: BranchStructure) -> str:
    return dumps(complex_to_obj(tri, branch)) + "\n"


def complex_from_obj(obj) -> tuple[Triangulation, BranchStructure]:
    if not isinstance(obj, dict) or "faces" not in obj:
        raise ParseError("expected an object with a 'faces' key")
    tri = build_triangulation(obj["faces"])
    entries = tuple(
        (int(v), int(k)) for v, k in obj.get("branch") or []
    )
    return tri, BranchStructure(entries)


def complex_from_json(text: str) -> tuple[Triangulation, BranchStructure]:
    return complex_from_obj(loads(text))


# ---------------------------------------------------------------------------
# packings


def packing_to_obj(p: Packing) -> dict:
    return {
        "complex": {"faces": [list(f) for f in p.tri.faces]},
        "branch": [list(e) for e in p.branch.entries],
        "circles": [
            {"v": v, "cx": c.center.real, "cy": c.center.imag, "r": c.radius}
            for v, c in enumerate(p.circles)
        ],
        "report": {
            "sweeps": p.report.sweeps,
            "max_residual": p.report.max_residual,
        },
    }


def packing_to_json(p: Packing) -> str:
    return dumps(packing_to_obj(p)) + "\n"


def packing_from_obj(obj) -> Packing:
    if not isinstance(obj, dict) or "complex" not in obj:
        raise ParseError("expected an object with a 'complex' key")
    tri = build_triangulation(obj["complex"]["faces"])
    branch = BranchStructure(
        tuple((int(v), int(k)) for v, k in obj.get("branch") or [])
    )
    circles = [None] * tri.n_vertices
    for rec in obj["circles"]:
        circles[int(rec["v"])] = EuclideanCircle(
            complex(float(rec["cx"]), float(rec["cy"])), float(rec["r"])
        )
    if any(c is None for c in circles):
        raise ParseError("missing circle records")
    rep = obj.get("report") or {}
    report = SolveReport(int(rep.get("sweeps", 0)),
                         float(rep.get("max_residual", 0.0)))
    return _make_packing(tri, branch, tuple(circles), report)


def packing_from_json(text: str) -> Packing:
    return packing_from_obj(loads(text))
