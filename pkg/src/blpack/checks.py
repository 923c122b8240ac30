"""Programmatic invariant suite behind the `blpack check` subcommand."""

from __future__ import annotations

import math

from .corpus import corpus, wheel
from .maps import valence
from .solver import (
    TWO_PI,
    gauss_bonnet_residual,
    max_tangency_residual,
    normalize,
    pack,
    observed_branch,
)
from .triangulation import BranchStructure, validate_branch_structure


def run_checks(verbose_print=print) -> bool:
    """Solve the corpus and verify the structural identities; True iff clean."""
    ok = True

    def report(name, passed, detail=""):
        nonlocal ok
        ok = ok and passed
        line = f"[{'PASS' if passed else 'FAIL'}] {name}"
        if detail:
            line += f"  ({detail})"
        verbose_print(line)

    packed = []
    for entry in corpus():
        p = pack(entry.tri, entry.branch, 1e-12)
        packed.append((entry, p))

    worst_angle = 0.0
    worst_layout = 0.0
    worst_gb = 0.0
    for entry, p in packed:
        for v in entry.tri.interior:
            target = TWO_PI * (1 + entry.branch.order_of(v))
            worst_angle = max(worst_angle, abs(p.angle_sum[v] - target))
        worst_layout = max(worst_layout, max_tangency_residual(p))
        worst_gb = max(worst_gb, abs(gauss_bonnet_residual(p)))
    report("interior angle sums hit 2*pi*(1+k)", worst_angle < 1e-10,
           f"max residual {worst_angle:.2e}")
    report("tangency and boundary residuals", worst_layout < 1e-8,
           f"max residual {worst_layout:.2e}")
    report("Gauss-Bonnet identity", worst_gb < 1e-8,
           f"max residual {worst_gb:.2e}")

    val_ok = True
    for entry, p in packed:
        if entry.tri.interior:
            expected = 1 + entry.branch.total_order
            if valence(p) != expected:
                val_ok = False
        if observed_branch(p).entries != tuple(sorted(entry.branch.entries)):
            val_ok = False
    report("valence = 1 + total branching; branch sets recovered", val_ok)

    schwarz_ok = True
    seen = {}
    for entry, p in packed:
        if not entry.tri.interior:
            continue
        key = id(entry.tri)
        q = normalize(p, entry.tri.interior[0], 1)
        if not entry.branch.entries:
            seen[key] = q
        elif key in seen:
            r_t = seen[key].circles[entry.tri.interior[0]].radius
            r = q.circles[entry.tri.interior[0]].radius
            if not (r <= r_t + 1e-12 and r_t - r > 1e-6):
                schwarz_ok = False
    report("discrete Schwarz inequality at the root vertex", schwarz_ok)

    bad = validate_branch_structure(wheel(4), BranchStructure(((0, 1),)))
    report("degree-4 wheel branch rejected with its link cycle",
           bad[0] is False and bad[1] is not None and len(bad[1]) == 4)

    report("pi sanity", abs(math.pi - TWO_PI / 2) == 0.0)
    return ok
