"""Experiment harness: approximation, distortion, and Schwarz runs.

Each run returns an ExperimentReport whose JSON serialization is
byte-deterministic, and carries enough of the inputs (generator sizes,
branch assignments, tolerances) to re-run any single level in isolation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import jsonio
from .errors import InvalidBranchStructure
from .geometry import MobiusTransform, apply_mobius_to_circle, disc_automorphism
from .maps import (
    ClassicalBlaschke,
    CpMap,
    blaschke_critical_points,
    cp_map_eval,
    max_local_distortion,
    per_face_dilatation,
    ratio_map,
    valence,
)
from .solver import (
    Packing,
    gauss_bonnet_residual,
    normalize,
    pack,
    transform,
)
from .triangulation import (
    EMPTY_BRANCH,
    BranchStructure,
    Triangulation,
    hex_ball,
    validate_branch_structure,
)


@dataclass
class ExperimentReport:
    experiment: str
    params: dict
    levels: list[dict] = field(default_factory=list)
    verdicts: dict = field(default_factory=dict)

    def to_obj(self) -> dict:
        return {
            "experiment": self.experiment,
            "params": self.params,
            "levels": self.levels,
            "verdicts": self.verdicts,
        }

    def to_json(self) -> str:
        return jsonio.dumps(self.to_obj()) + "\n"

    def save(self, path: str) -> None:
        jsonio.write_text(path, self.to_json())


def _strictly_decreasing(xs) -> bool:
    return all(b < a for a, b in zip(xs, xs[1:]))


def sample_grid(rho: float = 0.5, grid_n: int = 61) -> list[complex]:
    xs = np.linspace(-rho, rho, grid_n)
    return [complex(x, y) for x in xs for y in xs if math.hypot(x, y) <= rho]


# ---------------------------------------------------------------------------
# approximation runs


def _assign_branches(dom: Packing, crit) -> BranchStructure:
    """Branch vertices nearest each critical point; split orders on demand."""
    tri = dom.tri
    interior = tri.interior

    def nearest(x, banned=()):
        return min(
            (v for v in interior if v not in banned),
            key=lambda v: (abs(dom.circles[v].center - x), v),
        )

    orders: dict[int, int] = {}
    for x, k in crit:
        v = nearest(x)
        orders[v] = orders.get(v, 0) + k
    b = BranchStructure(tuple(sorted(orders.items())))
    if validate_branch_structure(tri, b)[0]:
        return b

    orders = {}
    for x, k in crit:
        for _ in range(k):
            v = nearest(x, banned=tuple(orders))
            orders[v] = 1
    b = BranchStructure(tuple(sorted(orders.items())))
    if not validate_branch_structure(tri, b)[0]:
        raise InvalidBranchStructure(
            "no valid branch assignment near the critical points"
        )
    return b


def _center_euclidean_at(p: Packing, v: int, target: complex) -> Packing:
    """Automorphism making the euclidean center of C(v) equal to target.

    Assumes C(v) is currently euclidean-centered at the origin.
    """
    mag = abs(target)
    if mag < 1e-15:
        return p
    direction = target / mag
    r0 = p.circles[v].radius

    def center_dist(a):
        g = MobiusTransform(1.0 + 0j, a * direction,
                            (a * direction).conjugate(), 1.0 + 0j)
        return abs(apply_mobius_to_circle(g, p.circles[v]).center)

    lo, hi = 0.0, 1.0 - 1e-12
    for _ in range(100):
        midp = 0.5 * (lo + hi)
        if center_dist(midp) < mag:
            lo = midp
        else:
            hi = midp
    a = 0.5 * (lo + hi) * direction
    return transform(p, MobiusTransform(1.0 + 0j, a, a.conjugate(), 1.0 + 0j))


def experiment_approximation(
    zeros,
    levels,
    *,
    rho: float = 0.5,
    grid_n: int = 61,
    tol_angle: float = 1e-12,
) -> ExperimentReport:
    """Discrete Blaschke products over hex balls against the classical one.

    Per level: univalent packing normalized with the central vertex at 0,
    branch vertices chosen nearest the critical points, branched packing
    re-aligned so the central circle sits at phi(0) with the argument pinned
    at the vertex nearest 1/2; sup errors are sampled on |z| <= rho.
    """
    phi = ClassicalBlaschke(tuple(complex(z) for z in zeros))
    crit = blaschke_critical_points(phi) if phi.degree >= 2 else []
    grid = sample_grid(rho, grid_n)

    report = ExperimentReport(
        "approximation",
        {
            "zeros": [[z.real, z.imag] for z in phi.zeros],
            "levels": list(levels),
            "rho": rho,
            "grid_n": grid_n,
            "tol_angle": tol_angle,
            "critical_points": [[z.real, z.imag, k] for z, k in crit],
        },
    )

    for n in levels:
        tri = hex_ball(n)
        dom = normalize(pack(tri, EMPTY_BRANCH, tol_angle), 0, 1)
        vdd = min(
            range(tri.n_vertices),
            key=lambda v: (abs(dom.circles[v].center - 0.5), v),
        )
        dom = normalize(dom, 0, vdd)
        branch = _assign_branches(dom, crit)
        ran = normalize(pack(tri, branch, tol_angle), 0, vdd)
        # rotational gauge: least-squares phase alignment against phi on the
        # compact set (the anchor-vertex argument pin degenerates whenever
        # phi vanishes near 1/2, e.g. for a zero at 1/2 itself)
        inner = sum(
            phi(dom.circles[v].center).conjugate() * ran.circles[v].center
            for v in range(tri.n_vertices)
            if abs(dom.circles[v].center) <= rho
        )
        ran = transform(ran, disc_automorphism(0j, -cmath.phase(inner)))
        phi0 = phi(0j)
        if abs(phi0) > 1e-15:
            ran = _center_euclidean_at(ran, 0, phi0)
        # residual argument mismatch at the vertex nearest 1/2 (recorded only)
        gap = cmath.phase(ran.circles[vdd].center) \
            - cmath.phase(phi(dom.circles[vdd].center))
        arg_mismatch = abs(math.remainder(gap, 2.0 * math.pi))

        f = CpMap(dom, ran)
        pts = list(grid)
        pts += [c.center for c in dom.circles if abs(c.center) <= rho]
        map_err = 0.0
        skipped = 0
        for z in pts:
            hit = f.locate(z)
            if hit is None:
                skipped += 1
                continue
            map_err = max(map_err, abs(cp_map_eval(f, z) - phi(z)))

        ratio_err = 0.0
        for v in range(tri.n_vertices):
            s = dom.circles[v].center
            if abs(s) <= rho:
                ratio_err = max(
                    ratio_err, abs(ratio_map(f, v) - abs(phi.derivative(s)))
                )
        ratio_err_center = abs(ratio_map(f, 0) - abs(phi.derivative(0j)))

        report.levels.append({
            "n": n,
            "vertices": tri.n_vertices,
            "branch": [list(e) for e in branch.entries],
            "v_half": vdd,
            "sigma": max(c.radius for c in dom.circles),
            "delta": max(c.radius for c in ran.circles),
            "map_error": map_err,
            "ratio_error": ratio_err,
            "ratio_error_center": ratio_err_center,
            "arg_mismatch": arg_mismatch,
            "skipped_points": skipped,
            "gauss_bonnet_domain": gauss_bonnet_residual(dom),
            "gauss_bonnet_range": gauss_bonnet_residual(ran),
        })

    report.verdicts = {
        "map_error_decreasing": _strictly_decreasing(
            [lv["map_error"] for lv in report.levels]
        ),
        "ratio_error_center_decreasing": _strictly_decreasing(
            [lv["ratio_error_center"] for lv in report.levels]
        ),
        "sigma_decreasing": _strictly_decreasing(
            [lv["sigma"] for lv in report.levels]
        ),
    }
    return report


# ---------------------------------------------------------------------------
# distortion runs


def parse_branch_spec(spec: str) -> tuple[tuple[int, int], ...]:
    """'center:1,12:2' -> ((0, 1), (12, 2)); 'center' is vertex 0."""
    entries = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        name, _, order = part.partition(":")
        v = 0 if name.strip() == "center" else int(name)
        entries.append((v, int(order) if order else 1))
    return tuple(entries)


def experiment_distortion(
    levels,
    branch_spec: str = "center:1",
    *,
    rho: float = 0.5,
    tol_angle: float = 1e-12,
) -> ExperimentReport:
    """Local distortion and face dilatation across a hex-ball family.

    The verdict is a plateau test: the last level within 10% of the value
    two levels earlier, for both the max distortion and the max dilatation.
    """
    entries = parse_branch_spec(branch_spec)
    report = ExperimentReport(
        "distortion",
        {
            "levels": list(levels),
            "branch": [list(e) for e in entries],
            "rho": rho,
            "tol_angle": tol_angle,
        },
    )
    for n in levels:
        tri = hex_ball(n)
        branch = BranchStructure(entries)
        dom = normalize(pack(tri, EMPTY_BRANCH, tol_angle), 0, 1)
        ran = normalize(pack(tri, branch, tol_angle), 0, 1)
        drifted = [
            v for v, _ in entries if abs(ran.circles[v].center) > rho + 1e-12
        ]
        level = {
            "n": n,
            "vertices": tri.n_vertices,
            "excluded": bool(drifted),
            "drifted_vertices": drifted,
        }
        if not drifted:
            level.update({
                "mu_max_univalent": max_local_distortion(dom),
                "mu_max": max_local_distortion(ran),
                "dilatation_max": per_face_dilatation(CpMap(dom, ran)),
                "valence": valence(ran),
                "radius_center_univalent": dom.circles[0].radius,
                "radius_center": ran.circles[0].radius,
                "gauss_bonnet_range": gauss_bonnet_residual(ran),
            })
        report.levels.append(level)

    used = [lv for lv in report.levels if not lv["excluded"]]
    verdicts = {}
    if len(used) >= 3:
        for key, name in (("mu_max", "mu_plateau"),
                          ("dilatation_max", "dilatation_plateau")):
            last, ref = used[-1][key], used[-3][key]
            verdicts[name] = abs(last - ref) <= 0.1 * ref
    report.verdicts = verdicts
    return report


# ---------------------------------------------------------------------------
# Schwarz runs


def experiment_schwarz(
    tri: Triangulation,
    branch: BranchStructure,
    v0: int,
    *,
    tol_angle: float = 1e-12,
) -> ExperimentReport:
    """Radius comparison at v0 between branched and univalent packings."""
    u1 = next(v for v in range(tri.n_vertices) if v != v0)
    univ = normalize(pack(tri, EMPTY_BRANCH, tol_angle), v0, u1)
    bran = normalize(pack(tri, branch, tol_angle), v0, u1)
    r_t = univ.circles[v0].radius
    r = bran.circles[v0].radius
    report = ExperimentReport(
        "schwarz",
        {
            "vertices": tri.n_vertices,
            "branch": [list(e) for e in branch.entries],
            "v0": v0,
            "tol_angle": tol_angle,
        },
    )
    report.levels.append({
        "radius_univalent": r_t,
        "radius_branched": r,
        "margin": r_t - r,
    })
    report.verdicts = {
        "upper_bound": r <= r_t + 1e-12,
        "strict_when_branched": (not branch.entries) or r_t - r > 1e-6,
        "positive": r > 0.0,
    }
    return report
