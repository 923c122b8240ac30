"""Packing solver: hyperbolic radius iteration, disc layout, normalization.

The unknowns are per-vertex radius parameters t = exp(-2h); boundary
vertices are pinned to horocycles (t = 0).  Interior angle sums are driven
to 2*pi*(1+k) by Gauss-Seidel sweeps of safeguarded Newton/bisection
solves, strictly sequential in vertex-id order.  Layout then chains circles
around interior pivots by cumulative angle (which also realizes the winding
at branch vertices) and falls back to a half-plane construction for
vertices framed only by horocycles.
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    CenterRadiusInfinite,
    InvalidBranchStructure,
    LayoutInconsistent,
    NoConvergence,
)
from .geometry import (
    EuclideanCircle,
    MobiusTransform,
    apply_mobius_to_circle,
    circle_centered_origin,
    disc_automorphism,
    euclidean_angle,
    hyperbolic_center,
    place_on_ray,
    tangency_angle_t,
)
from .triangulation import (
    EMPTY_BRANCH,
    BranchStructure,
    Triangulation,
    validate_branch_structure,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SolveReport:
    sweeps: int
    max_residual: float


@dataclass(frozen=True)
class RadiusLabel:
    """Per-vertex radius parameters t = exp(-2h); 0.0 marks a horocycle."""

    tri: Triangulation
    branch: BranchStructure
    t: tuple[float, ...]
    report: SolveReport
    trace: tuple[tuple[float, ...], ...] | None = None


@dataclass(frozen=True)
class Packing:
    """A laid-out circle packing in the closed unit disc."""

    tri: Triangulation
    branch: BranchStructure
    circles: tuple[EuclideanCircle, ...]
    report: SolveReport
    angle_sum: tuple[float, ...]  # interior Theta / boundary gamma, from radii

    @property
    def radii(self) -> tuple[float, ...]:
        return tuple(c.radius for c in self.circles)

    @property
    def centers(self) -> tuple[complex, ...]:
        return tuple(c.center for c in self.circles)


def _link_pairs(tri: Triangulation, v: int) -> list[tuple[int, int]]:
    """Consecutive neighbor pairs around v, one per face at v."""
    nb = tri.neighbors[v]
    if tri.is_boundary[v]:
        return [(nb[i], nb[i + 1]) for i in range(len(nb) - 1)]
    return [(nb[i], nb[(i + 1) % len(nb)]) for i in range(len(nb))]


def targets_for(tri: Triangulation, branch: BranchStructure) -> dict[int, float]:
    return {v: TWO_PI * (1 + branch.order_of(v)) for v in tri.interior}


# ---------------------------------------------------------------------------
# radius iteration


def solve_radii(
    tri: Triangulation,
    branch: BranchStructure = EMPTY_BRANCH,
    tol_angle: float = 1e-10,
    *,
    initial=None,
    max_sweeps: int = 1_000_000,
    record_trace: bool = False,
) -> RadiusLabel:
    """Radius label with every interior angle sum within tol_angle of target.

    The angle sum at v is strictly increasing in t_v, from 0 (near-horocycle)
    to just under deg(v)*pi, so each one-dimensional solve has a unique root
    whenever the branch structure is valid.  The sweep order and all updates
    are deterministic.
    """
    ok, witness = validate_branch_structure(tri, branch)
    if not ok:
        raise InvalidBranchStructure(f"violating cycle {witness}")

    n = tri.n_vertices
    t = [0.0] * n
    interior = list(tri.interior)
    if initial is None:
        # sub-solution start (very large radii): every angle sum begins below
        # its target, so the sweeps increase t componentwise and per-vertex
        # residuals decay monotonically down to the stopping band
        for v in interior:
            t[v] = 1e-6
    else:
        for v in interior:
            x = float(initial[v])
            if not 0.0 < x < 1.0:
                raise ValueError(f"initial t[{v}] = {x} outside (0, 1)")
            t[v] = x

    if not interior:
        return RadiusLabel(tri, branch, tuple(t), SolveReport(0, 0.0),
                           () if record_trace else None)

    targets = [TWO_PI * (1 + branch.order_of(v)) for v in interior]
    pair_idx = [
        [(u, w) for u, w in _link_pairs(tri, v)] for v in interior
    ]

    base_local = min(1e-12, tol_angle / 100.0)
    acos = math.acos
    sqrt = math.sqrt
    trace: list[tuple[float, ...]] = []

    def full_residual() -> float:
        worst = 0.0
        for i, v in enumerate(interior):
            x = t[v]
            th = 0.0
            for u, w in pair_idx[i]:
                tu = t[u]
                tw = t[w]
                p = x * tu
                q = x * tw
                num = (1.0 + p) * (1.0 + q) - 2.0 * x * (1.0 + tu * tw)
                den = (1.0 - p) * (1.0 - q)
                g = num / den
                if g > 1.0:
                    g = 1.0
                elif g < -1.0:
                    g = -1.0
                th += acos(g)
            r = abs(th - targets[i])
            if r > worst:
                worst = r
        return worst

    sweeps = 0
    prev_max = math.inf
    while sweeps < max_sweeps:
        sweeps += 1
        # local solves may stay loose while the global residual is large
        local_tol = max(base_local, min(1e-12, 1e-3 * prev_max))
        max_pre = 0.0
        row = [] if record_trace else None
        for i in range(len(interior)):
            v = interior[i]
            target = targets[i]
            ps = pair_idx[i]
            x = t[v]
            lo = 1e-16
            hi = 1.0 - 1e-16
            pre = None
            for it in range(80):
                th = 0.0
                dth = 0.0
                for u, w in ps:
                    tu = t[u]
                    tw = t[w]
                    p = x * tu
                    q = x * tw
                    num = (1.0 + p) * (1.0 + q) - 2.0 * x * (1.0 + tu * tw)
                    den = (1.0 - p) * (1.0 - q)
                    g = num / den
                    if g > 1.0:
                        g = 1.0
                    elif g < -1.0:
                        g = -1.0
                    th += acos(g)
                    s = 1.0 - g * g
                    if s > 1e-30:
                        dnum = tu * (1.0 + q) + tw * (1.0 + p) \
                            - 2.0 * (1.0 + tu * tw)
                        dden = -tu * (1.0 - q) - tw * (1.0 - p)
                        dth -= ((dnum - g * dden) / den) / sqrt(s)
                f = th - target
                if it == 0:
                    pre = abs(f)
                if abs(f) <= local_tol:
                    break
                if f > 0.0:
                    hi = x
                else:
                    lo = x
                if dth > 0.0:
                    xn = x - f / dth
                    if not (lo < xn < hi):
                        xn = 0.5 * (lo + hi)
                else:
                    xn = 0.5 * (lo + hi)
                if xn == x:
                    break
                x = xn
            t[v] = x
            if pre > max_pre:
                max_pre = pre
            if row is not None:
                row.append(pre)
        if row is not None:
            trace.append(tuple(row))
        prev_max = max_pre
        if max_pre < tol_angle:
            final = full_residual()
            if final < tol_angle:
                return RadiusLabel(
                    tri, branch, tuple(t), SolveReport(sweeps, final),
                    tuple(trace) if record_trace else None,
                )
    raise NoConvergence(sweeps, full_residual())


# ---------------------------------------------------------------------------
# layout


def _cross(a: complex, b: complex) -> float:
    return (a.conjugate() * b).imag


def _place_flower(tri, t, circles, v) -> list[int]:
    """Place all unplaced neighbors of interior v by cumulative angle."""
    m = hyperbolic_center(circles[v])
    g = disc_automorphism(m)
    ginv = g.inverse()
    nb = tri.neighbors[v]
    deg = len(nb)
    ref = None
    for i, u in enumerate(nb):
        if circles[u] is not None:
            ref = i
            break
    if ref is None:
        ref = 0
        theta = 0.0
    else:
        img = apply_mobius_to_circle(g, circles[nb[ref]])
        theta = cmath.phase(img.center)
    tv = t[v]
    new = []
    for k in range(deg):
        u = nb[(ref + k) % deg]
        w = nb[(ref + k + 1) % deg]
        if circles[u] is None:
            local = place_on_ray(tv, t[u], theta)
            circles[u] = apply_mobius_to_circle(ginv, local)
            new.append(u)
        theta += tangency_angle_t(tv, t[u], t[w])
    return new


def _place_by_pivot(tri, t, circles, pivot, other, target, after: bool):
    """Place `target` tangent to the pivot circle next to `other`.

    `after` tells whether target follows other counterclockwise around the
    pivot (per the oriented face).
    """
    m = hyperbolic_center(circles[pivot])
    g = disc_automorphism(m)
    img = apply_mobius_to_circle(g, circles[other])
    theta = cmath.phase(img.center)
    if after:
        ang = tangency_angle_t(t[pivot], t[other], t[target])
        theta += ang
    else:
        ang = tangency_angle_t(t[pivot], t[target], t[other])
        theta -= ang
    local = place_on_ray(t[pivot], t[target], theta)
    circles[target] = apply_mobius_to_circle(g.inverse(), local)


def _place_between_horocycles(tri, t, circles, u, v, w):
    """Place w in the oriented face (u, v, w), u and v being horocycles.

    Send the ideal point of C(u) to infinity: C(u) becomes a horizontal
    line, C(v) a circle tangent to it from below, and the radius parameter
    of w fixes its height in the strip exactly.
    """
    cu = circles[u]
    cv = circles[v]
    lam = cu.center / abs(cu.center)
    frame = MobiusTransform(1j / lam, 1j, -1.0 / lam, 1.0 + 0j)
    c_line = (1.0 - cu.radius) / cu.radius
    vimg = apply_mobius_to_circle(frame, cv)
    xv = vimg.center.real
    yv = vimg.center.imag
    yw = c_line * (1.0 + t[w]) / 2.0
    rw = c_line * (1.0 - t[w]) / 2.0
    gap = (rw + vimg.radius) ** 2 - (yw - yv) ** 2
    dx = math.sqrt(max(gap, 0.0))
    back = frame.inverse()
    pick = None
    for sign in (1.0, -1.0):
        cand = apply_mobius_to_circle(
            back, EuclideanCircle(complex(xv + sign * dx, yw), rw)
        )
        if _cross(cv.center - cu.center, cand.center - cu.center) > 0.0:
            pick = cand
            break
        pick = pick or cand
    circles[w] = pick


_IDEAL_RADIUS = 2.0 * math.sqrt(3.0) - 3.0


def layout(label: RadiusLabel, tol_layout: float = 1e-8) -> Packing:
    """Realize a solved label as circles in the closed unit disc.

    A root interior vertex sits at the origin; placement is breadth-first
    over interior flowers, then face scans for anything reachable only
    through boundary circles.  Complexes without interior vertices start
    from a canonical symmetric ideal triple on the first face.
    """
    tri = label.tri
    t = label.t
    n = tri.n_vertices
    circles: list[EuclideanCircle | None] = [None] * n
    interior = tri.interior

    queue: deque[int] = deque()
    if interior:
        root = interior[0]
        circles[root] = circle_centered_origin(t[root])
        queue.append(root)
    else:
        a, b, c = tri.faces[0]
        for vert, k in ((a, 0), (b, 1), (c, 2)):
            ang = math.pi / 2.0 + k * TWO_PI / 3.0
            zeta = cmath.exp(1j * ang)
            circles[vert] = EuclideanCircle((1.0 - _IDEAL_RADIUS) * zeta,
                                            _IDEAL_RADIUS)

    while True:
        while queue:
            v = queue.popleft()
            for u in _place_flower(tri, t, circles, v):
                if not tri.is_boundary[u]:
                    queue.append(u)
        if all(c is not None for c in circles):
            break
        progress = False
        for face in tri.faces:
            missing = [x for x in face if circles[x] is None]
            if len(missing) != 1:
                continue
            w = missing[0]
            i = face.index(w)
            u = face[(i + 1) % 3]
            v = face[(i + 2) % 3]
            # face reads (w, u, v) so (u, v, w) is the oriented triple
            if not tri.is_boundary[u]:
                _place_by_pivot(tri, t, circles, u, v, w, after=True)
            elif not tri.is_boundary[v]:
                _place_by_pivot(tri, t, circles, v, u, w, after=False)
            else:
                _place_between_horocycles(tri, t, circles, u, v, w)
            if not tri.is_boundary[w]:
                queue.append(w)
            progress = True
            break
        if not progress:
            raise LayoutInconsistent("some vertices cannot be reached")

    placed = list(circles)  # type: ignore[arg-type]
    if _max_tangency_residual(tri, placed) > tol_layout:
        placed = _refine_centers(tri, placed)
        if _max_tangency_residual(tri, placed) > tol_layout:
            raise LayoutInconsistent(
                f"tangency residual {_max_tangency_residual(tri, placed):.3e} "
                f"above {tol_layout:.1e} after refinement"
            )

    return _make_packing(tri, label.branch, tuple(placed), label.report)


def _make_packing(tri, branch, circles, report) -> Packing:
    return Packing(tri, branch, circles, report,
                   tuple(_angle_sums_from_radii(tri, circles)))


def _angle_sums_from_radii(tri, circles) -> list[float]:
    sums = [0.0] * tri.n_vertices
    for v in range(tri.n_vertices):
        rv = circles[v].radius
        acc = 0.0
        for u, w in _link_pairs(tri, v):
            acc += euclidean_angle(rv, circles[u].radius, circles[w].radius)
        sums[v] = acc
    return sums


def _max_tangency_residual(tri, circles) -> float:
    worst = 0.0
    for u, v in tri.edges:
        cu = circles[u]
        cv = circles[v]
        res = abs(abs(cu.center - cv.center) - (cu.radius + cv.radius))
        if res > worst:
            worst = res
    for v in tri.boundary:
        c = circles[v]
        res = abs(abs(c.center) + c.radius - 1.0)
        if res > worst:
            worst = res
    return worst


def _refine_centers(tri, circles, iterations: int = 4):
    """Least-squares adjustment of centers with radii held fixed."""
    n = tri.n_vertices
    r = np.array([c.radius for c in circles])
    x = np.array([[c.center.real, c.center.imag] for c in circles])
    edges = tri.edges
    bd = tri.boundary
    m = len(edges) + len(bd)
    for _ in range(iterations):
        F = np.zeros(m)
        J = np.zeros((m, 2 * n))
        for k, (u, v) in enumerate(edges):
            d = x[u] - x[v]
            L = math.hypot(d[0], d[1])
            F[k] = L - (r[u] + r[v])
            g = d / L
            J[k, 2 * u:2 * u + 2] = g
            J[k, 2 * v:2 * v + 2] = -g
        for j, v in enumerate(bd):
            k = len(edges) + j
            L = math.hypot(x[v, 0], x[v, 1])
            F[k] = L + r[v] - 1.0
            J[k, 2 * v:2 * v + 2] = x[v] / L
        delta, *_ = np.linalg.lstsq(J, -F, rcond=None)
        x = x + delta.reshape(n, 2)
    return [EuclideanCircle(complex(x[v, 0], x[v, 1]), float(r[v]))
            for v in range(n)]


# ---------------------------------------------------------------------------
# derived quantities


def angle_sums(p: Packing) -> tuple[dict[int, float], dict[int, float]]:
    """(interior angle sums Theta, boundary angle sums gamma) from radii."""
    theta = {v: p.angle_sum[v] for v in p.tri.interior}
    gamma = {v: p.angle_sum[v] for v in p.tri.boundary}
    return theta, gamma


def observed_branch(p: Packing, tol: float = 1e-6) -> BranchStructure:
    """Branch set recomputed from realized angle sums."""
    entries = []
    for v in p.tri.interior:
        if p.angle_sum[v] > TWO_PI + tol:
            entries.append((v, round(p.angle_sum[v] / TWO_PI) - 1))
    return BranchStructure(tuple(entries))


def gauss_bonnet_residual(p: Packing) -> float:
    """Defect of the combinatorial Gauss-Bonnet identity.

    Angle sums here are measured from the laid-out center triangles, not
    from radii or targets, so the value audits the realized geometry.
    """
    tri = p.tri
    sums = [0.0] * tri.n_vertices
    for a, b, c in tri.faces:
        za = p.circles[a].center
        zb = p.circles[b].center
        zc = p.circles[c].center
        for v, p1, p2 in ((a, zb - za, zc - za),
                          (b, zc - zb, za - zb),
                          (c, za - zc, zb - zc)):
            sums[v] += math.atan2(_cross(p1, p2), (p1.conjugate() * p2).real)
    lhs = sum(TWO_PI - sums[v] for v in tri.interior)
    rhs = TWO_PI - sum(math.pi - sums[v] for v in tri.boundary)
    return lhs - rhs


def max_tangency_residual(p: Packing) -> float:
    return _max_tangency_residual(p.tri, p.circles)


def normalize(p: Packing, u0: int, u1: int) -> Packing:
    """Disc automorphism putting the center of C(u0) at 0 and S(u1) on (0,1)."""
    if p.tri.is_boundary[u0]:
        raise CenterRadiusInfinite(f"vertex {u0} is not interior")
    if u0 == u1:
        raise ValueError("u1 must differ from u0")
    m = hyperbolic_center(p.circles[u0])
    recenter = disc_automorphism(m)
    c1 = apply_mobius_to_circle(recenter, p.circles[u1]).center
    ang = -cmath.phase(c1) if abs(c1) > 1e-14 else 0.0
    g = disc_automorphism(0j, ang).compose(recenter)
    circles = tuple(apply_mobius_to_circle(g, c) for c in p.circles)
    return _make_packing(p.tri, p.branch, circles, p.report)


def transform(p: Packing, g: MobiusTransform) -> Packing:
    """Apply a disc automorphism to every circle of the packing."""
    circles = tuple(apply_mobius_to_circle(g, c) for c in p.circles)
    return _make_packing(p.tri, p.branch, circles, p.report)


def pack(
    tri: Triangulation,
    branch: BranchStructure = EMPTY_BRANCH,
    tol_angle: float = 1e-10,
    tol_layout: float = 1e-8,
    *,
    initial=None,
) -> Packing:
    """Solve radii and lay out in one step."""
    return layout(solve_radii(tri, branch, tol_angle, initial=initial),
                  tol_layout)
