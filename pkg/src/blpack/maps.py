"""Discrete Blaschke products: evaluation, distortion, valence, extension.

A cp-map sends circle centers of a univalent domain packing to centers of a
range packing over the same triangulation, extended affinely per face.  The
full-disc extension adds Mobius gap maps between consecutive boundary
circles and a radial extension across boundary discs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    CoincidentPoints,
    DegenerateFace,
    DifferentComplex,
    OutsideCarrier,
    RegionLocationFailed,
    RootFindingFailed,
)
from .geometry import (
    EuclideanCircle,
    MobiusTransform,
    apply_mobius_to_circle,
    disc_automorphism,
    hyperbolic_center,
    mobius_from_three_points,
)
from .solver import Packing

TWO_PI = 2.0 * math.pi


def local_distortion(p: Packing, v: int) -> float:
    """Worst symmetrized radius ratio between v and a neighbor; >= 1."""
    rv = p.circles[v].radius
    worst = 1.0
    for u in p.tri.neighbors[v]:
        ru = p.circles[u].radius
        m = 0.5 * (ru / rv + rv / ru)
        if m > worst:
            worst = m
    return worst


def max_local_distortion(p: Packing) -> float:
    return max(local_distortion(p, v) for v in range(p.tri.n_vertices))


# ---------------------------------------------------------------------------
# valence


def valence(p: Packing) -> int:
    """Max number of open packing discs sharing a point.

    Exact over the candidate set: circle centers, crossing points of every
    properly intersecting pair (nudged into the lens), and center midpoints
    of overlapping pairs.  Containment is strict, so tangencies never count.
    """
    centers = np.array([c.center for c in p.circles])
    radii = np.array([c.radius for c in p.circles])
    n = len(radii)

    cand = [centers]
    for i in range(n):
        d = np.abs(centers[i + 1:] - centers[i])
        rsum = radii[i] + radii[i + 1:]
        rdif = np.abs(radii[i] - radii[i + 1:])
        crossing = np.nonzero((d < rsum - 1e-12) & (d > rdif + 1e-12))[0]
        overlap = np.nonzero(d < rsum - 1e-12)[0]
        if len(overlap):
            js = overlap + i + 1
            cand.append(0.5 * (centers[i] + centers[js]))
        for off in crossing:
            j = off + i + 1
            dij = abs(centers[j] - centers[i])
            a = (dij * dij + radii[i] ** 2 - radii[j] ** 2) / (2.0 * dij)
            h2 = radii[i] ** 2 - a * a
            if h2 <= 0.0:
                continue
            h = math.sqrt(h2)
            u = (centers[j] - centers[i]) / dij
            mid = centers[i] + a * u
            for s in (1.0, -1.0):
                pt = mid + s * h * 1j * u
                pull = mid - pt
                pt = pt + 1e-9 * pull / abs(pull)
                cand.append(np.array([pt]))
    pts = np.concatenate(cand)

    best = 0
    for k in range(0, len(pts), 4096):
        chunk = pts[k:k + 4096]
        # strict interior with a margin above layout noise, so circle pairs
        # that are tangent (or coincident, on branched covers) in the exact
        # packing cannot leak phantom depth through 1e-10-scale residuals
        depth = (np.abs(chunk[:, None] - centers[None, :])
                 < radii[None, :] - 1e-12).sum(axis=1)
        best = max(best, int(depth.max()))
    return best


def valence_sampled(p: Packing, samples: int = 100_000, seed: int = 0) -> int:
    """Monte-Carlo lower bound on the packing valence (test oracle)."""
    rng = np.random.default_rng(seed)
    pts = []
    while sum(len(c) for c in pts) < samples:
        z = rng.uniform(-1.0, 1.0, (samples, 2))
        z = z[:, 0] + 1j * z[:, 1]
        pts.append(z[np.abs(z) < 1.0])
    pts = np.concatenate(pts)[:samples]
    centers = np.array([c.center for c in p.circles])
    radii = np.array([c.radius for c in p.circles])
    best = 0
    for k in range(0, samples, 4096):
        chunk = pts[k:k + 4096]
        depth = (np.abs(chunk[:, None] - centers[None, :])
                 < radii[None, :]).sum(axis=1)
        best = max(best, int(depth.max()))
    return best


# ---------------------------------------------------------------------------
# cp-maps


@dataclass(frozen=True)
class CpMap:
    """Center-to-center simplicial map between packings of one complex."""

    domain: Packing
    range: Packing

    def __post_init__(self):
        if self.domain.tri is not self.range.tri \
                and self.domain.tri != self.range.tri:
            raise DifferentComplex("packings live on different triangulations")
        if self.domain.branch.entries:
            raise DifferentComplex("domain packing must be univalent")

    @cached_property
    def _dom_tris(self):
        f = np.array(self.domain.tri.faces)
        z = np.array([c.center for c in self.domain.circles])
        return z[f[:, 0]], z[f[:, 1]], z[f[:, 2]]

    @cached_property
    def _ran_tris(self):
        f = np.array(self.range.tri.faces)
        z = np.array([c.center for c in self.range.circles])
        return z[f[:, 0]], z[f[:, 1]], z[f[:, 2]]

    def locate(self, z: complex, tol: float = 1e-12) -> tuple | None:
        """Lowest-id carrier face containing z, with barycentric weights."""
        a, b, c = self._dom_tris
        det = ((b - a).conjugate() * (c - a)).imag
        wa = ((b - z).conjugate() * (c - z)).imag / det
        wb = ((c - z).conjugate() * (a - z)).imag / det
        wc = ((a - z).conjugate() * (b - z)).imag / det
        ok = np.nonzero((wa >= -tol) & (wb >= -tol) & (wc >= -tol))[0]
        if len(ok) == 0:
            return None
        i = int(ok[0])
        return i, float(wa[i]), float(wb[i]), float(wc[i])

    @cached_property
    def _extension(self):
        return _Extension(self)


def cp_map_eval(f: CpMap, z: complex) -> complex:
    """Affine-per-face evaluation at a carrier point."""
    hit = f.locate(complex(z))
    if hit is None:
        raise OutsideCarrier(f"{z} is not in the domain carrier")
    i, wa, wb, wc = hit
    a, b, c = f.range.tri.faces[i]
    za = f.range.circles[a].center
    zb = f.range.circles[b].center
    zc = f.range.circles[c].center
    return wa * za + wb * zb + wc * zc


def ratio_map(f: CpMap, v: int) -> float:
    """Range radius over domain radius at a vertex."""
    return f.range.circles[v].radius / f.domain.circles[v].radius


def per_face_dilatation(f: CpMap) -> float:
    """Max over faces of (|a|+|b|)/(|a|-|b|) for the affine face maps.

    a and b are the conformal and anticonformal parts of the affine map
    taking the domain center triangle to the range one.
    """
    worst = 1.0
    for i, (p, q, r) in enumerate(f.domain.tri.faces):
        a, b = _affine_parts(
            f.domain.circles[p].center, f.domain.circles[q].center,
            f.domain.circles[r].center,
            f.range.circles[p].center, f.range.circles[q].center,
            f.range.circles[r].center,
        )
        if abs(a) <= abs(b) + 1e-14:
            raise DegenerateFace(f"face {i} is orientation-degenerate")
        k = (abs(a) + abs(b)) / (abs(a) - abs(b))
        if k > worst:
            worst = k
    return worst


def _affine_parts(z1, z2, z3, w1, w2, w3) -> tuple[complex, complex]:
    """Solve w = a z + b conj(z) + c on a triangle for (a, b)."""
    dz1 = z2 - z1
    dz2 = z3 - z1
    dw1 = w2 - w1
    dw2 = w3 - w1
    det = dz1 * dz2.conjugate() - dz2 * dz1.conjugate()
    a = (dw1 * dz2.conjugate() - dw2 * dz1.conjugate()) / det
    b = (dw1 * dz2 - dw2 * dz1) / det.conjugate()
    return a, b


def valence_of_map_sampled(f: CpMap, grid_n: int = 200) -> int:
    """Max preimage count of the cp-map over a grid of range points."""
    xs = np.linspace(-1.0, 1.0, grid_n)
    zs = (xs[:, None] + 1j * xs[None, :]).ravel()
    zs = zs[np.abs(zs) < 1.0]
    a, b, c = f._ran_tris
    det = ((b - a).conjugate() * (c - a)).imag
    best = 0
    for k in range(0, len(zs), 1024):
        z = zs[k:k + 1024][:, None]
        wa = ((b - z).conjugate() * (c - z)).imag / det
        wb = ((c - z).conjugate() * (a - z)).imag / det
        wc = ((a - z).conjugate() * (b - z)).imag / det
        inside = (wa > 1e-12) & (wb > 1e-12) & (wc > 1e-12)
        best = max(best, int(inside.sum(axis=1).max()))
    return best


def equivalent_mod_mobius(
    p: Packing, q: Packing, tol: float = 1e-6
) -> tuple[bool, MobiusTransform]:
    """Disc automorphism matching p's normalization frame to q's.

    Returns (True, g) when g maps every circle of p onto q's within tol.
    """
    if p.tri is not q.tri and p.tri != q.tri:
        raise DifferentComplex("packings live on different triangulations")
    u0 = p.tri.interior[0] if p.tri.interior else 0
    u1 = next(v for v in range(p.tri.n_vertices) if v != u0)

    def frame(pk):
        m = hyperbolic_center(pk.circles[u0])
        g1 = disc_automorphism(m)
        c1 = apply_mobius_to_circle(g1, pk.circles[u1]).center
        ang = -cmath.phase(c1) if abs(c1) > 1e-14 else 0.0
        return disc_automorphism(0j, ang).compose(g1)

    g = frame(q).inverse().compose(frame(p))
    worst = 0.0
    for cp_, cq in zip(p.circles, q.circles):
        img = apply_mobius_to_circle(g, cp_)
        worst = max(worst, abs(img.center - cq.center),
                    abs(img.radius - cq.radius))
    return worst <= tol, g


def automorphism_parameters(g: MobiusTransform) -> tuple[complex, float]:
    """(a, theta) with g(z) = e^{i theta} (z - a)/(1 - conj(a) z)."""
    a = g.inverse()(0j)
    z0 = 0.5 + 0j if abs(a - 0.5) > 0.25 else -0.5 + 0j
    rot = g(z0) * (1.0 - a.conjugate() * z0) / (z0 - a)
    return a, cmath.phase(rot)


# ---------------------------------------------------------------------------
# extension to the whole disc


def _boundary_tangency(c: EuclideanCircle) -> complex:
    return c.center / abs(c.center)


def _mutual_tangency(cu: EuclideanCircle, cv: EuclideanCircle) -> complex:
    d = cv.center - cu.center
    return cu.center + cu.radius * d / abs(d)


class _GapRegion:
    """One interstice between consecutive boundary circles u -> v."""

    def __init__(self, f: CpMap, u: int, v: int):
        dom, ran = f.domain, f.range
        self.u, self.v = u, v
        cu, cv = dom.circles[u], dom.circles[v]
        lam_u = _boundary_tangency(cu)
        lam_v = _boundary_tangency(cv)
        mu = _mutual_tangency(cu, cv)
        self.map = mobius_from_three_points(
            lam_u, lam_v, mu,
            _boundary_tangency(ran.circles[u]),
            _boundary_tangency(ran.circles[v]),
            _mutual_tangency(ran.circles[u], ran.circles[v]),
        )
        self.lam_u, self.lam_v, self.mu = lam_u, lam_v, mu
        # membership frame: send lam_u to infinity; C(u) becomes the line
        # Im w = c_line and C(v) a circle tangent to it from below
        self.frame = MobiusTransform(1j / lam_u, 1j, -1.0 / lam_u, 1.0 + 0j)
        self.c_line = (1.0 - cu.radius) / cu.radius
        vimg = apply_mobius_to_circle(self.frame, cv)
        self.xv = vimg.center.real
        self.vc = vimg.center
        self.rho = vimg.radius
        # the carrier sits on the side of the third vertex of the face at uv
        face = next(fc for fc in dom.tri.faces if u in fc and v in fc)
        w = next(x for x in face if x not in (u, v))
        probe = self.frame(_mutual_tangency(cv, dom.circles[w]))
        self.side = -1.0 if probe.real > self.xv else 1.0

    def contains(self, z: complex) -> bool:
        w = self.frame(z)
        if not (-1e-12 < w.imag < self.c_line * (1.0 + 1e-9)):
            return False
        if abs(w - self.vc) < self.rho * (1.0 - 1e-9):
            return False
        return (w.real - self.xv) * self.side >= -1e-9 * max(1.0, self.rho)


class _Extension:
    def __init__(self, f: CpMap):
        self.f = f
        walk = f.domain.tri.boundary_walk
        self.gaps = [
            _GapRegion(f, walk[i], walk[(i + 1) % len(walk)])
            for i in range(len(walk))
        ]
        self.lam_dom = {v: _boundary_tangency(f.domain.circles[v])
                        for v in walk}
        self.lam_ran = {v: _boundary_tangency(f.range.circles[v])
                        for v in walk}

    def eval_gap(self, z: complex) -> complex | None:
        for gap in self.gaps:
            if gap.contains(z):
                return gap.map(z)
        return None

    def eval_circle_point(self, v: int, pnt: complex) -> complex:
        """Value of the boundary-circle map at a point of C(v)."""
        hit = self.f.locate(pnt)
        if hit is not None:
            i, wa, wb, wc = hit
            a, b, c = self.f.range.tri.faces[i]
            rz = self.f.range.circles
            return wa * rz[a].center + wb * rz[b].center + wc * rz[c].center
        val = self.eval_gap(pnt)
        if val is not None:
            return val
        if abs(pnt - self.lam_dom[v]) <= 1e-7:
            return self.lam_ran[v]
        hit = self.f.locate(pnt, tol=1e-7)
        if hit is not None:
            i, wa, wb, wc = hit
            a, b, c = self.f.range.tri.faces[i]
            rz = self.f.range.circles
            return wa * rz[a].center + wb * rz[b].center + wc * rz[c].center
        raise RegionLocationFailed(f"circle point {pnt} is unlocatable")


def extension_eval(f: CpMap, z: complex) -> complex:
    """Full-disc extension: carrier map, gap Mobius maps, radial fill.

    Regions are tried in the priority order carrier face, interstice,
    boundary disc; ties resolve to the earlier region.
    """
    z = complex(z)
    if abs(z) >= 1.0 - 1e-12:
        raise RegionLocationFailed(f"|z| = {abs(z)} is too close to the circle")
    hit = f.locate(z)
    if hit is not None:
        i, wa, wb, wc = hit
        a, b, c = f.range.tri.faces[i]
        rz = f.range.circles
        return wa * rz[a].center + wb * rz[b].center + wc * rz[c].center
    ext = f._extension
    val = ext.eval_gap(z)
    if val is not None:
        return val
    for v in f.domain.tri.boundary_walk:
        c = f.domain.circles[v]
        d = abs(z - c.center)
        if d <= c.radius * (1.0 + 1e-12):
            cr = f.range.circles[v].center
            if d == 0.0:
                return cr
            pnt = c.center + (z - c.center) * (c.radius / d)
            t = d / c.radius
            return cr + t * (ext.eval_circle_point(v, pnt) - cr)
    raise RegionLocationFailed(f"no region contains {z}")


# ---------------------------------------------------------------------------
# classical Blaschke products


def _poly_mul(p: list[complex], q: list[complex]) -> list[complex]:
    out = [0j] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _poly_diff(p: list[complex]) -> list[complex]:
    return [k * a for k, a in enumerate(p)][1:] or [0j]


def _poly_eval(p: list[complex], z: complex) -> complex:
    acc = 0j
    for a in reversed(p):
        acc = acc * z + a
    return acc


@dataclass(frozen=True)
class ClassicalBlaschke:
    """Finite Blaschke product e^{i theta} prod (z - a_j)/(1 - conj(a_j) z)."""

    zeros: tuple[complex, ...]
    rotation: complex = 1.0 + 0j

    def __post_init__(self):
        for a in self.zeros:
            if abs(a) >= 1.0:
                raise CoincidentPoints(f"zero {a} is not inside the disc")
        if abs(abs(self.rotation) - 1.0) > 1e-12:
            raise CoincidentPoints("rotation factor must be unimodular")

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def __call__(self, z: complex) -> complex:
        out = self.rotation
        for a in self.zeros:
            out *= (z - a) / (1.0 - a.conjugate() * z)
        return out

    def derivative(self, z: complex) -> complex:
        num, den = self._fraction
        n = _poly_eval(num, z)
        d = _poly_eval(den, z)
        dn = _poly_eval(_poly_diff(num), z)
        dd = _poly_eval(_poly_diff(den), z)
        return (dn * d - n * dd) / (d * d)

    @cached_property
    def _fraction(self) -> tuple[list[complex], list[complex]]:
        num = [self.rotation]
        den = [1.0 + 0j]
        for a in self.zeros:
            num = _poly_mul(num, [-a, 1.0 + 0j])
            den = _poly_mul(den, [1.0 + 0j, -a.conjugate()])
        return num, den

    @cached_property
    def derivative_numerator(self) -> list[complex]:
        num, den = self._fraction
        p = [
            x - y for x, y in zip(
                _poly_mul(_poly_diff(num), den),
                _poly_mul(num, _poly_diff(den)),
            )
        ]
        while len(p) > 1 and abs(p[-1]) < 1e-15:
            p.pop()
        return p


def classical_blaschke_eval(phi: ClassicalBlaschke, z: complex) -> complex:
    return phi(complex(z))


def blaschke_critical_points(
    phi: ClassicalBlaschke,
) -> list[tuple[complex, int]]:
    """Zeros of phi' in the open disc with multiplicities.

    Newton iteration on the derivative numerator, seeded on a 21x21 grid
    and deflated by the roots already found; the count with multiplicity
    must come out to degree - 1.
    """
    if phi.degree < 2:
        raise RootFindingFailed("critical points need degree >= 2")
    poly = phi.derivative_numerator
    dpoly = _poly_diff(poly)
    want = phi.degree - 1
    roots: list[complex] = []

    def newton(z0: complex) -> complex | None:
        z = z0
        for _ in range(80):
            pv = _poly_eval(poly, z)
            dv = _poly_eval(dpoly, z)
            for r in roots:
                dz = z - r
                if abs(dz) < 1e-14:
                    dz = 1e-14
                dv = dv - pv / dz
                # product-rule deflation: (p/prod)' = (p' - p*sum 1/(z-r))/prod
            if dv == 0:
                return None
            step = pv / dv
            z = z - step
            if abs(step) < 1e-13:
                return z if abs(z) < 1.0 - 1e-9 else None
        return None

    seeds = [complex(x, y)
             for x in np.linspace(-0.95, 0.95, 21)
             for y in np.linspace(-0.95, 0.95, 21)
             if x * x + y * y < 0.96]
    for seed in seeds:
        if len(roots) == want:
            break
        z = newton(seed)
        if z is not None and abs(_poly_eval(poly, z)) < 1e-8:
            roots.append(z)
    if len(roots) != want:
        raise RootFindingFailed(
            f"found {len(roots)} critical points, expected {want}"
        )

    clusters: list[list[complex]] = []
    for z in roots:
        for cl in clusters:
            if abs(z - cl[0]) < 1e-6:
                cl.append(z)
                break
        else:
            clusters.append([z])
    return [(sum(cl) / len(cl), len(cl)) for cl in clusters]


def blaschke_winding(phi: ClassicalBlaschke, radius: float = 0.99,
                     samples: int = 4096) -> int:
    """Discrete winding number of phi along |z| = radius."""
    total = 0.0
    prev = cmath.phase(phi(radius + 0j))
    for k in range(1, samples + 1):
        z = radius * cmath.exp(2j * math.pi * k / samples)
        cur = cmath.phase(phi(z))
        d = cur - prev
        while d > math.pi:
            d -= TWO_PI
        while d < -math.pi:
            d += TWO_PI
        total += d
        prev = cur
    return round(total / TWO_PI)
