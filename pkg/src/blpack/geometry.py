"""Tangency angles, Mobius transforms, and disc-model circle conversions.

Hyperbolic radii h in (0, inf] are carried internally as t = exp(-2h) in
[0, 1); horocycles (h = inf, t = 0) are then regular points of every
formula.  Angles are plain radians.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import (
    CenterRadiusInfinite,
    CoincidentPoints,
    ImageIsLine,
    NonPositiveRadius,
    PointOutsideDisc,
)

INF = math.inf


@dataclass(frozen=True)
class EuclideanCircle:
    center: complex
    radius: float


def t_from_h(h: float) -> float:
    """Parameter t = exp(-2h) of a hyperbolic radius; 0 encodes a horocycle."""
    if h == INF:
        return 0.0
    if h <= 0.0:
        raise NonPositiveRadius(f"hyperbolic radius must be positive, got {h}")
    return math.exp(-2.0 * h)


def h_from_t(t: float) -> float:
    if t == 0.0:
        return INF
    return -0.5 * math.log(t)


# ---------------------------------------------------------------------------
# tangency angles


def euclidean_angle(rv: float, ru: float, rw: float) -> float:
    """Angle at the center of the rv-circle in a mutually tangent triple.

    The centers span a triangle with side lengths rv+ru, rv+rw, ru+rw; the
    law of cosines gives the angle.  The arccos argument is clamped against
    1-ulp overshoot on degenerate triples.
    """
    for r in (rv, ru, rw):
        if not (r > 0.0) or r == INF:
            raise NonPositiveRadius(f"radii must be finite positive, got {r}")
    a = rv + ru
    b = rv + rw
    c = ru + rw
    x = (a * a + b * b - c * c) / (2.0 * a * b)
    return math.acos(max(-1.0, min(1.0, x)))


def tangency_angle_t(tv: float, tu: float, tw: float) -> float:
    """Hyperbolic tangency angle at the tv-circle, all radii as t-parameters."""
    p = tv * tu
    q = tv * tw
    num = (1.0 + p) * (1.0 + q) - 2.0 * tv * (1.0 + tu * tw)
    den = (1.0 - p) * (1.0 - q)
    x = num / den
    return math.acos(max(-1.0, min(1.0, x)))


def tangency_angle_t_deriv(tv: float, tu: float, tw: float) -> tuple[float, float]:
    """Angle and its derivative with respect to tv."""
    p = tv * tu
    q = tv * tw
    num = (1.0 + p) * (1.0 + q) - 2.0 * tv * (1.0 + tu * tw)
    den = (1.0 - p) * (1.0 - q)
    g = num / den
    gc = max(-1.0, min(1.0, g))
    ang = math.acos(gc)
    dnum = tu * (1.0 + q) + tw * (1.0 + p) - 2.0 * (1.0 + tu * tw)
    dden = -tu * (1.0 - q) - tw * (1.0 - p)
    dg = (dnum - g * dden) / den
    s = 1.0 - gc * gc
    if s <= 1e-30:
        return ang, 0.0
    return ang, -dg / math.sqrt(s)


def hyperbolic_angle(hv: float, hu: float, hw: float) -> float:
    """Hyperbolic tangency angle at the hv-circle; hu, hw may be infinite."""
    if hv == INF:
        raise CenterRadiusInfinite("the radius at the angle vertex must be finite")
    return tangency_angle_t(t_from_h(hv), t_from_h(hu), t_from_h(hw))


# ---------------------------------------------------------------------------
# Mobius transforms


@dataclass(frozen=True)
class MobiusTransform:
    """z -> (a z + b) / (c z + d), ad - bc != 0, up to a scalar."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __call__(self, z: complex) -> complex:
        den = self.c * z + self.d
        if den == 0:
            return complex(INF, 0.0)
        return (self.a * z + self.b) / den

    def inverse(self) -> "MobiusTransform":
        return MobiusTransform(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "MobiusTransform") -> "MobiusTransform":
        """self after other: (self.compose(other))(z) = self(other(z))."""
        return MobiusTransform(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def normalized(self) -> "MobiusTransform":
        det = self.a * self.d - self.b * self.c
        s = cmath.sqrt(det)
        return MobiusTransform(self.a / s, self.b / s, self.c / s, self.d / s)

    @property
    def disc_preserving(self) -> bool:
        """Sampled check that the unit circle and disc map to themselves."""
        for k in range(16):
            z = cmath.exp(1j * (0.1 + 2.0 * math.pi * k / 16.0))
            if abs(abs(self(z)) - 1.0) > 1e-12:
                return False
        return abs(self(0.0)) < 1.0


IDENTITY = MobiusTransform(1.0 + 0j, 0j, 0j, 1.0 + 0j)


def _to_zero_one_inf(p1: complex, p2: complex, p3: complex) -> MobiusTransform:
    if cmath.isinf(p1):
        return MobiusTransform(0j, p2 - p3, 1.0 + 0j, -p3)
    if cmath.isinf(p2):
        return MobiusTransform(1.0 + 0j, -p1, 1.0 + 0j, -p3)
    if cmath.isinf(p3):
        return MobiusTransform(1.0 + 0j, -p1, 0j, p2 - p1)
    return MobiusTransform(p2 - p3, -p1 * (p2 - p3), p2 - p1, -p3 * (p2 - p1))


def mobius_from_three_points(p1, p2, p3, q1, q2, q3) -> MobiusTransform:
    """The unique Mobius transform with p_i -> q_i.

    Infinite entries (cmath.inf) are handled projectively.
    """
    ps = [complex(p1), complex(p2), complex(p3)]
    qs = [complex(q1), complex(q2), complex(q3)]
    for trip in (ps, qs):
        for i in range(3):
            for j in range(i + 1, 3):
                if trip[i] == trip[j]:
                    raise CoincidentPoints(f"points {trip[i]} and {trip[j]} coincide")
    fwd = _to_zero_one_inf(*ps)
    back = _to_zero_one_inf(*qs).inverse()
    return back.compose(fwd)


def disc_automorphism(a: complex, theta: float = 0.0) -> MobiusTransform:
    """z -> e^{i theta} (z - a) / (1 - conj(a) z); maps a to 0."""
    a = complex(a)
    if abs(a) >= 1.0:
        raise PointOutsideDisc(f"|a| = {abs(a)} is not < 1")
    rot = cmath.exp(1j * theta)
    return MobiusTransform(rot, -rot * a, -a.conjugate(), 1.0 + 0j)


def apply_mobius_to_circle(m: MobiusTransform, c: EuclideanCircle) -> EuclideanCircle:
    """Image circle; raises ImageIsLine when the pole lies on the circle."""
    if c.radius <= 0.0:
        raise NonPositiveRadius(f"radius must be positive, got {c.radius}")
    if m.c == 0:
        center = (m.a * c.center + m.b) / m.d
        return EuclideanCircle(center, abs(m.a / m.d) * c.radius)
    zeta0 = m.c * c.center + m.d
    rho0 = abs(m.c) * c.radius
    den = abs(zeta0) ** 2 - rho0 * rho0
    scale = abs(zeta0) ** 2 + rho0 * rho0
    if abs(den) <= 1e-14 * scale:
        raise ImageIsLine("circle passes through the pole of the transform")
    w0 = zeta0.conjugate() / den
    wr = rho0 / abs(den)
    k = -(m.a * m.d - m.b * m.c) / m.c
    return EuclideanCircle(m.a / m.c + k * w0, abs(k) * wr)


# ---------------------------------------------------------------------------
# hyperbolic <-> Euclidean circle data in the disc model


def circle_centered_origin(t: float) -> EuclideanCircle:
    """Circle with hyperbolic center 0 and radius parameter t (finite)."""
    s = math.sqrt(t)
    return EuclideanCircle(0j, (1.0 - s) / (1.0 + s))


def place_on_ray(t_pivot: float, t_new: float, theta: float) -> EuclideanCircle:
    """Circle tangent to the origin-centered t_pivot circle, in direction theta.

    Works uniformly for finite radii and horocycles (t_new = 0); horocycles
    come out internally tangent to the unit circle exactly.
    """
    s = math.sqrt(t_pivot)
    x_in = (1.0 - s) / (1.0 + s)
    q = s * t_new
    x_out = (1.0 - q) / (1.0 + q)
    center = 0.5 * (x_out + x_in) * cmath.exp(1j * theta)
    return EuclideanCircle(center, 0.5 * (x_out - x_in))


def hyperbolic_center(c: EuclideanCircle) -> complex:
    """Hyperbolic center of a circle strictly inside the unit disc."""
    d = abs(c.center)
    x_out = d + c.radius
    x_in = d - c.radius
    if x_out >= 1.0:
        raise CenterRadiusInfinite("horocycles have no hyperbolic center")
    e2 = (1.0 + x_out) * (1.0 + x_in) / ((1.0 - x_out) * (1.0 - x_in))
    e = math.sqrt(e2)
    m = (e - 1.0) / (e + 1.0)
    if d == 0.0:
        return 0j
    return m * c.center / d
