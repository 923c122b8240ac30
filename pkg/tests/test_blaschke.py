import cmath
import math

import numpy as np
import pytest

from blpack.errors import CoincidentPoints, RootFindingFailed
from blpack.maps import (
    ClassicalBlaschke,
    blaschke_critical_points,
    blaschke_winding,
    classical_blaschke_eval,
)


def test_identity_blaschke():
    phi = ClassicalBlaschke((0j,))
    assert classical_blaschke_eval(phi, 0.5) == pytest.approx(0.5)
    assert phi.degree == 1


def test_z_squared():
    phi = ClassicalBlaschke((0j, 0j))
    assert classical_blaschke_eval(phi, 0.5j) == pytest.approx(-0.25 + 0j)


def test_boundary_modulus():
    phi = ClassicalBlaschke((0j, 0.5 + 0j))
    for k in range(64):
        z = cmath.exp(2j * math.pi * k / 64)
        assert abs(abs(phi(z)) - 1.0) < 1e-12


def test_interior_contraction():
    phi = ClassicalBlaschke((0.2 + 0.1j, -0.3j, 0.5 + 0j))
    rng = np.random.default_rng(0)
    for _ in range(200):
        z = complex(*rng.uniform(-0.7, 0.7, 2))
        assert abs(phi(z)) < 1.0


def test_rejects_zero_outside_disc():
    with pytest.raises(CoincidentPoints):
        ClassicalBlaschke((1.5 + 0j,))


def test_winding_equals_degree():
    for zeros in ((0j,), (0j, 0j), (0j, 0.4 + 0j, 0.4j)):
        phi = ClassicalBlaschke(zeros)
        assert blaschke_winding(phi) == phi.degree


def test_derivative_matches_finite_differences():
    phi = ClassicalBlaschke((0.1 + 0.2j, -0.4 + 0j))
    h = 1e-7
    for z in (0j, 0.3 - 0.2j, 0.5j):
        fd = (phi(z + h) - phi(z - h)) / (2 * h)
        assert abs(phi.derivative(z) - fd) < 1e-6


def test_critical_point_z2():
    phi = ClassicalBlaschke((0j, 0j))
    cps = blaschke_critical_points(phi)
    assert len(cps) == 1
    z, k = cps[0]
    assert abs(z) < 1e-10 and k == 1


def test_critical_point_on_segment():
    a = 0.5
    phi = ClassicalBlaschke((0j, a + 0j))
    cps = blaschke_critical_points(phi)
    assert len(cps) == 1
    z, k = cps[0]
    assert k == 1
    assert 0 < z.real < a and abs(z.imag) < 1e-12
    assert abs(phi.derivative(z)) < 1e-12


def test_critical_points_degree3_count():
    phi = ClassicalBlaschke((0j, 0.4 + 0j, 0.4j))
    cps = blaschke_critical_points(phi)
    assert sum(k for _, k in cps) == 2
    for z, _ in cps:
        assert abs(z) < 1.0
        assert abs(phi.derivative(z)) < 1e-10


def test_critical_points_multiplicity():
    phi = ClassicalBlaschke((0j, 0j, 0j))
    cps = blaschke_critical_points(phi)
    assert len(cps) == 1
    z, k = cps[0]
    assert abs(z) < 1e-6 and k == 2


def test_critical_points_against_companion_oracle():
    rng = np.random.default_rng(9)
    for _ in range(10):
        zeros = tuple(complex(*p) for p in rng.uniform(-0.5, 0.5, (3, 2)))
        phi = ClassicalBlaschke(zeros)
        got = sorted(
            (z for z, k in blaschke_critical_points(phi) for _ in range(k)),
            key=lambda z: (z.real, z.imag),
        )
        roots = np.roots(list(reversed(phi.derivative_numerator)))
        want = sorted(
            (complex(r) for r in roots if abs(r) < 1.0),
            key=lambda z: (z.real, z.imag),
        )
        assert len(got) == len(want) == 2
        for g, w in zip(got, want):
            assert abs(g - w) < 1e-7


def test_critical_points_require_degree_2():
    with pytest.raises(RootFindingFailed):
        blaschke_critical_points(ClassicalBlaschke((0j,)))
