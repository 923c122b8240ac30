import cmath
import math

import numpy as np
import pytest

from blpack.errors import (
    DegenerateFace,
    DifferentComplex,
    OutsideCarrier,
    RegionLocationFailed,
)
from blpack.geometry import EuclideanCircle, disc_automorphism
from blpack.maps import (
    CpMap,
    _mutual_tangency,
    automorphism_parameters,
    cp_map_eval,
    equivalent_mod_mobius,
    extension_eval,
    local_distortion,
    max_local_distortion,
    per_face_dilatation,
    ratio_map,
    valence,
    valence_of_map_sampled,
    valence_sampled,
)
from blpack.solver import (
    Packing,
    SolveReport,
    normalize,
    pack,
    transform,
)
from blpack.triangulation import EMPTY_BRANCH, BranchStructure, hex_ball

from oracles import barycentric_weights, svd_dilatation


@pytest.fixture(scope="module")
def ball3_pair():
    t = hex_ball(3)
    dom = normalize(pack(t, EMPTY_BRANCH, 1e-12), 0, 1)
    ran = normalize(pack(t, BranchStructure(((0, 1),)), 1e-12), 0, 1)
    return dom, ran


def scaled_packing(p, lam):
    circles = tuple(
        EuclideanCircle(c.center * lam, c.radius * lam) for c in p.circles
    )
    return Packing(p.tri, p.branch, circles, p.report, p.angle_sum)


# ---------------------------------------------------------------------------
# cp-map evaluation


def test_identity_map_fixes_points(ball3_pair):
    dom, _ = ball3_pair
    f = CpMap(dom, dom)
    rng = np.random.default_rng(0)
    for _ in range(200):
        z = complex(*rng.uniform(-0.6, 0.6, 2))
        if f.locate(z) is None:
            continue
        assert abs(cp_map_eval(f, z) - z) < 1e-13


def test_vertex_centers_map_to_centers(ball3_pair):
    dom, ran = ball3_pair
    f = CpMap(dom, ran)
    for v in range(dom.tri.n_vertices):
        z = dom.circles[v].center
        if f.locate(z) is None:
            continue  # boundary centers can fall outside the carrier hull
        assert abs(cp_map_eval(f, z) - ran.circles[v].center) < 1e-12


def test_edge_midpoint_against_barycentric_oracle(ball3_pair):
    dom, ran = ball3_pair
    f = CpMap(dom, ran)
    u, v = dom.tri.edges[5]
    z = 0.5 * (dom.circles[u].center + dom.circles[v].center)
    i, *_ = f.locate(z)
    a, b, c = dom.tri.faces[i]
    w = barycentric_weights(
        dom.circles[a].center, dom.circles[b].center, dom.circles[c].center, z
    )
    want = (w[0] * ran.circles[a].center + w[1] * ran.circles[b].center
            + w[2] * ran.circles[c].center)
    assert abs(cp_map_eval(f, z) - want) < 1e-12


def test_outside_carrier_raises(ball3_pair):
    dom, _ = ball3_pair
    f = CpMap(dom, dom)
    with pytest.raises(OutsideCarrier):
        cp_map_eval(f, 0.999 + 0j)


def test_domain_must_be_univalent(ball3_pair):
    dom, ran = ball3_pair
    with pytest.raises(DifferentComplex):
        CpMap(ran, dom)


def test_different_complexes_rejected(ball3_pair):
    dom, _ = ball3_pair
    other = pack(hex_ball(2), EMPTY_BRANCH, 1e-12)
    with pytest.raises(DifferentComplex):
        CpMap(dom, other)


# ---------------------------------------------------------------------------
# ratio map and local distortion


def test_ratio_map_identity(ball3_pair):
    dom, _ = ball3_pair
    f = CpMap(dom, dom)
    assert all(ratio_map(f, v) == 1.0 for v in range(dom.tri.n_vertices))


def test_ratio_map_rotation_invariant(ball3_pair):
    dom, _ = ball3_pair
    rot = transform(dom, disc_automorphism(0j, 0.9))
    f = CpMap(dom, rot)
    assert ratio_map(f, 0) == pytest.approx(1.0, abs=1e-12)


def test_ratio_map_branched_flower(flower_packed, branched_flower_packed):
    f = CpMap(normalize(flower_packed, 0, 1),
              normalize(branched_flower_packed, 0, 1))
    want = branched_flower_packed.circles[0].radius / (1.0 / 3.0)
    assert ratio_map(f, 0) == pytest.approx(want, rel=1e-12)


def test_local_distortion_flower(flower_packed):
    assert all(
        local_distortion(flower_packed, v) == pytest.approx(1.0, abs=1e-12)
        for v in range(7)
    )


def test_local_distortion_formula():
    # neighbor ratio 2 contributes (2 + 1/2)/2
    assert 0.5 * (2.0 + 0.5) == 1.25


def test_local_distortion_edge_scan_oracle():
    p = pack(hex_ball(4), EMPTY_BRANCH, 1e-12)
    worst = 1.0
    for u, v in p.tri.edges:
        ru = p.circles[u].radius
        rv = p.circles[v].radius
        worst = max(worst, 0.5 * (ru / rv + rv / ru))
    assert max_local_distortion(p) == pytest.approx(worst, rel=1e-14)
    assert math.isfinite(worst)


def test_local_distortion_similarity_invariant(ball3_pair):
    dom, _ = ball3_pair
    scaled = scaled_packing(dom, 0.5)
    for v in range(dom.tri.n_vertices):
        assert local_distortion(dom, v) == pytest.approx(
            local_distortion(scaled, v), rel=1e-14
        )


# ---------------------------------------------------------------------------
# valence


def test_valence_univalent(corpus_packed):
    for name, (entry, p) in corpus_packed.items():
        if not entry.branch.entries and entry.tri.interior:
            assert valence(p) == 1, name


def test_valence_branched_flower(branched_flower_packed):
    assert valence(branched_flower_packed) == 2


def test_valence_two_branch_ball3(corpus_packed):
    entry, p = corpus_packed["ball3-b2"]
    assert valence(p) == 3
    assert valence_sampled(p, 100_000) == 3


def test_valence_identity_on_corpus(corpus_packed):
    for name, (entry, p) in corpus_packed.items():
        if not entry.tri.interior:
            continue
        assert valence(p) == 1 + entry.branch.total_order, name


def test_valence_matches_sampling_oracle(corpus_packed):
    for name in ("ball3", "ball2-b1", "ball4-b1", "ball4-b2", "wheel5-b1"):
        entry, p = corpus_packed[name]
        assert valence(p) == valence_sampled(p, 100_000), name


def test_map_valence_bounded_by_packing_valence(ball3_pair):
    dom, ran = ball3_pair
    f = CpMap(dom, ran)
    assert valence_of_map_sampled(f) <= valence(ran)


# ---------------------------------------------------------------------------
# extension


def test_extension_equals_carrier_map_inside(ball3_pair):
    dom, ran = ball3_pair
    f = CpMap(dom, ran)
    rng = np.random.default_rng(1)
    for _ in range(100):
        z = complex(*rng.uniform(-0.4, 0.4, 2))
        if f.locate(z) is None:
            continue
        assert extension_eval(f, z) == cp_map_eval(f, z)


def test_extension_identity_everywhere(ball3_pair):
    dom, _ = ball3_pair
    f = CpMap(dom, dom)
    rng = np.random.default_rng(2)
    count = 0
    for _ in range(800):
        z = complex(*rng.uniform(-1, 1, 2))
        if abs(z) >= 0.998:
            continue
        count += 1
        assert abs(extension_eval(f, z) - z) < 1e-12
    assert count > 400


def test_extension_covers_disc_for_branched_map(ball3_pair):
    dom, ran = ball3_pair
    f = CpMap(dom, ran)
    rng = np.random.default_rng(3)
    for _ in range(500):
        z = complex(*rng.uniform(-1, 1, 2))
        if abs(z) >= 0.998:
            continue
        w = extension_eval(f, z)
        assert abs(w) <= 1.0 + 1e-9


def test_extension_rejects_near_boundary(ball3_pair):
    dom, _ = ball3_pair
    f = CpMap(dom, dom)
    with pytest.raises(RegionLocationFailed):
        extension_eval(f, 1.0 - 1e-14 + 0j)


def test_extension_seam_tangency_points(ball3_pair):
    """Gap Mobius maps and the carrier limit agree at the corner points."""
    dom, _ = ball3_pair
    f = CpMap(dom, dom)
    ext = f._extension
    for gap in ext.gaps:
        got = gap.map(gap.mu)
        assert abs(got - gap.mu) < 1e-8


def test_extension_seam_gap_vs_disc(ball3_pair):
    """On the circle arc bounding a gap, the radial formula matches the gap map."""
    dom, ran = ball3_pair
    f = CpMap(dom, ran)
    ext = f._extension
    for gap in ext.gaps[:6]:
        v = gap.v
        c = dom.circles[v]
        lam = ext.lam_dom[v]
        # walk the arc from just beside the boundary tangency toward mu(u,v)
        a0 = cmath.phase(lam - c.center)
        a1 = cmath.phase(gap.mu - c.center)
        for s in np.linspace(0.15, 0.85, 9):
            d = math.remainder(a1 - a0, 2.0 * math.pi)
            p = c.center + c.radius * cmath.exp(1j * (a0 + s * d))
            if not gap.contains(p):
                continue
            via_gap = gap.map(p)
            via_disc = extension_eval(f, p * (1.0 - 1e-13))
            assert abs(via_gap - via_disc) < 1e-6


def test_extension_seam_carrier_vs_disc(ball3_pair):
    """Radial-extension values agree with the affine map along seam radii."""
    dom, ran = ball3_pair
    f = CpMap(dom, ran)
    walk = dom.tri.boundary_walk
    v = walk[0]
    u = next(w for w in dom.tri.neighbors[v] if not dom.tri.is_boundary[w])
    c = dom.circles[v]
    mu = _mutual_tangency(c, dom.circles[u])
    for s in np.linspace(0.1, 0.95, 9):
        z = c.center + s * (mu - c.center)
        got = extension_eval(f, z)
        want = cp_map_eval(f, z)
        assert abs(got - want) < 1e-6


# ---------------------------------------------------------------------------
# dilatation


def test_dilatation_identity(ball3_pair):
    dom, _ = ball3_pair
    assert per_face_dilatation(CpMap(dom, dom)) == 1.0


def test_dilatation_similarity(ball3_pair):
    dom, _ = ball3_pair
    f = CpMap(dom, scaled_packing(dom, 2.0))
    assert per_face_dilatation(f) == pytest.approx(1.0, abs=1e-12)


def test_dilatation_against_svd_oracle(ball3_pair):
    dom, ran = ball3_pair
    f = CpMap(dom, ran)
    got = per_face_dilatation(f)
    worst = 1.0
    for a, b, c in dom.tri.faces:
        worst = max(worst, svd_dilatation(
            dom.circles[a].center, dom.circles[b].center, dom.circles[c].center,
            ran.circles[a].center, ran.circles[b].center, ran.circles[c].center,
        ))
    assert got == pytest.approx(worst, rel=1e-9)
    assert got > 1.0


def test_dilatation_degenerate_face(ball3_pair):
    dom, _ = ball3_pair
    circles = list(dom.circles)
    a, b, c = dom.tri.faces[0]
    # collapse one range face to a segment
    circles[c] = EuclideanCircle(
        0.5 * (circles[a].center + circles[b].center), circles[c].radius
    )
    broken = Packing(dom.tri, dom.branch, tuple(circles), dom.report,
                     dom.angle_sum)
    with pytest.raises(DegenerateFace):
        per_face_dilatation(CpMap(dom, broken))


# ---------------------------------------------------------------------------
# Mobius equivalence


def test_equivalent_identity(ball3_pair):
    dom, _ = ball3_pair
    same, g = equivalent_mod_mobius(dom, dom, 1e-9)
    assert same
    a, theta = automorphism_parameters(g)
    assert abs(a) < 1e-12 and abs(theta) < 1e-12


def test_equivalent_recovers_injected_automorphism(ball3_pair):
    dom, _ = ball3_pair
    g0 = disc_automorphism(0.3 + 0j, math.pi / 5)
    pushed = transform(dom, g0)
    same, g = equivalent_mod_mobius(dom, pushed, 1e-9)
    assert same
    a, theta = automorphism_parameters(g)
    assert abs(a - 0.3) < 1e-9
    assert abs(theta - math.pi / 5) < 1e-9


def test_equivalent_rejects_different_branch(ball3_pair):
    dom, ran = ball3_pair
    same, _ = equivalent_mod_mobius(dom, ran, 1e-6)
    assert not same
