import pytest

from blpack.corpus import fan, irregular_disc, single_face, wheel
from blpack.errors import (
    BadFace,
    BranchOnBoundary,
    DuplicateBranchVertex,
    NotADisc,
)
from blpack.triangulation import (
    EMPTY_BRANCH,
    BranchStructure,
    build_triangulation,
    hex_ball,
    hex_refine,
    validate_branch_structure,
)

from oracles import all_simple_cycles, brute_force_branch_verdict


def euler_count(t):
    return t.n_vertices - len(t.edges) + len(t.faces)


def test_single_face():
    t = build_triangulation([(0, 1, 2)])
    assert t.n_vertices == 3
    assert len(t.edges) == 3
    assert all(t.is_boundary)
    assert not t.interior
    assert euler_count(t) == 1


def test_hex_flower():
    t = hex_ball(1)
    assert t.n_vertices == 7
    assert len(t.faces) == 6
    assert t.interior == (0,)
    assert len(t.neighbors[0]) == 6
    assert len(t.boundary_walk) == 6


def test_orientation_repair_and_conflict():
    # second face given with the same traversal of the shared edge: flip it
    t = build_triangulation([(0, 1, 2), (1, 2, 3)])
    directed = [(a, b) for a, b, c in t.faces for a, b in ((a, b), (b, c), (c, a))]
    interior_edges = [e for e in t.edges
                      if sum(1 for f in t.faces if e[0] in f and e[1] in f) == 2]
    for u, v in interior_edges:
        assert ((u, v) in directed) and ((v, u) in directed)


def test_bad_faces():
    with pytest.raises(BadFace):
        build_triangulation([(0, 1, 1)])
    with pytest.raises(BadFace):
        build_triangulation([])
    with pytest.raises(BadFace):
        build_triangulation([(0, 1)])
    with pytest.raises(NotADisc):
        build_triangulation([(0, 1, 2), (3, 4, 5)])  # disconnected
    with pytest.raises(NotADisc):
        build_triangulation(
            [(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)]  # tetrahedron
        )


def test_pinched_vertex_rejected():
    # two triangles sharing only vertex 0
    with pytest.raises(NotADisc):
        build_triangulation([(0, 1, 2), (0, 3, 4)])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_hex_ball_counts(n):
    t = hex_ball(n)
    assert t.n_vertices == 1 + 3 * n * (n + 1)
    assert len(t.boundary) == 6 * n
    assert t.degree == 6
    assert euler_count(t) == 1
    if n > 1:
        assert len(t.interior) == 1 + 3 * (n - 1) * n


def test_hex_ball_interior_links_are_cycles():
    t = hex_ball(3)
    for v in t.interior:
        nb = t.neighbors[v]
        assert len(nb) == 6
        # consecutive link entries are themselves neighbors
        for i in range(len(nb)):
            assert nb[(i + 1) % len(nb)] in t.neighbors[nb[i]]


def test_hex_refine_counts():
    f = hex_ball(1)
    r = hex_refine(f)
    assert r.n_vertices == 19
    assert len(r.faces) == 24
    # original interior vertex keeps its id and degree
    assert len(r.neighbors[0]) == 6
    assert not r.is_boundary[0]
    # midpoints of interior edges have degree 6
    interior_mid = [v for v in r.interior if v >= f.n_vertices]
    assert interior_mid and all(len(r.neighbors[v]) == 6 for v in interior_mid)


def test_hex_refine_single_face():
    r = hex_refine(single_face())
    assert r.n_vertices == 6
    assert len(r.faces) == 4


def test_hex_refine_composes():
    t = irregular_disc()
    r2 = hex_refine(hex_refine(t))
    assert len(r2.faces) == 16 * len(t.faces)


def test_branch_structure_validation_errors():
    t = hex_ball(2)
    with pytest.raises(DuplicateBranchVertex):
        BranchStructure(((0, 1), (0, 2)))
    with pytest.raises(BadFace):
        BranchStructure(((0, 0),))
    with pytest.raises(BranchOnBoundary):
        validate_branch_structure(t, BranchStructure(((t.boundary[0], 1),)))


def test_empty_branch_always_valid(corpus_entries):
    for entry in corpus_entries:
        ok, witness = validate_branch_structure(entry.tri, EMPTY_BRANCH)
        assert ok and witness is None


def test_hex_ball2_center_branch_valid():
    ok, _ = validate_branch_structure(hex_ball(2), BranchStructure(((0, 1),)))
    assert ok


def test_wheel4_counterexample():
    t = wheel(4)
    assert t.interior == (0,)
    ok, witness = validate_branch_structure(t, BranchStructure(((0, 1),)))
    assert not ok
    assert sorted(witness) == [1, 2, 3, 4]
    assert len(witness) == 4  # 4 < 3 + 2*1


def test_fan_has_no_interior():
    t = fan(4)
    assert not t.interior
    assert t.n_vertices == 6


def test_validator_against_brute_force(corpus_entries, univalent_by_complex):
    checked = 0
    for entry in corpus_entries:
        if entry.tri.n_vertices > 30:
            continue
        expected = brute_force_branch_verdict(
            entry.tri, entry.branch, univalent_by_complex.get(id(entry.tri))
        )
        got, _ = validate_branch_structure(entry.tri, entry.branch)
        assert got == expected, entry.name
        checked += 1
    assert checked >= 10


def test_brute_force_rejects_wheel4(univalent_by_complex):
    t = wheel(4)
    assert brute_force_branch_verdict(t, BranchStructure(((0, 1),)), None) is False


def test_cycle_enumeration_small():
    assert len(all_simple_cycles(single_face())) == 1
    assert len(all_simple_cycles(hex_ball(1))) == 31
