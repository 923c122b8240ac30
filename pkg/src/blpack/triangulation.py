"""Combinatorial disc triangulations, generators, and branch structures.

Vertices are dense integers 0..n-1.  Faces are stored as consistently
oriented triples; the orientation of face 0 (as given) anchors the global
orientation class, and the boundary walk then runs positively with respect
to it.  All structures are immutable after construction.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .errors import (
    BadFace,
    BranchOnBoundary,
    DuplicateBranchVertex,
    NonOrientable,
    NotADisc,
)

Face = tuple[int, int, int]
Edge = tuple[int, int]  # sorted pair


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Triangulation:
    """Oriented simplicial triangulation of a closed disc."""

    n_vertices: int
    faces: tuple[Face, ...]
    edges: tuple[Edge, ...]
    neighbors: tuple[tuple[int, ...], ...]  # link order; cyclic iff interior
    is_boundary: tuple[bool, ...]
    boundary_walk: tuple[int, ...]
    degree: int

    @property
    def interior(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n_vertices) if not self.is_boundary[v])

    @property
    def boundary(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n_vertices) if self.is_boundary[v])

    def faces_at(self, v: int) -> tuple[Face, ...]:
        return tuple(f for f in self.faces if v in f)

    def edge_count(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class BranchStructure:
    """Interior vertices with branching orders, the aimed-for branch set."""

    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        seen = set()
        for v, k in self.entries:
            if k < 1:
                raise BadFace(f"branch order must be >= 1, got {k} at vertex {v}")
            if v in seen:
                raise DuplicateBranchVertex(f"vertex {v} listed twice")
            seen.add(v)

    @property
    def total_order(self) -> int:
        return sum(k for _, k in self.entries)

    def order_of(self, v: int) -> int:
        for w, k in self.entries:
            if w == v:
                return k
        return 0

    def vertices(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.entries)


EMPTY_BRANCH = BranchStructure()


def _orient_faces(faces: list[Face]) -> list[Face]:
    """Flip faces to a consistent orientation; face 0 anchors the class."""
    by_edge: dict[Edge, list[int]] = {}
    for i, (a, b, c) in enumerate(faces):
        for e in ((a, b), (b, c), (c, a)):
            by_edge.setdefault(_edge(*e), []).append(i)
    for e, fs in by_edge.items():
        if len(fs) > 2:
            raise NotADisc(f"edge {e} lies in {len(fs)} faces")

    oriented: list[Face | None] = [None] * len(faces)
    oriented[0] = faces[0]
    queue = deque([0])
    while queue:
        i = queue.popleft()
        a, b, c = oriented[i]
        for u, v in ((a, b), (b, c), (c, a)):
            for j in by_edge[_edge(u, v)]:
                if j == i:
                    continue
                fj = faces[j]
                directed = {
                    (fj[0], fj[1]), (fj[1], fj[2]), (fj[2], fj[0])
                }
                # the neighbor must traverse the shared edge as (v, u)
                if (v, u) in directed:
                    flipped = fj
                elif (u, v) in directed:
                    flipped = (fj[0], fj[2], fj[1])
                else:  # pragma: no cover - shared edge guaranteed above
                    continue
                if oriented[j] is None:
                    oriented[j] = flipped
                    queue.append(j)
                elif oriented[j] != flipped and oriented[j] != (
                    flipped[1], flipped[2], flipped[0]
                ) and oriented[j] != (flipped[2], flipped[0], flipped[1]):
                    raise NonOrientable(
                        f"faces {i} and {j} disagree across edge {(u, v)}"
                    )
    if any(f is None for f in oriented):
        raise NotADisc("face adjacency graph is disconnected")
    return oriented  # type: ignore[return-value]


def _vertex_links(n: int, faces: list[Face]) -> tuple[list[list[int]], list[bool]]:
    """Ordered neighbor links.  Interior links close into a cycle."""
    succ: list[dict[int, int]] = [dict() for _ in range(n)]
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for a, b, c in faces:
        for v, x, y in ((a, b, c), (b, c, a), (c, a, b)):
            if x in succ[v]:
                raise NonOrientable(f"directed edge repeated at vertex {v}")
            succ[v][x] = y
            nbrs[v].update((x, y))

    links: list[list[int]] = []
    boundary: list[bool] = []
    for v in range(n):
        if not nbrs[v]:
            raise NotADisc(f"vertex {v} is isolated")
        ins = set(succ[v].values())
        starts = [u for u in succ[v] if u not in ins]
        if len(starts) > 1:
            raise NotADisc(f"pinched link at vertex {v}")
        if starts:
            cur = starts[0]
            is_bd = True
        else:
            cur = min(succ[v])
            is_bd = False
        link = [cur]
        while cur in succ[v]:
            cur = succ[v][cur]
            if cur == link[0]:
                break
            if cur in link:
                raise NotADisc(f"pinched link at vertex {v}")
            link.append(cur)
        if set(link) != nbrs[v]:
            raise NotADisc(f"pinched link at vertex {v}")
        if not is_bd and succ[v][link[-1]] != link[0]:
            raise NotADisc(f"link of interior vertex {v} does not close")
        links.append(link)
        boundary.append(is_bd)
    return links, boundary


def _boundary_walk(faces: list[Face], boundary_flags: list[bool]) -> list[int]:
    seen: dict[Edge, int] = {}
    directed: dict[Edge, tuple[int, int]] = {}
    for a, b, c in faces:
        for u, v in ((a, b), (b, c), (c, a)):
            e = _edge(u, v)
            seen[e] = seen.get(e, 0) + 1
            directed[e] = (u, v)
    walk_next: dict[int, int] = {}
    for e, cnt in seen.items():
        if cnt == 1:
            u, v = directed[e]
            if u in walk_next:
                raise NotADisc("boundary is not a single cycle")
            walk_next[u] = v
    if not walk_next:
        raise NotADisc("no boundary edge (not a disc with boundary)")
    start = min(walk_next)
    walk = [start]
    cur = walk_next[start]
    while cur != start:
        walk.append(cur)
        cur = walk_next[cur]
        if len(walk) > len(walk_next):
            raise NotADisc("boundary walk does not close")
    if len(walk) != len(walk_next) or set(walk) != {
        v for v in range(len(boundary_flags)) if boundary_flags[v]
    }:
        raise NotADisc("boundary is not a single cycle")
    return walk


def build_triangulation(faces) -> Triangulation:
    """Build a validated, consistently-oriented disc triangulation."""
    if not faces:
        raise BadFace("empty face list")
    clean: list[Face] = []
    for f in faces:
        t = tuple(int(v) for v in f)
        if len(t) != 3:
            raise BadFace(f"face {f} is not a triple")
        if len(set(t)) != 3:
            raise BadFace(f"face {f} repeats a vertex")
        if min(t) < 0:
            raise BadFace(f"face {f} has a negative vertex id")
        clean.append(t)

    n = max(max(f) for f in clean) + 1
    used = {v for f in clean for v in f}
    if used != set(range(n)):
        raise NotADisc("vertex ids are not dense 0..n-1")

    oriented = _orient_faces(clean)
    links, boundary_flags = _vertex_links(n, oriented)
    walk = _boundary_walk(oriented, boundary_flags)

    edges = sorted({_edge(u, v) for a, b, c in oriented
                    for u, v in ((a, b), (b, c), (c, a))})
    if n - len(edges) + len(oriented) != 1:
        raise NotADisc(
            f"Euler count V-E+F = {n - len(edges) + len(oriented)}, expected 1"
        )

    return Triangulation(
        n_vertices=n,
        faces=tuple(oriented),
        edges=tuple(edges),
        neighbors=tuple(tuple(l) for l in links),
        is_boundary=tuple(boundary_flags),
        boundary_walk=tuple(walk),
        degree=max(len(l) for l in links),
    )


# ---------------------------------------------------------------------------
# generators


def hex_ball(n: int) -> Triangulation:
    """Combinatorial ball of radius n in the triangular lattice.

    Vertex 0 is the center; rings are numbered outward, each ring ordered
    counterclockwise starting from the east direction.
    """
    if n < 1:
        raise ValueError("hex_ball needs n >= 1")

    def dist(q, r):
        return (abs(q) + abs(r) + abs(q + r)) // 2

    coords = [(q, r) for q in range(-n, n + 1) for r in range(-n, n + 1)
              if dist(q, r) <= n]

    def sort_key(c):
        q, r = c
        x = q + 0.5 * r
        y = r * math.sqrt(3.0) / 2.0
        ang = math.atan2(y, x) % (2.0 * math.pi)
        return (dist(q, r), ang)

    coords.sort(key=sort_key)
    index = {c: i for i, c in enumerate(coords)}

    faces = []
    for q in range(-n - 1, n + 1):
        for r in range(-n - 1, n + 1):
            up = ((q, r), (q + 1, r), (q, r + 1))
            down = ((q + 1, r), (q + 1, r + 1), (q, r + 1))
            for tri in (up, down):
                if all(c in index for c in tri):
                    faces.append(tuple(index[c] for c in tri))
    return build_triangulation(faces)


def hex_refine(t: Triangulation) -> Triangulation:
    """Split every face into 4 by edge midpoints; original ids are kept."""
    mid = {e: t.n_vertices + i for i, e in enumerate(t.edges)}
    faces = []
    for a, b, c in t.faces:
        mab = mid[_edge(a, b)]
        mbc = mid[_edge(b, c)]
        mca = mid[_edge(c, a)]
        faces.extend([
            (a, mab, mca),
            (b, mbc, mab),
            (c, mca, mbc),
            (mab, mbc, mca),
        ])
    return build_triangulation(faces)


# ---------------------------------------------------------------------------
# branch structures


def _enclosed_vertices(t: Triangulation, cycle: list[int]) -> set[int]:
    """Vertices strictly enclosed by the simple closed edge path `cycle`.

    Region-growing on faces after deleting the cycle edges; a region counts
    as outside when it touches the boundary walk through a feature not on
    the cycle itself.
    """
    cyc_set = set(cycle)
    cyc_edges = {_edge(cycle[i], cycle[(i + 1) % len(cycle)])
                 for i in range(len(cycle))}

    by_edge: dict[Edge, list[int]] = {}
    for i, (a, b, c) in enumerate(t.faces):
        for e in ((a, b), (b, c), (c, a)):
            by_edge.setdefault(_edge(*e), []).append(i)
    boundary_edges = {e for e, fs in by_edge.items() if len(fs) == 1}

    comp = [-1] * len(t.faces)
    ncomp = 0
    for seed in range(len(t.faces)):
        if comp[seed] >= 0:
            continue
        comp[seed] = ncomp
        stack = [seed]
        while stack:
            i = stack.pop()
            a, b, c = t.faces[i]
            for e in (_edge(a, b), _edge(b, c), _edge(c, a)):
                if e in cyc_edges:
                    continue
                for j in by_edge[e]:
                    if comp[j] < 0:
                        comp[j] = ncomp
                        stack.append(j)
        ncomp += 1

    touches = [False] * ncomp
    for i, f in enumerate(t.faces):
        a, b, c = f
        if any(t.is_boundary[v] and v not in cyc_set for v in f):
            touches[comp[i]] = True
            continue
        for e in (_edge(a, b), _edge(b, c), _edge(c, a)):
            if e in boundary_edges and e not in cyc_edges:
                touches[comp[i]] = True
                break

    enclosed: set[int] = set()
    for i, f in enumerate(t.faces):
        if not touches[comp[i]]:
            enclosed.update(f)
    return enclosed - cyc_set


def _simple_cycles_up_to(t: Triangulation, max_len: int):
    """Yield simple cycles (vertex lists) with at most max_len edges.

    Each cycle is produced once: anchored at its minimum vertex, second
    vertex smaller than the last to kill the reversed copy.
    """
    nbr = t.neighbors
    n = t.n_vertices
    for start in range(n):
        path = [start]
        on_path = {start}

        def extend():
            v = path[-1]
            for u in sorted(nbr[v]):
                if u == start and len(path) >= 3:
                    if path[1] < path[-1]:
                        yield list(path)
                    continue
                if u <= start or u in on_path or len(path) >= max_len:
                    continue
                path.append(u)
                on_path.add(u)
                yield from extend()
                path.pop()
                on_path.remove(u)

        yield from extend()


def validate_branch_structure(
    t: Triangulation, b: BranchStructure
) -> tuple[bool, list[int] | None]:
    """Check the cycle inequality; on failure return a violating cycle.

    Every simple closed edge path must have at least 3 + 2*(sum of enclosed
    orders) edges.  Only cycles of length <= 2 + 2*total_order can violate
    this, which bounds the search.
    """
    for v, _ in b.entries:
        if v < 0 or v >= t.n_vertices or t.is_boundary[v]:
            raise BranchOnBoundary(f"vertex {v} is not interior")

    if not b.entries:
        return True, None

    orders = dict(b.entries)
    bound = 2 + 2 * b.total_order
    for cycle in _simple_cycles_up_to(t, bound):
        enclosed = _enclosed_vertices(t, cycle)
        need = 3 + 2 * sum(orders.get(v, 0) for v in enclosed)
        if len(cycle) < need:
            return False, cycle
    return True, None
