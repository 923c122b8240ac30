"""The shared test corpus: hex balls, wheels, and refined irregular discs."""

from __future__ import annotations

from dataclasses import dataclass

from .triangulation import (
    EMPTY_BRANCH,
    BranchStructure,
    Triangulation,
    build_triangulation,
    hex_ball,
    hex_refine,
)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    tri: Triangulation
    branch: BranchStructure


def single_face() -> Triangulation:
    return build_triangulation([(0, 1, 2)])


def fan(k: int) -> Triangulation:
    """Triangle strip around a boundary hub; no interior vertices."""
    return build_triangulation([(0, i, i + 1) for i in range(1, k + 1)])


def wheel(k: int) -> Triangulation:
    """k triangles closing around one interior hub of degree k."""
    return build_triangulation(
        [(0, i, i % k + 1) for i in range(1, k + 1)]
    )


def irregular_disc() -> Triangulation:
    """Hex flower with two ears stacked on boundary edges."""
    faces = [(0, i, i % 6 + 1) for i in range(1, 7)]
    faces.append((2, 1, 7))
    faces.append((5, 4, 8))
    return build_triangulation(faces)


def corpus() -> list[CorpusEntry]:
    entries: list[CorpusEntry] = []

    balls = {n: hex_ball(n) for n in range(1, 7)}
    for n in range(1, 7):
        entries.append(CorpusEntry(f"ball{n}", balls[n], EMPTY_BRANCH))
    for n in range(1, 7):
        entries.append(
            CorpusEntry(f"ball{n}-b1", balls[n], BranchStructure(((0, 1),)))
        )
    for n in range(3, 7):
        entries.append(
            CorpusEntry(
                f"ball{n}-b2", balls[n], BranchStructure(((0, 1), (7, 1)))
            )
        )

    entries.append(CorpusEntry("face", single_face(), EMPTY_BRANCH))
    entries.append(CorpusEntry("fan4", fan(4), EMPTY_BRANCH))
    w5 = wheel(5)
    entries.append(CorpusEntry("wheel5", w5, EMPTY_BRANCH))
    entries.append(CorpusEntry("wheel5-b1", w5, BranchStructure(((0, 1),))))

    w5r = hex_refine(w5)
    entries.append(CorpusEntry("wheel5-ref", w5r, EMPTY_BRANCH))
    entries.append(
        CorpusEntry("wheel5-ref-b1", w5r, BranchStructure(((0, 1),)))
    )

    irr = irregular_disc()
    entries.append(CorpusEntry("irregular", irr, EMPTY_BRANCH))
    entries.append(CorpusEntry("irregular-b1", irr, BranchStructure(((0, 1),))))
    irr2 = hex_refine(hex_refine(irr))
    entries.append(CorpusEntry("irregular-ref", irr2, EMPTY_BRANCH))
    entries.append(
        CorpusEntry("irregular-ref-b1", irr2, BranchStructure(((0, 1),)))
    )
    # vertex 9 is the midpoint of the first interior edge of the base disc
    entries.append(
        CorpusEntry("irregular-ref-b9", irr2, BranchStructure(((9, 1),)))
    )
    return entries
