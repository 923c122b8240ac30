"""Shared fixtures: the solved corpus is expensive, so build it once."""

from __future__ import annotations

import pytest

from blpack.corpus import corpus
from blpack.solver import normalize, pack

SOLVE_TOL = 1e-12


@pytest.fixture(scope="session")
def corpus_entries():
    return corpus()


@pytest.fixture(scope="session")
def corpus_packed(corpus_entries):
    """name -> (entry, packing) solved at the acceptance tolerance."""
    out = {}
    for entry in corpus_entries:
        out[entry.name] = (entry, pack(entry.tri, entry.branch, SOLVE_TOL))
    return out


@pytest.fixture(scope="session")
def univalent_by_complex(corpus_packed):
    """id(tri) -> univalent packing normalized at the first interior vertex."""
    out = {}
    for entry, p in corpus_packed.values():
        if not entry.branch.entries and entry.tri.interior:
            v0 = entry.tri.interior[0]
            out[id(entry.tri)] = normalize(p, v0, 1 if v0 != 1 else 0)
    return out


@pytest.fixture(scope="session")
def flower_packed(corpus_packed):
    return corpus_packed["ball1"][1]


@pytest.fixture(scope="session")
def branched_flower_packed(corpus_packed):
    return corpus_packed["ball1-b1"][1]
