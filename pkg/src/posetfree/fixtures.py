"""Named poset fixtures and seeded random tree-poset generators.

The named corpus covers the shapes exercised throughout the test-suite:
chains of height 1..5, the V (one bottom, two tops), its dual lambda, the
four-element zigzags N and path4, the X (two bottoms, one middle, two
tops), and the butterfly (the one non-tree shape: two bottoms each below
two tops).  Each entry records the tree/graded flags and the height it is
expected to have; the flags are validated against the computed values in
the tests.

Random generators draw from a counter-based RNG so a seed fully determines
the output: trees come from a random-attachment process with uniformly
oriented edges (any orientation of a tree is automatically a transitively
reduced DAG).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .poset import Poset, validate_poset


@dataclass(frozen=True)
class FixtureEntry:
    name: str
    m: int
    covers: tuple[tuple[int, int], ...]
    tree: bool
    graded: bool
    height: int


def _chain_entry(k: int) -> FixtureEntry:
    covers = tuple((i, i + 1) for i in range(k - 1))
    return FixtureEntry(f"chain{k}", k, covers, tree=True, graded=True, height=k)


FIXTURES: dict[str, FixtureEntry] = {
    entry.name: entry
    for entry in [
        *(_chain_entry(k) for k in range(1, 6)),
        # one bottom below two tops
        FixtureEntry("v", 3, ((0, 1), (0, 2)), tree=True, graded=True, height=2),
        # two bottoms below one top
        FixtureEntry("lambda", 3, ((1, 0), (2, 0)), tree=True, graded=True, height=2),
        # zigzag: 0 < 1 > 2 < 3
        FixtureEntry("n", 4, ((0, 1), (2, 1), (2, 3)), tree=True, graded=True, height=2),
        # zigzag rooted at a top: 1 < 0 > 2 < 3
        FixtureEntry("path4", 4, ((1, 0), (2, 0), (2, 3)), tree=True, graded=True, height=2),
        # bottoms 0,1 below middle 2 below tops 3,4
        FixtureEntry(
            "x", 5, ((0, 2), (1, 2), (2, 3), (2, 4)), tree=True, graded=True, height=3
        ),
        # two bottoms each below two tops; the Hasse graph has a cycle
        FixtureEntry(
            "butterfly", 4, ((0, 2), (0, 3), (1, 2), (1, 3)),
            tree=False, graded=True, height=2,
        ),
    ]
}

TREE_FIXTURE_NAMES: tuple[str, ...] = tuple(
    name for name, entry in FIXTURES.items() if entry.tree
)


def fixture_names() -> list[str]:
    return sorted(FIXTURES)


def fixture(name: str) -> Poset:
    """Return the named fixture as a validated poset."""
    try:
        entry = FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {fixture_names()}") from None
    return validate_poset(entry.m, entry.covers)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _draw_tree_covers(m: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    covers = []
    for v in range(1, m):
        other = int(rng.integers(0, v))
        if int(rng.integers(0, 2)):
            covers.append((other, v))  # v covers other
        else:
            covers.append((v, other))
    return covers


def random_tree_poset(m: int, seed: int) -> Poset:
    """A seeded random tree poset on m elements (attachment tree, random edge
    orientations)."""
    if m < 1:
        raise ValueError("m must be positive")
    rng = _rng(seed)
    return validate_poset(m, _draw_tree_covers(m, rng))


def random_graded_tree_poset(m: int, seed: int, max_tries: int = 100_000) -> Poset:
    """A seeded random graded tree poset on m elements (rejection sampling)."""
    from .poset import is_graded  # local import keeps module load cheap

    if m < 1:
        raise ValueError("m must be positive")
    rng = _rng(seed)
    for _ in range(max_tries):
        poset = validate_poset(m, _draw_tree_covers(m, rng))
        if is_graded(poset):
            return poset
    raise RuntimeError(f"no graded tree poset found in {max_tries} draws (m={m})")
