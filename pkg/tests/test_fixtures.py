"""Fixture corpus: recorded flags and seeded generators."""
from __future__ import annotations

import pytest

from posetfree.fixtures import (
    FIXTURES,
    fixture,
    fixture_names,
    random_graded_tree_poset,
    random_tree_poset,
)
from posetfree.poset import height, is_graded, is_tree_poset


def test_names_complete():
    assert set(fixture_names()) == {
        "chain1", "chain2", "chain3", "chain4", "chain5",
        "v", "lambda", "n", "path4", "x", "butterfly",
    }


def test_recorded_flags_match_computed():
    for name, entry in FIXTURES.items():
        p = fixture(name)
        assert (is_tree_poset(p), is_graded(p), height(p)) == (
            entry.tree, entry.graded, entry.height
        ), name


def test_unknown_fixture():
    with pytest.raises(KeyError):
        fixture("nope")


def test_random_tree_poset_deterministic():
    a = random_tree_poset(7, 123)
    b = random_tree_poset(7, 123)
    c = random_tree_poset(7, 124)
    assert a == b
    assert is_tree_poset(a)
    assert a != c  # different seed, different draw (for these values)


def test_random_graded_tree_poset():
    for m in range(1, 11):
        p = random_graded_tree_poset(m, 1000 + m)
        assert p.m == m and is_tree_poset(p) and is_graded(p)
