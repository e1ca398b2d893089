from math import comb

import pytest
from hypothesis import given, strategies as st

from qwmono.cartan import RootDatum

from oracles import brute_force_mns
from qwmono.nested import (compatible, connected_subdiagrams, format_bracketing, from_bracketing, is_nested,
                           maximal_nested_sets, parse_bracketing, relative_mns, serialize_nested_set,
                           to_bracketing, type_a_diagram)


def catalan(n):
    return comb(2 * n, n) // (n + 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_type_a_counts_are_catalan(n):
    diagram = type_a_diagram(n)
    mns = maximal_nested_sets(diagram)
    assert len(mns) == catalan(n)
    assert len(set(mns)) == len(mns)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_type_a_matches_brute_force(n):
    diagram = type_a_diagram(n)
    ours = {frozenset(b for b in f if b) for f in maximal_nested_sets(diagram)}
    assert ours == brute_force_mns(diagram)


@pytest.mark.parametrize("tag", ["A1xA1", "B3", "D4"])
def test_other_diagrams_match_brute_force(tag):
    diagram = RootDatum(tag).gcm.diagram()
    ours = {frozenset(b for b in f if b) for f in maximal_nested_sets(diagram)}
    assert ours == brute_force_mns(diagram)


def test_every_mns_is_nested_and_full_size():
    diagram = type_a_diagram(4)
    for f in maximal_nested_sets(diagram):
        assert is_nested(diagram, f)
        assert len([b for b in f if b]) == 4


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_bracketing_bijection(n):
    diagram = type_a_diagram(n)
    seen = set()
    for f in maximal_nested_sets(diagram):
        tree = to_bracketing(diagram, f)
        text = format_bracketing(tree)
        assert parse_bracketing(text) == tree
        assert from_bracketing(tree) == f
        seen.add(text)
    assert len(seen) == catalan(n)


def test_a2_bracketings():
    diagram = type_a_diagram(2)
    texts = sorted(format_bracketing(to_bracketing(diagram, f)) for f in maximal_nested_sets(diagram))
    assert texts == ["((x1x2)x3)", "(x1(x2x3))"]


trees = st.recursive(st.just(None), lambda kids: st.tuples(kids, kids), max_leaves=7)


def _label(t, start=1):
    if t is None:
        return start, start + 1
    left, nxt = _label(t[0], start)
    right, nxt = _label(t[1], nxt)
    return (left, right), nxt


@given(trees)
def test_random_bracketing_roundtrip(shape):
    tree, nxt = _label(shape)
    n = nxt - 1
    if n < 2:
        return
    diagram = type_a_diagram(n - 1)
    fam = from_bracketing(tree)
    assert is_nested(diagram, fam)
    assert to_bracketing(diagram, fam) == tree
    assert parse_bracketing(format_bracketing(tree)) == tree


def test_relative_nested_sets():
    a3 = type_a_diagram(3)
    assert len(relative_mns(a3, {1, 2, 3}, set())) == 5
    assert len(relative_mns(a3, {1, 2, 3}, {2})) == 2
    assert len(relative_mns(a3, {1, 2, 3}, {1, 3})) == 1
    assert len(relative_mns(type_a_diagram(2), {1, 2}, {1})) == 1
    with pytest.raises(ValueError):
        relative_mns(a3, {1}, {2})


def test_compatibility_and_serialization():
    a3 = type_a_diagram(3)
    assert compatible(a3, frozenset({1}), frozenset({3}))
    assert not compatible(a3, frozenset({1}), frozenset({2}))
    assert len(connected_subdiagrams(a3)) == 6
    assert serialize_nested_set({frozenset(), frozenset({2, 1})}) == [[], [1, 2]]
