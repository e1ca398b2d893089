"""Nested sets on diagrams and the type A bracketing bijection.

A diagram is a dict ``vertex -> set of neighbours``.  Subdiagrams are
frozensets of vertices (always full subgraphs).  A nested set is a frozenset
of subdiagrams and always contains the empty subdiagram.
"""

from __future__ import annotations

from itertools import product

__all__ = [
    "connected_components", "is_connected", "orthogonal", "compatible",
    "connected_subdiagrams", "is_nested", "maximal_nested_sets", "relative_mns",
    "type_a_diagram", "to_bracketing", "from_bracketing", "format_bracketing",
    "parse_bracketing", "serialize_nested_set",
]

EMPTY = frozenset()


def _restrict(diagram, vertices):
    return {v: diagram[v] & vertices for v in vertices}


def connected_components(diagram, vertices=None):
    vertices = frozenset(diagram) if vertices is None else frozenset(vertices)
    seen, comps = set(), []
    for s in sorted(vertices):
        if s in seen:
            continue
        comp, todo = {s}, [s]
        while todo:
            x = todo.pop()
            for y in diagram[x] & vertices:
                if y not in comp:
                    comp.add(y)
                    todo.append(y)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def is_connected(diagram, vertices):
    return len(connected_components(diagram, vertices)) == 1


def orthogonal(diagram, b1, b2):
    if b1 & b2:
        return False
    return not any(diagram[x] & b2 for x in b1)


def compatible(diagram, b1, b2):
    return b1 <= b2 or b2 <= b1 or orthogonal(diagram, b1, b2)


def connected_subdiagrams(diagram, vertices=None):
    """All nonempty connected subdiagrams, grown one neighbour at a time."""
    vertices = frozenset(diagram) if vertices is None else frozenset(vertices)
    found = set()
    layer = {frozenset([v]) for v in vertices}
    while layer:
        found |= layer
        nxt = set()
        for b in layer:
            for x in b:
                for y in diagram[x] & vertices:
                    if y not in b:
                        nxt.add(b | {y})
        layer = nxt - found
    return sorted(found, key=lambda b: (len(b), sorted(b)))


def is_nested(diagram, family, vertices=None):
    vertices = frozenset(diagram) if vertices is None else frozenset(vertices)
    fam = set(family)
    if EMPTY not in fam:
        return False
    for comp in connected_components(diagram, vertices):
        if comp not in fam:
            return False
    members = [b for b in fam if b]
    for b in members:
        if not b <= vertices or not is_connected(diagram, b):
            return False
    for i, b1 in enumerate(members):
        for b2 in members[i + 1:]:
            if not compatible(diagram, b1, b2):
                return False
    return True


def maximal_nested_sets(diagram, vertices=None):
    """All maximal nested sets on ``vertices`` (default: the whole diagram).

    Uses the recursive structure: below a connected subdiagram ``B`` the
    maximal elements of a maximal nested set are the components of
    ``B - {x}`` for a unique vertex ``x``.
    """
    vertices = frozenset(diagram) if vertices is None else frozenset(vertices)
    per_comp = [_mns_connected(diagram, c) for c in connected_components(diagram, vertices)]
    out = []
    for choice in product(*per_comp):
        fam = {EMPTY}
        for part in choice:
            fam |= part
        out.append(frozenset(fam))
    return out


def _mns_connected(diagram, comp):
    """Maximal nested sets on a connected subdiagram, without the empty set."""
    cache = {}

    def rec(b):
        if b in cache:
            return cache[b]
        res = []
        for x in sorted(b):
            rest = b - {x}
            subs = [rec(c) for c in connected_components(diagram, rest)]
            for choice in product(*subs):
                fam = {b}
                for part in choice:
                    fam |= part
                res.append(frozenset(fam))
        cache[b] = res
        return res

    return rec(frozenset(comp))


def relative_mns(diagram, b, b_prime):
    """Maximal nested sets on ``b`` relative to ``b_prime`` (``b_prime <= b``).

    Members are connected subdiagrams of ``b`` compatible with, but not
    properly contained in, each component of ``b_prime``; the components of
    ``b`` and ``b_prime`` are always included.
    """
    b, b_prime = frozenset(b), frozenset(b_prime)
    if not b_prime <= b:
        raise ValueError("relative nested sets need B' contained in B")
    comps_p = connected_components(diagram, b_prime)
    required = set(connected_components(diagram, b)) | set(comps_p) | {EMPTY}
    candidates = []
    for s in connected_subdiagrams(diagram, b):
        if s in required:
            continue
        if all(compatible(diagram, s, c) and not s < c for c in comps_p):
            if all(compatible(diagram, s, r) for r in required if r):
                candidates.append(s)
    out = []

    def extend(chosen, start):
        grew = False
        for k in range(len(candidates)):
            s = candidates[k]
            if s in chosen:
                continue
            if all(compatible(diagram, s, t) for t in chosen):
                grew = True
                if k >= start:
                    extend(chosen + [s], k + 1)
        if not grew:
            out.append(frozenset(required | set(chosen)))

    extend([], 0)
    return sorted(set(out), key=serialize_nested_set)


def serialize_nested_set(family):
    """Sorted list of sorted vertex lists (the empty subdiagram first)."""
    return sorted((sorted(b) for b in family), key=lambda b: (len(b), b))


# ---------------------------------------------------------------------------
# type A bracketings
# ---------------------------------------------------------------------------

def type_a_diagram(n_vertices):
    """Diagram of ``A_{n}`` on vertices ``1..n``."""
    return {i: {j for j in (i - 1, i + 1) if 1 <= j <= n_vertices} for i in range(1, n_vertices + 1)}


def _check_type_a(diagram):
    n = len(diagram)
    if diagram != type_a_diagram(n):
        raise ValueError("bracketings are only defined for the type A diagram on 1..n")
    return n


def to_bracketing(diagram, family):
    """Binary tree for a maximal nested set on ``A_{n-1}``.

    The subdiagram ``[i, j]`` becomes the bracket around ``x_i ... x_{j+1}``.
    Leaves are integers ``1..n``; internal nodes are pairs.
    """
    n = _check_type_a(diagram) + 1
    ranges = set()
    for b in family:
        if b:
            ranges.add((min(b), max(b) + 1))
    if len(ranges) != n - 1:
        raise ValueError("family is not a maximal nested set")

    def build(lo, hi):
        if lo == hi:
            return lo
        # the left child is the largest bracket starting at lo and ending before hi
        for mid in range(hi - 1, lo - 1, -1):
            left_ok = mid == lo or (lo, mid) in ranges
            right_ok = mid + 1 == hi or (mid + 1, hi) in ranges
            if left_ok and right_ok:
                return (build(lo, mid), build(mid + 1, hi))
        raise ValueError("family is not a complete bracketing")

    return build(1, n)


def from_bracketing(tree):
    """Inverse of :func:`to_bracketing`."""
    fam = {EMPTY}

    def walk(t):
        if isinstance(t, int):
            return t, t
        lo, _ = walk(t[0])
        _, hi = walk(t[1])
        fam.add(frozenset(range(lo, hi)))
        return lo, hi

    walk(tree)
    return frozenset(fam)


def format_bracketing(tree):
    if isinstance(tree, int):
        return "x%d" % tree
    return "(%s%s)" % (format_bracketing(tree[0]), format_bracketing(tree[1]))


def parse_bracketing(text):
    pos = 0

    def parse():
        nonlocal pos
        if text[pos] == "(":
            pos += 1
            left = parse()
            right = parse()
            if text[pos] != ")":
                raise ValueError("expected ')' at %d" % pos)
            pos += 1
            return (left, right)
        if text[pos] == "x":
            pos += 1
            start = pos
            while pos < len(text) and text[pos].isdigit():
                pos += 1
            return int(text[start:pos])
        raise ValueError("unexpected %r at %d" % (text[pos], pos))

    tree = parse()
    if pos != len(text):
        raise ValueError("trailing characters in bracketing")
    return tree
