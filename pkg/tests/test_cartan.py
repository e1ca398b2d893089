from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qwmono.cartan import (GCM, CartanError, PureBraidWord, PureLetter, RootDatum, WeylElement, cartan_matrix,
                           format_gcm, letter_root, parse_gcm, reduce_word, sign_character, symmetrize, validate_pure)

FINITE = ["A1", "A2", "B2", "G2", "A3", "B3", "C3", "A1xA1", "D4"]


def brute_roots(a):
    """Independent oracle: orbit of the simple roots under integer reflection matrices."""
    a = np.array(a)
    n = len(a)
    roots = {tuple(np.eye(n, dtype=int)[k]) for k in range(n)}
    todo = list(roots)
    while todo:
        r = np.array(todo.pop())
        for j in range(n):
            img = tuple(int(x) for x in _reflect(a, j, r))
            if img not in roots:
                roots.add(img)
                todo.append(img)
    return roots


def _reflect(a, j, r):
    # <alpha, alpha_j^vee> = sum_k r_k a_jk
    m = sum(int(r[k]) * int(a[j][k]) for k in range(len(a)))
    out = np.array(r, dtype=int).copy()
    out[j] -= m
    return out


def brute_weyl_order(a):
    a = np.array(a)
    n = len(a)
    gens = []
    for j in range(n):
        s = np.eye(n, dtype=int)
        for k in range(n):
            s[k] = _reflect(a, j, np.eye(n, dtype=int)[k])
        gens.append(s)
    seen = {np.eye(n, dtype=int).tobytes()}
    todo = [np.eye(n, dtype=int)]
    while todo:
        g = todo.pop()
        for s in gens:
            h = g @ s
            if h.tobytes() not in seen:
                seen.add(h.tobytes())
                todo.append(h)
    return len(seen)


@pytest.mark.parametrize("tag", FINITE)
def test_positive_roots_match_orbit(tag):
    rd = RootDatum(tag)
    orbit = brute_roots(rd.gcm.matrix)
    assert {r.coeffs for r in rd.positive_roots} == {r for r in orbit if all(x >= 0 for x in r)}
    assert len(orbit) == 2 * len(rd.positive_roots)


@pytest.mark.parametrize("tag,count", [("A2", 3), ("B2", 4), ("G2", 6), ("A3", 6), ("B3", 9), ("D4", 12)])
def test_positive_root_counts(tag, count):
    assert len(RootDatum(tag).positive_roots) == count


@pytest.mark.parametrize("tag", FINITE)
def test_witnesses_and_coroots(tag):
    rd = RootDatum(tag)
    real = rd.real
    for r in rd.positive_roots:
        w, i = r.witness
        assert WeylElement(real, w).act_root(tuple(int(k == i) for k in range(rd.n))) == r.coeffs
        assert real.pair(r.weight, r.coroot) == 2
        # t_alpha = nu^-1(alpha)
        assert real.nu(r.t) == tuple(Fraction(x) for x in r.weight)


def test_symmetrizers():
    assert symmetrize(cartan_matrix("B2")) == (1, 2)
    assert symmetrize(cartan_matrix("G2")) == (3, 1)
    assert RootDatum("B2").gcm.matrix == ((2, -2), (-1, 2))


@pytest.mark.parametrize("tag,order", [("A1xA1", 2), ("A2", 3), ("B2", 4), ("G2", 6)])
def test_braid_orders(tag, order):
    assert RootDatum(tag).braid_order(0, 1) == order


def test_affine_braid_order_infinite():
    assert GCM(cartan_matrix("A1~").matrix).braid_order(0, 1) is None
    with pytest.raises(CartanError):
        RootDatum("A1~")
    rd = RootDatum("A1~", height_cutoff=5)
    assert rd.kind == "affine"
    # real roots (n+1) a1 + n a2 and n a1 + (n+1) a2
    assert {r.coeffs for r in rd.positive_roots} == {(1, 0), (0, 1), (2, 1), (1, 2), (3, 2), (2, 3)}


@pytest.mark.parametrize("tag", ["A2", "B2", "G2", "A3"])
def test_weyl_group_order(tag):
    rd = RootDatum(tag)
    assert brute_weyl_order(rd.gcm.matrix) == {"A2": 6, "B2": 8, "G2": 12, "A3": 24}[tag]


def test_bad_matrices_rejected():
    with pytest.raises(CartanError):
        GCM([[2, 1], [-1, 2]])
    with pytest.raises(CartanError):
        GCM([[2, 0], [-1, 2]])
    with pytest.raises(CartanError):
        GCM([[1]])
    with pytest.raises(CartanError):
        cartan_matrix("Q7")


def test_gcm_text_roundtrip():
    a = cartan_matrix("G2")
    assert parse_gcm(format_gcm(a)).matrix == a.matrix


words = st.lists(st.integers(0, 1), max_size=12)


@given(st.sampled_from(["A2", "B2", "G2"]), words)
def test_reduced_words(tag, word):
    rd = RootDatum(tag)
    red = reduce_word(rd.gcm.matrix, word)
    assert WeylElement(rd.real, word, reduce=False) == WeylElement(rd.real, red, reduce=False)
    # length equals the number of positive roots sent negative
    inv = sum(1 for r in rd.positive_roots
              if all(x <= 0 for x in WeylElement(rd.real, red, reduce=False).inverse().act_root(r.coeffs)))
    assert len(red) == inv


@given(st.sampled_from(["A2", "B2", "G2"]), words, st.integers(0, 1), st.integers(0, 3))
def test_weyl_action_preserves_form(tag, word, k, m):
    rd = RootDatum(tag)
    w = WeylElement(rd.real, word)
    lam = tuple(Fraction(int(j == k) * m) for j in range(rd.n))
    mu = rd.real.fundamental_weight(1 - k)
    assert rd.real.form(w.act_weight(lam), w.act_weight(mu)) == rd.real.form(lam, mu)


def test_pure_words_and_sign_character():
    rd = RootDatum("A2")
    p = PureBraidWord([((0,), 1)])
    assert letter_root(rd, p.letters[0]) == (1, 1)
    assert p.braid_word() == [(0, 1), (1, 1), (1, 1), (0, -1)]
    assert (p * p.inverse()).braid_word()[-4:] == [(0, 1), (1, -1), (1, -1), (0, -1)]
    with pytest.raises(CartanError) as err:
        validate_pure(rd, PureBraidWord([((0,), 0)]))
    assert err.value.cycle == [0]
    # V_1 weights pair oddly with alpha_1^vee
    assert sign_character(rd, PureBraidWord([((), 0)]), (Fraction(1), Fraction(0))) == -1
    assert sign_character(rd, PureBraidWord([((), 0), ((), 0)]), (Fraction(1), Fraction(0))) == 1
    assert sign_character(rd, PureBraidWord([((0,), 1)]), (Fraction(1), Fraction(1))) == 1


def test_weyl_dimension():
    assert RootDatum("A2").weyl_dimension((1, 1)) == 8
    assert RootDatum("B2").weyl_dimension((1, 0)) == 4
    assert RootDatum("B2").weyl_dimension((0, 1)) == 5
    assert RootDatum("G2").weyl_dimension((0, 1)) == 7
    assert RootDatum("G2").weyl_dimension((1, 0)) == 14


def test_rank2_subsystems_of_a3():
    planes = RootDatum("A3").rank2_subsystems()
    sizes = sorted(len(p) for p in planes)
    # three A1xA1 planes and four A2 planes
    assert sizes == [2, 2, 2, 3, 3, 3, 3]
