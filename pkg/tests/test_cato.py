from fractions import Fraction
from itertools import product

import pytest

from qwmono.cartan import RootDatum
from qwmono.cato import (check_dual_basis, classical_limit, dump_module, fword_space, integrability_check,
                         irreducible, load_module, lowest_depth, shapovalov_dual, shapovalov_gram, symbolic_verma,
                         verma, weight_multiplicities)
from qwmono.modules import Operator
from qwmono.scalars import ONE, ScalarQ, q_factorial, q_integer


def partitions(rd, beta):
    """Kostant partition function by direct recursion over positive roots (independent oracle)."""
    roots = [r.coeffs for r in rd.positive_roots]

    def count(b, k):
        if all(x == 0 for x in b):
            return 1
        if k == len(roots):
            return 0
        total, r, cur = 0, roots[k], tuple(b)
        while all(x >= 0 for x in cur):
            total += count(cur, k + 1)
            cur = tuple(x - y for x, y in zip(cur, r))
        return total

    return count(tuple(beta), 0)


def kostant_multiplicity(rd, top, mu):
    """Weight multiplicity from Kostant's alternating sum over W (classical, independent of Q(v))."""
    real = rd.real
    rho = tuple(Fraction(1) for _ in range(rd.n))
    lam_rho = tuple(Fraction(a) + b for a, b in zip(top, rho))
    mu_rho = tuple(Fraction(a) + b for a, b in zip(mu, rho))
    elements, todo = {(): lam_rho}, [()]
    seen = {lam_rho}
    signs = {(): 1}
    while todo:
        w = todo.pop()
        for j in range(rd.n):
            img = real.reflect_weight(j, elements[w])
            if img not in seen:
                seen.add(img)
                elements[w + (j,)] = img
                signs[w + (j,)] = -signs[w]
                todo.append(w + (j,))
    rows = [[real.root_coords[j][k] for j in range(rd.n)] for k in range(real.dim)]
    from qwmono import linalg
    total = 0
    for w, img in elements.items():
        diff = [a - b for a, b in zip(img, mu_rho)]
        coeffs = linalg.solve(rows, diff, Fraction(0))
        if all(c.denominator == 1 and c >= 0 for c in coeffs):
            total += signs[w] * partitions(rd, tuple(int(c) for c in coeffs))
    return total


@pytest.mark.parametrize("tag", ["A2", "B2", "G2"])
def test_verma_blocks_are_kostant_partitions(tag):
    rd = RootDatum(tag)
    M = verma(rd, tuple(Fraction(3) for _ in range(rd.n)), 4)
    for beta in M.keys:
        assert M.blocks[beta] == partitions(rd, beta)


def test_a2_fword_pieces():
    space = fword_space(RootDatum("A2"))
    assert [len(space.piece(b)[0]) for b in [(1, 1), (2, 1), (2, 2), (3, 3)]] == [2, 2, 3, 4]


@pytest.mark.parametrize("lam,k", [(5, 1), (5, 2), (5, 3), (2, 3)])
def test_sl2_gram_closed_form(lam, k):
    # <F^k v, F^k v> = [k]! [lam][lam-1]...[lam-k+1]
    rd = RootDatum("A1")
    M = verma(rd, (Fraction(lam),), k)
    expect = q_factorial(k)
    for j in range(k):
        expect = expect * q_integer(lam - j)
    assert shapovalov_gram(M, (k,)) == [[expect]]


def test_symbolic_gram_degree_one():
    M = symbolic_verma(RootDatum("A1"), 2)
    (g,), = shapovalov_gram(M, (1,))
    # [lambda] with Y = v^lambda: (Y^2 - Y^-2)/(v^2 - v^-2)
    assert g == M.bracket((0,), 0)


@pytest.mark.parametrize("tag,top,dim", [
    ("A2", (1, 0), 3), ("A2", (1, 1), 8), ("A2", (0, 0), 1), ("A2", (2, 1), 15),
    ("B2", (1, 0), 4), ("B2", (0, 1), 5), ("B2", (1, 1), 16), ("G2", (0, 1), 7), ("A1xA1", (1, 1), 4),
])
def test_irreducible_dimensions_and_multiplicities(tag, top, dim):
    rd = RootDatum(tag)
    L = irreducible(rd, tuple(Fraction(x) for x in top))
    assert L.dim == dim
    for mu, m in weight_multiplicities(L).items():
        assert m == kostant_multiplicity(rd, top, mu)


@pytest.mark.parametrize("tag,top", [("A2", (1, 1)), ("B2", (1, 0)), ("G2", (0, 1))])
def test_generators_satisfy_commutation_on_l(tag, top):
    rd = RootDatum(tag)
    L = irreducible(rd, tuple(Fraction(x) for x in top))
    for i in range(rd.n):
        for j in range(rd.n):
            Ei, Fj = Operator.generator(L, "E", i), Operator.generator(L, "F", j)
            comm = Ei @ Fj - Fj @ Ei
            if i != j:
                assert comm.is_zero()
            else:
                diag = Operator.diagonal(L, {b: L.bracket(b, i) for b in L.keys})
                assert comm == diag


def test_lowest_depth():
    assert lowest_depth(RootDatum("A2"), (1, 1)) == (2, 2)
    assert lowest_depth(RootDatum("B2"), (1, 0)) == (2, 1)


def test_non_dominant_weight_rejected():
    with pytest.raises(ValueError):
        irreducible(RootDatum("A2"), (Fraction(-1), Fraction(0)))


def test_integrability_reports():
    rd = RootDatum("A2")
    rep = integrability_check(irreducible(rd, (Fraction(1), Fraction(0))))
    assert rep.integrable
    assert max(rep.nilpotency.values()) <= 2
    rep = integrability_check(verma(rd, (Fraction(1), Fraction(0)), 3))
    assert not rep.integrable and rep.witness is not None


def test_classical_limit_is_rational():
    L = irreducible(RootDatum("B2"), (Fraction(1), Fraction(0)))
    C = classical_limit(L)
    assert C.ring == "rational"
    assert C.blocks == L.blocks


def test_module_dump_roundtrip():
    L = irreducible(RootDatum("B2"), (Fraction(0), Fraction(1)))
    L2 = load_module(dump_module(L))
    assert L2.blocks == L.blocks
    for i in range(2):
        for kind in "EF":
            a = Operator.generator(L, kind, i).to_fractions()
            b = Operator.generator(L2, kind, i).to_fractions()
            assert a == b
    assert dump_module(L2) == dump_module(L)


@pytest.mark.parametrize("beta", [(1, 0), (1, 1), (2, 1)])
def test_dual_basis_small_heights(beta):
    M = symbolic_verma(RootDatum("A2"), 3)
    assert check_dual_basis(M, beta)


def test_degenerate_form_detected():
    M = verma(RootDatum("A1"), (Fraction(0),), 2)
    with pytest.raises(ZeroDivisionError):
        shapovalov_dual(M, (1,))
