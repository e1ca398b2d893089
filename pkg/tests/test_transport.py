import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qwmono.cartan import PureBraidWord, RootDatum
from qwmono.casimir import tau_of_braid
from qwmono.cato import irreducible
from qwmono.paths import (Arc, Line, LoopPath, coweight_matrix, generator_loop, lift_braid_word, purify,
                          root_functionals)
from qwmono.qweyl import pure_braid_action
from qwmono.transport import (THREADS_ENV, CasimirConnection, TransportError, abelian_cochain, abelian_transport,
                              coboundary_check, compare_spectra, equivariant_braid_action, parallel_transport,
                              pure_monodromy, random_path)

TOL = 1e-11


def L(tag, *top):
    return irreducible(RootDatum(tag), tuple(Fraction(x) for x in top))


def conn(tag, top, hbar=0.2):
    return CasimirConnection.build(RootDatum(tag), L(tag, *top), hbar)


P1 = PureBraidWord([((), 0)])


# -- geometry ---------------------------------------------------------------

def test_sl2_generator_loop_winds_positively():
    rd = RootDatum("A1")
    g, r = generator_loop(rd, 0)
    x0 = np.array([0.5 + 0j])             # alpha(x0) = 1
    assert np.allclose(g.start, x0) and np.allclose(g.end, -x0)
    alpha = root_functionals(rd)[0]
    assert g.log_changes(alpha) == pytest.approx(1j * math.pi)
    p = purify(rd, 0)
    assert p.is_closed()
    assert p.log_changes(alpha) == pytest.approx(2j * math.pi)


def test_a2_loop_clearance():
    rd = RootDatum("A2")
    g, r = generator_loop(rd, 0)
    funcs = root_functionals(rd)
    assert min(g.clearance(funcs)) > 0
    # along gamma_1 only alpha_1 winds
    changes = [g.log_changes(f) for f in funcs]
    assert changes[0].imag == pytest.approx(math.pi)
    assert all(abs(c.imag) < 1e-12 for c in changes[1:])


def test_arc_minimum_distance():
    f = np.array([1.0 + 0j])
    arc = Arc(np.array([0j]), np.array([1 + 0j]), 1.0, 0.0, math.pi)
    assert arc.min_abs(f) == pytest.approx(1.0)
    line = Line(np.array([-1 + 1j]), np.array([1 + 1j]))
    assert line.min_abs(f) == pytest.approx(1.0)


def test_groupoid_square_is_purified_loop():
    rd = RootDatum("A2")
    g = lift_braid_word(rd, [(0, 1), (0, 1)])
    p = purify(rd, 0)
    assert g.path.is_closed()
    for a, b in zip(g.path.segments, p.segments):
        assert np.allclose(a.start, b.start) and np.allclose(a.end, b.end)


def test_groupoid_inverse_closes():
    rd = RootDatum("A2")
    g = lift_braid_word(rd, [(0, 1), (1, -1), (1, 1), (0, -1)])
    assert g.path.is_closed()


def test_weyl_matrices_are_reflections():
    rd = RootDatum("B2")
    for i in range(2):
        s = coweight_matrix(rd, (i,))
        assert np.allclose(s @ s, np.eye(2))


# -- transport --------------------------------------------------------------

def test_zero_hbar_is_identity():
    c = conn("A2", (1, 1), 0.0)
    M = pure_monodromy(c, PureBraidWord([((0,), 1)]))
    assert np.array_equal(M, np.eye(8))


@pytest.mark.parametrize("hbar", [0.2, 0.3 + 0.2j])
def test_rank_one_closed_form(hbar):
    M = pure_monodromy(conn("A1", (1,), hbar), P1, TOL)
    assert np.max(np.abs(M - np.diag([1, cmath.exp(hbar)]))) < 1e-10


def test_back_and_forth_is_identity():
    c = conn("A2", (1, 1))
    rd = c.rd
    x0 = np.array([1 + 0j, 1 + 0j])
    seg = LoopPath([Line(x0, x0 + np.array([0.3 + 0.4j, -0.2 + 0.1j]))])
    there = parallel_transport(c, seg, 1e-10)
    back = parallel_transport(c, seg.reversed(), 1e-10)
    assert np.max(np.abs(back @ there - np.eye(8))) < 1e-9
    arc = LoopPath(generator_loop(rd, 0)[0].segments[1:2])
    M = parallel_transport(c, arc.then(arc.reversed()), 1e-10)
    assert np.max(np.abs(M - np.eye(8))) < 1e-9


def test_homotopy_invariance():
    c = conn("A2", (1, 1))
    p = PureBraidWord([((0,), 1)])
    a = pure_monodromy(c, p, 1e-10, radius=0.25)
    b = pure_monodromy(c, p, 1e-10, radius=0.1)
    assert np.max(np.abs(a - b)) < 1e-9


def test_monodromy_is_weight_zero():
    c = conn("A2", (1, 1))
    M = pure_monodromy(c, PureBraidWord([((0,), 1)]))
    mask = np.ones_like(M, dtype=bool)
    for sl in c.blocks:
        mask[sl, sl] = False
    assert not np.any(M[mask])


def test_path_through_wall_rejected():
    c = conn("A1", (1,))
    bad = LoopPath([Line(np.array([0.5 + 0j]), np.array([-0.5 + 0j]))])
    with pytest.raises(TransportError):
        parallel_transport(c, bad)


def test_threads_do_not_change_results(monkeypatch):
    c = conn("A2", (1, 1))
    p = PureBraidWord([((), 1)])
    a = pure_monodromy(c, p)
    monkeypatch.setenv(THREADS_ENV, "4")
    b = pure_monodromy(c, p)
    assert np.array_equal(a, b)


# -- abelian part ------------------------------------------------------------

def test_cochain_on_generator_loop():
    c = conn("A1", (2,), 0.2)
    g, _ = generator_loop(c.rd, 0)
    b = np.diag(abelian_cochain(c, g))
    for k, mu in enumerate(c.module.weights):
        assert b[k] == pytest.approx(cmath.exp(0.2 * float(mu[0]) / 4))


def test_cochain_on_pure_loop():
    c = conn("A1", (1,), 0.2)
    b = np.diag(abelian_cochain(c, purify(c.rd, 0)))
    for k, mu in enumerate(c.module.weights):
        assert b[k] == pytest.approx(cmath.exp(0.2 * float(mu[0]) / 2))


def test_contractible_loop_has_trivial_cochain():
    c = conn("A2", (1, 0))
    loop = random_path(c.rd, np.random.default_rng(3), scale=0.2)
    assert np.allclose(abelian_cochain(c, loop), np.eye(3))


@settings(max_examples=8)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([(0,), (1,)]))
def test_coboundary_identity(seed, w):
    c = conn("A2", (1, 1))
    rep = coboundary_check(c, w, random_path(c.rd, np.random.default_rng(seed)))
    assert rep.residual < 1e-8


# -- equivariant action -------------------------------------------------------

def test_equivariant_zero_hbar_is_tits():
    c = conn("A2", (1, 0), 0.0)
    word = [(0, 1), (1, -1)]
    tau = np.array(tau_of_braid(c.module, word), dtype=complex)
    assert np.allclose(equivariant_braid_action(c, word), tau, atol=0)


def test_equivariant_braid_relation_a2():
    c = conn("A2", (1, 0))
    a = equivariant_braid_action(c, [(0, 1), (1, 1), (0, 1)])
    b = equivariant_braid_action(c, [(1, 1), (0, 1), (1, 1)])
    assert np.max(np.abs(a - b)) < 1e-6


def test_equivariant_square_is_sign_times_monodromy():
    c = conn("A1", (1,))
    s = equivariant_braid_action(c, [(0, 1)])
    loop = purify(c.rd, 0)
    eps = np.diag([-1, -1])
    expect = eps @ parallel_transport(c, loop) @ abelian_transport(c, loop)
    assert np.max(np.abs(s @ s - expect)) < 1e-9


def test_equivariant_action_is_multiplicative():
    c = conn("B2", (1, 0))
    a = equivariant_braid_action(c, [(0, 1)])
    b = equivariant_braid_action(c, [(1, -1)])
    ab = equivariant_braid_action(c, [(0, 1), (1, -1)])
    assert np.max(np.abs(a @ b - ab)) < 1e-8


# -- spectra --------------------------------------------------------------------

def test_compare_rank_one_entrywise():
    mod = L("A1", 1)
    c = CasimirConnection.build(mod.rd, mod, 0.2)
    rep = compare_spectra(pure_monodromy(c, P1, TOL), pure_braid_action(mod, P1).normal, 0.2)
    assert rep.entrywise < 1e-10 and rep.max_mismatch < 1e-10


def test_compare_a2_blocks():
    mod = L("A2", 1, 1)
    c = CasimirConnection.build(mod.rd, mod, 0.2)
    for p in [P1, PureBraidWord([((0,), 1)])]:
        rep = compare_spectra(pure_monodromy(c, p), pure_braid_action(mod, p).normal, 0.2)
        assert rep.max_mismatch < 1e-6
        assert rep.entrywise is None


def test_compare_trivial_and_mismatch():
    mod = L("A2", 0, 0)
    c = CasimirConnection.build(mod.rd, mod, 0.2)
    rep = compare_spectra(pure_monodromy(c, P1), pure_braid_action(mod, P1).normal, 0.2)
    assert rep.max_mismatch == 0
    with pytest.raises(ValueError):
        compare_spectra(np.eye(2), pure_braid_action(mod, P1).normal, 0.2)
