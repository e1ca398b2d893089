"""Classical Lie algebra data on finite-dimensional modules.

Matrices are numpy object arrays of :class:`~fractions.Fraction`, so every
identity here is checked exactly.  Root vectors are obtained by moving
simple root vectors with triple exponentials: ``e_alpha = tau_w e_i tau_w^-1``
for the stored witness ``alpha = w(alpha_i)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cartan import CartanError, letter_root
from .cato import classical_limit

__all__ = [
    "ClassicalModule", "ClassicalAlgebra", "build_classical", "casimir_operator", "FlatnessReport",
    "flatness_check", "triple_exponential", "tau_of_braid", "tau_on_pure", "nilpotent_exp",
]


def _zeros(n):
    return np.array([[Fraction(0)] * n for _ in range(n)], dtype=object)


def _eye(n):
    out = _zeros(n)
    for k in range(n):
        out[k, k] = Fraction(1)
    return out


def _is_zero(m):
    return all(x == 0 for x in m.flat)


def nilpotent_exp(m, sign=1):
    """``exp(sign * m)`` for a nilpotent rational matrix, summed exactly."""
    n = m.shape[0]
    out = _eye(n)
    term = _eye(n)
    for k in range(1, n + 1):
        term = term.dot(m) * Fraction(sign, k)
        if _is_zero(term):
            return out
        out = out + term
    raise ValueError("matrix is not nilpotent")


def _inverse(m):
    from . import linalg
    return np.array(linalg.inverse(m.tolist(), Fraction(0), Fraction(1)), dtype=object)


class ClassicalModule:
    """Classical limit of a quantum module with dense rational generator matrices."""

    def __init__(self, quantum):
        mod = classical_limit(quantum) if quantum.ring != "rational" else quantum
        self.quantum = quantum
        self.module = mod
        self.rd = mod.rd
        self.dim = mod.dim
        n = mod.rd.n
        self.e = [self._embed(mod.E[i], i, -1) for i in range(n)]
        self.f = [self._embed(mod.F[i], i, 1) for i in range(n)]
        self.weights = []
        self.slices = {}
        for b in mod.keys:
            start = mod._offset[b]
            self.slices[b] = slice(start, start + mod.blocks[b])
            self.weights += [mod.weight(b)] * mod.blocks[b]

    def _embed(self, table, i, step):
        mod = self.module
        out = _zeros(mod.dim)
        for b, m in table.items():
            tgt = tuple(x + (step if k == i else 0) for k, x in enumerate(b))
            if tgt not in mod._offset:
                continue
            r0, c0 = mod._offset[tgt], mod._offset[b]
            for r, c, x in m.items():
                out[r0 + r, c0 + c] = Fraction(x)
        return out

    def cartan(self, x):
        """Diagonal action of ``x`` in ``h``."""
        out = _zeros(self.dim)
        for k, mu in enumerate(self.weights):
            out[k, k] = self.rd.real.pair(mu, x)
        return out

    def to_complex(self, m):
        return np.array(m, dtype=complex)


def triple_exponential(V, i, inverse=False):
    """``tau_i = exp(e_i) exp(-f_i) exp(e_i)`` (or its inverse) on a classical module."""
    if inverse:
        return nilpotent_exp(V.e[i], -1).dot(nilpotent_exp(V.f[i], 1)).dot(nilpotent_exp(V.e[i], -1))
    return nilpotent_exp(V.e[i]).dot(nilpotent_exp(V.f[i], -1)).dot(nilpotent_exp(V.e[i]))


def tau_of_braid(V, braid_word):
    """Product of ``tau_i^(+-1)`` along a braid word ``[(i, +-1), ...]``."""
    out = _eye(V.dim)
    for i, s in braid_word:
        out = out.dot(triple_exponential(V, i, inverse=(s == -1)))
    return out


def tau_on_pure(V, p):
    """``tau`` on a pure braid word; asserted diagonal (it is the sign character)."""
    m = tau_of_braid(V, p.braid_word())
    off = [x for r in range(V.dim) for c in range(V.dim) if r != c for x in [m[r, c]] if x != 0]
    if off:
        raise ArithmeticError("tau of a pure braid is not diagonal")
    return m


@dataclass
class ClassicalAlgebra:
    rd: object
    modules: list
    root_vectors: dict           # (module index, root coeffs) -> (e_alpha, f_alpha)
    pairing: dict                # root coeffs -> c_alpha

    def e(self, V, alpha):
        return self.root_vectors[(self._index(V), tuple(alpha))][0]

    def f(self, V, alpha):
        return self.root_vectors[(self._index(V), tuple(alpha))][1]

    def _index(self, V):
        for k, m in enumerate(self.modules):
            if m is V:
                return k
        raise KeyError("module not registered with this algebra")


def build_classical(rd, modules):
    """Root vectors and pairing constants ``c_alpha`` on each registered module.

    ``c_alpha`` is read off from ``[e_alpha, f_alpha] = c_alpha t_alpha``;
    all modules must agree on it.
    """
    if rd.kind != "finite":
        raise CartanError("classical root vectors are built for finite type only")
    mods = [m if isinstance(m, ClassicalModule) else ClassicalModule(m) for m in modules]
    vectors, pairing = {}, {}
    for k, V in enumerate(mods):
        taus = {}
        for r in rd.positive_roots:
            w, i = r.witness
            if w not in taus:
                t = _eye(V.dim)
                for j in w:
                    t = t.dot(triple_exponential(V, j))
                taus[w] = (t, _inverse(t))
            t, tinv = taus[w]
            e = t.dot(V.e[i]).dot(tinv)
            f = t.dot(V.f[i]).dot(tinv)
            comm = e.dot(f) - f.dot(e)
            tt = V.cartan(r.t)
            c = _ratio(comm, tt)
            if c is None:
                raise ArithmeticError("[e_alpha, f_alpha] is not a multiple of t_alpha for %s" % r)
            if r.coeffs in pairing and c is not False and pairing[r.coeffs] != c:
                raise ArithmeticError("pairing constant of %s differs between modules" % r)
            if c is not False:
                pairing[r.coeffs] = c
            vectors[(k, r.coeffs)] = (e, f)
    return ClassicalAlgebra(rd, mods, vectors, pairing)


def _ratio(a, b):
    """``c`` with ``a = c b``; ``False`` when both vanish (no information)."""
    c = None
    for x, y in zip(a.flat, b.flat):
        if y == 0:
            if x != 0:
                return None
            continue
        if c is None:
            c = Fraction(x) / y
        elif Fraction(x) / y != c:
            return None
    return False if c is None else c


def casimir_operator(A, V, alpha):
    """Truncated Casimir ``K_alpha^+ = c_alpha^-1 f_alpha e_alpha`` (exact, weight zero)."""
    alpha = tuple(alpha)
    K = A.f(V, alpha).dot(A.e(V, alpha))
    if alpha not in A.pairing:
        # no registered module sees alpha; then f e vanishes too
        if not _is_zero(K):
            raise ArithmeticError("pairing constant of %s is undetermined" % (alpha,))
        return K
    K = K * (1 / A.pairing[alpha])
    for r in range(V.dim):
        for s in range(V.dim):
            if K[r, s] != 0 and V.weights[r] != V.weights[s]:
                raise ArithmeticError("K_alpha^+ moves weights")
    return K


@dataclass
class FlatnessReport:
    flat: bool
    residuals: list              # (subsystem roots, alpha, max |entry|)

    def to_json(self):
        return {"flat": self.flat, "residuals": [
            {"plane": [list(p) for p in plane], "root": list(a), "max_abs": str(m)}
            for plane, a, m in self.residuals]}


def flatness_check(A, V):
    """``[K_alpha^+, sum_{beta in Psi+} K_beta^+] = 0`` for every rank-2 plane ``Psi``."""
    Ks = {r.coeffs: casimir_operator(A, V, r.coeffs) for r in A.rd.positive_roots}
    out = []
    ok = True
    for plane in A.rd.rank2_subsystems():
        total = sum((Ks[r.coeffs] for r in plane), _zeros(V.dim))
        for r in plane:
            comm = Ks[r.coeffs].dot(total) - total.dot(Ks[r.coeffs])
            worst = max((abs(x) for x in comm.flat), default=Fraction(0))
            ok = ok and worst == 0
            out.append((tuple(p.coeffs for p in plane), r.coeffs, worst))
    return FlatnessReport(ok, out)


def t_operator(V, root):
    return V.cartan(root.t)


def letter_t(rd, letter):
    return rd.root(letter_root(rd, letter))
