"""Weight-graded modules and block-sparse operators between their weight spaces.

Every module built here is generated by a highest weight vector, so a
weight space is addressed by its depth ``beta``: the tuple of simple-root
coefficients of ``top - weight``.  Generator matrices are stored per block:
``E[i][beta]`` maps block ``beta`` to ``beta - e_i`` and ``F[i][beta]`` maps
``beta`` to ``beta + e_i``.

Coefficients are :class:`ScalarQ` for numeric highest weights and
:class:`PolyLambda` when the highest weight is symbolic.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import linalg
from .linalg import SparseMatrix
from .scalars import ONE, ZERO, PolyLambda, ScalarQ, q_integer, q_power, specialize

__all__ = ["WeightModule", "Operator", "shift", "add_shift"]


def shift(beta, i, s):
    """``beta + s * e_i``."""
    return tuple(b + (s if k == i else 0) for k, b in enumerate(beta))


def add_shift(beta, gamma):
    return tuple(a + b for a, b in zip(beta, gamma))


class WeightModule:
    """A module graded by depth below a (numeric or symbolic) highest weight.

    ``top`` is the highest weight as values on the basis of ``h``, or
    ``None`` for a symbolic highest weight; ``labels[beta]`` names the basis
    vectors of each block.
    """

    def __init__(self, rd, top, blocks, labels, E, F, height_cutoff=None, integrable=False, name="",
                 ring="qv"):
        self.rd = rd
        self.ring = "poly" if top is None else ring
        self.real = rd.real
        self.top = None if top is None else tuple(Fraction(x) for x in top)
        self.blocks = dict(blocks)
        self.labels = labels
        self.E = E
        self.F = F
        self.height_cutoff = height_cutoff
        self.integrable = integrable
        self.name = name
        self.keys = sorted((b for b, d in self.blocks.items() if d), key=lambda b: (sum(b), tuple(-x for x in b)))
        self._offset = {}
        off = 0
        for b in self.keys:
            self._offset[b] = off
            off += self.blocks[b]
        self.dim = off
        self._by_weight = None

    @property
    def symbolic(self):
        return self.top is None

    @property
    def nvars(self):
        return self.real.dim

    # -- ring ---------------------------------------------------------------
    def scalar(self, x):
        """Coerce a ScalarQ into the coefficient ring of the module."""
        if self.symbolic:
            return PolyLambda.constant(self.nvars, x)
        if self.ring == "rational":
            return x.at_one() if isinstance(x, ScalarQ) else Fraction(x)
        return x

    @property
    def one(self):
        return self.scalar(ONE)

    @property
    def zero(self):
        return self.scalar(ZERO)

    # -- weights ------------------------------------------------------------
    def weight(self, beta):
        if self.symbolic:
            raise ValueError("symbolic module has no numeric weights")
        rc = self.real.root_coords
        return tuple(self.top[k] - sum((b * rc[j][k] for j, b in enumerate(beta)), Fraction(0))
                     for k in range(self.real.dim))

    def depth_pairing(self, beta, x):
        """``beta(x)`` for ``x`` in ``h``."""
        rc = self.real.root_coords
        return sum((b * self.real.pair(rc[j], x) for j, b in enumerate(beta)), Fraction(0))

    def coroot_value(self, beta, i):
        """``mu(h_i)`` for the weight ``mu`` of block ``beta`` (numeric modules)."""
        return self.weight(beta)[i]

    def key_of_weight(self, mu):
        if self._by_weight is None:
            self._by_weight = {self.weight(b): b for b in self.keys}
        return self._by_weight.get(tuple(Fraction(x) for x in mu))

    def reflect_key(self, beta, i):
        """Block of ``s_i(mu)``."""
        m = self.coroot_value(beta, i)
        if m.denominator != 1:
            raise ValueError("non-integral weight for a reflection")
        return shift(beta, i, int(m))

    def k_value(self, beta, mu):
        """Eigenvalue of ``K(mu)`` on block ``beta``: ``q**weight(mu)``."""
        low = self.depth_pairing(beta, mu)
        if self.symbolic:
            exps = []
            for m in mu:
                e = 2 * Fraction(m)
                if e.denominator != 1:
                    raise ValueError("K(%s) is not integral" % (mu,))
                exps.append(int(e))
            return PolyLambda.monomial(self.nvars, exps, q_power(-low))
        val = self.real.pair(self.top, mu) - low
        return q_power(val)

    def bracket(self, beta, i, shift_by=0):
        """``[mu(h_i) + shift_by]_i`` on block ``beta``."""
        d = self.rd.d[i]
        low = self.depth_pairing(beta, self.real.coroots[i]) - shift_by
        if self.symbolic:
            n = self.nvars
            up = [0] * n
            up[i] = 2 * d
            down = [0] * n
            down[i] = -2 * d
            num = PolyLambda(n, {tuple(up): q_power(-low, d), tuple(down): -q_power(low, d)})
            return num / (q_power(1, d) - q_power(-1, d))
        m = self.top[i] - low
        if m.denominator != 1:
            raise ValueError("non-integral weight pairing %s" % m)
        return q_integer(int(m), d)

    def height(self, beta):
        return sum(beta)

    def dim_of(self, beta):
        return self.blocks.get(beta, 0)

    # -- generators ---------------------------------------------------------
    def generator(self, kind, i, beta):
        """Matrix of ``E_i`` or ``F_i`` out of block ``beta`` (or None for zero)."""
        table = self.E if kind == "E" else self.F
        return table[i].get(beta)

    def target(self, kind, i, beta):
        return shift(beta, i, -1 if kind == "E" else 1)

    def basis_index(self, beta, k):
        return self._offset[beta] + k

    def weight_table(self):
        return [(b, self.blocks[b]) for b in self.keys]

    def __repr__(self):
        return "WeightModule(%s, dim=%d)" % (self.name or "?", self.dim)


class Operator:
    """Block-sparse linear map on a :class:`WeightModule`.

    ``blocks[(dst, src)]`` is a :class:`SparseMatrix` from block ``src`` to
    block ``dst``; absent blocks are zero.
    """

    def __init__(self, module, blocks=None):
        self.module = module
        self.blocks = {}
        for key, m in (blocks or {}).items():
            if not m.is_zero():
                self.blocks[key] = m

    @classmethod
    def identity(cls, module):
        one = module.one
        return cls(module, {(b, b): SparseMatrix.identity(module.blocks[b], one) for b in module.keys})

    @classmethod
    def zero(cls, module):
        return cls(module)

    @classmethod
    def diagonal(cls, module, values):
        """``values[beta]`` is a list of diagonal entries, or a scalar for the whole block."""
        out = {}
        for b in module.keys:
            if b not in values:
                continue
            val = values[b]
            entries = val if isinstance(val, (list, tuple)) else [val] * module.blocks[b]
            out[(b, b)] = SparseMatrix.diagonal(entries)
        return cls(module, out)

    @classmethod
    def generator(cls, module, kind, i):
        table = module.E if kind == "E" else module.F
        out = {}
        for src, m in table[i].items():
            dst = module.target(kind, i, src)
            if module.dim_of(dst):
                out[(dst, src)] = m
        return cls(module, out)

    def sources(self):
        return sorted({s for _, s in self.blocks})

    def __matmul__(self, other):
        by_dst = {}
        for (mid, src), m in other.blocks.items():
            by_dst.setdefault(mid, []).append((src, m))
        out = {}
        for (dst, mid), a in self.blocks.items():
            for src, b in by_dst.get(mid, ()):
                prod = a @ b
                key = (dst, src)
                out[key] = out[key] + prod if key in out else prod
        return Operator(self.module, out)

    def __add__(self, other):
        out = dict(self.blocks)
        for key, m in other.blocks.items():
            out[key] = out[key] + m if key in out else m
        return Operator(self.module, out)

    def __neg__(self):
        return Operator(self.module, {k: -m for k, m in self.blocks.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        return Operator(self.module, {k: m.scale(s) for k, m in self.blocks.items()})

    def map(self, func):
        return Operator(self.module, {k: m.map(func) for k, m in self.blocks.items()})

    def is_zero(self):
        return all(m.is_zero() for m in self.blocks.values())

    def __eq__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def restrict(self, sources):
        sources = set(sources)
        return Operator(self.module, {k: m for k, m in self.blocks.items() if k[1] in sources})

    def block(self, dst, src):
        m = self.blocks.get((dst, src))
        if m is None:
            return SparseMatrix(self.module.dim_of(dst), self.module.dim_of(src))
        return m

    def preserves_weights(self):
        return all(d == s for d, s in self.blocks)

    def is_diagonal(self):
        return all(d == s and all(set(col) <= {j} for j, col in enumerate(m.cols))
                   for (d, s), m in self.blocks.items())

    def inverse(self):
        """Blockwise inverse of an operator permuting weight spaces."""
        dsts = {}
        for d, s in self.blocks:
            if s in dsts:
                raise ValueError("operator is not a block permutation")
            dsts[s] = d
        if len(set(dsts.values())) != len(dsts) or set(dsts) != set(self.module.keys):
            raise ValueError("operator is not invertible blockwise")
        out = {}
        one, zero = self.module.one, self.module.zero
        for s, d in dsts.items():
            m = self.blocks[(d, s)]
            inv = linalg.inverse(m.to_dense(zero), zero, one)
            out[(s, d)] = SparseMatrix.from_dense(inv)
        return Operator(self.module, out)

    def apply(self, src, vec):
        """Apply to a vector ``vec`` (dict index -> coeff) in block ``src``; returns ``{dst: vec}``."""
        out = {}
        for (d, s), m in self.blocks.items():
            if s == src:
                w = m.apply(vec)
                if w:
                    out[d] = w
        return out

    def to_numpy(self, hbar=0.0):
        """Dense complex matrix in the module's global basis at ``v = exp(hbar/4)``."""
        mod = self.module
        out = np.zeros((mod.dim, mod.dim), dtype=complex)
        for (d, s), m in self.blocks.items():
            r0, c0 = mod._offset[d], mod._offset[s]
            for i, j, x in m.items():
                out[r0 + i, c0 + j] = specialize(x, hbar)
        return out

    def to_fractions(self):
        """Dense rational matrix at ``v = 1`` (the classical limit)."""
        mod = self.module
        out = [[Fraction(0)] * mod.dim for _ in range(mod.dim)]
        for (d, s), m in self.blocks.items():
            r0, c0 = mod._offset[d], mod._offset[s]
            for i, j, x in m.items():
                out[r0 + i][c0 + j] = x.at_one() if isinstance(x, ScalarQ) else Fraction(x)
        return out

    def entries(self):
        for (d, s), m in sorted(self.blocks.items()):
            for i, j, x in m.items():
                yield d, i, s, j, x

    def __repr__(self):
        return "Operator(%d blocks on %r)" % (len(self.blocks), self.module)
