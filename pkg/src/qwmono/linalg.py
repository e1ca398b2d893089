"""Exact sparse and dense linear algebra over Q(v), Q and coefficient rings.

Matrices are stored column-wise: column ``j`` is a dict ``{row: coeff}``
holding the image of the ``j``-th basis vector.  Entries may be
:class:`~qwmono.scalars.ScalarQ`, :class:`~fractions.Fraction`,
:class:`~qwmono.scalars.PolyLambda` or complex numbers; nothing here cares
as long as ``+``, ``*`` and ``== 0`` behave.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def is_zero(x):
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return x == 0


class SparseMatrix:
    """Column-sparse matrix."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows, ncols, cols=None):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = cols if cols is not None else [dict() for _ in range(ncols)]

    @classmethod
    def identity(cls, n, one=1):
        return cls(n, n, [{j: one} for j in range(n)])

    @classmethod
    def diagonal(cls, entries):
        n = len(entries)
        return cls(n, n, [{j: e} if not is_zero(e) else {} for j, e in enumerate(entries)])

    @classmethod
    def from_dense(cls, rows):
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        cols = [dict() for _ in range(ncols)]
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                if not is_zero(x):
                    cols[j][i] = x
        return cls(nrows, ncols, cols)

    def to_dense(self, zero=0):
        out = [[zero] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, x in col.items():
                out[i][j] = x
        return out

    def to_numpy(self, convert=complex):
        out = np.zeros((self.nrows, self.ncols), dtype=complex)
        for j, col in enumerate(self.cols):
            for i, x in col.items():
                out[i, j] = convert(x)
        return out

    def __getitem__(self, ij):
        i, j = ij
        return self.cols[j].get(i, 0)

    def items(self):
        for j, col in enumerate(self.cols):
            for i, x in col.items():
                yield i, j, x

    def apply(self, vec):
        """Apply to a sparse vector ``{index: coeff}``."""
        out = {}
        for j, c in vec.items():
            for i, x in self.cols[j].items():
                y = x * c
                if i in out:
                    s = out[i] + y
                    if is_zero(s):
                        del out[i]
                    else:
                        out[i] = s
                elif not is_zero(y):
                    out[i] = y
        return out

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch %dx%d @ %dx%d" % (self.nrows, self.ncols, other.nrows, other.ncols))
        return SparseMatrix(self.nrows, other.ncols, [self.apply(col) for col in other.cols])

    def __add__(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        cols = []
        for a, b in zip(self.cols, other.cols):
            c = dict(a)
            for i, x in b.items():
                if i in c:
                    s = c[i] + x
                    if is_zero(s):
                        del c[i]
                    else:
                        c[i] = s
                else:
                    c[i] = x
            cols.append(c)
        return SparseMatrix(self.nrows, self.ncols, cols)

    def __neg__(self):
        return SparseMatrix(self.nrows, self.ncols, [{i: -x for i, x in c.items()} for c in self.cols])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        cols = []
        for c in self.cols:
            d = {}
            for i, x in c.items():
                y = x * s
                if not is_zero(y):
                    d[i] = y
            cols.append(d)
        return SparseMatrix(self.nrows, self.ncols, cols)

    def map(self, func):
        cols = []
        for c in self.cols:
            d = {}
            for i, x in c.items():
                y = func(x)
                if not is_zero(y):
                    d[i] = y
            cols.append(d)
        return SparseMatrix(self.nrows, self.ncols, cols)

    def transpose(self):
        cols = [dict() for _ in range(self.nrows)]
        for i, j, x in self.items():
            cols[i][j] = x
        return SparseMatrix(self.ncols, self.nrows, cols)

    def submatrix(self, rows, cols):
        rpos = {r: k for k, r in enumerate(rows)}
        out = []
        for j in cols:
            out.append({rpos[i]: x for i, x in self.cols[j].items() if i in rpos})
        return SparseMatrix(len(rows), len(cols), out)

    def is_zero(self):
        return all(not c for c in self.cols)

    def nnz(self):
        return sum(len(c) for c in self.cols)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        return "SparseMatrix(%dx%d, nnz=%d)" % (self.nrows, self.ncols, self.nnz())


# ---------------------------------------------------------------------------
# dense routines over a field
# ---------------------------------------------------------------------------

def rref(rows, pivot_order=None):
    """Reduced row echelon form over a field.

    ``pivot_order`` lists the columns in the order in which pivots are
    sought; by default left to right.  Returns ``(R, pivots)`` where ``R``
    holds the nonzero rows and ``pivots[k]`` is the pivot column of row k.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    order = list(range(ncols)) if pivot_order is None else list(pivot_order)
    pivots = []
    r = 0
    for col in order:
        piv = None
        for k in range(r, len(rows)):
            if not is_zero(rows[k][col]):
                piv = k
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col] if not hasattr(rows[r][col], "inverse") else rows[r][col].inverse()
        rows[r] = [x * inv if not is_zero(x) else x for x in rows[r]]
        for k in range(len(rows)):
            if k != r and not is_zero(rows[k][col]):
                f = rows[k][col]
                rk, rr = rows[k], rows[r]
                rows[k] = [rk[t] - f * rr[t] if not is_zero(rr[t]) else rk[t] for t in range(ncols)]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(rows):
    return len(rref(rows)[1])


def nullspace(rows, ncols=None, zero=0, one=1):
    """Basis of the right kernel, as a list of dense column vectors."""
    if not rows:
        n = ncols or 0
        return [[one if k == j else zero for k in range(n)] for j in range(n)]
    ncols = len(rows[0])
    R, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [zero] * ncols
        vec[f] = one
        for row, p in zip(R, pivots):
            if not is_zero(row[f]):
                vec[p] = -row[f]
        basis.append(vec)
    return basis


def inverse(rows, zero=0, one=1):
    n = len(rows)
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(rows)]
    R, pivots = rref(aug, pivot_order=range(n))
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def solve(rows, rhs, zero=0):
    """Solve ``rows @ x = rhs`` (unique solution expected)."""
    n = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, pivots = rref(aug, pivot_order=range(n + 1))
    if n in pivots:
        raise ValueError("inconsistent linear system")
    if len(pivots) < n:
        raise ValueError("underdetermined linear system")
    x = [zero] * n
    for row, p in zip(R, pivots):
        x[p] = row[n]
    return x


def det(rows, zero=0, one=1):
    """Determinant by Laplace expansion with memoisation over column subsets.

    Division free, so it works over the ring of symbolic coefficients.
    """
    n = len(rows)
    if n == 0:
        return one
    memo = {}

    def minor(r, cols):
        if r == n:
            return one
        key = (r, cols)
        if key in memo:
            return memo[key]
        total = zero
        for k, c in enumerate(cols):
            a = rows[r][c]
            if is_zero(a):
                continue
            sub = minor(r + 1, cols[:k] + cols[k + 1:])
            if is_zero(sub):
                continue
            term = a * sub
            total = total + term if k % 2 == 0 else total - term
        memo[key] = total
        return total

    return minor(0, tuple(range(n)))


def adjugate(rows, zero=0, one=1):
    """Classical adjoint: ``adj(A) @ A = det(A) * I`` without division."""
    n = len(rows)
    adj = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub = [[rows[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            m = det(sub, zero, one)
            adj[j][i] = m if (i + j) % 2 == 0 else -m
    return adj


def matmul_dense(a, b, zero=0):
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    out = [[zero] * p for _ in range(n)]
    for i in range(n):
        for k in range(m):
            x = a[i][k]
            if is_zero(x):
                continue
            for j in range(p):
                y = b[k][j]
                if not is_zero(y):
                    out[i][j] = out[i][j] + x * y
    return out


def frac_matrix(rows):
    return [[Fraction(x) for x in r] for r in rows]


def independent_subset(vectors, zero=0):
    """Indices of a maximal linearly independent subset, greedily in order."""
    chosen = []
    basis_rows = []
    for k, vec in enumerate(vectors):
        trial = basis_rows + [list(vec)]
        if rank(trial) > len(basis_rows):
            chosen.append(k)
            basis_rows = trial
    return chosen


