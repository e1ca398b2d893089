"""Generalized Cartan matrices, realizations, real roots and Weyl words.

Conventions
-----------
``a[i][j] = alpha_j(h_i)`` where ``h_i`` is the i-th simple coroot.  The
Cartan subalgebra ``h`` has basis ``h_1..h_n`` followed by ``2n - rank(A) - n``
derivations.  Weights are stored as their values on this basis; for finite
type these are the Dynkin labels.  Elements of ``h`` are coordinate vectors
in the same basis.  Roots are additionally stored by their coefficients in
the simple-root basis (``root-lattice coordinates``).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
import re

import numpy as np

from . import linalg

__all__ = [
    "CartanError", "GCM", "cartan_matrix", "parse_gcm", "format_gcm", "symmetrize",
    "Realization", "RootDatum", "Root", "WeylElement",
    "PureLetter", "PureBraidWord", "validate_pure", "sign_character",
]


class CartanError(ValueError):
    """Invalid Cartan data.  ``cycle`` names the offending indices when known."""

    def __init__(self, message, cycle=None):
        super().__init__(message)
        self.cycle = cycle


@dataclass(frozen=True)
class GCM:
    matrix: tuple
    labels: tuple = None

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        n = len(m)
        if n == 0 or n > 8:
            raise CartanError("rank must be between 1 and 8, got %d" % n)
        if any(len(row) != n for row in m):
            raise CartanError("GCM must be square")
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(str(k + 1) for k in range(n)))
        for i in range(n):
            if m[i][i] != 2:
                raise CartanError("diagonal entry a[%d][%d] = %d != 2" % (i, i, m[i][i]))
            for j in range(n):
                if i != j:
                    if m[i][j] > 0:
                        raise CartanError("positive off-diagonal entry a[%d][%d]" % (i, j))
                    if (m[i][j] == 0) != (m[j][i] == 0):
                        raise CartanError("a[%d][%d] = 0 but a[%d][%d] != 0" % (i, j, j, i))

    @property
    def n(self):
        return len(self.matrix)

    def __getitem__(self, ij):
        return self.matrix[ij[0]][ij[1]]

    def neighbours(self, i):
        return [j for j in range(self.n) if j != i and self.matrix[i][j] != 0]

    def components(self):
        seen, comps = set(), []
        for s in range(self.n):
            if s in seen:
                continue
            comp, todo = [], [s]
            seen.add(s)
            while todo:
                i = todo.pop()
                comp.append(i)
                for j in self.neighbours(i):
                    if j not in seen:
                        seen.add(j)
                        todo.append(j)
            comps.append(sorted(comp))
        return comps

    def braid_order(self, i, j):
        """Order ``m_ij`` of ``s_i s_j``; ``None`` stands for infinity."""
        if i == j:
            return 1
        p = self.matrix[i][j] * self.matrix[j][i]
        return {0: 2, 1: 3, 2: 4, 3: 6}.get(p)

    def diagram(self):
        """Underlying simple graph as a dict ``vertex -> set of neighbours``."""
        return {i: set(self.neighbours(i)) for i in range(self.n)}


def _chain(n, fill):
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        a[i][i + 1] = a[i + 1][i] = -1
    fill(a)
    return a


def _simple_type(letter, n, affine):
    if affine:
        if letter == "A":
            if n == 1:
                return [[2, -2], [-2, 2]]
            a = _chain(n + 1, lambda a: None)
            a[0][n] = a[n][0] = -1
            return a
        raise CartanError("affine type %s%d~ not tabulated; give the matrix" % (letter, n))
    if letter == "A":
        return _chain(n, lambda a: None)
    if letter == "B":
        def fill(a):
            if n > 1:
                a[0][1] = -2
        return _chain(n, fill)
    if letter == "C":
        def fill(a):
            if n > 1:
                a[1][0] = -2
        return _chain(n, fill)
    if letter == "D":
        if n < 4:
            raise CartanError("D_n needs n >= 4")
        a = _chain(n, lambda a: None)
        a[n - 2][n - 1] = a[n - 1][n - 2] = 0
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
        return a
    if letter == "G" and n == 2:
        return [[2, -1], [-3, 2]]
    if letter == "F" and n == 4:
        return [[2, -1, 0, 0], [-1, 2, -2, 0], [0, -1, 2, -1], [0, 0, -1, 2]]
    if letter == "E" and n in (6, 7, 8):
        a = _chain(n - 1, lambda a: None)
        a = [row + [0] for row in a] + [[0] * n]
        a[n - 1][n - 1] = 2
        a[2][n - 1] = a[n - 1][2] = -1
        return a
    raise CartanError("unknown Cartan type %s%d" % (letter, n))


def cartan_matrix(tag):
    """GCM for a type tag such as ``"A2"``, ``"B2"``, ``"G2"``, ``"A1xA1"`` or ``"A1~"``.

    In ``B_n`` the short simple root is node 1, so ``B2`` is
    ``[[2,-2],[-1,2]]`` with symmetrizer ``(1, 2)``.
    """
    blocks = []
    for part in tag.replace(" ", "").split("x"):
        m = re.fullmatch(r"([A-G])(\d+)(~?)", part)
        if not m:
            raise CartanError("cannot parse Cartan type %r" % tag)
        blocks.append(_simple_type(m.group(1), int(m.group(2)), bool(m.group(3))))
    n = sum(len(b) for b in blocks)
    a = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                a[off + i][off + j] = x
        off += len(b)
    return GCM(a)


def parse_gcm(text):
    """Read the text form: optional ``index:`` line, then one matrix row per line."""
    labels, rows = None, []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("index"):
            labels = tuple(line.split(":", 1)[1].split())
            continue
        rows.append([int(x) for x in line.replace(",", " ").split()])
    if labels is not None and len(labels) != len(rows):
        raise CartanError("index list has %d entries for %d rows" % (len(labels), len(rows)))
    return GCM(rows, labels)


def format_gcm(a):
    lines = ["index: " + " ".join(a.labels)]
    lines += [" ".join("%d" % x for x in row) for row in a.matrix]
    return "\n".join(lines) + "\n"


def symmetrize(a):
    """Positive coprime ``d`` with ``d_i a_ij = d_j a_ji``.

    Each connected component is normalised separately to coprime integers.
    Raises :class:`CartanError` with the violating cycle if none exists.
    """
    if not isinstance(a, GCM):
        a = GCM(a)
    n = a.n
    d = [None] * n
    parent = [None] * n
    for comp in a.components():
        root = comp[0]
        d[root] = Fraction(1)
        todo = deque([root])
        while todo:
            i = todo.popleft()
            for j in a.neighbours(i):
                want = d[i] * a[i, j] / a[j, i]
                if d[j] is None:
                    d[j] = want
                    parent[j] = i
                    todo.append(j)
                elif d[j] != want:
                    raise CartanError("GCM is not symmetrizable", cycle=_cycle(parent, i, j))
        denom = 1
        for k in comp:
            denom = denom * d[k].denominator // gcd(denom, d[k].denominator)
        ints = [int(d[k] * denom) for k in comp]
        g = 0
        for x in ints:
            g = gcd(g, x)
        for k, x in zip(comp, ints):
            d[k] = x // g
    return tuple(int(x) for x in d)


def _cycle(parent, i, j):
    def path(k):
        out = [k]
        while parent[k] is not None:
            k = parent[k]
            out.append(k)
        return out
    pi, pj = path(i), path(j)
    common = next(k for k in pi if k in pj)
    return pi[:pi.index(common) + 1] + pj[:pj.index(common)][::-1]


# ---------------------------------------------------------------------------
# realization
# ---------------------------------------------------------------------------

class Realization:
    """``(h, Pi, Pi^vee)`` together with the invariant form and ``nu``.

    Finite type gets the minimal realization ``h = span(h_i)``; otherwise
    ``h`` is extended by ``n - rank(A)`` derivations ``dd_k`` with
    ``alpha_j(dd_k)`` a unit vector, and ``<dd_k, dd_l> = 0``.
    """

    def __init__(self, a, d=None):
        self.gcm = a if isinstance(a, GCM) else GCM(a)
        self.d = tuple(d) if d is not None else symmetrize(self.gcm)
        n = self.gcm.n
        A = [[Fraction(x) for x in row] for row in self.gcm.matrix]
        # root coordinates: roots[j][k] = alpha_j(basis_k)
        roots = [[A[i][j] for i in range(n)] for j in range(n)]
        def coords(ex):
            return [roots[jj] + [Fraction(int(jj == k)) for k in ex] for jj in range(n)]

        extra = []
        for j in range(n):
            if linalg.rank(coords(extra)) == n:
                break
            if linalg.rank(coords(extra + [j])) > linalg.rank(coords(extra)):
                extra.append(j)
        self.extra = tuple(extra)
        self.dim = n + len(extra)
        self.root_coords = tuple(tuple(roots[j] + [Fraction(int(j == k)) for k in extra]) for j in range(n))
        # coroots as vectors in h
        self.coroots = tuple(tuple(Fraction(int(k == i)) for k in range(self.dim)) for i in range(n))
        # <h_i, x> = alpha_i(x) / d_i ;  <dd_k, dd_l> = 0
        G = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        for i in range(n):
            for k in range(self.dim):
                G[i][k] = self.root_coords[i][k] / self.d[i]
                G[k][i] = G[i][k]
        self.gram = tuple(tuple(r) for r in G)
        self.gram_inv = tuple(tuple(r) for r in linalg.inverse(G, Fraction(0), Fraction(1)))

    @property
    def n(self):
        return self.gcm.n

    def pair(self, weight, x):
        """``weight(x)`` for a weight and an element of ``h``."""
        return sum((Fraction(a) * b for a, b in zip(weight, x)), Fraction(0))

    def form_h(self, x, y):
        return sum((x[i] * self.gram[i][j] * y[j] for i in range(self.dim) for j in range(self.dim)),
                   Fraction(0))

    def form(self, lam, mu):
        """Induced invariant form on ``h*``."""
        gi = self.gram_inv
        return sum((Fraction(lam[i]) * gi[i][j] * Fraction(mu[j])
                    for i in range(self.dim) for j in range(self.dim)), Fraction(0))

    def nu(self, x):
        return tuple(sum((self.gram[i][j] * x[j] for j in range(self.dim)), Fraction(0)) for i in range(self.dim))

    def nu_inv(self, lam):
        gi = self.gram_inv
        return tuple(sum((gi[i][j] * Fraction(lam[j]) for j in range(self.dim)), Fraction(0))
                     for i in range(self.dim))

    def root_vector(self, coeffs):
        """``sum c_j alpha_j`` as a weight."""
        return tuple(sum((Fraction(c) * self.root_coords[j][k] for j, c in enumerate(coeffs)), Fraction(0))
                     for k in range(self.dim))

    def reflect_weight(self, i, lam):
        m = Fraction(lam[i])
        return tuple(Fraction(x) - m * a for x, a in zip(lam, self.root_coords[i]))

    def reflect_coweight(self, i, x):
        m = self.pair(self.root_coords[i], x)
        return tuple(Fraction(y) - (m if k == i else 0) for k, y in enumerate(x))

    def fundamental_weight(self, i):
        return tuple(Fraction(int(k == i)) for k in range(self.dim))

    def rho_check(self):
        """Element of ``h`` on which every simple root takes the value 1."""
        return tuple(_particular_solution([list(r) for r in self.root_coords], [Fraction(1)] * self.n))


def _particular_solution(rows, rhs):
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, pivots = linalg.rref(aug)
    x = [Fraction(0)] * ncols
    for row, p in zip(R, pivots):
        if p == ncols:
            raise ValueError("inconsistent system")
        x[p] = row[ncols]
    return x


# ---------------------------------------------------------------------------
# Weyl group
# ---------------------------------------------------------------------------

def _root_reflect(a, j, coeffs):
    """``s_j`` on root-lattice coordinates."""
    m = sum(c * a[j][k] for k, c in enumerate(coeffs))
    out = list(coeffs)
    out[j] -= m
    return tuple(out)


def _is_positive(coeffs):
    return any(c > 0 for c in coeffs) and all(c >= 0 for c in coeffs)


def _is_negative(coeffs):
    return _is_positive(tuple(-c for c in coeffs))


def apply_word_to_root(a, word, coeffs):
    """``s_{w1} ... s_{wk}`` (rightmost first) on root-lattice coordinates."""
    for j in reversed(word):
        coeffs = _root_reflect(a, j, coeffs)
    return coeffs


def reduce_word(a, word):
    """A reduced word for the same Weyl group element (deletion property)."""
    word = list(word)
    while True:
        bad = None
        for q in range(len(word)):
            beta = apply_word_to_root(a, word[:q], tuple(int(k == word[q]) for k in range(len(a))))
            if _is_negative(beta):
                bad = q
                break
        if bad is None:
            return tuple(word)
        q = bad
        gamma = tuple(int(k == word[q]) for k in range(len(a)))
        p = None
        for r in range(q - 1, -1, -1):
            nxt = _root_reflect(a, word[r], gamma)
            if _is_negative(nxt):
                p = r
                break
            gamma = nxt
        del word[q]
        del word[p]


class WeylElement:
    """Weyl group element stored by a reduced word ``s_{w[0]} s_{w[1]} ...``."""

    def __init__(self, realization, word=(), reduce=True):
        self.real = realization
        a = realization.gcm.matrix
        self.word = reduce_word(a, word) if reduce else tuple(word)

    @cached_property
    def matrix(self):
        """Action on weights: column k is the image of the k-th coordinate vector."""
        dim = self.real.dim
        cols = []
        for k in range(dim):
            e = tuple(Fraction(int(t == k)) for t in range(dim))
            cols.append(self.act_weight(e))
        return tuple(tuple(cols[k][t] for k in range(dim)) for t in range(dim))

    def act_weight(self, lam):
        for j in reversed(self.word):
            lam = self.real.reflect_weight(j, lam)
        return tuple(Fraction(x) for x in lam)

    def act_coweight(self, x):
        for j in reversed(self.word):
            x = self.real.reflect_coweight(j, x)
        return tuple(Fraction(y) for y in x)

    def act_root(self, coeffs):
        return apply_word_to_root(self.real.gcm.matrix, self.word, tuple(coeffs))

    def __mul__(self, other):
        return WeylElement(self.real, self.word + other.word)

    def inverse(self):
        return WeylElement(self.real, self.word[::-1], reduce=False)

    def __len__(self):
        return len(self.word)

    def is_reduced(self):
        return reduce_word(self.real.gcm.matrix, self.word) == self.word

    def __eq__(self, other):
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return "WeylElement(%s)" % (" ".join("s%d" % (j + 1) for j in self.word) or "e")


# ---------------------------------------------------------------------------
# root datum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Root:
    coeffs: tuple          # simple-root coefficients
    weight: tuple          # as an element of h*
    height: int
    d: int                 # <alpha, alpha> / 2
    coroot: tuple          # h_alpha in h
    t: tuple               # nu^{-1}(alpha) = d * h_alpha
    witness: tuple         # (reduced word of w, i) with w(alpha_i) = alpha

    def __str__(self):
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                terms.append(("" if c == 1 else "%d" % c) + "a%d" % (j + 1))
        return "+".join(terms)


class RootDatum:
    """Realization plus positive real roots up to a height cutoff."""

    def __init__(self, a, height_cutoff=None):
        if isinstance(a, str):
            a = cartan_matrix(a)
        self.gcm = a if isinstance(a, GCM) else GCM(a)
        self.real = Realization(self.gcm)
        self.kind = _classify(self.gcm, self.real.d)
        if height_cutoff is None and self.kind != "finite":
            raise CartanError("%s type needs an explicit height cutoff" % self.kind)
        self.height_cutoff = height_cutoff
        self.positive_roots = enumerate_positive_real_roots(self.real, height_cutoff)
        self._by_coeffs = {r.coeffs: r for r in self.positive_roots}

    @property
    def n(self):
        return self.gcm.n

    @property
    def d(self):
        return self.real.d

    def simple_root(self, i):
        return self._by_coeffs[tuple(int(k == i) for k in range(self.n))]

    def root(self, coeffs):
        return self._by_coeffs[tuple(coeffs)]

    def is_root(self, coeffs):
        return tuple(coeffs) in self._by_coeffs

    def weyl(self, word=()):
        return WeylElement(self.real, word)

    def braid_order(self, i, j):
        return self.gcm.braid_order(i, j)

    def highest_root(self):
        if self.kind != "finite":
            raise CartanError("highest root only defined for finite type")
        return max(self.positive_roots, key=lambda r: r.height)

    def weyl_dimension(self, lam):
        """Weyl dimension formula for a dominant integral weight (finite type)."""
        if self.kind != "finite":
            raise CartanError("Weyl dimension formula needs finite type")
        out = Fraction(1)
        for r in self.positive_roots:
            num = sum(Fraction(lam[k]) * r.coroot[k] for k in range(self.real.dim))
            rho = sum(r.coroot[k] for k in range(self.n))
            out *= (num + rho) / rho
        return int(out)

    def rank2_subsystems(self):
        """Positive roots of each rank-2 subsystem (roots in a common plane)."""
        roots = self.positive_roots
        seen, out = set(), []
        for i, r1 in enumerate(roots):
            for r2 in roots[i + 1:]:
                basis = np.array([r1.coeffs, r2.coeffs], dtype=float)
                members = []
                for r in roots:
                    m = np.vstack([basis, r.coeffs])
                    if np.linalg.matrix_rank(m) == 2:
                        members.append(r.coeffs)
                key = frozenset(members)
                if key not in seen:
                    seen.add(key)
                    out.append([self._by_coeffs[c] for c in sorted(members)])
        return out


def _classify(a, d):
    m = np.array(a.matrix, dtype=float) * np.array(d, dtype=float)[:, None]
    kinds = []
    for comp in a.components():
        sub = m[np.ix_(comp, comp)]
        ev = np.linalg.eigvalsh((sub + sub.T) / 2)
        if ev.min() > 1e-9:
            kinds.append("finite")
        elif ev.min() > -1e-9 and np.sum(np.abs(ev) < 1e-9) == 1:
            kinds.append("affine")
        else:
            kinds.append("indefinite")
    if all(k == "finite" for k in kinds):
        return "finite"
    if all(k in ("finite", "affine") for k in kinds):
        return "affine"
    return "indefinite"


def enumerate_positive_real_roots(real, height_cutoff=None):
    """Positive real roots of height at most ``height_cutoff``.

    Weyl-orbit closure of the simple roots, processed by increasing height so
    that every root is reached from a lower one.  ``None`` means no cutoff,
    which only terminates in finite type.
    """
    a = real.gcm.matrix
    n = real.n
    if height_cutoff is not None and height_cutoff < 1:
        raise CartanError("height cutoff must be >= 1")
    if height_cutoff is None and _classify(real.gcm, real.d) != "finite":
        raise CartanError("infinite root system needs a height cutoff")
    found = {}
    layer = []
    for i in range(n):
        c = tuple(int(k == i) for k in range(n))
        found[c] = ((), i)
        layer.append(c)
    h = 1
    while layer:
        nxt = []
        for c in layer:
            for j in range(n):
                c2 = _root_reflect(a, j, c)
                if not _is_positive(c2) or c2 in found:
                    continue
                ht = sum(c2)
                if ht <= sum(c) or (height_cutoff is not None and ht > height_cutoff):
                    continue
                w, i = found[c]
                found[c2] = ((j,) + w, i)
                nxt.append(c2)
        h += 1
        layer = sorted(set(nxt), key=lambda c: (sum(c), c))
        if height_cutoff is None and len(found) > 10000:
            raise CartanError("root enumeration did not terminate")
    out = []
    for c in sorted(found, key=lambda c: (sum(c), tuple(-x for x in c))):
        w, i = found[c]
        w = reduce_word(a, w)
        elt = WeylElement(real, w, reduce=False)
        h_i = real.coroots[i]
        coroot = elt.act_coweight(h_i)
        di = real.d[i]
        out.append(Root(coeffs=c, weight=real.root_vector(c), height=sum(c), d=di, coroot=coroot,
                        t=tuple(di * x for x in coroot), witness=(w, i)))
    return out


# ---------------------------------------------------------------------------
# pure braid words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PureLetter:
    """``(S_w S_i^2 S_w^{-1})^e`` with ``w`` a reduced word."""
    w: tuple
    i: int
    e: int = 1

    def braid_word(self):
        """Expansion as a braid word of ``(generator, +-1)`` pairs, leftmost first."""
        core = [(j, 1) for j in self.w] + [(self.i, 1), (self.i, 1)] + [(j, -1) for j in reversed(self.w)]
        if self.e == 1:
            return core
        return [(j, -s) for j, s in reversed(core)]


@dataclass(frozen=True)
class PureBraidWord:
    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(
            l if isinstance(l, PureLetter) else PureLetter(tuple(l[0]), l[1], l[2] if len(l) > 2 else 1)
            for l in self.letters))

    def __mul__(self, other):
        return PureBraidWord(self.letters + other.letters)

    def inverse(self):
        return PureBraidWord(tuple(PureLetter(l.w, l.i, -l.e) for l in reversed(self.letters)))

    def braid_word(self):
        out = []
        for l in self.letters:
            out += l.braid_word()
        return out

    def __len__(self):
        return len(self.letters)


def letter_root(rd, letter):
    """Root-lattice coordinates of ``w(alpha_i)``."""
    c = tuple(int(k == letter.i) for k in range(rd.n))
    return apply_word_to_root(rd.gcm.matrix, letter.w, c)


def validate_pure(rd, p):
    """Check ``w(alpha_i) > 0`` for every letter; return the roots reached."""
    out = []
    for k, letter in enumerate(p.letters):
        if letter.e not in (1, -1):
            raise CartanError("letter %d has exponent %r" % (k, letter.e))
        beta = letter_root(rd, letter)
        if not _is_positive(beta):
            raise CartanError("letter %d: w(alpha_%d) = %s is not a positive root" % (k, letter.i + 1, beta),
                              cycle=[k])
        out.append(beta)
    return out


def letter_coroot(rd, letter):
    elt = WeylElement(rd.real, letter.w, reduce=False)
    return elt.act_coweight(rd.real.coroots[letter.i])


def sign_character(rd, p, mu):
    """``(-1)**sum(e * mu(h_{w(alpha_i)}))`` over the letters of ``p``."""
    validate_pure(rd, p)
    total = 0
    for letter in p.letters:
        m = rd.real.pair(mu, letter_coroot(rd, letter))
        if m.denominator != 1:
            raise CartanError("weight pairs non-integrally (%s) with a coroot" % m)
        total += letter.e * int(m)
    return -1 if total % 2 else 1
