"""Elements of U_q(g) as linear combinations of generator words.

A word is a tuple of symbols ``("E", i)``, ``("F", i)`` or ``("K", mu)``,
with ``mu`` an integral element of ``h`` (values on the basis of ``h``).
``K(mu)`` acts on a weight ``lambda`` space by ``q**lambda(mu)``, so the
usual ``K_i`` is ``K(d_i h_i)``.  Words act right to left, as products do.

There is no normal form: two elements are compared by acting on a
symbolic Verma module (:func:`equality_via_verma`).
"""

from __future__ import annotations

import re
from fractions import Fraction

from .cato import symbolic_verma
from .linalg import SparseMatrix
from .modules import Operator
from .scalars import ONE, ScalarQ, as_scalar, parse_scalar, q_binomial, q_factorial, q_power

__all__ = [
    "AlgebraElement", "E", "F", "K", "K_i", "scalar", "serre_defect", "defining_relations",
    "lusztig_T", "lusztig_T_element", "evaluate", "dip", "equality_via_verma", "parse_element",
    "divided_power",
]


def _norm_mu(mu):
    return tuple(Fraction(x) for x in mu)


def _normalize(word):
    """Merge adjacent K symbols and drop K(0)."""
    out = []
    for s in word:
        if s[0] == "K":
            if out and out[-1][0] == "K":
                mu = tuple(a + b for a, b in zip(out[-1][1], s[1]))
                out.pop()
            else:
                mu = s[1]
            if any(mu):
                out.append(("K", mu))
        else:
            out.append(s)
    return tuple(out)


class AlgebraElement:
    """Finite sum ``sum c_w * w`` over words ``w`` with :class:`ScalarQ` coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        for w, c in (terms or {}).items():
            w = _normalize(w)
            c = as_scalar(c)
            s = t[w] + c if w in t else c
            if s.is_zero():
                t.pop(w, None)
            else:
                t[w] = s
        self.terms = t

    def __add__(self, other):
        other = _coerce(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t[w] + c if w in t else c
        return AlgebraElement(t)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            t = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = _normalize(w1 + w2)
                    t[w] = t[w] + c1 * c2 if w in t else c1 * c2
            return AlgebraElement(t)
        s = as_scalar(other)
        if s is NotImplemented:
            return NotImplemented
        return AlgebraElement({w: c * s for w, c in self.terms.items()})

    def __rmul__(self, other):
        s = as_scalar(other)
        if s is NotImplemented:
            return NotImplemented
        return AlgebraElement({w: s * c for w, c in self.terms.items()})

    def __pow__(self, n):
        out = AlgebraElement({(): ONE})
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        """Syntactic equality of the stored sums (see :func:`equality_via_verma`)."""
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def words(self):
        return sorted(self.terms, key=_word_key)

    def to_text(self, dim=None):
        if not self.terms:
            return "0"
        return " + ".join("[%s] %s" % (self.terms[w], _format_word(w)) for w in self.words())

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return "AlgebraElement(%s)" % self.to_text()


def _coerce(x):
    if isinstance(x, AlgebraElement):
        return x
    return AlgebraElement({(): x})


def _word_key(w):
    return (len(w), [(s[0], s[1]) if s[0] != "K" else ("K", tuple(s[1])) for s in w])


def E(i):
    return AlgebraElement({(("E", i),): ONE})


def F(i):
    return AlgebraElement({(("F", i),): ONE})


def K(mu):
    return AlgebraElement({(("K", _norm_mu(mu)),): ONE})


def K_i(rd, i, power=1):
    """``K_i**power = K(power * d_i * h_i)``."""
    return K(tuple(power * rd.d[i] * x for x in rd.real.coroots[i]))


def scalar(c):
    return AlgebraElement({(): c})


def divided_power(x, n, d):
    return (x ** n) * q_factorial(n, d).inverse()


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------

def _format_mu(mu):
    parts = []
    for k, c in enumerate(mu):
        if not c:
            continue
        coeff = "" if c == 1 else "-" if c == -1 else str(c)
        parts.append("%s%s" % (coeff, "h%d" % (k + 1)))
    return "+".join(parts).replace("+-", "-")


def _format_word(w):
    if not w:
        return "1"
    out = []
    for s in w:
        if s[0] == "K":
            out.append("K(%s)" % _format_mu(s[1]))
        else:
            out.append("%s%d" % (s[0], s[1] + 1))
    return " ".join(out)


_MU_TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?h(\d+)")


def _parse_mu(text, dim):
    mu = [Fraction(0)] * dim
    pos = 0
    text = text.replace(" ", "")
    while pos < len(text):
        m = _MU_TERM.match(text, pos)
        if not m:
            raise ValueError("cannot parse K argument %r" % text)
        sign = -1 if m.group(1) == "-" else 1
        c = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        mu[int(m.group(3)) - 1] += sign * c
        pos = m.end()
    return tuple(mu)


def _split_terms(text):
    terms, depth, start = [], 0, 0
    for k, ch in enumerate(text):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "+" and depth == 0:
            terms.append(text[start:k])
            start = k + 1
    terms.append(text[start:])
    return [t.strip() for t in terms if t.strip()]


def parse_element(text, dim):
    """Inverse of :meth:`AlgebraElement.to_text`; ``dim`` is ``dim h``."""
    text = text.strip()
    if text == "0":
        return AlgebraElement()
    out = {}
    for term in _split_terms(text):
        m = re.match(r"^\[(.*)\]\s*(.*)$", term)
        if not m:
            raise ValueError("term %r lacks a [coefficient]" % term)
        coeff = parse_scalar(m.group(1))
        word = []
        for tok in re.findall(r"K\([^)]*\)|[EF]\d+|1", m.group(2)):
            if tok == "1":
                continue
            if tok[0] == "K":
                word.append(("K", _parse_mu(tok[2:-1], dim)))
            else:
                word.append((tok[0], int(tok[1:]) - 1))
        w = tuple(word)
        out[w] = out[w] + coeff if w in out else coeff
    return AlgebraElement(out)


# ---------------------------------------------------------------------------
# relations and braid automorphisms
# ---------------------------------------------------------------------------

def serre_defect(rd, i, j):
    """The quantum Serre elements in ``E`` and in ``F`` for the pair ``(i, j)``."""
    if i == j:
        raise ValueError("Serre relations need i != j")
    a = rd.gcm.matrix[i][j]
    n = 1 - a
    d = rd.d[i]
    out = []
    for X in (E, F):
        total = AlgebraElement()
        for m in range(n + 1):
            c = q_binomial(n, m, d)
            total = total + (X(i) ** (n - m) * X(j) * X(i) ** m) * (c if m % 2 == 0 else -c)
        out.append(total)
    return tuple(out)


def defining_relations(rd):
    """``[(name, element)]`` whose elements vanish in U_q(g)."""
    n, dim = rd.n, rd.real.dim
    rels = []
    for k in range(dim):
        e_k = tuple(Fraction(int(t == k)) for t in range(dim))
        minus = tuple(-x for x in e_k)
        for i in range(n):
            val = rd.real.root_coords[i][k]
            rels.append(("K(h%d)E%d" % (k + 1, i + 1), K(e_k) * E(i) * K(minus) - E(i) * q_power(val)))
            rels.append(("K(h%d)F%d" % (k + 1, i + 1), K(e_k) * F(i) * K(minus) - F(i) * q_power(-val)))
    for i in range(n):
        for j in range(n):
            rel = E(i) * F(j) - F(j) * E(i)
            if i == j:
                d = rd.d[i]
                rel = rel - (K_i(rd, i) - K_i(rd, i, -1)) * (q_power(1, d) - q_power(-1, d)).inverse()
            rels.append(("[E%d,F%d]" % (i + 1, j + 1), rel))
    for i in range(n):
        for j in range(n):
            if i != j:
                se, sf = serre_defect(rd, i, j)
                rels.append(("serreE(%d,%d)" % (i + 1, j + 1), se))
                rels.append(("serreF(%d,%d)" % (i + 1, j + 1), sf))
    return rels


def lusztig_T(rd, i, symbol):
    """Image of one generator symbol under the braid automorphism ``T_i``."""
    kind = symbol[0]
    d = rd.d[i]
    if kind == "K":
        return K(rd.real.reflect_coweight(i, symbol[1]))
    j = symbol[1]
    if j == i:
        if kind == "E":
            return -(F(i) * K_i(rd, i))
        return -(K_i(rd, i, -1) * E(i))
    a = rd.gcm.matrix[i][j]
    total = AlgebraElement()
    for r in range(-a + 1):
        sign = -1 if r % 2 else 1
        if kind == "E":
            term = divided_power(E(i), -a - r, d) * E(j) * divided_power(E(i), r, d)
            total = total + term * (q_power(-r, d) * sign)
        else:
            term = divided_power(F(i), r, d) * F(j) * divided_power(F(i), -a - r, d)
            total = total + term * (q_power(r, d) * sign)
    return total


def lusztig_T_element(rd, i, x):
    """``T_i`` extended to sums of words as an algebra map."""
    out = AlgebraElement()
    cache = {}
    for w, c in x.terms.items():
        img = AlgebraElement({(): c})
        for s in w:
            if s not in cache:
                cache[s] = lusztig_T(rd, i, s)
            img = img * cache[s]
        out = out + img
    return out


# ---------------------------------------------------------------------------
# evaluation on modules
# ---------------------------------------------------------------------------

def dip(x):
    """Largest depth increase while a word of ``x`` acts (right to left)."""
    worst = 0
    for w in x.terms:
        depth = 0
        for s in reversed(w):
            if s[0] == "F":
                depth += 1
            elif s[0] == "E":
                depth -= 1
            worst = max(worst, depth)
    return worst


def _symbol_operator(module, s, cache):
    key = s
    if key in cache:
        return cache[key]
    if s[0] == "K":
        vals = {b: module.k_value(b, s[1]) for b in module.keys}
        op = Operator.diagonal(module, vals)
    else:
        if not 0 <= s[1] < module.rd.n:
            raise ValueError("unknown generator index %d" % (s[1] + 1))
        op = Operator.generator(module, s[0], s[1])
    cache[key] = op
    return op


def evaluate(x, module, sources=None, cache=None):
    """Operator of ``x`` on ``module`` (restricted to ``sources`` blocks if given).

    On a module truncated at a height cutoff the result is exact on source
    blocks of height at most ``cutoff - dip(x)``.
    """
    cache = {} if cache is None else cache
    start = Operator.identity(module)
    if sources is not None:
        start = start.restrict(sources)
    total = Operator.zero(module)
    for w, c in x.terms.items():
        op = start
        for s in reversed(w):
            op = _symbol_operator(module, s, cache) @ op
            if op.is_zero():
                break
        total = total + op.scale(module.scalar(c))
    return total


def equality_via_verma(rd, x, y, height):
    """Decide ``x == y`` by acting on the symbolic Verma module up to ``height``.

    Sound on every vector whose depth plus ``dip`` stays below ``height``;
    a difference that only shows up deeper is not detected.
    """
    diff = x - y
    need = dip(diff)
    if height < need:
        raise ValueError("height %d is below the raising depth %d of the words" % (height, need))
    module = _symbolic_cache(rd, height)
    sources = [b for b in module.keys if sum(b) <= height - need]
    return evaluate(diff, module, sources).is_zero()


_SYMBOLIC = {}


def _symbolic_cache(rd, height):
    key = (rd.gcm.matrix, height)
    if key not in _SYMBOLIC:
        _SYMBOLIC[key] = symbolic_verma(rd, height)
    return _SYMBOLIC[key]
