"""Exact coefficient arithmetic.

Everything in the package is computed over the field Q(v) of rational
functions in a balanced quantum variable ``v`` with ``q = v**2`` and
``q_i = v**(2*d_i)``.  Numeric evaluation substitutes ``v = exp(hbar/4)``.

Three layers:

* :class:`LaurentV` -- Laurent polynomials in ``v`` with rational coefficients.
* :class:`ScalarQ`  -- reduced quotients of Laurent polynomials.
* :class:`PolyLambda` -- Laurent polynomials in symbolic highest-weight
  variables ``Y_k = v**lambda_k`` with :class:`ScalarQ` coefficients.
"""

from __future__ import annotations

import cmath
import re
from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

__all__ = [
    "LaurentV", "ScalarQ", "PolyLambda", "PoleError",
    "V", "ONE", "ZERO",
    "q_integer", "q_factorial", "q_binomial", "q_power",
    "specialize", "as_scalar", "parse_scalar",
]


class PoleError(ArithmeticError):
    """Raised when a rational function is evaluated at a zero of its denominator."""


# ---------------------------------------------------------------------------
# dense polynomial helpers (coefficient lists, lowest degree first)
# ---------------------------------------------------------------------------

def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _pdivmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for k, bk in enumerate(b):
            a[shift + k] -= c * bk
        a.pop()
        _trim(a)
    return _trim(q), a


def _primitive(p):
    """Integer primitive part of a rational coefficient list."""
    den = 1
    for c in p:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints] if g > 1 else ints


def _pgcd(a, b):
    """Monic gcd, via a primitive pseudo-remainder sequence over the integers."""
    a, b = _primitive(_trim(list(a))), _primitive(_trim(list(b)))
    if len(a) < len(b):
        a, b = b, a
    while b:
        # pseudo-remainder of a by b
        r = list(a)
        lead = b[-1]
        while len(r) >= len(b) and r:
            shift = len(r) - len(b)
            c = r[-1]
            r = [x * lead for x in r]
            for k, bk in enumerate(b):
                r[shift + k] -= c * bk
            r.pop()
            while r and r[-1] == 0:
                r.pop()
        a, b = b, (_primitive([Fraction(x) for x in r]) if r else [])
    if not a:
        return [Fraction(1)]
    lead = Fraction(a[-1])
    return [Fraction(c) / lead for c in a]


# ---------------------------------------------------------------------------
# LaurentV
# ---------------------------------------------------------------------------

class LaurentV:
    """Sparse Laurent polynomial ``sum c_k v**k`` with exact rational coefficients."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for k, val in coeffs.items():
                if val != 0:
                    c[int(k)] = Fraction(val)
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c):
        obj = object.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, k, c=1):
        return cls({k: c}) if c else cls()

    @property
    def coeffs(self):
        return dict(self._c)

    def is_zero(self):
        return not self._c

    def low(self):
        return min(self._c)

    def high(self):
        return max(self._c)

    def is_monomial(self):
        return len(self._c) == 1

    def __len__(self):
        return len(self._c)

    def __add__(self, other):
        other = _laurent(other)
        if other is NotImplemented:
            return NotImplemented
        c = dict(self._c)
        for k, val in other._c.items():
            s = c.get(k, 0) + val
            if s:
                c[k] = s
            else:
                c.pop(k, None)
        return LaurentV._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentV._raw({k: -val for k, val in self._c.items()})

    def __sub__(self, other):
        other = _laurent(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _laurent(other)
        if other is NotImplemented:
            return NotImplemented
        c = {}
        for k1, c1 in self._c.items():
            for k2, c2 in other._c.items():
                k = k1 + k2
                c[k] = c.get(k, 0) + c1 * c2
        return LaurentV._raw({k: val for k, val in c.items() if val})

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a Laurent polynomial")
        out = LaurentV({0: 1})
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k):
        """Multiply by ``v**k``."""
        return LaurentV._raw({e + k: c for e, c in self._c.items()})

    def bar(self):
        """The involution ``v -> 1/v``."""
        return LaurentV._raw({-e: c for e, c in self._c.items()})

    def __eq__(self, other):
        other = _laurent(other)
        if other is NotImplemented:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def dense(self):
        """Coefficient list of ``v**(-low) * self`` and the shift ``low``."""
        lo, hi = self.low(), self.high()
        out = [Fraction(0)] * (hi - lo + 1)
        for k, c in self._c.items():
            out[k - lo] = c
        return out, lo

    @classmethod
    def from_dense(cls, coeffs, low=0):
        return cls._raw({low + k: Fraction(c) for k, c in enumerate(coeffs) if c})

    def __call__(self, x):
        return sum(complex(c) * x ** k for k, c in self._c.items())

    def __repr__(self):
        return "LaurentV(%s)" % _format_terms(self._c)

    def __str__(self):
        return _format_terms(self._c)


def _laurent(x):
    if isinstance(x, LaurentV):
        return x
    if isinstance(x, (int, Rational)):
        return LaurentV._raw({0: Fraction(x)} if x else {})
    return NotImplemented


def _format_coeff(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else "%d/%d" % (c.numerator, c.denominator)


def _format_terms(c):
    if not c:
        return "0"
    return " + ".join("%s*v^%d" % (_format_coeff(c[k]), k) for k in sorted(c))


_TERM = re.compile(r"^\s*([+-]?\d+(?:/\d+)?)\s*\*\s*v\s*\^\s*([+-]?\d+)\s*$")


def _parse_terms(text):
    text = text.strip()
    if text == "0":
        return LaurentV()
    c = {}
    for part in text.split(" + "):
        m = _TERM.match(part)
        if not m:
            raise ValueError("cannot parse term %r" % part)
        k = int(m.group(2))
        c[k] = c.get(k, 0) + Fraction(m.group(1))
    return LaurentV(c)


# ---------------------------------------------------------------------------
# ScalarQ
# ---------------------------------------------------------------------------

class ScalarQ:
    """Element of Q(v), stored as a reduced quotient ``num / den``.

    ``den`` is an honest polynomial with nonzero constant term and leading
    coefficient one; all powers of ``v`` live in ``num``.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=None):
        num = _laurent(num) if not isinstance(num, LaurentV) else num
        if num is NotImplemented:
            raise TypeError("cannot build ScalarQ from %r" % (num,))
        if den is None:
            self.num, self.den = num, _ONE_L
        else:
            den = _laurent(den) if not isinstance(den, LaurentV) else den
            self.num, self.den = _reduce(num, den)
        self._hash = None

    @classmethod
    def _raw(cls, num, den):
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, k, c=1):
        return cls._raw(LaurentV.monomial(k, c), _ONE_L)

    def is_zero(self):
        return self.num.is_zero()

    def is_laurent(self):
        return self.den is _ONE_L or self.den == _ONE_L

    def is_one(self):
        return self.is_laurent() and self.num._c == {0: 1}

    def __bool__(self):
        return not self.num.is_zero()

    def __add__(self, other):
        other = as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            if self.den == _ONE_L:
                return ScalarQ._raw(self.num + other.num, _ONE_L)
            return ScalarQ(self.num + other.num, self.den)
        if other.den == _ONE_L:
            return ScalarQ._raw(self.num + other.num * self.den, self.den)
        if self.den == _ONE_L:
            return ScalarQ._raw(self.num * other.den + other.num, other.den)
        return ScalarQ(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return ScalarQ._raw(-self.num, self.den)

    def __sub__(self, other):
        other = as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PolyLambda):
            return NotImplemented
        other = as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == _ONE_L and other.den == _ONE_L:
            return ScalarQ._raw(self.num * other.num, _ONE_L)
        return ScalarQ(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(v)")
        return ScalarQ(self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, PolyLambda):
            return NotImplemented
        other = as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_scalar(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return ScalarQ._raw(self.num ** n, self.den ** n) if self.den != _ONE_L \
            else ScalarQ._raw(self.num ** n, _ONE_L)

    def bar(self):
        """Image under ``v -> 1/v``."""
        return ScalarQ(self.num.bar(), self.den.bar())

    def __eq__(self, other):
        if isinstance(other, PolyLambda):
            return NotImplemented
        other = as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def at_one(self):
        """Exact value at ``v = 1`` (the classical limit)."""
        d = sum(self.den._c.values(), Fraction(0))
        if d == 0:
            raise PoleError("pole at v = 1")
        return sum(self.num._c.values(), Fraction(0)) / d

    def __complex__(self):
        return complex(specialize(self, 0.0))

    def __repr__(self):
        return "ScalarQ(%s)" % self

    def __str__(self):
        if self.den == _ONE_L:
            return _format_terms(self.num._c)
        return "(%s)/(%s)" % (_format_terms(self.num._c), _format_terms(self.den._c))


_ONE_L = LaurentV._raw({0: Fraction(1)})


def _reduce(num, den):
    if den.is_zero():
        raise ZeroDivisionError("zero denominator in Q(v)")
    if num.is_zero():
        return LaurentV(), _ONE_L
    nlo, dlo = num.low(), den.low()
    shift = nlo - dlo
    # work in w = v**step when every exponent offset is a multiple of step
    step = 0
    for k in num._c:
        step = gcd(step, k - nlo)
    for k in den._c:
        step = gcd(step, k - dlo)
    step = step or 1
    dd = _compress(den._c, dlo, step)
    nd = _compress(num._c, nlo, step)
    if len(dd) > 1:
        g = _pgcd(nd, dd)
        if len(g) > 1:
            nd, _ = _pdivmod(nd, g)
            dd, _ = _pdivmod(dd, g)
    lead = dd[-1]
    if lead != 1:
        nd = [c / lead for c in nd]
        dd = [c / lead for c in dd]
    n = LaurentV._raw({shift + step * k: Fraction(c) for k, c in enumerate(nd) if c})
    if len(dd) == 1:
        return n, _ONE_L
    return n, LaurentV._raw({step * k: Fraction(c) for k, c in enumerate(dd) if c})


def _compress(c, low, step):
    out = [Fraction(0)] * ((max(c) - low) // step + 1)
    for k, x in c.items():
        out[(k - low) // step] = x
    return out


def as_scalar(x):
    """Coerce ints, Fractions and Laurent polynomials into :class:`ScalarQ`."""
    if isinstance(x, ScalarQ):
        return x
    if isinstance(x, LaurentV):
        return ScalarQ._raw(x, _ONE_L)
    if isinstance(x, (int, Rational)):
        return ScalarQ._raw(LaurentV._raw({0: Fraction(x)} if x else {}), _ONE_L)
    return NotImplemented


def parse_scalar(text):
    """Inverse of ``str(ScalarQ)``."""
    text = text.strip()
    m = re.match(r"^\((.*)\)/\((.*)\)$", text)
    if m:
        return ScalarQ(_parse_terms(m.group(1)), _parse_terms(m.group(2)))
    return ScalarQ(_parse_terms(text))


V = ScalarQ.monomial(1)
ONE = ScalarQ.monomial(0)
ZERO = ScalarQ()


# ---------------------------------------------------------------------------
# q-numbers
# ---------------------------------------------------------------------------

def q_power(exponent, d=1):
    """``q_i**exponent = v**(2*d*exponent)``; ``2*d*exponent`` must be integral."""
    e = Fraction(exponent) * 2 * d
    if e.denominator != 1:
        raise ValueError("q-power %s is not an integral power of v" % e)
    return ScalarQ.monomial(int(e))


@lru_cache(maxsize=None)
def q_integer(n, d=1):
    """Balanced quantum integer ``[n]_i`` with ``q_i = v**(2d)``."""
    if d < 1:
        raise ValueError("d must be a positive integer")
    if n < 0:
        return -q_integer(-n, d)
    return ScalarQ._raw(LaurentV._raw({2 * d * (n - 1 - 2 * k): Fraction(1) for k in range(n)}), _ONE_L)


@lru_cache(maxsize=None)
def q_factorial(n, d=1):
    if n < 0:
        raise ValueError("negative factorial")
    out = ONE
    for k in range(1, n + 1):
        out = out * q_integer(k, d)
    return out


@lru_cache(maxsize=None)
def q_binomial(n, k, d=1):
    """Balanced Gaussian binomial, computed through the q-Pascal recursion."""
    if n < 0:
        raise ValueError("q_binomial needs n >= 0")
    if k < 0 or k > n:
        raise ValueError("q_binomial needs 0 <= k <= n, got k=%d, n=%d" % (k, n))
    if k == 0 or k == n:
        return ONE
    left = q_binomial(n - 1, k, d) if k <= n - 1 else ZERO
    right = q_binomial(n - 1, k - 1, d)
    return q_power(k, d) * left + q_power(k - n, d) * right


def specialize(x, hbar, rel_tol=1e-12):
    """Complex value of ``x`` at ``v = exp(hbar/4)``."""
    if isinstance(x, (int, Rational)):
        return complex(x)
    if isinstance(x, LaurentV):
        x = ScalarQ._raw(x, _ONE_L)
    v = cmath.exp(complex(hbar) / 4)
    num = x.num(v)
    if x.den == _ONE_L:
        return num
    den = x.den(v)
    scale = sum(abs(complex(c)) * abs(v) ** k for k, c in x.den._c.items())
    if abs(den) < rel_tol * scale:
        raise PoleError("denominator %s vanishes at v = %r" % (x.den, v))
    return num / den


# ---------------------------------------------------------------------------
# PolyLambda
# ---------------------------------------------------------------------------

class PolyLambda:
    """Laurent polynomial in symbolic weight variables with Q(v) coefficients.

    The variable ``Y_k`` stands for ``v**lambda_k`` where ``lambda_k`` is the
    value of the symbolic highest weight on the k-th basis vector of the
    Cartan subalgebra, so that ``q**lambda(mu) = prod_k Y_k**(2*mu_k)``.
    Matrix coefficients of U_q(g) on a symbolic Verma module are elements of
    this ring (never genuine fractions in ``Y``).
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        t = {}
        if terms:
            for mono, c in terms.items():
                c = as_scalar(c)
                if not c.is_zero():
                    t[tuple(mono)] = c
        self.terms = t

    @classmethod
    def _raw(cls, nvars, terms):
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        return obj

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, nvars, exps, c=1):
        return cls(nvars, {tuple(exps): c})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or set(self.terms) == {(0,) * self.nvars}

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, ZERO)

    def _coerce(self, other):
        if isinstance(other, PolyLambda):
            if other.nvars != self.nvars:
                raise ValueError("PolyLambda variable count mismatch")
            return other
        s = as_scalar(other)
        if s is NotImplemented:
            return NotImplemented
        return PolyLambda._raw(self.nvars, {(0,) * self.nvars: s} if not s.is_zero() else {})

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t[m] + c if m in t else c
            if s.is_zero():
                t.pop(m, None)
            else:
                t[m] = s
        return PolyLambda._raw(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return PolyLambda._raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PolyLambda):
            s = as_scalar(other)
            if s is NotImplemented:
                return NotImplemented
            if s.is_zero():
                return PolyLambda._raw(self.nvars, {})
            return PolyLambda._raw(self.nvars, {m: c * s for m, c in self.terms.items()})
        other = self._coerce(other)
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                t[m] = t[m] + c1 * c2 if m in t else c1 * c2
        return PolyLambda._raw(self.nvars, {m: c for m, c in t.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PolyLambda):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("PolyLambda is a ring; only division by nonzero scalars")
            other = other.constant_term()
        s = as_scalar(other).inverse()
        return self * s

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, PolyLambda) or other.nvars == self.nvars else other
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def substitute(self, values):
        """Set ``Y_k = v**values[k]`` (integers) and return a :class:`ScalarQ`."""
        out = ZERO
        for m, c in self.terms.items():
            out = out + c * ScalarQ.monomial(sum(a * b for a, b in zip(m, values)))
        return out

    def is_polynomial(self):
        """True when every coefficient is a Laurent polynomial in ``v`` as well."""
        return all(c.is_laurent() for c in self.terms.values())

    def __repr__(self):
        return "PolyLambda(%s)" % self

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            mono = "*".join("Y%d^%d" % (k + 1, e) for k, e in enumerate(m) if e)
            parts.append("[%s]%s" % (self.terms[m], ("*" + mono) if mono else ""))
        return " + ".join(parts)
