"""Piecewise analytic paths in the complexified Cartan subalgebra.

Points are complex vectors of coordinates on the basis of ``h`` (finite
type, so the basis is the simple coroots).  A path is a list of segments,
each a straight line or a circular arc ``c + r exp(i theta) u``; the Weyl
group acts linearly, hence segment by segment.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Line", "Arc", "LoopPath", "root_functionals", "coweight_matrix", "generator_loop",
    "purify", "GroupoidWord", "lift_generator", "lift_braid_word",
]


@dataclass(frozen=True)
class Line:
    p0: np.ndarray
    p1: np.ndarray

    t0 = 0.0
    t1 = 1.0

    def point(self, t):
        return self.p0 + t * (self.p1 - self.p0)

    def velocity(self, t):
        return self.p1 - self.p0

    @property
    def start(self):
        return self.p0

    @property
    def end(self):
        return self.p1

    def reversed(self):
        return Line(self.p1, self.p0)

    def transformed(self, M):
        return Line(M @ self.p0, M @ self.p1)

    def min_abs(self, f):
        """Minimum of ``|f(x)|`` over the segment, ``f`` a linear functional."""
        a, b = f @ self.p0, f @ (self.p1 - self.p0)
        if abs(b) == 0:
            return abs(a)
        t = min(max(-(a * b.conjugate()).real / abs(b) ** 2, 0.0), 1.0)
        return abs(a + t * b)

    def log_change(self, f):
        """``int df/f`` along the segment (the segment avoids ``f = 0``)."""
        return cmath.log((f @ self.p1) / (f @ self.p0))

    def speed(self):
        return float(np.linalg.norm(self.p1 - self.p0))


@dataclass(frozen=True)
class Arc:
    center: np.ndarray
    direction: np.ndarray
    radius: float
    t0: float
    t1: float

    def point(self, t):
        return self.center + self.radius * cmath.exp(1j * t) * self.direction

    def velocity(self, t):
        return 1j * self.radius * cmath.exp(1j * t) * self.direction

    @property
    def start(self):
        return self.point(self.t0)

    @property
    def end(self):
        return self.point(self.t1)

    def reversed(self):
        # theta -> t0 + t1 - theta traverses the same circle backwards; rewrite with
        # the conjugate orientation: c + r e^{i(t0+t1-s)} u = c + r e^{-is} (e^{i(t0+t1)} u)
        u = cmath.exp(1j * (self.t0 + self.t1)) * self.direction
        return _ConjArc(self.center, u, self.radius, self.t0, self.t1)

    def transformed(self, M):
        return Arc(M @ self.center, M @ self.direction, self.radius, self.t0, self.t1)

    def min_abs(self, f):
        P, R = f @ self.center, self.radius * (f @ self.direction)
        cands = [self.t0, self.t1]
        if abs(R) > 0:
            th = cmath.phase(-P / R) if abs(P) > 0 else self.t0
            lo, hi = min(self.t0, self.t1), max(self.t0, self.t1)
            for k in range(-2, 3):
                t = th + 2 * math.pi * k
                if lo <= t <= hi:
                    cands.append(t)
        return min(abs(P + R * cmath.exp(1j * t)) for t in cands)

    def log_change(self, f):
        P, R = f @ self.center, self.radius * (f @ self.direction)
        return _arc_log(lambda t: P + R * cmath.exp(1j * t), self.t0, self.t1, abs(R), self.min_abs(f))

    def speed(self):
        return self.radius * float(np.linalg.norm(self.direction))


@dataclass(frozen=True)
class _ConjArc:
    """Arc ``c + r exp(-i theta) u`` for ``theta`` in ``[t0, t1]``."""
    center: np.ndarray
    direction: np.ndarray
    radius: float
    t0: float
    t1: float

    def point(self, t):
        return self.center + self.radius * cmath.exp(-1j * t) * self.direction

    def velocity(self, t):
        return -1j * self.radius * cmath.exp(-1j * t) * self.direction

    @property
    def start(self):
        return self.point(self.t0)

    @property
    def end(self):
        return self.point(self.t1)

    def reversed(self):
        u = cmath.exp(-1j * (self.t0 + self.t1)) * self.direction
        return Arc(self.center, u, self.radius, self.t0, self.t1)

    def transformed(self, M):
        return _ConjArc(M @ self.center, M @ self.direction, self.radius, self.t0, self.t1)

    def min_abs(self, f):
        mirror = Arc(self.center, self.direction, self.radius, -self.t1, -self.t0)
        return mirror.min_abs(f)

    def log_change(self, f):
        P, R = f @ self.center, self.radius * (f @ self.direction)
        return _arc_log(lambda t: P + R * cmath.exp(-1j * t), self.t0, self.t1, abs(R), self.min_abs(f))

    def speed(self):
        return self.radius * float(np.linalg.norm(self.direction))


def _arc_log(g, t0, t1, rad, clearance):
    """Sum of principal logs over sub-arcs short enough that none can wind."""
    if clearance <= 0:
        raise ValueError("arc meets the zero set of the functional")
    # the sagitta of each piece stays below half the clearance
    span = abs(t1 - t0)
    max_piece = math.sqrt(4 * clearance / rad) if rad > 0 else span
    pieces = max(8, int(math.ceil(span / max(max_piece, 1e-6))))
    ts = np.linspace(t0, t1, pieces + 1)
    total = 0j
    prev = g(ts[0])
    for t in ts[1:]:
        cur = g(t)
        total += cmath.log(cur / prev)
        prev = cur
    return total


class LoopPath:
    """A path made of segments, with endpoint bookkeeping."""

    def __init__(self, segments, tol=1e-9):
        self.segments = list(segments)
        for a, b in zip(self.segments, self.segments[1:]):
            if np.linalg.norm(a.end - b.start) > tol:
                raise ValueError("segments do not join: %s -> %s" % (a.end, b.start))

    @property
    def start(self):
        return self.segments[0].start

    @property
    def end(self):
        return self.segments[-1].end

    def then(self, other):
        """``other o self``: first ``self``, then ``other``."""
        return LoopPath(self.segments + other.segments)

    def reversed(self):
        return LoopPath([s.reversed() for s in reversed(self.segments)])

    def transformed(self, M):
        return LoopPath([s.transformed(M) for s in self.segments])

    def clearance(self, functionals):
        """Per segment, the minimum of ``|alpha(x)| / |alpha|`` over the given roots."""
        out = []
        for s in self.segments:
            out.append(min(s.min_abs(f) / np.linalg.norm(f) for f in functionals))
        return out

    def log_changes(self, f):
        return sum(s.log_change(f) for s in self.segments)

    def is_closed(self, tol=1e-9):
        return np.linalg.norm(self.start - self.end) <= tol

    def __len__(self):
        return len(self.segments)


def root_functionals(rd):
    """Positive roots as complex row vectors acting on ``h`` coordinates."""
    return [np.array([complex(x) for x in r.weight]) for r in rd.positive_roots]


def coweight_matrix(rd, word):
    """Matrix of ``w`` (given by a word) on ``h`` coordinates."""
    from .cartan import WeylElement

    w = WeylElement(rd.real, word, reduce=False)
    dim = rd.real.dim
    cols = []
    for k in range(dim):
        e = tuple(int(t == k) for t in range(dim))
        cols.append([float(x) for x in w.act_coweight(e)])
    return np.array(cols, dtype=complex).T


def _basepoint(rd):
    return np.array([complex(x) for x in rd.real.rho_check()])


def generator_loop(rd, i, x0=None, radius=None):
    """``gamma_i``: from ``x0`` to ``s_i(x0)`` inside ``x0 + C h_i``.

    Along the path ``alpha_i = a + 2z``; the path runs along the real axis
    to ``z = -a/2 + r``, over the upper semicircle of radius ``r`` around
    ``z = -a/2`` and on to ``z = -a``.  Returns ``(path, radius)``; the
    radius is shrunk until the path clears every root hyperplane.
    """
    x0 = _basepoint(rd) if x0 is None else np.asarray(x0, dtype=complex)
    h = np.array([complex(x) for x in rd.real.coroots[i]])
    alpha = np.array([complex(x) for x in rd.simple_root(i).weight])
    a = (alpha @ x0).real
    if a <= 0:
        raise ValueError("basepoint must lie in the fundamental chamber")
    r = a / 4 if radius is None else radius
    funcs = root_functionals(rd)
    while True:
        p1 = x0 + (-a / 2 + r) * h
        centre = x0 + (-a / 2) * h
        p2 = x0 + (-a / 2 - r) * h
        path = LoopPath([Line(x0, p1), Arc(centre, h, r, 0.0, math.pi), Line(p2, x0 - a * h)])
        if min(path.clearance(funcs)) > 1e-3 * a:
            return path, r
        r /= 2


def purify(rd, i, x0=None, radius=None):
    """``p_{alpha_i} = s_i(gamma_i) o gamma_i``: a loop at ``x0`` around ``Ker(alpha_i)``."""
    g, _ = generator_loop(rd, i, x0, radius)
    s = coweight_matrix(rd, (i,))
    return g.then(g.transformed(s))


# ---------------------------------------------------------------------------
# orbifold groupoid
# ---------------------------------------------------------------------------

@dataclass
class GroupoidWord:
    """A pair ``(w, gamma)`` with ``gamma`` running from ``x0`` to ``w^-1 x0``.

    Composition follows ``(w', g') o (w, g) = (w'w, w^-1(g') o g)``.
    """
    rd: object
    w: tuple                     # word for w
    path: LoopPath

    def matrix(self):
        return coweight_matrix(self.rd, self.w)

    def compose(self, other):
        """``self o other``."""
        winv = coweight_matrix(self.rd, tuple(reversed(other.w)))
        moved = self.path.transformed(winv)
        return GroupoidWord(self.rd, self.w + other.w, other.path.then(moved))

    def inverse(self):
        M = self.matrix()
        winv = tuple(reversed(self.w))
        return GroupoidWord(self.rd, winv, self.path.reversed().transformed(M))


def lift_generator(rd, i, sign=1, x0=None, radius=None):
    g, _ = generator_loop(rd, i, x0, radius)
    lift = GroupoidWord(rd, (i,), g)
    return lift if sign == 1 else lift.inverse()


def lift_braid_word(rd, word, x0=None, radius=None):
    """Lift ``[(i, +-1), ...]`` (leftmost first) to the groupoid."""
    acc = None
    for i, s in reversed(list(word)):
        g = lift_generator(rd, i, s, x0, radius)
        acc = g if acc is None else g.compose(acc)
    if acc is None:
        x0 = _basepoint(rd) if x0 is None else np.asarray(x0, dtype=complex)
        return GroupoidWord(rd, (), LoopPath([Line(x0, x0)]))
    return acc
