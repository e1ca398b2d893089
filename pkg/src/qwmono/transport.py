"""Numerical monodromy of the Casimir connection and its abelian companion.

The connection ``d - sfh sum (d alpha / alpha) K_alpha^+`` with
``sfh = hbar / (2 pi i)`` preserves weight spaces, so horizontal sections
are computed one weight block at a time with an adaptive eighth-order
Runge-Kutta scheme.  The abelian part ``(sfh / 2) sum (d alpha / alpha) t_alpha``
is diagonal and is integrated in closed form from the change of
``log alpha`` along each segment.
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import linear_sum_assignment

from .cartan import CartanError, PureBraidWord, apply_word_to_root
from .casimir import ClassicalModule, build_classical, casimir_operator, tau_of_braid
from .paths import Line, LoopPath, coweight_matrix, lift_braid_word, root_functionals, _basepoint

__all__ = [
    "TransportError", "CasimirConnection", "parallel_transport", "abelian_transport",
    "abelian_cochain", "pure_loop", "pure_monodromy", "equivariant_braid_action",
    "coboundary_check", "random_path", "TransportStats", "SpectraReport", "compare_spectra", "THREADS_ENV",
]

THREADS_ENV = "QWMONO_THREADS"


class TransportError(RuntimeError):
    pass


def _threads():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


class CasimirConnection:
    """``K_alpha^+`` for every positive root on one classical module, at a given ``hbar``."""

    def __init__(self, A, V, hbar):
        if not isinstance(V, ClassicalModule):
            raise TypeError("expected a ClassicalModule")
        self.algebra, self.module, self.hbar = A, V, complex(hbar)
        self.rd = A.rd
        self.roots = list(self.rd.positive_roots)
        self.functionals = root_functionals(self.rd)
        self.K = [np.array(casimir_operator(A, V, r.coeffs), dtype=complex) for r in self.roots]
        # mu(t_alpha) on every basis vector
        self.t = [np.array([complex(self.rd.real.pair(mu, r.t)) for mu in V.weights]) for r in self.roots]
        self.blocks = [V.slices[b] for b in V.module.keys]

    @property
    def sfh(self):
        return self.hbar / (2j * math.pi)

    @property
    def dim(self):
        return self.module.dim

    @classmethod
    def build(cls, rd, quantum_module, hbar):
        V = ClassicalModule(quantum_module)
        return cls(build_classical(rd, [V]), V, hbar)

    def with_hbar(self, hbar):
        new = object.__new__(CasimirConnection)
        new.__dict__.update(self.__dict__)
        new.hbar = complex(hbar)
        return new


@dataclass
class TransportStats:
    segments: int = 0
    evaluations: int = 0
    steps: int = 0

    def to_json(self):
        return {"segments": self.segments, "evaluations": self.evaluations, "steps": self.steps}


def _block_transport(conn, sl, path, tol, stats):
    n = sl.stop - sl.start
    Ks = [K[sl, sl] for K in conn.K]
    live = [k for k, K in enumerate(Ks) if np.any(K != 0)]
    out = np.eye(n, dtype=complex)
    if not live or conn.hbar == 0:
        return out
    sfh = conn.sfh
    funcs = [conn.functionals[k] for k in live]
    mats = [sfh * Ks[k] for k in live]
    for seg in path.segments:
        clear = min(seg.min_abs(f) / np.linalg.norm(f) for f in funcs)
        if clear <= 0:
            raise TransportError("segment meets a root hyperplane at %s" % seg.start)
        span = abs(seg.t1 - seg.t0)
        speed = max(seg.speed(), 1e-300)
        max_step = min(span, 0.5 * clear / speed)

        def rhs(t, y, seg=seg):
            x, dx = seg.point(t), seg.velocity(t)
            M = sum(((f @ dx) / (f @ x)) * m for f, m in zip(funcs, mats))
            return (M @ y.reshape(n, n)).ravel()

        sol = solve_ivp(rhs, (seg.t0, seg.t1), np.eye(n, dtype=complex).ravel(), method="DOP853",
                        rtol=tol, atol=tol * 1e-3, max_step=max_step)
        if sol.status != 0:
            where = seg.point(sol.t[-1]) if len(sol.t) else seg.start
            raise TransportError("integration failed near %s: %s" % (where, sol.message))
        stats.segments += 1
        stats.evaluations += sol.nfev
        stats.steps += len(sol.t) - 1
        out = sol.y[:, -1].reshape(n, n) @ out
    return out


def parallel_transport(conn, path, tol=1e-10, stats=None):
    """Fundamental solution along ``path`` (a :class:`LoopPath`), as a dense matrix.

    Transport composes as ``Pi(g2 o g1) = Pi(g2) Pi(g1)``.  Off-block entries
    are exactly zero by construction.
    """
    stats = TransportStats() if stats is None else stats
    out = np.zeros((conn.dim, conn.dim), dtype=complex)
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        mats = list(pool.map(lambda sl: _block_transport(conn, sl, path, tol, stats), conn.blocks))
    for sl, m in zip(conn.blocks, mats):
        out[sl, sl] = m
    return out


def _log_changes(rd, path):
    return [path.log_changes(f) for f in root_functionals(rd)]


def abelian_transport(conn, path):
    """Diagonal transport of ``d - (sfh / 2) sum (d alpha / alpha) t_alpha`` along ``path``."""
    logs = _log_changes(conn.rd, path)
    expo = sum(dl * t for dl, t in zip(logs, conn.t))
    return np.diag(np.exp(0.5 * conn.sfh * expo))


def abelian_cochain(conn, path):
    """``b`` normalized by winding only: ``exp((hbar / 4 pi) sum Delta arg(alpha) t_alpha)``.

    This gives ``b(gamma_i) = exp(hbar t_i / 4)``.
    """
    logs = _log_changes(conn.rd, path)
    expo = sum(dl.imag * t for dl, t in zip(logs, conn.t))
    return np.diag(np.exp(conn.hbar / (4 * math.pi) * expo))


# ---------------------------------------------------------------------------
# pure loops and equivariant action
# ---------------------------------------------------------------------------

def pure_loop(rd, p, x0=None, radius=None):
    """Closed loop at ``x0`` lifting a pure braid word."""
    g = lift_braid_word(rd, p.braid_word(), x0, radius)
    if not g.path.is_closed(1e-9):
        raise CartanError("lifted word does not close up: not a pure braid")
    return g.path


def pure_monodromy(conn, p, tol=1e-10, radius=None, stats=None):
    """``Pi_+`` of the lifted pure braid ``p``."""
    if not isinstance(p, PureBraidWord):
        p = PureBraidWord(tuple(p))
    return parallel_transport(conn, pure_loop(conn.rd, p, radius=radius), tol, stats)


def equivariant_braid_action(conn, braid_word, tol=1e-10, radius=None):
    """``tau(b) Pi_+(b~) b_A(b~)`` for a braid word ``[(i, +-1), ...]``."""
    word = list(braid_word)
    g = lift_braid_word(conn.rd, word, radius=radius)
    tau = np.array(tau_of_braid(conn.module, word), dtype=complex)
    return tau @ parallel_transport(conn, g.path, tol) @ abelian_transport(conn, g.path)


# ---------------------------------------------------------------------------
# coboundary identity
# ---------------------------------------------------------------------------

def random_path(rd, rng, points=4, scale=0.6, min_clearance=0.15, x0=None):
    """Random closed polygon at ``x0`` in the complexified chamber region, clear of walls."""
    x0 = _basepoint(rd) if x0 is None else x0
    funcs = root_functionals(rd)
    dim = len(x0)
    while True:
        pts = [x0] + [x0 + scale * (rng.standard_normal(dim) + 1j * rng.standard_normal(dim))
                      for _ in range(points - 1)] + [x0]
        path = LoopPath([Line(a, b) for a, b in zip(pts, pts[1:])])
        if min(path.clearance(funcs)) > min_clearance:
            return path


def _inversion_roots(rd, word):
    out = []
    for k, r in enumerate(rd.positive_roots):
        image = apply_word_to_root(rd.gcm.matrix, tuple(word), r.coeffs)
        if all(c <= 0 for c in image):
            out.append(k)
    return out


@dataclass
class CoboundaryReport:
    word: tuple
    numeric: np.ndarray          # tau_w^-1 Pi(w g)^-1 tau_w Pi(g)
    closed_form: np.ndarray      # exp(-sfh sum_{alpha > 0, w alpha < 0} Delta log alpha t_alpha)
    twisted: np.ndarray          # w^-1(b_A(w g)) b_A(g)^-1
    residual: float = field(default=0.0)

    def to_json(self):
        return {"w": [j + 1 for j in self.word], "residual": self.residual,
                "diagonal": [[z.real, z.imag] for z in np.diag(self.closed_form)]}


def coboundary_check(conn, word, path, tol=1e-11):
    """Compare the failure of ``W``-equivariance of ``Pi_+`` with the abelian coboundary."""
    V = conn.module
    W = coweight_matrix(conn.rd, tuple(word))
    moved = path.transformed(W)
    tau = np.array(tau_of_braid(V, [(j, 1) for j in word]), dtype=complex)
    tau_inv = np.linalg.inv(tau)
    numeric = tau_inv @ np.linalg.inv(parallel_transport(conn, moved, tol)) @ tau @ parallel_transport(conn, path, tol)
    logs = _log_changes(conn.rd, path)
    expo = sum(logs[k] * conn.t[k] for k in _inversion_roots(conn.rd, word))
    closed = np.diag(np.exp(-conn.sfh * expo)) if len(expo.shape) else np.eye(V.dim, dtype=complex)
    twisted = tau_inv @ abelian_transport(conn, moved) @ tau @ np.linalg.inv(abelian_transport(conn, path))
    res = max(np.max(np.abs(numeric - closed)), np.max(np.abs(twisted - closed)))
    return CoboundaryReport(tuple(word), numeric, closed, twisted, float(res))


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------

@dataclass
class SpectraReport:
    blocks: list                 # (weight, classical eigenvalues, quantum eigenvalues, mismatch)
    max_mismatch: float
    entrywise: float | None = None

    def to_json(self):
        def cx(z):
            return [float(z.real), float(z.imag)]
        return {
            "max_mismatch": self.max_mismatch,
            "entrywise": self.entrywise,
            "blocks": [{"weight": [str(x) for x in w], "classical": [cx(z) for z in a],
                        "quantum": [cx(z) for z in b], "mismatch": m} for w, a, b, m in self.blocks],
        }


def compare_spectra(classical, quantum, hbar):
    """Blockwise eigenvalue multisets of a numeric matrix and a quantum :class:`Operator`.

    Eigenvalues are paired by minimum total absolute difference; when all
    blocks are one-dimensional the entries are compared directly as well.
    """
    mod = quantum.module
    Q = quantum.to_numpy(hbar)
    C = np.asarray(classical, dtype=complex)
    if C.shape != Q.shape:
        raise ValueError("dimension mismatch: %s vs %s" % (C.shape, Q.shape))
    rows, worst, rank_one = [], 0.0, True
    for beta in mod.keys:
        start = mod._offset[beta]
        sl = slice(start, start + mod.blocks[beta])
        a, b = np.linalg.eigvals(C[sl, sl]), np.linalg.eigvals(Q[sl, sl])
        cost = np.abs(a[:, None] - b[None, :])
        r, c = linear_sum_assignment(cost)
        m = float(cost[r, c].max()) if len(r) else 0.0
        worst = max(worst, m)
        rows.append((mod.weight(beta), a[r], b[c], m))
        rank_one = rank_one and mod.blocks[beta] == 1
    entry = float(np.max(np.abs(C - Q))) if rank_one else None
    return SpectraReport(rows, worst, entry)
