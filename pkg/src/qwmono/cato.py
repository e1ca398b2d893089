"""Verma modules, Shapovalov forms and irreducible highest weight modules.

Weight spaces of ``U_q(n^-)`` are spanned by words in the ``F_i`` modulo the
two-sided ideal generated by the quantum Serre relations.  The ideal is
realised degree by degree as the span of all ``a * S_ij * b``; a reduced row
echelon form then picks basis words and rewrites every other word in terms
of them.  Basis words are chosen at ``v = 1`` first so that the normal form
never acquires a pole there (the classical limit stays well defined).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .cartan import GCM, RootDatum, format_gcm
from .linalg import SparseMatrix, is_zero
from .modules import Operator, WeightModule, shift
from .scalars import ONE, ScalarQ, parse_scalar, q_binomial

__all__ = [
    "serre_word_relation", "FWordSpace", "fword_space", "verma", "symbolic_verma", "shapovalov_gram",
    "shapovalov_dual", "check_dual_basis", "irreducible", "lowest_depth",
    "IntegrabilityReport", "integrability_check", "classical_limit", "dump_module",
    "load_module", "weight_multiplicities",
]


# ---------------------------------------------------------------------------
# sparse vectors
# ---------------------------------------------------------------------------

def _axpy(out, coeff, vec):
    """``out += coeff * vec`` in place; vectors are dicts index -> coeff."""
    for k, x in vec.items():
        y = x * coeff
        if k in out:
            s = out[k] + y
            if is_zero(s):
                del out[k]
            else:
                out[k] = s
        elif not is_zero(y):
            out[k] = y
    return out


def serre_word_relation(a, i, j, d_i):
    """The Serre element in letters ``i, j`` as ``{word: coeff}``."""
    n = 1 - a[i][j]
    out = {}
    for m in range(n + 1):
        c = q_binomial(n, m, d_i)
        word = (i,) * (n - m) + (j,) + (i,) * m
        out[word] = c if m % 2 == 0 else -c
    return out


# ---------------------------------------------------------------------------
# F-words modulo the Serre ideal
# ---------------------------------------------------------------------------

class FWordSpace:
    """Graded pieces of ``U_q(n^-)`` for one Cartan matrix, built on demand."""

    def __init__(self, gcm, d):
        self.gcm = gcm
        self.d = tuple(d)
        self.n = gcm.n
        self._words = {}
        self._pieces = {}
        a = gcm.matrix
        self.relations = []
        for i in range(self.n):
            for j in range(self.n):
                if i != j:
                    rel = serre_word_relation(a, i, j, self.d[i])
                    content = [0] * self.n
                    content[i] += 1 - a[i][j]
                    content[j] += 1
                    self.relations.append((tuple(content), rel))

    def words(self, beta):
        beta = tuple(beta)
        if beta in self._words:
            return self._words[beta]
        if any(b < 0 for b in beta):
            return []
        if not any(beta):
            out = [()]
        else:
            out = []
            for i in range(self.n):
                if beta[i]:
                    out += [(i,) + w for w in self.words(shift(beta, i, -1))]
            out.sort()
        self._words[beta] = out
        return out

    def piece(self, beta):
        """``(basis_words, normal_form)`` at depth ``beta``.

        ``normal_form`` maps every word of content ``beta`` to a dict
        ``{basis index: ScalarQ}``.
        """
        beta = tuple(beta)
        if beta in self._pieces:
            return self._pieces[beta]
        words = self.words(beta)
        col = {w: k for k, w in enumerate(words)}
        rows = []
        seen = set()
        for content, rel in self.relations:
            rest = tuple(b - c for b, c in zip(beta, content))
            for u in self.words(rest):
                for p in range(len(u) + 1):
                    key = (u, p, tuple(rel))
                    if key in seen:
                        continue
                    seen.add(key)
                    row = [ScalarQ()] * len(words)
                    for w, c in rel.items():
                        k = col[u[:p] + w + u[p:]]
                        row[k] = row[k] + c
                    rows.append(row)
        # later words are eliminated first, so basis words are lexicographically small
        order = list(range(len(words)))[::-1]
        if rows:
            at_one = [[x.at_one() for x in r] for r in rows]
            _, piv1 = linalg.rref(at_one, pivot_order=order)
            R, pivots = linalg.rref(rows, pivot_order=piv1)
            if pivots != piv1:
                raise ArithmeticError("Serre ideal changes rank away from v = 1")
        else:
            R, pivots = [], []
        pivset = set(pivots)
        basis = [k for k in range(len(words)) if k not in pivset]
        pos = {k: t for t, k in enumerate(basis)}
        nf = {}
        for k in basis:
            nf[words[k]] = {pos[k]: ONE}
        for row, p in zip(R, pivots):
            vec = {}
            for k in basis:
                if not row[k].is_zero():
                    vec[pos[k]] = -row[k]
            nf[words[p]] = vec
        out = ([words[k] for k in basis], nf)
        self._pieces[beta] = out
        return out

    def dimension(self, beta):
        return len(self.piece(beta)[0])


@lru_cache(maxsize=None)
def _fword_space(matrix, d):
    return FWordSpace(GCM(matrix), d)


def fword_space(rd):
    return _fword_space(rd.gcm.matrix, tuple(rd.d))


def _depths(n, height, box=None):
    out = []
    for h in range(height + 1):
        for beta in _compositions(h, n):
            if box is None or all(b <= c for b, c in zip(beta, box)):
                out.append(beta)
    return out


def _compositions(h, n):
    if n == 1:
        return [(h,)]
    out = []
    for k in range(h, -1, -1):
        out += [(k,) + rest for rest in _compositions(h - k, n - 1)]
    return out


def _word_label(word):
    return " ".join("F%d" % (j + 1) for j in word) + (" v" if word else "v")


# ---------------------------------------------------------------------------
# Verma modules
# ---------------------------------------------------------------------------

def verma(rd, top, height_cutoff, box=None):
    """Verma module ``M(top)`` truncated at ``height_cutoff``.

    ``top`` is a weight (values on the basis of ``h``) or ``None`` for a
    symbolic highest weight.  ``box`` optionally bounds the depth
    componentwise.  Blocks deeper than the cutoff are dropped, so ``F``
    out of the deepest blocks is recorded as zero (``height_cutoff`` flags
    this on the module).
    """
    if isinstance(rd, str):
        rd = RootDatum(rd)
    if height_cutoff < 0:
        raise ValueError("height cutoff must be >= 0")
    space = fword_space(rd)
    n = rd.n
    depths = _depths(n, height_cutoff, box)
    proto = WeightModule(rd, top, {}, {}, [{} for _ in range(n)], [{} for _ in range(n)])
    blocks, labels = {}, {}
    for beta in depths:
        basis, _ = space.piece(beta)
        if basis:
            blocks[beta] = len(basis)
            labels[beta] = [_word_label(w) for w in basis]
    F = [dict() for _ in range(n)]
    for beta in blocks:
        basis, _ = space.piece(beta)
        for i in range(n):
            tgt = shift(beta, i, 1)
            if tgt not in blocks:
                continue
            _, nf = space.piece(tgt)
            cols = [{k: proto.scalar(c) for k, c in nf[(i,) + w].items()} for w in basis]
            F[i][beta] = SparseMatrix(blocks[tgt], len(basis), cols)
    E = [dict() for _ in range(n)]
    memo = {}

    def e_on_word(i, word):
        # E_i F_j w' = F_j E_i w' + delta_ij [mu'(h_i)]_i w'
        key = (i, word)
        if key in memo:
            return memo[key]
        if not word:
            return {}
        j, rest = word[0], word[1:]
        beta_rest = _content(rest, n)
        out = {}
        inner = e_on_word(i, rest)
        if inner:
            b_in = shift(beta_rest, i, -1)
            basis_in, _ = space.piece(b_in)
            _, nf_out = space.piece(shift(b_in, j, 1))
            for k, c in inner.items():
                _axpy(out, c, nf_out[(j,) + basis_in[k]])
        if i == j:
            _, nf_rest = space.piece(beta_rest)
            _axpy(out, proto.bracket(beta_rest, i), nf_rest[rest])
        memo[key] = out
        return out

    for beta in blocks:
        basis, _ = space.piece(beta)
        for i in range(n):
            tgt = shift(beta, i, -1)
            if tgt not in blocks:
                continue
            cols = []
            for w in basis:
                vec = e_on_word(i, w)
                cols.append({k: proto.scalar(c) if isinstance(c, ScalarQ) else c for k, c in vec.items()})
            E[i][beta] = SparseMatrix(blocks[tgt], len(basis), cols)
    name = "M(symbolic)" if top is None else "M(%s)" % ",".join(str(x) for x in top)
    return WeightModule(rd, top, blocks, labels, E, F, height_cutoff=height_cutoff, name=name)


def symbolic_verma(rd, height_cutoff):
    return verma(rd, None, height_cutoff)


def _content(word, n):
    c = [0] * n
    for j in word:
        c[j] += 1
    return tuple(c)


# ---------------------------------------------------------------------------
# Shapovalov form
# ---------------------------------------------------------------------------

def _lower_word(module, word, beta, k):
    """Apply the E-word sigma(F-word) to basis vector ``k`` of block ``beta``.

    Returns the coefficient of the highest weight vector.
    """
    vec = {k: module.one}
    b = beta
    for j in word:
        m = module.E[j].get(b)
        if m is None:
            return module.zero
        vec = m.apply(vec)
        b = shift(b, j, -1)
        if not vec:
            return module.zero
    return vec.get(0, module.zero)


def _basis_words(module, beta):
    return fword_space(module.rd).piece(beta)[0]


def shapovalov_gram(module, beta):
    """Gram matrix ``<X_j v, X_k v>`` on the Verma block at depth ``beta``.

    The form is contravariant for the anti-involution exchanging ``E_i``
    and ``F_i`` and fixing ``K``, normalised by ``<v, v> = 1``.
    """
    beta = tuple(beta)
    if not module.dim_of(beta):
        return []
    words = _basis_words(module, beta)
    return [[_lower_word(module, wj, beta, k) for k in range(len(words))] for wj in words]


def shapovalov_dual(module, beta):
    """Division-free dual basis data ``(adj(G), det(G))``.

    The dual basis vector is ``X*_i = sum_k adj[k][i] / det * X_k``, so
    ``sigma(X_j) X*_i v = delta_ij v``.
    """
    G = shapovalov_gram(module, beta)
    if not G:
        return [], module.one
    det = linalg.det(G, module.zero, module.one)
    if is_zero(det):
        raise ZeroDivisionError("Shapovalov form is degenerate at depth %s" % (beta,))
    return linalg.adjugate(G, module.zero, module.one), det


def check_dual_basis(module, beta):
    """Check ``X_j X*_i v = delta_ij v`` with ``X_j`` the raising words.

    Works with the adjugate so that no division by ``det`` ever happens:
    the identity checked is ``X_j (sum_k adj[k][i] X_k v) = delta_ij det v``.
    """
    beta = tuple(beta)
    adj, det = shapovalov_dual(module, beta)
    words = _basis_words(module, beta) if module.dim_of(beta) else []
    for j, wj in enumerate(words):
        for i in range(len(words)):
            total = module.zero
            for k in range(len(words)):
                if not is_zero(adj[k][i]):
                    total = total + adj[k][i] * _lower_word(module, wj, beta, k)
            expect = det if i == j else module.zero
            if not is_zero(total - expect):
                return False
    return True


# ---------------------------------------------------------------------------
# irreducible quotients
# ---------------------------------------------------------------------------

def lowest_depth(rd, top):
    """Depth of the lowest weight ``w_0(top)`` of ``L(top)`` (finite type)."""
    real = rd.real
    mu = tuple(Fraction(x) for x in top)
    while True:
        for i in range(rd.n):
            if mu[i] > 0:
                mu = real.reflect_weight(i, mu)
                break
        else:
            break
    diff = [Fraction(a) - b for a, b in zip(top, mu)]
    rows = [[real.root_coords[j][k] for j in range(rd.n)] for k in range(real.dim)]
    sol = linalg.solve(rows, diff, Fraction(0))
    return tuple(int(x) for x in sol)


def irreducible(rd, top, height_cutoff=None):
    """Irreducible quotient ``L(top)`` of the Verma module.

    For finite type the whole module is built (``height_cutoff`` is then
    ignored); otherwise it is truncated at ``height_cutoff``.
    """
    if isinstance(rd, str):
        rd = RootDatum(rd)
    top = tuple(Fraction(x) for x in top)
    for i in range(rd.n):
        if top[i] < 0 or top[i].denominator != 1:
            raise ValueError("highest weight must be dominant integral, got %s" % (top,))
    if rd.kind == "finite":
        box = lowest_depth(rd, top)
        H = sum(box)
        M = verma(rd, top, H, box=box)
        cutoff = None
    else:
        if height_cutoff is None:
            raise ValueError("non-finite type needs a height cutoff")
        M = verma(rd, top, height_cutoff)
        H = cutoff = height_cutoff
    sel, proj = {}, {}
    for beta in M.keys:
        G = shapovalov_gram(M, beta)
        chosen = linalg.independent_subset([[x.at_one() for x in row] for row in G])
        if not chosen:
            continue
        gss = [[G[s][t] for t in chosen] for s in chosen]
        inv = linalg.inverse(gss, M.zero, M.one)
        rows = [G[s] for s in chosen]
        sel[beta] = chosen
        proj[beta] = linalg.matmul_dense(inv, rows, M.zero)
    n = rd.n
    blocks = {b: len(s) for b, s in sel.items()}
    words = {b: _basis_words(M, b) for b in sel}
    labels = {b: [_word_label(words[b][k]) for k in sel[b]] for b in sel}

    def project(tbl, step):
        out = [dict() for _ in range(n)]
        for i in range(n):
            for beta, m in tbl[i].items():
                tgt = shift(beta, i, step)
                if beta not in sel or tgt not in sel:
                    continue
                P = proj[tgt]
                cols = []
                for s in sel[beta]:
                    img = m.cols[s]
                    col = {}
                    for r, row in enumerate(P):
                        acc = M.zero
                        for k, x in img.items():
                            if not is_zero(row[k]):
                                acc = acc + row[k] * x
                        if not is_zero(acc):
                            col[r] = acc
                    cols.append(col)
                out[i][beta] = SparseMatrix(len(sel[tgt]), len(sel[beta]), cols)
        return out

    E = project(M.E, -1)
    F = project(M.F, 1)
    name = "L(%s)" % ",".join(str(x) for x in top)
    L = WeightModule(rd, top, blocks, labels, E, F, height_cutoff=cutoff, integrable=cutoff is None, name=name)
    if cutoff is None:
        expect = rd.weyl_dimension(top)
        if L.dim != expect:
            raise ArithmeticError("L(%s) has dimension %d, Weyl formula gives %d" % (top, L.dim, expect))
    return L


def weight_multiplicities(module):
    return {module.weight(b): module.blocks[b] for b in module.keys}


# ---------------------------------------------------------------------------
# integrability
# ---------------------------------------------------------------------------

@dataclass
class IntegrabilityReport:
    integrable: bool
    nilpotency: dict = field(default_factory=dict)   # (kind, i) -> max N needed
    witness: tuple = None                            # (kind, i, block, index, N)

    def to_json(self):
        return {
            "integrable": self.integrable,
            "nilpotency": {"%s%d" % (k, i + 1): n for (k, i), n in sorted(self.nilpotency.items())},
            "witness": None if self.witness is None else {
                "generator": "%s%d" % (self.witness[0], self.witness[1] + 1),
                "block": list(self.witness[2]), "index": self.witness[3], "power": self.witness[4]},
        }


def integrability_check(module):
    """Find ``N`` with ``E_i^N v = 0 = F_i^N v`` for every basis vector.

    A vector whose ``F``-orbit reaches the height cutoff without vanishing
    is reported as a witness of non-integrability (a truncated module cannot
    certify nilpotence past its cutoff).
    """
    report = IntegrabilityReport(True)
    for kind in ("E", "F"):
        table = module.E if kind == "E" else module.F
        for i in range(module.rd.n):
            worst = 0
            for beta in module.keys:
                for k in range(module.blocks[beta]):
                    vec, b, N = {k: module.one}, beta, 0
                    while vec:
                        m = table[i].get(b)
                        nxt = module.target(kind, i, b)
                        N += 1
                        if m is None:
                            cut = module.height_cutoff
                            if kind == "F" and cut is not None and sum(nxt) > cut:
                                report.integrable = False
                                report.witness = (kind, i, beta, k, N - 1)
                                report.nilpotency[(kind, i)] = None
                                return report
                            break
                        vec = m.apply(vec)
                        b = nxt
                    worst = max(worst, N)
            report.nilpotency[(kind, i)] = worst
    return report


# ---------------------------------------------------------------------------
# classical limit and serialisation
# ---------------------------------------------------------------------------

def classical_limit(module):
    """Specialise every matrix entry at ``v = 1``."""
    if module.symbolic:
        raise ValueError("classical limit needs a numeric highest weight")

    def lim(tbl):
        return [{b: m.map(lambda x: x.at_one()) for b, m in t.items()} for t in tbl]

    return WeightModule(module.rd, module.top, module.blocks, module.labels, lim(module.E), lim(module.F),
                        height_cutoff=module.height_cutoff, integrable=module.integrable,
                        name=module.name + "|v=1", ring="rational")


def dump_module(module):
    """Text container for a numeric module: JSON with scalars in ``c*v^k`` form."""
    if module.symbolic:
        raise ValueError("only numeric modules are serialised")

    def mats(tbl):
        out = []
        for i, t in enumerate(tbl):
            for b in sorted(t):
                entries = [[r, c, str(x)] for r, c, x in sorted(t[b].items(), key=lambda e: e[:2])]
                out.append({"i": i + 1, "depth": list(b), "entries": entries})
        return out

    doc = {
        "format": "qwmono-module/1",
        "gcm": format_gcm(module.rd.gcm),
        "top": [str(x) for x in module.top],
        "height_cutoff": module.height_cutoff,
        "integrable": module.integrable,
        "ring": module.ring,
        "blocks": [{"depth": list(b), "dim": module.blocks[b], "labels": module.labels[b]} for b in module.keys],
        "E": mats(module.E),
        "F": mats(module.F),
    }
    return json.dumps(doc, indent=1, sort_keys=True)


def load_module(text):
    from .cartan import parse_gcm

    doc = json.loads(text)
    if doc.get("format") != "qwmono-module/1":
        raise ValueError("unknown module format %r" % doc.get("format"))
    rd = RootDatum(parse_gcm(doc["gcm"]))
    top = tuple(Fraction(x) for x in doc["top"])
    ring = doc.get("ring", "qv")
    conv = (lambda s: Fraction(s)) if ring == "rational" else parse_scalar
    blocks = {tuple(b["depth"]): b["dim"] for b in doc["blocks"]}
    labels = {tuple(b["depth"]): b["labels"] for b in doc["blocks"]}

    def mats(items, kind):
        tbl = [dict() for _ in range(rd.n)]
        for it in items:
            i, b = it["i"] - 1, tuple(it["depth"])
            tgt = shift(b, i, -1 if kind == "E" else 1)
            m = SparseMatrix(blocks[tgt], blocks[b])
            for r, c, x in it["entries"]:
                m.cols[c][r] = conv(x)
            tbl[i][b] = m
        return tbl

    return WeightModule(rd, top, blocks, labels, mats(doc["E"], "E"), mats(doc["F"], "F"),
                        height_cutoff=doc["height_cutoff"], integrable=doc["integrable"], ring=ring)
