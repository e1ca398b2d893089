"""Quantum Weyl group operators and the pure braid group actions they induce.

``S_i`` acts on an integrable module by

    S_i v = sum_{a - b + c = -mu(h_i)} (-1)^b q_i^(b - ac) E_i^(a) F_i^(b) E_i^(c) v

for ``v`` of weight ``mu``.  Squares of ``S_i`` factor as a sign times a
weight-zero operator, a ``q``-power of the truncated ``sl2`` Casimir built
spectrally from the ``E_i``-strings of the module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .cartan import CartanError, letter_coroot, letter_root, validate_pure
from .conventions import NORMAL_ORDER_SIGN, SQUARE_EXPONENT
from .linalg import SparseMatrix, is_zero
from .modules import Operator, shift
from .scalars import ScalarQ, q_factorial, q_power

__all__ = [
    "q_weyl_operator", "q_weyl_inverse", "weyl_word_operator", "braid_relation_check",
    "SL2String", "sl2_strings", "string_operator", "quantum_casimir_diagonal", "q_casimir_power",
    "SquareFactorization", "square_factorization", "PureBraidReport", "pure_braid_action",
    "homomorphism_check", "letter_factorization_check", "positive_root_letters",
    "rank_one_verma_casimir", "verma_embedding_commutes",
]


def _cache(module):
    if not hasattr(module, "_qweyl"):
        module._qweyl = {}
    return module._qweyl


def _require_integrable(module):
    if not module.integrable:
        raise ValueError("quantum Weyl group operators need an integrable module")


def _powers(module, kind, i, beta, start):
    """Successive images ``X^(k) start`` (divided powers) as ``[(block, SparseMatrix)]``."""
    d = module.rd.d[i]
    table = module.E if kind == "E" else module.F
    out = [(beta, start)]
    b, m, k = beta, start, 0
    while True:
        g = table[i].get(b)
        if g is None:
            break
        m = g @ m
        b = module.target(kind, i, b)
        k += 1
        if m.is_zero():
            break
        out.append((b, m))
    # divide the plain powers by [k]_i!
    return [(blk, mat.scale(module.scalar(q_factorial(k, d).inverse())) if k > 1 else mat)
            for k, (blk, mat) in enumerate(out)]


def q_weyl_operator(module, i):
    """``S_i`` as an operator mapping block ``mu`` to block ``s_i(mu)``."""
    _require_integrable(module)
    cache = _cache(module)
    if ("S", i) in cache:
        return cache[("S", i)]
    d = module.rd.d[i]
    blocks = {}
    for beta in module.keys:
        m = int(module.coroot_value(beta, i))
        tgt = module.reflect_key(beta, i)
        if module.dim_of(tgt) != module.dim_of(beta):
            raise ArithmeticError("weight spaces %s and %s differ in dimension" % (beta, tgt))
        ident = SparseMatrix.identity(module.blocks[beta], module.one)
        total = SparseMatrix(module.blocks[tgt], module.blocks[beta])
        for c, (bc, mc) in enumerate(_powers(module, "E", i, beta, ident)):
            for b, (bb, mb) in enumerate(_powers(module, "F", i, bc, mc)):
                a = b - c - m
                if a < 0:
                    continue
                pa = _powers(module, "E", i, bb, mb)
                if a >= len(pa):
                    continue
                ba, ma = pa[a]
                assert ba == tgt
                coeff = q_power(b - a * c, d)
                if b % 2:
                    coeff = -coeff
                total = total + ma.scale(module.scalar(coeff))
        blocks[(tgt, beta)] = total
    op = Operator(module, blocks)
    cache[("S", i)] = op
    return op


def q_weyl_inverse(module, i):
    cache = _cache(module)
    if ("Sinv", i) not in cache:
        cache[("Sinv", i)] = q_weyl_operator(module, i).inverse()
    return cache[("Sinv", i)]


def weyl_word_operator(module, word, inverse=False):
    """``S_{w[0]} S_{w[1]} ...`` (or its inverse)."""
    op = Operator.identity(module)
    if inverse:
        for j in word:
            op = q_weyl_inverse(module, j) @ op
    else:
        for j in reversed(word):
            op = q_weyl_operator(module, j) @ op
    return op


def braid_relation_check(module, i, j):
    """Exact check of ``S_i S_j S_i ... = S_j S_i S_j ...`` (``m_ij`` factors each)."""
    m = module.rd.braid_order(i, j)
    if m is None:
        raise CartanError("m_ij is infinite for (%d, %d); no braid relation to check" % (i + 1, j + 1))
    left = [i if k % 2 == 0 else j for k in range(m)]
    right = [j if k % 2 == 0 else i for k in range(m)]
    return weyl_word_operator(module, left) == weyl_word_operator(module, right)


# ---------------------------------------------------------------------------
# sl2 strings and the truncated Casimir
# ---------------------------------------------------------------------------

@dataclass
class SL2String:
    top_block: tuple
    length: int                  # r: the string spans weights r, r-2, ..., -r
    vectors: list                # [(block, {index: coeff})], F_i-powers of the top vector

    def weight_lines(self):
        return [(blk, self.length - 2 * k) for k, (blk, _) in enumerate(self.vectors)]


def sl2_strings(module, i):
    """Decompose ``module`` into strings for the ``i``-th ``U_q(sl2)``."""
    _require_integrable(module)
    cache = _cache(module)
    if ("strings", i) in cache:
        return cache[("strings", i)]
    zero, one = module.zero, module.one
    out = []
    for beta in module.keys:
        dim = module.blocks[beta]
        e = module.E[i].get(beta)
        if e is None:
            kernel = [{k: one} for k in range(dim)]
        else:
            dense = e.to_dense(zero)
            kernel = [{k: x for k, x in enumerate(vec) if not is_zero(x)}
                      for vec in linalg.nullspace(dense, dim, zero, one)]
        r = module.coroot_value(beta, i)
        if kernel and (r < 0 or r.denominator != 1):
            raise ArithmeticError("top vector of negative weight %s: module not integrable" % r)
        for vec in kernel:
            vectors = [(beta, vec)]
            b, cur = beta, vec
            for _ in range(int(r)):
                cur = module.F[i][b].apply(cur)
                b = shift(b, i, 1)
                vectors.append((b, cur))
            out.append(SL2String(beta, int(r), vectors))
    total = sum(s.length + 1 for s in out)
    if total != module.dim:
        raise ArithmeticError("strings cover %d of %d dimensions" % (total, module.dim))
    cache[("strings", i)] = out
    return out


def string_operator(module, i, func):
    """Operator acting on the weight-``m`` line of each ``r``-string by ``func(r, m)``."""
    strings = sl2_strings(module, i)
    zero = module.zero
    cols, vals = {}, {}
    for s in strings:
        for k, (blk, vec) in enumerate(s.vectors):
            cols.setdefault(blk, []).append(vec)
            vals.setdefault(blk, []).append(module.scalar(func(s.length, s.length - 2 * k)))
    blocks = {}
    for blk, vecs in cols.items():
        n = module.blocks[blk]
        P = [[vec.get(r, zero) for vec in vecs] for r in range(n)]
        Pinv = linalg.inverse(P, zero, module.one)
        PD = [[P[r][c] * vals[blk][c] for c in range(n)] for r in range(n)]
        blocks[(blk, blk)] = SparseMatrix.from_dense(linalg.matmul_dense(PD, Pinv, zero))
    return Operator(module, blocks)


def casimir_eigenvalue(d, r, m):
    """``d (r(r+2) - m^2) / 2``: the truncated Casimir on a weight-``m`` line of an ``r``-string."""
    return Fraction(d * (r * (r + 2) - m * m), 2)


def quantum_casimir_diagonal(module, i):
    """The truncated Casimir ``k_i`` as an operator with rational eigenvalues."""
    d = module.rd.d[i]
    return string_operator(module, i, lambda r, m: ScalarQ(casimir_eigenvalue(d, r, m)))


def q_casimir_power(module, i, c=SQUARE_EXPONENT):
    """``q**(c * k_i)``, formed eigenvalue by eigenvalue."""
    d = module.rd.d[i]
    return string_operator(module, i, lambda r, m: q_power(c * casimir_eigenvalue(d, r, m)))


def sign_operator(module, coroot):
    """Diagonal ``(-1)**mu(coroot)`` on each weight space."""
    vals = {}
    for beta in module.keys:
        m = module.real.pair(module.weight(beta), coroot)
        if m.denominator != 1:
            raise ValueError("non-integral weight pairing")
        vals[beta] = module.scalar(ScalarQ(-1 if m % 2 else 1))
    return Operator.diagonal(module, vals)


@dataclass
class SquareFactorization:
    square: Operator
    sign: Operator
    weight_zero: Operator
    exponent: Fraction           # fitted c, or None when every k-eigenvalue vanishes
    matches_frozen: bool


def _monomial_exponent(x):
    if not x.is_laurent() or not x.num.is_monomial():
        return None
    k = x.num.low()
    return k if x.num._c[k] == 1 else None


def square_factorization(module, i):
    """Factor ``S_i^2`` as sign times ``q**(c k_i)`` and fit ``c``.

    Raises ``ArithmeticError`` when the weight-zero remainder is not a
    ``q``-power of ``k_i`` with one constant ``c`` for all strings.
    """
    S = q_weyl_operator(module, i)
    square = S @ S
    sign = sign_operator(module, module.real.coroots[i])
    rest = sign @ square
    if not rest.preserves_weights():
        raise ArithmeticError("S_i^2 does not preserve weights")
    d = module.rd.d[i]
    fitted = None
    for s in sl2_strings(module, i):
        for k, (blk, vec) in enumerate(s.vectors):
            image = rest.apply(blk, vec).get(blk, {})
            pivot = next(iter(vec))
            ratio = image.get(pivot, module.zero) / vec[pivot]
            scaled = {t: x * ratio for t, x in vec.items()}
            if image != scaled:
                raise ArithmeticError("string vector is not an eigenvector of the remainder")
            e = _monomial_exponent(ratio)
            if e is None:
                raise ArithmeticError("remainder eigenvalue %s is not a power of v" % ratio)
            kval = casimir_eigenvalue(d, s.length, s.length - 2 * k)
            if kval == 0:
                if e != 0:
                    raise ArithmeticError("nontrivial remainder on a k = 0 line")
                continue
            c = Fraction(e, 2) / kval
            if fitted is None:
                fitted = c
            elif c != fitted:
                raise ArithmeticError("no single exponent constant: %s vs %s" % (fitted, c))
    frozen = fitted is None or fitted == SQUARE_EXPONENT
    return SquareFactorization(square, sign, rest, fitted, frozen)


# ---------------------------------------------------------------------------
# pure braid actions
# ---------------------------------------------------------------------------

def _letter_operator(module, letter):
    core = q_weyl_operator(module, letter.i)
    core = core @ core
    Sw = weyl_word_operator(module, letter.w)
    Swinv = weyl_word_operator(module, letter.w, inverse=True)
    op = Sw @ core @ Swinv
    if letter.e == -1:
        op = Sw @ q_weyl_inverse(module, letter.i) @ q_weyl_inverse(module, letter.i) @ Swinv
    return op


@dataclass
class PureBraidReport:
    word: object
    full: Operator               # lambda(p)
    sign: Operator               # epsilon(p)
    weight_zero: Operator        # lambda^D(p)
    abelian: Operator            # b(p)
    normal: Operator             # lambda'(p)

    def eigen_table(self, which="normal"):
        op = getattr(self, which)
        mod = op.module
        rows = []
        for beta in mod.keys:
            m = op.block(beta, beta)
            rows.append({"weight": [str(x) for x in mod.weight(beta)],
                         "matrix": [[str(x) for x in row] for row in m.to_dense(mod.zero)]})
        return rows

    def to_json(self):
        return {
            "letters": [{"w": [j + 1 for j in l.w], "i": l.i + 1, "e": l.e} for l in self.word.letters],
            "weight_zero_preserves_weights": self.weight_zero.preserves_weights(),
            "sign": self.eigen_table("sign"),
            "weight_zero": self.eigen_table("weight_zero"),
            "abelian": self.eigen_table("abelian"),
            "normal": self.eigen_table("normal"),
        }


def abelian_diagonal(module, p, power=1):
    """Diagonal ``v**(-2 * power * sum e d_beta mu(h_beta))``: the abelian factor of ``p``."""
    rd = module.rd
    vals = {}
    for beta in module.keys:
        mu = module.weight(beta)
        total = Fraction(0)
        for letter in p.letters:
            root = rd.root(letter_root(rd, letter))
            total += letter.e * root.d * rd.real.pair(mu, letter_coroot(rd, letter))
        vals[beta] = module.scalar(q_power(-power * total))
    return Operator.diagonal(module, vals)


def pure_braid_action(module, p, sign=NORMAL_ORDER_SIGN):
    """``lambda(p)``, its sign and weight-zero parts, ``b(p)`` and ``lambda'(p)``."""
    validate_pure(module.rd, p)
    full = Operator.identity(module)
    for letter in p.letters:
        full = full @ _letter_operator(module, letter)
    eps = {}
    from .cartan import sign_character
    for beta in module.keys:
        eps[beta] = module.scalar(ScalarQ(sign_character(module.rd, p, module.weight(beta))))
    eps = Operator.diagonal(module, eps)
    weight_zero = eps @ full           # epsilon is an involution
    if not weight_zero.preserves_weights():
        raise ArithmeticError("weight-zero part moves weights")
    b = abelian_diagonal(module, p)
    bs = b if sign == 1 else abelian_diagonal(module, p, power=-1)
    return PureBraidReport(p, full, eps, weight_zero, b, weight_zero @ bs)


def homomorphism_check(module, p, p2):
    lhs = pure_braid_action(module, p * p2).weight_zero
    rhs = pure_braid_action(module, p).weight_zero @ pure_braid_action(module, p2).weight_zero
    return lhs == rhs


def positive_root_letters(rd):
    """One pure letter ``(w, i, +1)`` per positive root, from the stored witnesses."""
    from .cartan import PureLetter
    return [PureLetter(tuple(r.witness[0]), r.witness[1], 1) for r in rd.positive_roots]


def letter_factorization_check(module, letter):
    """``lambda^D(S_w S_i^(2e) S_w^-1) == S_w q^(e c k_i) S_w^-1`` exactly."""
    from .cartan import PureBraidWord
    lhs = pure_braid_action(module, PureBraidWord((letter,))).weight_zero
    Sw = weyl_word_operator(module, letter.w)
    Swinv = weyl_word_operator(module, letter.w, inverse=True)
    rhs = Sw @ q_casimir_power(module, letter.i, letter.e * SQUARE_EXPONENT) @ Swinv
    return lhs == rhs


# ---------------------------------------------------------------------------
# rank one Verma modules
# ---------------------------------------------------------------------------

def rank_one_verma_casimir(module, i=0):
    """``q**(c k)`` on a Verma module of ``U_q(sl2)`` through its Casimir scalar.

    On ``M(lambda)`` the Casimir is the scalar ``d lambda(lambda+2)/2``,
    so ``k`` acts on the weight ``m`` line by ``d (lambda(lambda+2) - m^2)/2``.
    """
    d = module.rd.d[i]
    lam = int(module.top[i])
    vals = {}
    for beta in module.keys:
        m = int(module.coroot_value(beta, i))
        vals[beta] = q_power(SQUARE_EXPONENT * Fraction(d * (lam * (lam + 2) - m * m), 2))
    return Operator.diagonal(module, vals)


def verma_embedding_commutes(big, small, i=0):
    """Naturality of the rank-one weight-zero operator along ``M(-lambda-2) -> M(lambda)``.

    ``big`` is ``M(lambda)`` and ``small`` is ``M(-lambda-2)`` for ``U_q(sl2)``,
    both in the word basis ``F^k v``.  The embedding sends ``F^k v'`` to
    ``F^(k + lambda + 1) v``; it intertwines ``F`` trivially, and this checks
    that it intertwines ``E`` and the two Casimir powers.
    """
    lam = int(big.top[i])
    off = lam + 1
    if int(small.top[i]) != -lam - 2:
        raise ValueError("small Verma must have highest weight -lambda-2")
    Dbig = rank_one_verma_casimir(big, i)
    Dsmall = rank_one_verma_casimir(small, i)
    for beta in small.keys:
        tgt = shift(beta, i, off)
        if tgt not in big.blocks:
            continue
        if Dsmall.block(beta, beta)[0, 0] != Dbig.block(tgt, tgt)[0, 0]:
            return False
        eb = big.E[i].get(tgt)
        es = small.E[i].get(beta)
        eb = eb[0, 0] if eb is not None else 0
        es = es[0, 0] if es is not None else 0
        if eb != es:
            return False
    return True
