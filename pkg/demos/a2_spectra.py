"""Rank two: for each positive root of A2, transport around the pure braid
generator and compare eigenvalues with the exact quantum side, weight by weight.

    python3 demos/a2_spectra.py
"""

from fractions import Fraction

from qwmono.cartan import PureBraidWord, RootDatum, letter_root
from qwmono.cato import irreducible
from qwmono.qweyl import positive_root_letters, pure_braid_action
from qwmono.transport import CasimirConnection, TransportStats, compare_spectra, pure_monodromy

rd = RootDatum("A2")
hbar = 0.2

for top in [(1, 0), (1, 1)]:
    V = irreducible(rd, tuple(Fraction(x) for x in top))
    conn = CasimirConnection.build(rd, V, hbar)
    print("L%s, dim %d" % (top, V.dim))
    for letter in positive_root_letters(rd):
        p = PureBraidWord((letter,))
        stats = TransportStats()
        rep = compare_spectra(pure_monodromy(conn, p, stats=stats), pure_braid_action(V, p).normal, hbar)
        print("  root %s: eigenvalue mismatch %.1e over %d weight spaces (%d RHS evaluations)"
              % (letter_root(rd, letter), rep.max_mismatch, len(rep.blocks), stats.evaluations))
