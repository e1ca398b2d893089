"""Rank one: the monodromy of the Casimir connection around the origin
equals the normal-ordered square of the quantum Weyl group operator.

On V_r every weight space is a line, so the two sides can be compared
entry by entry rather than only through their eigenvalues.

    python3 demos/rank_one_monodromy.py
"""

from fractions import Fraction

import numpy as np

from qwmono.cartan import PureBraidWord, RootDatum
from qwmono.cato import irreducible
from qwmono.qweyl import pure_braid_action, square_factorization
from qwmono.transport import CasimirConnection, compare_spectra, pure_monodromy

rd = RootDatum("A1")
hbar = 0.3 + 0.2j
loop = PureBraidWord([((), 0)])       # the square of the single generator

for r in range(1, 5):
    V = irreducible(rd, (Fraction(r),))
    sq = square_factorization(V, 0)
    conn = CasimirConnection.build(rd, V, hbar)
    numeric = pure_monodromy(conn, loop, tol=1e-11)
    exact = pure_braid_action(V, loop).normal
    rep = compare_spectra(numeric, exact, hbar)
    print("V_%d  fitted exponent c = %s  max |monodromy - normal-ordered S^2| = %.2e"
          % (r, sq.exponent, rep.entrywise))
    print("      diagonal:", np.round(np.diag(numeric), 8))
