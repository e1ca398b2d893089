"""Normalisation constants fixed once by the rank-one calibration.

``SQUARE_EXPONENT`` is the constant ``c`` in ``S_i^2 = (-1)^{h_i} q^{c k_i}``
with ``k_i`` acting by ``d_i (r(r+2) - m^2) / 2`` on the weight ``m`` line of
an ``r``-string.  ``NORMAL_ORDER_SIGN`` is the exponent ``s`` in
``lambda' = lambda^D * b**s``.  Both are re-derived by
:func:`qwmono.qweyl.square_factorization` and the test-suite checks the
frozen values against the fit.
"""

import json
from fractions import Fraction
from importlib import resources

_DATA = json.loads(resources.files(__package__).joinpath("data/conventions.json").read_text())

SQUARE_EXPONENT = Fraction(_DATA["square_exponent"])
NORMAL_ORDER_SIGN = int(_DATA["normal_order_sign"])
