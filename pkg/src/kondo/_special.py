"""Series-stabilised evaluations of the two cotangent combinations used by
the continuum formulas.  Both have removable singularities at the origin that
lose digits to cancellation when evaluated naively (relative error grows like
eps/x^2 as x -> 0), so below a small cut they switch to rapidly convergent
series.  The cuts are placed where truncation and cancellation errors
balance, around 1e-14."""

from __future__ import annotations

import numpy as np
from scipy.special import zeta

# (x*coth(x) - 1)/x**2 = 1/3 - x**2/45 + 2x**4/945 - x**6/4725 + 2x**8/93555
#                        - 1382x**10/638512875 ...
_COTH_COEFFS = np.array([
    1.0 / 3.0, -1.0 / 45.0, 2.0 / 945.0, -1.0 / 4725.0, 2.0 / 93555.0,
    -1382.0 / 638512875.0,
])
_COTH_CUT = 0.2
# (1 - z*cot(z))/z**2 = 2 * sum_{n>=0} zeta(2n+2) (z/pi)**(2n) / pi**2
_COT_COEFFS = np.array([2.0 * zeta(2 * n + 2) / np.pi ** (2 * n + 2)
                        for n in range(8)])
_COT_CUT = 0.1


def xcothx_m1_over_x2(x):
    """(x*coth(x) - 1) / x**2, finite at x = 0 (value 1/3)."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = np.abs(x) < _COTH_CUT
    x2 = x[small] ** 2
    acc = np.zeros_like(x2)
    for c in _COTH_COEFFS[::-1]:
        acc = acc * x2 + c
    out[small] = acc
    xl = x[~small]
    out[~small] = (xl / np.tanh(xl) - 1.0) / (xl * xl)
    return out


def one_m_zcotz_over_z2(z):
    """(1 - z*cot(z)) / z**2, finite at z = 0 (value 1/3).

    The caller must keep z away from the nonzero poles of cot; no folding is
    done here.
    """
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = np.abs(z) < _COT_CUT
    z2 = z[small] ** 2
    acc = np.zeros_like(z2)
    for c in _COT_COEFFS[::-1]:
        acc = acc * z2 + c
    out[small] = acc
    zl = z[~small]
    out[~small] = (1.0 - zl / np.tan(zl)) / (zl * zl)
    return out
