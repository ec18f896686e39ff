"""Running of the bare coupling with the band cutoff.

Consistency of the ground state fixes the bare coupling J at cutoff L through

    1/J(L) = sum_{k=1}^{L} (Psi_d^k + Psi_d^{-k}) / g
           = sum_{k=1}^{L} (2/pi) Int_0^inf dy /
             ( [omega_k^2 + y^2] [1 + 2|g|^2 Sigma(y)] ),

where the first line is the finite-band residue route and the second the
continuum route (Sigma in its infinite-band form).  J(L) vanishes
logarithmically as the cutoff grows: J(L) * sum_k 1/omega_k -> 1 from above,
which is the asymptotic-freedom statement tracked by af_ratio.

The fluctuation kernel of the infinite linear band,

    chi1(nu) = 1 + sum_{k>0} 2|g|^2/(omega_k^2 - nu^2)
             = 1 + |g'|^2 [ 1/x^2 - pi*cot(pi*x)/x ],   x = nu/c,  g' = g/c,

keeps the interlacing structure of the finite problem: one root per
(c*k, c*(k+1)).
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq

from ._special import one_m_zcotz_over_z2
from .condensate import _sigma_linear, even_profile_integral, occupations, psi_residue
from .errors import KondoError, PoleError
from .grid import MomentumGrid, build_linear_grid
from .spectrum import find_roots

# j_inverse_integral switches from per-level adaptive quadrature to the
# vectorised panel rule above this cutoff (validated against each other in
# the tests)
_QUAD_METHOD_MAX_LAM = 2000
_PANEL_EDGES = np.concatenate([[0.0], np.geomspace(1e-12, 1.0, 61)])
_PANEL_NODES = 12
_CHUNK = 2000


def j_inverse_finite(grid: MomentumGrid, g, xi: float = 0.0) -> float:
    """1/J from the residue route on a finite band.

    The odd (xi) parts cancel between k and -k, so the result does not
    depend on xi; the argument is kept for explicitness.
    """
    g = complex(g)
    if abs(g) == 0.0:
        raise KondoError("the finite route needs g != 0 (ratio Psi/g)")
    spec = find_roots(grid, g)
    cond = psi_residue(spec, occupations(spec, xi))
    return float((cond.psi.sum() / g).real)


def _gl_nodes():
    x, w = np.polynomial.legendre.leggauss(_PANEL_NODES)
    mid = 0.5 * (_PANEL_EDGES[1:] + _PANEL_EDGES[:-1])
    half = 0.5 * (_PANEL_EDGES[1:] - _PANEL_EDGES[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wts = (half[:, None] * w[None, :]).ravel()
    return nodes, wts


def _j_inverse_panels(lam: int, gsq: float, c: float) -> float:
    """Vectorised fixed-panel evaluation of the continuum double expression.

    After the y = omega_k * x substitution every level shares the same node
    set; the geometric panel grading (1e-12..1) resolves the boundary layer
    at x ~ c/omega_k for every k up to ~1e10.
    """
    nodes, wts = _gl_nodes()
    total = 0.0
    for a in range(1, lam + 1, _CHUNK):
        ks = np.arange(a, min(lam + 1, a + _CHUNK), dtype=float)
        om = (c * ks)[:, None]
        head = 1.0 / ((1.0 + nodes ** 2)[None, :]
                      * (1.0 + 2.0 * gsq * _sigma_linear(om * nodes[None, :], c)))
        tail = 1.0 / ((1.0 + nodes ** 2)[None, :]
                      * (1.0 + 2.0 * gsq * _sigma_linear(om / nodes[None, :], c)))
        per_k = (head @ wts + tail @ wts) / (np.pi * om[:, 0])
        total += float(2.0 * per_k.sum())
    return total


def j_inverse_integral(lam: int, g, c: float = 1.0, method: str = "auto") -> float:
    """1/J from the continuum route, band truncated at L levels.

    method: "quad" integrates each level adaptively (error < 1e-10 per
    level), "panels" uses the shared fixed-panel rule, "auto" picks quad up
    to L = 2000 and panels beyond.
    """
    if lam < 1:
        raise KondoError(f"need at least one level, got lam={lam}")
    gsq = abs(g) ** 2
    if gsq == 0.0:
        return float(np.sum(1.0 / (c * np.arange(1, lam + 1))))
    if method == "auto":
        method = "quad" if lam <= _QUAD_METHOD_MAX_LAM else "panels"
    if method == "panels":
        return _j_inverse_panels(lam, gsq, c)
    if method != "quad":
        raise KondoError(f"unknown method {method!r}")
    return float(sum(2.0 * even_profile_integral(c * k, gsq, c=c)
                     for k in range(1, lam + 1)))


def af_ratio(lam: int, g, c: float = 1.0, method: str = "auto") -> float:
    """J(L) * sum_{k<=L} 1/omega_k; equals 1 at g = 0, approaches 1 from
    above as the cutoff grows."""
    s = float(np.sum(1.0 / (c * np.arange(1, lam + 1))))
    return s / j_inverse_integral(lam, g, c=c, method=method)


# -- infinite-band fluctuation kernel ---------------------------------------

def _chi1_shifted(x, gpsq):
    """chi1 as a function of x = nu/c, poles folded out exactly."""
    x = np.asarray(x, dtype=float)
    r = x - np.round(x)
    # only trip when the argument is indistinguishable from the pole in
    # double precision; nearby values are large but perfectly finite
    on_pole = (np.abs(r) <= 8.0 * np.finfo(float).eps * np.maximum(np.abs(x), 1.0)) \
        & (np.round(x) != 0.0)
    if np.any(on_pole):
        raise PoleError(f"nu/c = {float(np.asarray(x).ravel()[np.argmax(on_pole)])!r} "
                        f"sits on a band level")
    small = np.abs(x) < 0.1
    out = np.empty_like(x)
    z = np.pi * x[small]
    out[small] = np.pi ** 2 * one_m_zcotz_over_z2(z)
    xl = x[~small]
    rl = r[~small]
    # cot has period 1 in x, so the reduced argument keeps full precision
    out[~small] = 1.0 / (xl * xl) - np.pi / (np.tan(np.pi * rl) * xl)
    return 1.0 + gpsq * out


def chi1(nu, g, c: float = 1.0):
    """Infinite-linear-band characteristic kernel at frequency nu."""
    gpsq = abs(g / c) ** 2
    nu_arr = np.asarray(nu, dtype=float)
    if gpsq == 0.0:
        out = np.ones_like(nu_arr)
        return out if out.ndim else 1.0
    out = _chi1_shifted(nu_arr / c, gpsq)
    return out if out.ndim else float(out)


def chi1_roots(g, c: float = 1.0, n: int = 5) -> np.ndarray:
    """First n positive roots of chi1; one per interval (c*k, c*(k+1))."""
    gpsq = abs(g / c) ** 2
    if gpsq == 0.0:
        return np.array([])
    roots = np.empty(n)
    for m in range(1, n + 1):
        delta = 1e-9
        f = lambda x: float(_chi1_shifted(np.asarray(x, dtype=float), gpsq))
        # chi1 -> -inf at the left pole; shrink the offset until the sign
        # shows for very weak coupling
        while f(m + delta) >= 0.0:
            delta /= 16.0
            if delta < 1e-300:
                raise KondoError(f"could not bracket chi1 root {m} at g={g!r}")
        # the root sits toward the left end for weak coupling and tends to
        # the coupling-independent zero of the kernel for strong coupling,
        # so it never crowds the right edge
        roots[m - 1] = brentq(f, m + delta, (m + 1) * (1.0 - 1e-9),
                              xtol=1e-15, rtol=8.9e-16)
    return c * roots


def solve_coupling(j: float, grid: MomentumGrid, xi: float = 0.0) -> float:
    """|g| such that j_inverse_finite(grid, |g|) = 1/j.

    1/J is strictly decreasing in |g| from sum_k 1/omega_k (free band) to 0,
    so any J above the free-band threshold has exactly one solution.
    """
    if j <= 0 or not np.isfinite(j):
        raise KondoError(f"J must be positive and finite, got {j}")
    target = 1.0 / j
    lo = 1e-4  # roots collide with band poles below this; see module tests
    hi = max(1.0, 2.0 * np.sqrt(j))
    f = lambda gg: j_inverse_finite(grid, gg, xi) - target
    flo = f(lo)
    if flo <= 0.0:
        threshold = 1.0 / float(np.sum(1.0 / grid.omega_pos))
        raise KondoError(
            f"J = {j} is at or below the free-band threshold (~{threshold:.6g} "
            f"for this grid); no resolvable coupling reproduces it")
    fhi = f(hi)
    while fhi > 0.0:
        hi *= 2.0
        if hi > 1e12:
            raise KondoError(f"no coupling up to {hi} reproduces J = {j}")
        fhi = f(hi)
    return float(brentq(f, lo, hi, xtol=1e-12, rtol=1e-12))
