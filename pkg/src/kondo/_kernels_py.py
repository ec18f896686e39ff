"""Pure-numpy kernels: reference implementation of the hot loops.

Same call surface as the compiled module `kondo._kernels_cy`; which one is
active is decided in `kondo._backend`.  Everything here is vectorised and
chunked so large bands (L ~ 1e5) stay inside a few hundred MB.

The secular function of the reflection-symmetric problem is written in the
folded form

    f(nu) = 1 + sum_{m>0} 2*gsq / (omega_m**2 - nu**2)

so the characteristic function is X(nu) = nu * f(nu) and its derivative is

    X'(nu) = 1 + sum_{m>0} gsq * [ (nu-omega_m)**-2 + (nu+omega_m)**-2 ].

f is strictly increasing between consecutive positive poles, which makes the
bracketed Newton iteration below safe.
"""

from __future__ import annotations

import numpy as np

_EPS = np.finfo(float).eps
# chunk sizes keep the (points x levels) temporaries around 64 MB
_CHUNK_ELEMS = 1 << 23


def _as1d(a):
    return np.ascontiguousarray(np.asarray(a, dtype=float).ravel())


def secular_fn(nu, omega_pos, gsq):
    """f(nu) evaluated elementwise; no pole checking here."""
    nu = _as1d(nu)
    om = _as1d(omega_pos)
    osq = om * om
    out = np.empty(nu.shape)
    step = max(1, _CHUNK_ELEMS // max(om.size, 1))
    for a in range(0, nu.size, step):
        b = min(nu.size, a + step)
        d = osq[None, :] - nu[a:b, None] ** 2
        out[a:b] = 1.0 + (2.0 * gsq / d).sum(axis=1)
    return out


def _f_and_deriv(nu, osq, gsq):
    f = np.empty(nu.shape)
    fp = np.empty(nu.shape)
    step = max(1, _CHUNK_ELEMS // max(osq.size, 1))
    for a in range(0, nu.size, step):
        b = min(nu.size, a + step)
        d = osq[None, :] - nu[a:b, None] ** 2
        r = 2.0 * gsq / d
        f[a:b] = 1.0 + r.sum(axis=1)
        fp[a:b] = (r * (2.0 * nu[a:b, None]) / d).sum(axis=1)
    return f, fp


def xprime(nu, omega_pos, gsq):
    """X'(nu) elementwise.  Diverges (inf) if nu sits exactly on a pole."""
    nu = _as1d(nu)
    om = _as1d(omega_pos)
    out = np.empty(nu.shape)
    step = max(1, _CHUNK_ELEMS // max(om.size, 1))
    for a in range(0, nu.size, step):
        b = min(nu.size, a + step)
        dm = nu[a:b, None] - om[None, :]
        dp = nu[a:b, None] + om[None, :]
        out[a:b] = 1.0 + (gsq / (dm * dm) + gsq / (dp * dp)).sum(axis=1)
    return out


def positive_roots(omega_pos, gsq):
    """All L positive roots of f, ascending, refined to a few ulp.

    Brackets: one root in each (omega_m, omega_{m+1}) plus one exterior root
    in (omega_L, sqrt(omega_L**2 + 2*L*gsq)].  The upper exterior bound is
    analytic: there every folded term is >= -1/L, so f >= 0.  All intervals
    are polished simultaneously with bisection-safeguarded Newton.
    """
    om = _as1d(omega_pos)
    n = om.size
    if gsq == 0.0:
        return om.copy()
    osq = om * om
    lo = om.copy()
    hi = np.empty(n)
    hi[:-1] = om[1:]
    hi[-1] = np.sqrt(om[-1] ** 2 + 2.0 * n * gsq)
    x = 0.5 * (lo + hi)
    roots = np.empty(n)
    idx = np.arange(n)
    for _ in range(200):
        if idx.size == 0:
            break
        f, fp = _f_and_deriv(x, osq, gsq)
        neg = f < 0.0
        lo[neg] = x[neg]
        hi[~neg] = x[~neg]
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = x - f / fp
        bad = ~np.isfinite(xn) | (xn <= lo) | (xn >= hi)
        xn[bad] = 0.5 * (lo[bad] + hi[bad])
        done = (np.abs(xn - x) <= 4.0 * _EPS * np.abs(xn)) \
            | ((hi - lo) <= 4.0 * _EPS * hi)
        roots[idx[done]] = xn[done]
        keep = ~done
        lo, hi, x, idx = lo[keep], hi[keep], xn[keep], idx[keep]
    else:
        # bracket width is halved at least every other sweep, so 200 suffices
        # for any double-precision interval; record whatever we have.
        roots[idx] = x
    return roots


def cauchy_sum(targets, poles, coeffs):
    """out[i] = sum_j coeffs[j] / (targets[i] - poles[j]), all real."""
    t = _as1d(targets)
    p = _as1d(poles)
    cf = _as1d(coeffs)
    out = np.empty(t.shape)
    step = max(1, _CHUNK_ELEMS // max(p.size, 1))
    for a in range(0, t.size, step):
        b = min(t.size, a + step)
        out[a:b] = (cf[None, :] / (t[a:b, None] - p[None, :])).sum(axis=1)
    return out


def sigma_direct(y, omega_pos):
    """out[i] = sum_m 1 / (y[i]**2 + omega_m**2)."""
    yv = _as1d(y)
    om = _as1d(omega_pos)
    osq = om * om
    out = np.empty(yv.shape)
    step = max(1, _CHUNK_ELEMS // max(om.size, 1))
    for a in range(0, yv.size, step):
        b = min(yv.size, a + step)
        out[a:b] = (1.0 / (yv[a:b, None] ** 2 + osq[None, :])).sum(axis=1)
    return out
