"""Ground-state condensate: occupations, impurity column, continuum limits.

The ground state of the effective matrix fills every negative root, leaves
positive roots empty and puts 1/2 + xi particles in the zero mode,
xi in (-1/2, 1/2].  Its matrix is Psi = U diag(mu) U^dagger; the physically
interesting part is the impurity column

    Psi_d^k = g * sum_a mu_a / ( X'(nu_a) * (omega_k - nu_a) ),

split into an even piece (the screening cloud, xi-independent) and an odd
piece carrying the entire xi dependence:

    odd:   Psi_d^k - Psi_d^{-k} = 2 g xi / ( omega_k * [1 + 2|g|^2 Sigma(0)] )
    even:  Psi_d^k + Psi_d^{-k} = (2g/pi) Int_0^inf dy /
                                   ( [omega_k^2 + y^2][1 + 2|g|^2 Sigma(y)] )

with the mode sum Sigma(y) = sum_{m>0} 1/(y^2 + omega_m^2).  For the linear
band omega_m = c*m the sum has the closed form

    Sigma(y) = ( pi*y*coth(pi*y/c) - c ) / ( 2*c*y^2 ),   Sigma(0) = pi^2/(6c^2).

Note the factor 2 in [1 + 2|g|^2 Sigma(0)]: that bracket is X'(0) of the
infinite band, which both the residue algebra and the dense-diagonalisation
cross-check pin down.  (A widely-quoted closed form drops the 2; see
tests/test_condensate.py for the numerical refutation.)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from ._backend import kernels
from ._special import xcothx_m1_over_x2
from .errors import KondoError, QuadratureError
from .grid import MomentumGrid
from .spectrum import Spectrum

_QUAD_OPTS = dict(epsabs=1e-12, epsrel=1e-11, limit=200)
# total error estimate allowed from the two quadrature pieces of one integral
_QUAD_BUDGET = 1e-10


@dataclass
class Occupation:
    """Eigenmode occupations aligned with Spectrum.roots."""

    xi: float
    mu: np.ndarray


def occupations(spectrum: Spectrum, xi: float) -> Occupation:
    """Ground-state filling: 1 below zero, 1/2 + xi on the zero mode."""
    if not (-0.5 < xi <= 0.5):
        raise KondoError(f"xi must lie in (-1/2, 1/2], got {xi}")
    mu = np.where(spectrum.roots < 0.0, 1.0, 0.0)
    mu[spectrum.zero_index] = 0.5 + xi
    return Occupation(xi=float(xi), mu=mu)


@dataclass
class Condensate:
    """Impurity column Psi_d^k on a symmetric set of levels.

    kind is "grid" (residue route on a finite band) or "continuum".
    k is ascending and contains -k whenever it contains k, so the mirrored
    value sits at the reversed position.
    """

    kind: str
    g: complex
    xi: float
    k: np.ndarray
    omega: np.ndarray
    psi: np.ndarray
    c: float
    grid: MomentumGrid | None = None
    spectrum: Spectrum | None = None
    occupation: Occupation | None = None

    def even(self) -> np.ndarray:
        """(Psi_d^k + Psi_d^{-k}) / 2, aligned with k."""
        return 0.5 * (self.psi + self.psi[::-1])

    def odd(self) -> np.ndarray:
        """(Psi_d^k - Psi_d^{-k}) / 2, aligned with k."""
        return 0.5 * (self.psi - self.psi[::-1])

    def matrix(self) -> np.ndarray:
        """Full ground-state matrix U diag(mu) U^dagger (grid route only)."""
        if self.spectrum is None or self.occupation is None:
            raise KondoError("full matrix requires the finite-grid route")
        U = self.spectrum.eigenbasis()
        return (U * self.occupation.mu) @ U.conj().T


def psi_residue(spectrum: Spectrum, occupation: Occupation) -> Condensate:
    """Impurity column from the residue sum over secular roots."""
    grid = spectrum.grid
    if spectrum.g == 0:
        # decoupled band: the column vanishes, and the residue sum would put
        # zero-weight poles right on the band energies (0/0)
        vals = np.zeros(grid.dim - 1)
    else:
        coeff = occupation.mu * spectrum.impurity_weight
        vals = spectrum.g * kernels.cauchy_sum(grid.omega_signed,
                                               spectrum.roots, coeff)
    return Condensate(kind="grid", g=spectrum.g, xi=occupation.xi,
                      k=grid.momenta_signed.astype(int),
                      omega=grid.omega_signed.copy(),
                      psi=vals.astype(complex), c=grid.c, grid=grid,
                      spectrum=spectrum, occupation=occupation)


# -- mode sums -------------------------------------------------------------

def _sigma_linear(y, c):
    """Closed form of the infinite linear-band mode sum, elementwise."""
    y = np.asarray(y, dtype=float)
    x = np.pi * y / c
    return (np.pi ** 2 / (2.0 * c * c)) * xcothx_m1_over_x2(x)


def sigma_sum(y, grid: MomentumGrid | None = None, c: float = 1.0,
              mode: str = "auto"):
    """Mode sum Sigma(y) = sum_{m>0} 1/(y^2 + omega_m^2).

    mode:
      "continuum" (or grid=None): closed form for the infinite linear band;
      "finite" (default with a grid): direct sum over the table;
      "extended": direct sum plus an integral estimate of the tail beyond L,
                  for custom tables that keep growing linearly.
    """
    y_arr = np.asarray(y, dtype=float)
    if np.any(y_arr < 0.0):
        raise KondoError("sigma_sum expects y >= 0")
    if grid is None or mode == "continuum":
        if grid is not None:
            c = grid.c
        out = _sigma_linear(y_arr, c)
        return out if out.ndim else float(out)
    if mode not in ("auto", "finite", "extended"):
        raise KondoError(f"unknown sigma_sum mode {mode!r}")
    out = kernels.sigma_direct(y_arr.ravel(), grid.omega_pos) \
        .reshape(y_arr.shape)
    if mode == "extended":
        # tail ~ Int_{L+1/2}^inf dk / (y^2 + (c k)^2); the half-step offset is
        # the usual midpoint correction
        cc = grid.c
        edge = cc * (grid.lam + 0.5)
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = np.where(y_arr > 0.0,
                            (np.pi / 2 - np.arctan(edge / np.maximum(y_arr, 1e-300)))
                            / (cc * np.maximum(y_arr, 1e-300)),
                            1.0 / (cc * edge))
        out = out + tail
    return out if out.ndim else float(out)


# -- continuum impurity column ----------------------------------------------

def _quad_pair(f_head, f_tail, budget=_QUAD_BUDGET, points=None):
    head, err1 = quad(f_head, 0.0, 1.0, points=points, **_QUAD_OPTS)
    tail, err2 = quad(f_tail, 0.0, 1.0, **_QUAD_OPTS)
    if err1 + err2 > budget:
        raise QuadratureError(
            f"quadrature error estimate {err1 + err2:.3e} above {budget:.0e}")
    return head + tail


def even_profile_integral(abs_omega: float, gsq: float, c: float = 1.0,
                          sigma=None) -> float:
    """(1/pi) Int_0^inf dy / ((abs_omega^2 + y^2)(1 + 2 gsq Sigma(y))).

    This is the even part of Psi_d^k divided by g.  Substituting
    y = abs_omega * x and mapping the tail x in [1, inf) through x -> 1/u
    leaves two finite integrals handled by adaptive quadrature.  `sigma`
    defaults to the closed-form linear-band sum.
    """
    if sigma is None:
        sig = lambda yy: _sigma_linear(yy, c)
    else:
        sig = sigma
    w = float(abs_omega)

    def head(x):
        return 1.0 / ((1.0 + x * x) * (1.0 + 2.0 * gsq * sig(w * x)))

    def tail(u):
        return 1.0 / ((1.0 + u * u) * (1.0 + 2.0 * gsq * sig(w / u)))

    # the head integrand turns over at y ~ c, i.e. x ~ c/w; flag it for the
    # subdivider when it is an interior boundary layer
    layer = c / w
    pts = (layer,) if 1e-14 < layer < 1.0 else None
    total = _quad_pair(head, tail, points=pts)
    return total / (np.pi * w)


def psi_integral(k: int, g: complex, xi: float, c: float = 1.0,
                 grid: MomentumGrid | None = None) -> complex:
    """Continuum (infinite-band) impurity column at level k.

    Uses the closed-form linear mode sum by default; passing a grid switches
    Sigma to the extended direct+tail estimate for that table (the level
    energy is then read from the table as well).
    """
    k = int(k)
    if k == 0:
        raise KondoError("k = 0 is not a band level")
    if not (-0.5 < xi <= 0.5):
        raise KondoError(f"xi must lie in (-1/2, 1/2], got {xi}")
    g = complex(g)
    gsq = abs(g) ** 2
    if gsq == 0.0:
        return 0j
    if grid is None:
        omega_k = c * k
        sigma = None
        sigma0 = float(_sigma_linear(np.zeros(1), c)[0])
    else:
        c = grid.c
        omega_k = float(np.sign(k)) * grid.omega(abs(k))
        sigma = lambda yy: sigma_sum(yy, grid=grid, mode="extended")
        sigma0 = float(sigma(0.0))
    odd = g * xi / (omega_k * (1.0 + 2.0 * gsq * sigma0))
    even = g * even_profile_integral(abs(omega_k), gsq, c=c, sigma=sigma)
    return odd + even


def psi_linear_closed(k: int, gprime: complex, xi: float) -> complex:
    """Closed-form impurity column for the linear band, slope units.

    gprime is the coupling measured in units of the slope (g/c); the result
    is dimensionless and equals psi_integral(k, g, xi, c) with gprime = g/c.
    The integrand is written with the cancellation-free combination
    (pi*a*coth(pi*a) - 1)/a^2 so small a needs no special treatment:

        Psi_d^k = gprime*xi / (k * [1 + 2 zeta(2) |gprime|^2])
                + (gprime/pi) Int_0^inf da /
                  ( (k^2 + a^2) * [1 + |gprime|^2 * (pi*a*coth(pi*a) - 1)/a^2] )
    """
    k = int(k)
    if k == 0:
        raise KondoError("k = 0 is not a band level")
    if not (-0.5 < xi <= 0.5):
        raise KondoError(f"xi must lie in (-1/2, 1/2], got {xi}")
    gprime = complex(gprime)
    gpsq = abs(gprime) ** 2
    if gpsq == 0.0:
        return 0j
    zeta2 = np.pi ** 2 / 6.0
    odd = gprime * xi / (k * (1.0 + 2.0 * zeta2 * gpsq))
    kk = float(k * k)

    def bracket(a):
        # 1 + |g'|^2 (pi a coth(pi a) - 1)/a^2
        return 1.0 + gpsq * np.pi ** 2 * xcothx_m1_over_x2(np.pi * a)

    def head(a):
        return 1.0 / ((kk + a * a) * bracket(a))

    def tail(u):
        a = 1.0 / u
        return 1.0 / ((kk * u * u + 1.0) * bracket(a))

    layer = 1.0 / abs(k)
    pts = (layer,) if 1e-14 < layer < 1.0 else None
    even = gprime / np.pi * _quad_pair(head, tail, points=pts)
    return odd + even


def condensate_profile(source, g, xi: float, kmax: int | None = None,
                       c: float = 1.0) -> Condensate:
    """Impurity-column table over k = -kmax..-1, 1..kmax.

    source is either a MomentumGrid (residue route over its levels) or the
    string "continuum" (integral route on the infinite linear band with
    slope c).
    """
    from .spectrum import build_spectrum

    if isinstance(source, MomentumGrid):
        spec = build_spectrum(source, g)
        cond = psi_residue(spec, occupations(spec, xi))
        if kmax is not None:
            if kmax < 1 or kmax > source.lam:
                raise KondoError(f"kmax must lie in 1..{source.lam}, got {kmax}")
            keep = np.abs(cond.k) <= kmax
            return Condensate(kind="grid", g=cond.g, xi=cond.xi,
                              k=cond.k[keep], omega=cond.omega[keep],
                              psi=cond.psi[keep], c=cond.c, grid=source,
                              spectrum=spec, occupation=cond.occupation)
        return cond
    if source != "continuum":
        raise KondoError(f"source must be a grid or 'continuum', got {source!r}")
    if kmax is None or kmax < 1:
        raise KondoError("continuum profiles need kmax >= 1")
    ks = np.concatenate([np.arange(-kmax, 0), np.arange(1, kmax + 1)])
    psi = np.array([psi_integral(int(kk), g, xi, c=c) for kk in ks])
    return Condensate(kind="continuum", g=complex(g), xi=float(xi),
                      k=ks.astype(int), omega=c * ks.astype(float), psi=psi,
                      c=float(c))
