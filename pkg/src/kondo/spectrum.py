"""Secular equation of the hybridised band: roots, weights, eigenbasis.

With a reflection-symmetric band the characteristic function folds to

    X(nu) = nu * [ 1 + sum_{m>0} 2|g|^2 / (omega_m^2 - nu^2) ],

an odd function of nu.  nu = 0 is always a root; for g != 0 the remaining
roots strictly interlace the band: exactly one in every (omega_m, omega_{m+1})
and one above omega_L, mirrored on the negative side.  Eigenvectors come from
the residue formula

    U_a^k = g * U_a^d / (omega_k - nu_a),      |U_a^d|^2 = 1 / X'(nu_a),

with the convention that the impurity component U_a^d is real and positive.
For g = 0 the matrix is already diagonal; we keep roots {omega_k} union {0},
unit-vector eigencolumns, and report X' = inf on the conduction roots so the
impurity weight 1/X' is zero there.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .errors import BracketError, PoleError
from .grid import MomentumGrid

# full unitarity of the eigenbasis is verified at construction only up to
# this dimension; above it the O(dim^3) check is replaced by spot checks
_FULL_UNITARITY_DIM = 1201


def _check_poles(nu: np.ndarray, grid: MomentumGrid):
    om = grid.omega_pos
    a = np.abs(np.asarray(nu, dtype=float).ravel())
    j = np.clip(np.searchsorted(om, a), 0, om.size - 1)
    near = np.minimum(np.abs(a - om[j]), np.abs(a - om[np.maximum(j - 1, 0)]))
    scale = np.maximum(a, 1e-300)
    hit = near <= 1e-14 * np.maximum(scale, om[np.minimum(j, om.size - 1)])
    if np.any(hit):
        bad = float(np.asarray(nu, dtype=float).ravel()[np.argmax(hit)])
        raise PoleError(f"nu = {bad!r} coincides with a band energy")


def char_fn(nu, grid: MomentumGrid, g):
    """X(nu); scalar in, scalar out (arrays work elementwise)."""
    nu_arr = np.asarray(nu, dtype=float)
    gsq = abs(g) ** 2
    if gsq == 0.0:
        out = nu_arr.astype(float, copy=True)
    else:
        _check_poles(nu_arr, grid)
        out = nu_arr * kernels.secular_fn(nu_arr.ravel(), grid.omega_pos, gsq) \
            .reshape(nu_arr.shape)
    return out if out.ndim else float(out)


def char_fn_deriv(nu, grid: MomentumGrid, g):
    """X'(nu) = 1 + sum over signed levels of |g|^2/(nu - omega)^2."""
    nu_arr = np.asarray(nu, dtype=float)
    gsq = abs(g) ** 2
    if gsq == 0.0:
        out = np.ones_like(nu_arr, dtype=float)
    else:
        _check_poles(nu_arr, grid)
        out = kernels.xprime(nu_arr.ravel(), grid.omega_pos, gsq) \
            .reshape(nu_arr.shape)
    return out if out.ndim else float(out)


@dataclass
class Spectrum:
    """Roots of X on a grid, with derivative weights and (lazy) eigenbasis.

    roots : ascending, length 2L+1, antisymmetric about the zero root.
    xprime : X'(nu_a) aligned with roots (inf marks zero impurity weight).
    zero_index : position of the nu = 0 root (= L).
    """

    grid: MomentumGrid
    g: complex
    roots: np.ndarray
    xprime: np.ndarray
    zero_index: int
    _basis: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.grid.dim

    @property
    def impurity_weight(self) -> np.ndarray:
        """|U_a^d|^2 = 1/X'(nu_a) for every root."""
        with np.errstate(divide="ignore"):
            return np.where(np.isinf(self.xprime), 0.0, 1.0 / self.xprime)

    def eigenbasis(self) -> np.ndarray:
        """Unitary U whose columns are eigenvectors aligned with roots."""
        if self._basis is None:
            self._basis = _build_basis(self)
        return self._basis


def find_roots(grid: MomentumGrid, g) -> Spectrum:
    """Solve X(nu) = 0 on the grid; eigenvectors are built lazily."""
    g = complex(g)
    gsq = abs(g) ** 2
    om = grid.omega_pos
    if gsq == 0.0:
        pos = om.copy()
        xp_pos = np.full(om.shape, np.inf)
        xp0 = 1.0
    else:
        pos = kernels.positive_roots(om, gsq)
        bad = np.flatnonzero(~((pos > om) & np.isfinite(pos)))
        if bad.size == 0 and pos.size > 1 and np.any(pos[:-1] >= om[1:]):
            bad = np.flatnonzero(pos[:-1] >= om[1:])
        if bad.size:
            i = int(bad[0])
            hi = om[i + 1] if i + 1 < om.size else np.sqrt(om[-1] ** 2 + 2 * om.size * gsq)
            raise BracketError(
                f"root refinement left interval {i}: got {pos[i]!r} for "
                f"bracket ({om[i]!r}, {hi!r})", interval=(float(om[i]), float(hi)))
        xp_pos = kernels.xprime(pos, om, gsq)
        xp0 = float(kernels.xprime(np.zeros(1), om, gsq)[0])
    roots = np.concatenate([-pos[::-1], [0.0], pos])
    xprime = np.concatenate([xp_pos[::-1], [xp0], xp_pos])
    return Spectrum(grid=grid, g=g, roots=roots, xprime=xprime,
                    zero_index=grid.lam)


def eigenvector(alpha: int, spectrum: Spectrum) -> np.ndarray:
    """Eigencolumn for root alpha, unit norm, impurity component >= 0."""
    grid = spectrum.grid
    g = spectrum.g
    if not 0 <= alpha < grid.dim:
        raise IndexError(f"root index {alpha} outside 0..{grid.dim - 1}")
    root = spectrum.roots[alpha]
    col = np.zeros(grid.dim, dtype=complex)
    if abs(g) == 0.0:
        if alpha == spectrum.zero_index:
            col[grid.index_d] = 1.0
        else:
            # conduction roots keep their unperturbed unit vectors; basis
            # order and root order coincide once the zero root is skipped
            col[alpha if alpha < spectrum.zero_index else alpha - 1] = 1.0
        return col
    denom = grid.omega_signed - root
    if np.any(denom == 0.0):
        raise PoleError(
            f"root {root!r} collided with a band energy; eigenvector "
            f"components are not resolvable at this coupling")
    ud = 1.0 / np.sqrt(spectrum.xprime[alpha])
    col[:-1] = g * ud / denom
    col[-1] = ud
    return col


def _build_basis(spectrum: Spectrum) -> np.ndarray:
    grid = spectrum.grid
    g = spectrum.g
    dim = grid.dim
    if abs(g) == 0.0:
        U = np.zeros((dim, dim), dtype=complex)
        for a in range(dim):
            U[:, a] = eigenvector(a, spectrum)
        return U
    ud = 1.0 / np.sqrt(spectrum.xprime)
    denom = grid.omega_signed[:, None] - spectrum.roots[None, :]
    if np.any(denom == 0.0):
        raise PoleError("a root collided with a band energy")
    U = np.empty((dim, dim), dtype=complex)
    U[:-1, :] = g * ud[None, :] / denom
    U[-1, :] = ud
    return U


def build_spectrum(grid: MomentumGrid, g) -> Spectrum:
    """find_roots plus eigenbasis construction and consistency checks."""
    spec = find_roots(grid, g)
    U = spec.eigenbasis()
    total = float(spec.impurity_weight.sum())
    if abs(total - 1.0) > 1e-10:
        raise BracketError(
            f"impurity weights sum to {total!r}, not 1; roots are suspect")
    if grid.dim <= _FULL_UNITARITY_DIM:
        defect = np.abs(U.conj().T @ U - np.eye(grid.dim)).max()
    else:
        probe = np.linspace(0, grid.dim - 1, 8, dtype=int)
        defect = np.abs(U.conj().T @ U[:, probe]
                        - np.eye(grid.dim)[:, probe]).max()
    if defect > 1e-10:
        raise BracketError(f"eigenbasis unitarity defect {defect!r}")
    return spec
