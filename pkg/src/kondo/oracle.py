"""Dense cross-check route: direct diagonalisation of the effective matrix.

Everything in here deliberately avoids the secular-equation machinery so the
two routes stay independent: eigenpairs come straight from LAPACK on the
assembled matrix, and ground states are built by summing eigenprojectors.
Intended for desk-scale bands (the guard below caps the dimension).
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import KondoError, ZeroModeError
from .grid import MomentumGrid, build_custom_grid, build_linear_grid
from .hamiltonian import assemble_h

_MAX_DENSE_DIM = 4001
_ZERO_MODE_ATOL = 1e-10


@dataclass
class DenseEigen:
    """Eigenvalues ascending with matching eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.values.size


def dense_diagonalize(h: np.ndarray) -> DenseEigen:
    """Eigen-decompose a Hermitian matrix, deterministically ordered.

    Ordering is by eigenvalue; exact ties (they do not occur for hybridised
    bands but can for hand-built matrices) are broken by descending impurity
    component so reruns agree bitwise.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise KondoError(f"expected a square matrix, got shape {h.shape}")
    if h.shape[0] > _MAX_DENSE_DIM:
        raise KondoError(
            f"dense route capped at dim {_MAX_DENSE_DIM}, got {h.shape[0]}")
    defect = np.abs(h - h.conj().T).max()
    if defect > 1e-12 * max(1.0, np.abs(h).max()):
        raise KondoError(f"matrix is not Hermitian (defect {defect!r})")
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise KondoError(f"dense diagonalisation failed to converge: {exc}") from exc
    # eigh returns ascending values; enforce the tie-break explicitly
    order = np.lexsort((-np.abs(v[-1, :]), w))
    return DenseEigen(values=w[order], vectors=v[:, order])


def ground_state_projector(eig: DenseEigen, xi: float = 0.0) -> np.ndarray:
    """Filled Fermi sea plus fractionally occupied zero mode.

    Occupations: 1 on every negative eigenvalue, 1/2 + xi on the zero mode,
    0 above.  Raises ZeroModeError when no eigenvalue sits at zero within
    1e-10 (a reflection-symmetric band always provides one).
    """
    if not (-0.5 < xi <= 0.5):
        raise KondoError(f"xi must lie in (-1/2, 1/2], got {xi}")
    w = eig.values
    zero = np.flatnonzero(np.abs(w) <= _ZERO_MODE_ATOL)
    if zero.size != 1:
        raise ZeroModeError(
            f"expected exactly one zero eigenvalue within {_ZERO_MODE_ATOL}, "
            f"found {zero.size} (values near zero: {w[np.abs(w) < 1e-6]})")
    mu = np.where(w < 0.0, 1.0, 0.0)
    mu[zero[0]] = 0.5 + xi
    return (eig.vectors * mu) @ eig.vectors.conj().T


# -- self test ------------------------------------------------------------

@dataclass
class CheckRow:
    name: str
    max_err: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_err <= self.tol


def _sweep_grids(lams, slopes=(1.0,)):
    for lam in lams:
        for c in slopes:
            yield f"linear L={lam} c={c}", build_linear_grid(lam, c)
        # mildly deformed band, still asymptotically linear
        k = np.arange(1, lam + 1, dtype=float)
        yield f"custom L={lam}", build_custom_grid(np.sqrt(k * k + k))


def run_selftest(lams=(1, 2, 5, 10, 50), gs=(0.0, 0.3, 1.0, 3.0, 3.0j),
                 xis=(0.0, 0.25, 0.5), verbose=False):
    """Secular route vs dense route over a desk-scale sweep.

    Returns a list of CheckRow, one per (grid, g) pair and check kind.
    """
    from .condensate import occupations, psi_residue
    from .spectrum import build_spectrum

    rows = []
    t0 = time.perf_counter()
    for label, grid in _sweep_grids(lams):
        h_of = {}
        for g in gs:
            spec = build_spectrum(grid, g)
            h = assemble_h(grid, g)
            h_of[g] = h
            eig = dense_diagonalize(h)
            rows.append(CheckRow(f"roots vs dense [{label}, g={g}]",
                                 float(np.abs(spec.roots - eig.values).max()),
                                 1e-10))
            for xi in xis:
                psi_fast = psi_residue(spec, occupations(spec, xi))
                psi_dense = ground_state_projector(eig, xi)
                rows.append(CheckRow(
                    f"impurity column vs dense [{label}, g={g}, xi={xi}]",
                    float(np.abs(psi_fast.psi - psi_dense[:-1, -1]).max()),
                    1e-10))
                comm = h @ psi_dense - psi_dense @ h
                rows.append(CheckRow(
                    f"[h, Psi] = 0 [{label}, g={g}, xi={xi}]",
                    float(np.abs(comm).max()),
                    1e-10))
    if verbose:
        dt = time.perf_counter() - t0
        print(f"selftest: {len(rows)} checks in {dt:.2f}s")
    return rows
