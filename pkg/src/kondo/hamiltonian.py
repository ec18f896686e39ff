"""Effective one-particle Hamiltonian and classical matrix dynamics.

State variable: a Hermitian matrix Phi on the basis (k=-L..-1, 1..L, d) whose
entry Phi[K, L] is the bilinear expectation with upper index K (row) and
lower index L (column).  Physical states have eigenvalues in [0, 1].

The mean-field coupling is g(Phi) = J * sum_k Phi_d^k (column d, conduction
rows) and the effective Hamiltonian h has the band on the diagonal, -g in
column d and -conj(g) in row d, zero at (d, d):

    h = [[diag(omega), -g * 1],
         [-conj(g) * 1^T,   0]]

Equation of motion: dPhi/dt = i [h(Phi), Phi].  The total impurity occupation
Phi_d^d is conserved by this flow (the d-diagonal of the commutator cancels
once g is self-consistent), as is the spectrum of Phi.
"""

from __future__ import annotations

import numpy as np

from .grid import MomentumGrid


def g_of_phi(phi: np.ndarray, J: float) -> complex:
    """Self-consistent hybridisation g = J * sum_k Phi_d^k."""
    phi = np.asarray(phi)
    return complex(J * phi[:-1, -1].sum())


def assemble_h(grid: MomentumGrid, g: complex) -> np.ndarray:
    """Dense effective Hamiltonian for coupling g on the given grid."""
    dim = grid.dim
    h = np.zeros((dim, dim), dtype=complex)
    idx = np.arange(dim - 1)
    h[idx, idx] = grid.omega_signed
    h[:-1, -1] = -g
    h[-1, :-1] = -np.conj(g)
    return h


def kondo_energy(phi: np.ndarray, grid: MomentumGrid, J: float) -> float:
    """Classical energy  sum_k omega_k Phi_k^k  -  J |sum_k Phi_d^k|^2."""
    phi = np.asarray(phi)
    band = float(np.real(np.diag(phi)[:-1] @ grid.omega_signed))
    hyb = phi[:-1, -1].sum()
    return band - J * float(np.real(hyb * np.conj(hyb)))


def eom_rhs(phi: np.ndarray, grid: MomentumGrid, J: float) -> np.ndarray:
    """Right-hand side i [h(g(Phi)), Phi] of the equation of motion."""
    phi = np.asarray(phi, dtype=complex)
    h = assemble_h(grid, g_of_phi(phi, J))
    return 1j * (h @ phi - phi @ h)
