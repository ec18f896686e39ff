"""Time evolution and excitations on top of the condensate.

Small fluctuations phi around the ground state live in the eigenbasis of the
condensate's effective Hamiltonian and carry one upper and one lower root
index.  Their free evolution is pure phase rotation,

    phi^a_b(t) = exp( i (nu_a - nu_b) t ) phi^a_b(0),

which drops the first-order feedback of the fluctuation on the coupling
(r(phi) = J * delta(Phi_d^dot)); that feedback dies with the running coupling
as the cutoff grows but is exposed here both as a diagnostic
(coupling_shift) and as the exact linearised flow (linearized_evolve) so the
approximation can be measured rather than trusted.

The fluctuation bracket carries a central term beyond the plain commutator:

    -i { phi^a_b , phi^c_d } = delta_b^c phi^a_d - delta_d^a phi^c_b
                               + (mu_a - mu_c) delta_d^a delta_b^c .

bracket_coefficients returns exactly these coefficients so identities can be
checked in exact arithmetic.

The nonlinear flow integrates dPhi/dt = i [h(g(Phi)), Phi] with classic RK4
at fixed step; Hermiticity is restored after every step and the discarded
defect recorded.  Conserved along the flow: the energy, the impurity
occupation Phi_d^d, and the full spectrum of Phi (the flow is isospectral).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IntegrationError, KondoError
from .grid import MomentumGrid
from .hamiltonian import assemble_h, eom_rhs, g_of_phi, kondo_energy
from .spectrum import Spectrum

_HERMITICITY_BOUND = 1e-9
_POOL_CAP = 200_000


@dataclass
class FluctuationState:
    """Sparse fluctuation phi^a_b: entries[(a, b)] with a the upper index.

    The underlying matrix must be Hermitian, so entries come in conjugate
    pairs; use .hermitian() to build a state from one triangle.
    """

    spectrum: Spectrum
    entries: dict

    def __post_init__(self):
        dim = self.spectrum.dim
        scale = max((abs(v) for v in self.entries.values()), default=0.0)
        for (a, b), v in self.entries.items():
            if not (0 <= a < dim and 0 <= b < dim):
                raise KondoError(f"index pair {(a, b)} outside basis 0..{dim - 1}")
            w = self.entries.get((b, a))
            if w is None or abs(np.conj(w) - v) > 1e-12 * max(scale, 1.0):
                raise KondoError(
                    f"entries are not Hermitian at {(a, b)}: {v!r} vs {w!r}")

    @classmethod
    def hermitian(cls, spectrum: Spectrum, entries: dict) -> "FluctuationState":
        """Fill in conjugate partners from whichever triangle is given."""
        full = {}
        for (a, b), v in entries.items():
            v = complex(v)
            if (b, a) in entries and (a, b) != (b, a):
                w = complex(entries[(b, a)])
                if abs(np.conj(w) - v) > 1e-12 * max(abs(v), abs(w), 1.0):
                    raise KondoError(f"conflicting pair at {(a, b)}")
            if a == b and abs(v.imag) > 1e-12 * max(abs(v), 1.0):
                raise KondoError(f"diagonal entry {(a, b)} must be real")
            full[(a, b)] = v
            full.setdefault((b, a), np.conj(v))
        return cls(spectrum=spectrum, entries=full)

    def matrix(self) -> np.ndarray:
        """Dense eigenbasis matrix (upper index = row)."""
        m = np.zeros((self.spectrum.dim, self.spectrum.dim), dtype=complex)
        for (a, b), v in self.entries.items():
            m[a, b] = v
        return m

    def embed(self) -> np.ndarray:
        """The same fluctuation in the level basis: U phi U^dagger."""
        U = self.spectrum.eigenbasis()
        return U @ self.matrix() @ U.conj().T


def linear_evolve(state: FluctuationState, t: float) -> FluctuationState:
    """Free phase rotation of every entry; coupling feedback dropped."""
    nu = state.spectrum.roots
    new = {(a, b): v * np.exp(1j * (nu[a] - nu[b]) * t)
           for (a, b), v in state.entries.items()}
    return FluctuationState(spectrum=state.spectrum, entries=new)


def coupling_shift(state: FluctuationState, J: float) -> complex:
    """First-order coupling feedback r(phi) = J * sum_k (U phi U^+)_d^k.

    This is the term linear_evolve discards; it vanishes with J as the
    cutoff grows.
    """
    return complex(J * state.embed()[:-1, -1].sum())


def bracket_coefficients(a: int, b: int, c: int, d: int, mu):
    """Coefficients of -i{ phi^a_b , phi^c_d } in the fluctuation algebra.

    Returns (terms, central): terms maps (upper, lower) -> integer
    coefficient, central is mu[a] - mu[c] when both deltas fire (and keeps
    whatever exact type mu carries, e.g. Fraction).
    """
    terms = {}
    if b == c:
        terms[(a, d)] = terms.get((a, d), 0) + 1
    if d == a:
        terms[(c, b)] = terms.get((c, b), 0) - 1
    terms = {k: v for k, v in terms.items() if v != 0}
    if d == a and b == c:
        central = mu[a] - mu[c]
    else:
        central = 0 * mu[0]  # exact zero in whatever arithmetic mu uses
    return terms, central


# -- flows -------------------------------------------------------------------

@dataclass
class Trajectory:
    """Sampled nonlinear flow with its conservation monitors."""

    times: np.ndarray
    states: np.ndarray           # (n_samples, dim, dim)
    energy: np.ndarray
    phi_dd: np.ndarray
    hermiticity_defect: np.ndarray   # max defect seen since previous sample
    spectral_drift: np.ndarray       # max |eig(t) - eig(0)|
    grid: MomentumGrid
    J: float


def _rk4_step(phi, dt, rhs):
    k1 = rhs(phi)
    k2 = rhs(phi + 0.5 * dt * k1)
    k3 = rhs(phi + 0.5 * dt * k2)
    k4 = rhs(phi + dt * k3)
    return phi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def nonlinear_evolve(phi0: np.ndarray, grid: MomentumGrid, J: float,
                     t_final: float, dt: float, stride: int = 1) -> Trajectory:
    """Integrate dPhi/dt = i[h(g(Phi)), Phi] with fixed-step RK4.

    Hermiticity is restored after every step; if the defect before the
    restoration ever exceeds 1e-9 the step size is rejected outright
    (IntegrationError) instead of producing drifting garbage.  Samples are
    recorded every `stride` steps, always including t = 0 and the final time.
    """
    if dt <= 0 or t_final < 0:
        raise KondoError(f"need dt > 0 and t_final >= 0, got {dt}, {t_final}")
    if stride < 1:
        raise KondoError(f"stride must be >= 1, got {stride}")
    phi = np.array(phi0, dtype=complex)
    if phi.shape != (grid.dim, grid.dim):
        raise KondoError(f"state shape {phi.shape} does not match grid dim {grid.dim}")
    n_steps = int(round(t_final / dt))
    eig0 = np.linalg.eigvalsh(phi)
    rhs = lambda p: eom_rhs(p, grid, J)

    times, states, energies, dds, defects, drifts = [], [], [], [], [], []

    def record(step, defect_since):
        times.append(step * dt)
        states.append(phi.copy())
        energies.append(kondo_energy(phi, grid, J))
        dds.append(float(phi[-1, -1].real))
        defects.append(defect_since)
        drifts.append(float(np.abs(np.linalg.eigvalsh(phi) - eig0).max()))

    record(0, 0.0)
    defect_since = 0.0
    for step in range(1, n_steps + 1):
        phi = _rk4_step(phi, dt, rhs)
        defect = float(np.abs(phi - phi.conj().T).max())
        if defect > _HERMITICITY_BOUND:
            raise IntegrationError(
                f"Hermiticity defect {defect:.3e} at t = {step * dt:.6g} "
                f"exceeds {_HERMITICITY_BOUND:.0e}; reduce dt")
        defect_since = max(defect_since, defect)
        phi = 0.5 * (phi + phi.conj().T)
        if step % stride == 0 or step == n_steps:
            record(step, defect_since)
            defect_since = 0.0

    return Trajectory(times=np.array(times), states=np.array(states),
                      energy=np.array(energies), phi_dd=np.array(dds),
                      hermiticity_defect=np.array(defects),
                      spectral_drift=np.array(drifts), grid=grid, J=float(J))


def linearized_rhs(delta: np.ndarray, psi: np.ndarray, grid: MomentumGrid,
                   J: float, g: complex) -> np.ndarray:
    """Exact linearisation of the flow around a stationary Psi.

    d(delta)/dt = i[h(g), delta] + i[dh(delta), Psi] where dh carries the
    coupling shift dg = J * sum_k delta_d^k into the hybridisation slots.
    This keeps the feedback term that linear_evolve drops.
    """
    h0 = assemble_h(grid, g)
    dg = J * delta[:-1, -1].sum()
    dh = np.zeros_like(h0)
    dh[:-1, -1] = -dg
    dh[-1, :-1] = -np.conj(dg)
    return 1j * ((h0 @ delta - delta @ h0) + (dh @ psi - psi @ dh))


def linearized_evolve(delta0: np.ndarray, psi: np.ndarray, grid: MomentumGrid,
                      J: float, g: complex, t_final: float,
                      dt: float) -> np.ndarray:
    """RK4 integration of linearized_rhs; returns delta(t_final)."""
    delta = np.array(delta0, dtype=complex)
    n_steps = int(round(t_final / dt))
    rhs = lambda d: linearized_rhs(d, psi, grid, J, g)
    for _ in range(n_steps):
        delta = _rk4_step(delta, dt, rhs)
    return delta


# -- quasiparticles ------------------------------------------------------------

@dataclass
class Excitation:
    """Particle-hole excitation; indices refer to Spectrum.roots."""

    particles: tuple
    holes: tuple
    energy: float


@dataclass
class ExcitationSpectrum:
    n_spins: int
    excitations: list

    @property
    def energies(self) -> np.ndarray:
        return np.array([e.energy for e in self.excitations])


def quasiparticle_excitations(spectrum: Spectrum, xi: float, n_spins: int,
                              top: int) -> ExcitationSpectrum:
    """The `top` lowest excitation energies above the ground state.

    A single pair moves one particle from an occupied root (negative, or the
    zero mode) to an empty one (positive, or the zero mode) at cost
    (nu_p - nu_h)/N.  Multi-pair states are included up to the energy of the
    top-th single pair; level repetition across pairs is allowed (the N spin
    channels are treated as an unconstrained reservoir at desk scale, and
    the fractional zero mode never blocks).
    """
    if n_spins < 1:
        raise KondoError(f"need n_spins >= 1, got {n_spins}")
    if top < 1:
        raise KondoError(f"need top >= 1, got {top}")
    if not (-0.5 < xi <= 0.5):
        raise KondoError(f"xi must lie in (-1/2, 1/2], got {xi}")
    nu = spectrum.roots
    z = spectrum.zero_index
    holes = [i for i in range(nu.size) if nu[i] < 0.0 or i == z]
    parts = [i for i in range(nu.size) if nu[i] > 0.0 or i == z]
    singles = sorted(
        (Excitation((p,), (h,), (nu[p] - nu[h]) / n_spins)
         for h in holes for p in parts if p != h),
        key=lambda e: (e.energy, e.particles, e.holes))
    cutoff = singles[min(top, len(singles)) - 1].energy * (1.0 + 1e-12)

    pool = list(singles)

    def extend(start: int, acc_e: float, acc_p: tuple, acc_h: tuple):
        if len(pool) > _POOL_CAP:
            raise KondoError(
                f"more than {_POOL_CAP} excitations below the cutoff; "
                f"raise the gap or lower `top`")
        for i in range(start, len(singles)):
            e = acc_e + singles[i].energy
            if e > cutoff:
                break  # singles are sorted, nothing further fits
            p = tuple(sorted(acc_p + singles[i].particles))
            h = tuple(sorted(acc_h + singles[i].holes))
            pool.append(Excitation(p, h, e))
            extend(i, e, p, h)

    for i, s in enumerate(singles):
        if 2.0 * s.energy > cutoff:
            break
        extend(i, s.energy, s.particles, s.holes)

    pool.sort(key=lambda e: (e.energy, len(e.particles), e.particles, e.holes))
    return ExcitationSpectrum(n_spins=n_spins, excitations=pool[:top])
