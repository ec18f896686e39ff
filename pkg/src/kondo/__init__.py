"""Desk-scale solver for the large-N Kondo impurity.

Modules:
  grid        momentum grids (linear / custom tables / config files)
  hamiltonian effective matrix, energy, equation of motion
  spectrum    secular roots, weights, eigenbasis
  condensate  ground-state occupations and impurity column (finite/continuum)
  renorm      running coupling, asymptotic-freedom ratio, infinite-band kernel
  dynamics    fluctuation algebra, RK4 flows, quasiparticle enumeration
  oracle      independent dense-diagonalisation route and self tests
  cli         `kondo` command-line front end
"""

from ._backend import KERNEL_BACKEND, kernel_backend
from .condensate import (Condensate, Occupation, condensate_profile,
                         even_profile_integral, occupations,
                         psi_integral, psi_linear_closed,
                         psi_residue, sigma_sum)
from .dynamics import (Excitation, ExcitationSpectrum, FluctuationState,
                       Trajectory, bracket_coefficients, coupling_shift,
                       linear_evolve, linearized_evolve, nonlinear_evolve,
                       quasiparticle_excitations)
from .errors import (BracketError, GridSpecError, IntegrationError, KondoError,
                     PoleError, QuadratureError, ZeroModeError)
from .grid import (MomentumGrid, build_custom_grid, build_linear_grid,
                   read_grid_config)
from .hamiltonian import assemble_h, eom_rhs, g_of_phi, kondo_energy
from .oracle import DenseEigen, dense_diagonalize, ground_state_projector, run_selftest
from .renorm import (af_ratio, chi1, chi1_roots, j_inverse_finite,
                     j_inverse_integral, solve_coupling)
from .spectrum import (Spectrum, build_spectrum, char_fn, char_fn_deriv,
                       eigenvector, find_roots)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND", "kernel_backend", "__version__",
    "MomentumGrid", "build_linear_grid", "build_custom_grid", "read_grid_config",
    "assemble_h", "g_of_phi", "kondo_energy", "eom_rhs",
    "Spectrum", "char_fn", "char_fn_deriv", "find_roots", "eigenvector",
    "build_spectrum",
    "Occupation", "Condensate", "occupations", "psi_residue", "sigma_sum",
    "psi_integral", "psi_linear_closed", "even_profile_integral",
    "condensate_profile",
    "j_inverse_finite", "j_inverse_integral", "af_ratio", "chi1", "chi1_roots",
    "solve_coupling",
    "FluctuationState", "Trajectory", "Excitation", "ExcitationSpectrum",
    "linear_evolve", "coupling_shift", "bracket_coefficients",
    "nonlinear_evolve", "linearized_evolve", "quasiparticle_excitations",
    "DenseEigen", "dense_diagonalize", "ground_state_projector", "run_selftest",
    "KondoError", "GridSpecError", "PoleError", "BracketError",
    "QuadratureError", "ZeroModeError", "IntegrationError",
]
