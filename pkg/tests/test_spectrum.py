"""Secular spectrum against the dense eigensolver and closed forms.

The L = 1 linear band at |g| = 1 is solvable by hand: det(nu - h) with
h = diag(-1, 1, 0) and unit couplings is nu^3 - 3 nu, so the modes sit at
-sqrt(3), 0, +sqrt(3), and X'(nu) = 1 + 1/(nu-1)^2 + 1/(nu+1)^2 equals 3 at
all three.  Those numbers are frozen below; everything else is cross-checked
against numpy's eigensolver.
"""

import numpy as np
import pytest

from kondo import BracketError, PoleError, assemble_h, build_custom_grid, \
    build_linear_grid, build_spectrum, char_fn, char_fn_deriv, \
    dense_diagonalize, eigenvector, find_roots

SQRT3 = np.sqrt(3.0)


def test_l1_closed_form():
    grid = build_linear_grid(1)
    spec = find_roots(grid, 1.0)
    np.testing.assert_allclose(spec.roots, [-SQRT3, 0.0, SQRT3], atol=1e-14)
    np.testing.assert_allclose(spec.xprime, [3.0, 3.0, 3.0], rtol=1e-13)
    np.testing.assert_allclose(spec.impurity_weight, [1 / 3] * 3, rtol=1e-13)
    assert spec.zero_index == 1


def test_roots_match_dense_eigensolver():
    for lam in (1, 2, 5, 23):
        for g in (0.3, 1.0, 3.0, 2.0j, 1.0 + 1.0j):
            grid = build_linear_grid(lam)
            spec = find_roots(grid, g)
            dense = dense_diagonalize(assemble_h(grid, g))
            np.testing.assert_allclose(spec.roots, dense.values,
                                       rtol=0, atol=1e-11 * lam)


def test_roots_match_dense_on_custom_grid():
    k = np.arange(1, 31, dtype=float)
    grid = build_custom_grid(np.sqrt(k * k + k))
    for g in (0.5, 2.0):
        spec = find_roots(grid, g)
        dense = dense_diagonalize(assemble_h(grid, g))
        np.testing.assert_allclose(spec.roots, dense.values, rtol=0, atol=1e-10)


def test_roots_interlace_and_are_odd():
    grid = build_linear_grid(9)
    spec = find_roots(grid, 1.7)
    nu = spec.roots
    # strict symmetry: the solver only computes the positive half
    np.testing.assert_array_equal(nu, -nu[::-1])
    pos = nu[grid.lam + 1:]
    om = grid.omega_pos
    assert np.all(pos[:-1] > om[:-1]) and np.all(pos[:-1] < om[1:])
    assert pos[-1] > om[-1]


def test_char_fn_vanishes_at_roots_and_only_there():
    grid = build_linear_grid(6)
    g = 0.9
    spec = find_roots(grid, g)
    vals = char_fn(spec.roots[spec.zero_index + 1:], grid, g)
    slope = char_fn_deriv(spec.roots[spec.zero_index + 1:], grid, g)
    assert np.max(np.abs(vals) / slope) < 1e-12
    # between consecutive roots the sign is fixed
    mids = 0.5 * (spec.roots[:-1] + spec.roots[1:])
    mids = mids[np.min(np.abs(mids[:, None] - grid.omega_signed[None, :]),
                       axis=1) > 1e-9]
    assert np.all(char_fn(mids, grid, g) != 0)


def test_char_fn_is_odd_and_scalar_friendly():
    grid = build_linear_grid(4)
    assert char_fn(0.0, grid, 1.0) == 0.0
    assert char_fn(0.37, grid, 1.0) == pytest.approx(-char_fn(-0.37, grid, 1.0),
                                                     rel=1e-14)
    assert isinstance(char_fn(0.37, grid, 1.0), float)
    assert char_fn_deriv(0.0, grid, 0.0) == 1.0


def test_eigenvectors_match_dense():
    grid = build_linear_grid(8)
    g = 1.3 * np.exp(0.4j)
    spec = find_roots(grid, g)
    U = spec.eigenbasis()
    dense = dense_diagonalize(assemble_h(grid, g))
    V = dense.vectors
    # columns agree up to phase; fix it on the impurity entry like the solver
    for a in range(grid.dim):
        col = V[:, a]
        ph = col[-1] / abs(col[-1])
        np.testing.assert_allclose(U[:, a], col / ph, rtol=0, atol=1e-12)


def test_eigenbasis_is_unitary_and_complete():
    grid = build_linear_grid(11)
    spec = find_roots(grid, 2.2)
    U = spec.eigenbasis()
    np.testing.assert_allclose(U.conj().T @ U, np.eye(grid.dim),
                               rtol=0, atol=1e-12)
    assert np.sum(spec.impurity_weight) == pytest.approx(1.0, abs=1e-12)


def test_single_eigenvector_access():
    grid = build_linear_grid(5)
    spec = find_roots(grid, 0.8)
    U = spec.eigenbasis()
    for a in (0, 3, spec.zero_index, grid.dim - 1):
        np.testing.assert_allclose(eigenvector(a, spec), U[:, a], atol=1e-14)
    with pytest.raises(IndexError):
        eigenvector(-1, spec)
    with pytest.raises(IndexError):
        eigenvector(grid.dim, spec)


def test_free_band_conventions():
    grid = build_linear_grid(3)
    spec = find_roots(grid, 0.0)
    np.testing.assert_array_equal(spec.roots,
                                  np.r_[grid.omega_signed[:3], 0.0,
                                        grid.omega_signed[3:]])
    assert spec.xprime[spec.zero_index] == 1.0
    assert np.all(np.isinf(np.delete(spec.xprime, spec.zero_index)))
    w = spec.impurity_weight
    assert w[spec.zero_index] == 1.0
    assert np.all(np.delete(w, spec.zero_index) == 0.0)
    # eigenvectors are unit vectors: band levels keep their slot, the zero
    # mode is the bare impurity
    U = spec.eigenbasis()
    perm = np.zeros((7, 7))
    order = [0, 1, 2, 6, 3, 4, 5]
    for col, row in enumerate(order):
        perm[row, col] = 1.0
    np.testing.assert_array_equal(U, perm)


def test_evaluation_on_band_energy_is_rejected():
    grid = build_linear_grid(2)
    with pytest.raises(PoleError):
        char_fn(2.0, grid, 1.0)
    with pytest.raises(PoleError):
        char_fn_deriv(np.array([0.5, 1.0]), grid, 1.0)
    # g = 0 short-circuits: no pole check needed, the function is just nu
    assert char_fn(2.0, grid, 0.0) == 2.0


def test_exact_root_collision_is_reported():
    grid = build_linear_grid(2)
    spec = find_roots(grid, 1.0)
    spec.roots[0] = grid.omega_signed[0]
    with pytest.raises(PoleError):
        eigenvector(0, spec)


def test_build_spectrum_runs_consistency_checks():
    grid = build_linear_grid(7)
    spec = build_spectrum(grid, 1.4)
    assert spec.eigenbasis() is spec.eigenbasis()  # cached, not rebuilt


def test_large_grid_spectrum_is_cheap_and_consistent():
    grid = build_linear_grid(3000)
    spec = find_roots(grid, 1.0)
    assert np.sum(spec.impurity_weight) == pytest.approx(1.0, abs=1e-10)
    pos = spec.roots[spec.zero_index + 1:]
    assert np.all(np.diff(pos) > 0)
