import numpy as np
import pytest

from kondo import KondoError, ZeroModeError, assemble_h, build_linear_grid, \
    dense_diagonalize, ground_state_projector, run_selftest


def test_values_ascending_and_vectors_orthonormal():
    grid = build_linear_grid(6)
    eig = dense_diagonalize(assemble_h(grid, 1.2))
    assert np.all(np.diff(eig.values) > 0)
    np.testing.assert_allclose(eig.vectors.conj().T @ eig.vectors,
                               np.eye(eig.dim), rtol=0, atol=1e-13)
    assert eig.dim == grid.dim


def test_reconstruction():
    grid = build_linear_grid(4)
    h = assemble_h(grid, 0.6 + 0.3j)
    eig = dense_diagonalize(h)
    back = (eig.vectors * eig.values) @ eig.vectors.conj().T
    np.testing.assert_allclose(back, h, rtol=0, atol=1e-13)


def test_input_guards():
    with pytest.raises(KondoError):
        dense_diagonalize(np.ones((2, 3)))
    with pytest.raises(KondoError):
        dense_diagonalize(np.array([[0.0, 1.0], [2.0, 0.0]]))  # not hermitian
    with pytest.raises(KondoError):
        dense_diagonalize(np.eye(4002))


def test_degenerate_levels_ordered_by_impurity_weight():
    # g = 0 leaves every band level doubly represented in the sign-symmetric
    # matrix; ordering must still be reproducible
    grid = build_linear_grid(3)
    h = assemble_h(grid, 0.0)
    a = dense_diagonalize(h)
    b = dense_diagonalize(h)
    np.testing.assert_array_equal(a.values, b.values)
    np.testing.assert_array_equal(a.vectors, b.vectors)
    # the zero eigenvalue belongs to the bare impurity, which the tie-break
    # puts ahead of any accidental zero-weight partner
    zi = int(np.flatnonzero(np.abs(a.values) < 1e-12)[0])
    assert abs(a.vectors[-1, zi]) == pytest.approx(1.0)


def test_projector_properties():
    grid = build_linear_grid(5)
    eig = dense_diagonalize(assemble_h(grid, 0.9))
    for xi in (0.0, 0.25, 0.5, -0.49):
        P = ground_state_projector(eig, xi)
        np.testing.assert_allclose(P, P.conj().T, rtol=0, atol=1e-14)
        # trace = filled levels + fractional zero mode
        assert np.trace(P).real == pytest.approx(grid.lam + 0.5 + xi, abs=1e-12)
        # spectrum of P is {0, 1/2 + xi, 1}
        mu = np.linalg.eigvalsh(P)
        assert mu.min() > -1e-12 and mu.max() < 1 + 1e-12
    # only xi = 0 and xi = 1/2 make P a strict projector on the zero mode
    P = ground_state_projector(eig, 0.5)
    np.testing.assert_allclose(P @ P, P, rtol=0, atol=1e-12)


def test_projector_commutes_with_h():
    grid = build_linear_grid(5)
    h = assemble_h(grid, 1.1)
    P = ground_state_projector(dense_diagonalize(h), 0.25)
    assert np.abs(h @ P - P @ h).max() < 1e-12


def test_projector_guards():
    grid = build_linear_grid(3)
    eig = dense_diagonalize(assemble_h(grid, 1.0))
    with pytest.raises(KondoError):
        ground_state_projector(eig, 0.7)
    with pytest.raises(KondoError):
        ground_state_projector(eig, -0.5)
    # a gapped matrix has no zero mode to occupy
    gapped = dense_diagonalize(np.diag([-2.0, -1.0, 1.0, 2.0]))
    with pytest.raises(ZeroModeError):
        ground_state_projector(gapped, 0.0)


def test_selftest_sweep_is_green():
    rows = run_selftest(lams=(1, 2, 5), gs=(0.0, 1.0, 2.0j), xis=(0.0, 0.5))
    assert rows
    bad = [r for r in rows if not r.passed]
    assert not bad, bad
