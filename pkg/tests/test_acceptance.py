"""Acceptance gate: one test per release criterion.

Each test records a PASS/FAIL line (printed in the "acceptance summary"
terminal section) and then asserts, so a red criterion is visible both ways.
Tolerances and time budgets are part of the criteria, not of this file.
"""

import json
import subprocess
import sys
import time
from fractions import Fraction
from itertools import product

import numpy as np

from kondo import (af_ratio, bracket_coefficients, build_custom_grid,
                   build_linear_grid, build_spectrum, dense_diagonalize,
                   even_profile_integral, find_roots, ground_state_projector,
                   j_inverse_finite, nonlinear_evolve, occupations,
                   psi_integral, psi_linear_closed, psi_residue)
from kondo.hamiltonian import assemble_h

LAMBDAS = (1, 2, 5, 10, 50)
G_MODULI = (0.0, 0.3, 1.0, 3.0)
XIS = (0.0, 0.25, 0.5)


def _sweep_grids(lam):
    yield build_linear_grid(lam)
    k = np.arange(1, lam + 1, dtype=float)
    yield build_custom_grid(np.sqrt(k * k + k))


def test_criterion_01_roots_match_dense(acceptance_report):
    budget = 10.0
    t0 = time.perf_counter()
    worst = 0.0
    for lam, gm in product(LAMBDAS, G_MODULI):
        for grid in _sweep_grids(lam):
            spec = find_roots(grid, gm)
            ref = dense_diagonalize(assemble_h(grid, gm)).values
            worst = max(worst, float(np.abs(spec.roots - ref).max()))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-10 and elapsed < budget
    acceptance_report("secular roots vs dense eigenvalues (sweep)", ok,
                      f"max_err={worst:.2e} time={elapsed:.2f}s")
    assert ok, (worst, elapsed)


def test_criterion_02_ground_state_matches_dense(acceptance_report):
    worst = 0.0
    for lam, gm, xi in product(LAMBDAS, G_MODULI, XIS):
        for grid in _sweep_grids(lam):
            spec = find_roots(grid, gm)
            cond = psi_residue(spec, occupations(spec, xi))
            P = ground_state_projector(dense_diagonalize(assemble_h(grid, gm)),
                                       xi)
            worst = max(worst, float(np.abs(cond.psi - P[:-1, -1]).max()))
    ok = worst < 1e-10
    acceptance_report("impurity column vs dense projector (sweep)", ok,
                      f"max_err={worst:.2e}")
    assert ok, worst


def test_criterion_03_smallest_band_closed_forms(acceptance_report):
    grid = build_linear_grid(1)
    spec = build_spectrum(grid, 1.0)
    root3 = np.sqrt(3.0)
    errs = [
        float(np.abs(spec.roots - np.array([-root3, 0.0, root3])).max()),
        float(np.abs(spec.xprime - 3.0).max()),
    ]
    cond = psi_residue(spec, occupations(spec, 0.0))
    errs.append(float(np.abs(cond.psi - 1.0 / (2.0 * root3)).max()))
    errs.append(abs(1.0 / j_inverse_finite(grid, 1.0) - root3))
    worst = max(errs)
    ok = worst < 1e-12
    acceptance_report("single-level band closed forms", ok,
                      f"max_err={worst:.2e}")
    assert ok, errs


def test_criterion_04_ground_state_is_stationary(acceptance_report):
    grid = build_linear_grid(4)
    J = 1.0 / j_inverse_finite(grid, 1.0)
    spec = build_spectrum(grid, 1.0)
    phi = psi_residue(spec, occupations(spec, 0.0)).matrix()
    h = assemble_h(grid, 1.0)
    comm = float(np.abs(h @ phi - phi @ h).max())
    traj = nonlinear_evolve(phi, grid, J, 10.0, 1e-3, stride=1000)
    drift = float(np.abs(traj.states - traj.states[0]).max())
    ok = comm < 1e-12 and drift < 1e-10
    acceptance_report("ground state stationary under the flow", ok,
                      f"commutator={comm:.2e} drift={drift:.2e}")
    assert ok, (comm, drift)


def test_criterion_05_conservation_under_flow(acceptance_report):
    grid = build_linear_grid(4)
    rng = np.random.default_rng(7)
    a = rng.standard_normal((grid.dim, grid.dim)) \
        + 1j * rng.standard_normal((grid.dim, grid.dim))
    phi0 = 0.5 * (a + a.conj().T)
    phi0 /= np.abs(phi0).max()
    traj = nonlinear_evolve(phi0, grid, 0.8, 10.0, 1e-3, stride=1000)
    de = float(np.abs(traj.energy - traj.energy[0]).max())
    dphi = float(np.abs(traj.phi_dd - traj.phi_dd[0]).max())
    dspec = float(traj.spectral_drift.max())
    worst = max(de, dphi, dspec)
    ok = worst < 1e-8
    acceptance_report("energy / impurity filling / spectrum conserved", ok,
                      f"dE={de:.2e} dphi_dd={dphi:.2e} eig_drift={dspec:.2e}")
    assert ok, (de, dphi, dspec)


def test_criterion_06_finite_band_meets_continuum(acceptance_report):
    lam = 10_000
    grid = build_linear_grid(lam)
    spec = find_roots(grid, 1.0)
    cond = psi_residue(spec, occupations(spec, 0.25))
    worst_route = 0.0
    for k in range(1, 11):
        for kk in (k, -k):
            got = cond.psi[grid.index(kk)]
            want = psi_integral(kk, 1.0, 0.25)
            worst_route = max(worst_route,
                              float(abs(got - want) / abs(want)))
    worst_closed = 0.0
    for k, g, xi in [(1, 1.0, 0.0), (-3, 0.7, 0.5), (8, 2.0, 0.25),
                     (2, 1.0 + 1.0j, -0.4)]:
        a = psi_integral(k, g, xi)
        b = psi_linear_closed(k, g, xi)
        worst_closed = max(worst_closed, float(abs(a - b)))
    ok = worst_route < 2.0 / lam and worst_closed < 1e-8
    acceptance_report("continuum route agreement", ok,
                      f"residue_vs_integral={worst_route:.2e} "
                      f"(budget {2.0 / lam:.1e}) "
                      f"closed_vs_quad={worst_closed:.2e}")
    assert ok, (worst_route, worst_closed)


def test_criterion_07_tail_product_approaches_half_g(acceptance_report):
    budget = 30.0
    t0 = time.perf_counter()
    rel = {}
    for k in (10_000, 100_000):
        w = float(k)
        prod = w * even_profile_integral(w, 1.0)
        rel[k] = abs(prod - 0.5) / 0.5
    elapsed = time.perf_counter() - t0
    ok = rel[10_000] < 1e-2 and rel[100_000] < 1e-3 and elapsed < budget
    acceptance_report("tail of |omega| * even part reaches g/2", ok,
                      f"rel@1e4={rel[10_000]:.2e} rel@1e5={rel[100_000]:.2e} "
                      f"time={elapsed:.1f}s")
    assert ok, (rel, elapsed)


def test_criterion_08_coupling_ratio_flows_to_one(acceptance_report):
    budget = 60.0
    t0 = time.perf_counter()
    lams = (100, 1000, 10_000, 100_000)
    ratios = [af_ratio(lam, 1.0) for lam in lams]
    elapsed = time.perf_counter() - t0
    gaps = [r - 1.0 for r in ratios]
    monotone = all(a > b > 0.0 for a, b in zip(gaps, gaps[1:]))
    shrink = gaps[0] / gaps[-1]
    ok = monotone and shrink >= 2.0 and elapsed < budget
    acceptance_report("running-coupling ratio decays toward 1", ok,
                      f"gaps={[format(g, '.3e') for g in gaps]} "
                      f"shrink={shrink:.2f}x time={elapsed:.1f}s")
    assert ok, (ratios, elapsed)


def test_criterion_09_profile_symmetry_and_xi_split(acceptance_report):
    grid = build_linear_grid(40)
    spec = build_spectrum(grid, 1.0)

    def profile(xi):
        return psi_residue(spec, occupations(spec, xi))

    sym = float(np.abs(profile(0.0).odd()).max())
    cond_half = profile(0.5)
    xprime0 = spec.xprime[spec.zero_index]
    analytic = 0.5 / (grid.omega_signed * xprime0)
    odd_err = float(np.abs(cond_half.odd() - analytic).max())
    evens = np.array([profile(xi).even() for xi in XIS])
    even_spread = float(np.abs(evens - evens[0]).max())
    ok = sym < 1e-10 and odd_err < 1e-10 and even_spread < 1e-12
    acceptance_report("profile symmetry and filling-offset split", ok,
                      f"sym={sym:.2e} odd_err={odd_err:.2e} "
                      f"even_spread={even_spread:.2e}")
    assert ok, (sym, odd_err, even_spread)


def test_criterion_10_fluctuation_algebra_exact(acceptance_report):
    dim = 5  # two levels per branch plus the impurity
    mu = [Fraction(1), Fraction(1), Fraction(1, 2), Fraction(0), Fraction(0)]

    # structure constants against elementary-matrix commutators
    def elementary(a, b):
        m = np.zeros((dim, dim), dtype=int)
        m[a, b] = 1
        return m

    sc_ok = True
    for a, b, c, d in product(range(dim), repeat=4):
        terms, central = bracket_coefficients(a, b, c, d, mu)
        m = np.zeros((dim, dim), dtype=object)
        for (u, l), coeff in terms.items():
            m[u, l] += coeff
        ref = elementary(a, b) @ elementary(c, d) \
            - elementary(c, d) @ elementary(a, b)
        if np.any(m != ref):
            sc_ok = False
        want_central = mu[a] - mu[c] if (d == a and b == c) else Fraction(0)
        if central != want_central:
            sc_ok = False

    # Jacobi identity including the central term, exact arithmetic
    def bracket_combo(X, Y):
        out, cen = {}, Fraction(0)
        for (a, b), ca in X.items():
            for (c, d), cb in Y.items():
                terms, central = bracket_coefficients(a, b, c, d, mu)
                for key, s in terms.items():
                    out[key] = out.get(key, Fraction(0)) + ca * cb * s
                cen += ca * cb * central
        return {k: v for k, v in out.items() if v != 0}, cen

    jac_ok = True
    pairs = list(product(range(dim), repeat=2))
    for e1, e2, e3 in product(pairs, repeat=3):
        total, cen = {}, Fraction(0)
        for x, y, z in ((e1, e2, e3), (e2, e3, e1), (e3, e1, e2)):
            inner, _ = bracket_combo({x: Fraction(1)}, {y: Fraction(1)})
            outer, c = bracket_combo(inner, {z: Fraction(1)})
            cen += c
            for key, v in outer.items():
                total[key] = total.get(key, Fraction(0)) + v
        if any(v != 0 for v in total.values()) or cen != 0:
            jac_ok = False
            break
    ok = sc_ok and jac_ok
    acceptance_report("fluctuation algebra exact at the smallest band", ok,
                      f"structure_constants={'ok' if sc_ok else 'FAIL'} "
                      f"jacobi={'ok' if jac_ok else 'FAIL'}")
    assert ok


def test_criterion_11_cli_runs_are_byte_identical(acceptance_report):
    def run(*args):
        cp = subprocess.run([sys.executable, "-m", "kondo", *args],
                            capture_output=True, text=True)
        assert cp.returncode == 0, cp.stderr
        return cp.stdout

    cmds = [
        ("spectrum", "--lambda", "10", "--g", "1.3"),
        ("condensate", "--lambda", "6", "--g", "0.9", "--xi", "0.25"),
        ("evolve", "--lambda", "2", "--j", "0.8", "--t-final", "0.1",
         "--dt", "1e-3", "--perturb", "0.05", "--seed", "3"),
    ]
    identical = all(run(*cmd) == run(*cmd) for cmd in cmds)
    acceptance_report("CLI reruns byte-identical", identical,
                      f"{len(cmds)} commands, two runs each")
    assert identical
