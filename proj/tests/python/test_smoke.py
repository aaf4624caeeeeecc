"""Smoke tests for the python bindings."""

import cmath
import math

import pytest

import nmosc


def test_free_evolution_phase():
    j = nmosc.SpectralDensity.power_law(0.0, 1.0, 1.0)
    traj = nmosc.solve_u(j, 0.0, 1.0, math.pi, math.pi / 20000)
    assert abs(traj.u[0] - 1.0) == 0.0
    assert abs(traj.u[-1] + 1.0) < 1e-7
    assert max(abs(u) for u in traj.u) <= 1.0 + 1e-6


def test_frequency_shift_closed_form():
    j = nmosc.SpectralDensity.power_law(0.5, 1.0, 2.0)
    assert nmosc.frequency_shift(j) == pytest.approx(-1.0, abs=1e-14)
    sub = nmosc.SpectralDensity.power_law(1.0, 0.5, 1.0)
    assert nmosc.frequency_shift(sub) == pytest.approx(-math.gamma(0.5), rel=1e-13)


def test_kernels():
    j = nmosc.SpectralDensity.power_law(1.0, 1.0, 1.0)
    assert nmosc.dissipation_kernel(j, 0.0) == pytest.approx(1.0)
    assert nmosc.dissipation_kernel(j, 1.0) == pytest.approx(-0.5j)
    assert nmosc.noise_kernel(j, 0.0, 2.0) == 0.0
    t = 1.7
    sym = abs(nmosc.dissipation_kernel(j, -t) - nmosc.dissipation_kernel(j, t).conjugate())
    assert sym < 1e-12


def test_discrete_bound_state():
    assert nmosc.discrete_bound_energy([(1.0, 2.0)], 1.0) == pytest.approx(-1.0, abs=1e-10)
    assert nmosc.discrete_bound_energy([(1.0, 0.1)], 1.0) is None
    energy, weight = nmosc.oracle.bound_state_eigen([(1.0, 2.0)], 1.0)
    assert energy == pytest.approx(-1.0, abs=1e-12)
    assert weight == pytest.approx(0.5, abs=1e-12)


def test_stability_report():
    strong = nmosc.SpectralDensity.power_law(2.0, 1.0, 1.0)
    report = nmosc.stability_report(strong, 1.0)
    assert report.margin == pytest.approx(-1.0)
    assert report.unbounded
    assert report.pole is not None
    assert report.pole.omega0 < 0.0
    assert 0.0 < report.pole.residue <= 1.0

    weak = nmosc.SpectralDensity.power_law(0.1, 1.0, 1.0)
    report = nmosc.stability_report(weak, 1.0)
    assert not report.unbounded
    assert report.pole is None


def test_solver_against_oracle():
    j = nmosc.SpectralDensity.power_law(1.0, 1.0, 1.0)
    modes = nmosc.discretize(j, 10, 5.0)
    jd = nmosc.SpectralDensity.discrete(modes)
    numeric = nmosc.solve_u(jd, 0.0, 1.0, 5.0, 0.01)
    exact = nmosc.oracle.exact_u(modes, 1.0, 5.0, 0.01)
    err = max(abs(a - b) for a, b in zip(numeric.u, exact.u))
    assert err < 1e-3


def test_coefficients_and_occupation():
    modes = [(0.5, 0.2), (1.5, 0.3)]
    jd = nmosc.SpectralDensity.discrete(modes)
    traj = nmosc.solve_u(jd, 1.0, 1.0, 6.0, 0.01)
    coeffs = nmosc.compute_coefficients(traj, jd, 1.0)
    assert coeffs.gamma[0] == 0.0
    assert coeffs.omega_tilde[0] == 1.0
    assert min(coeffs.xi) >= -1e-10
    n_mean, deviation = nmosc.mean_occupation(traj, coeffs, 1.0)
    assert n_mean[0] == pytest.approx(1.0)
    assert deviation < 1e-3


def test_ladder_and_qbm():
    ladder = nmosc.oracle.ladder_check([(1.0, 2.0)], 1.0, 2)
    assert ladder["ladder_confirmed"]
    assert ladder["sectors"][1]["min_eigenvalue"] == pytest.approx(-2.0, abs=1e-10)

    report = nmosc.qbm_stability(1.0, [(1.0, 1.0, 2.0)])
    assert report.kappa_renormalized == pytest.approx(-3.0)
    assert report.unstable
    schur, min_eig, consistent = nmosc.oracle.qbm_hessian_check(1.0, [(1.0, 1.0, 2.0)])
    assert schur == pytest.approx(-3.0)
    assert min_eig < 0.0
    assert consistent


def test_errors_are_raised():
    j = nmosc.SpectralDensity.power_law(1.0, 1.0, 1.0)
    with pytest.raises(Exception):
        j.evaluate(-1.0)
    with pytest.raises(Exception):
        nmosc.SpectralDensity.power_law(-1.0, 1.0, 1.0)
