import math

import numpy as np
import pytest

from polydit.moshinsky import moshinsky_density, xi_of
from polydit.shutter import (
    PolymerState,
    Profile,
    classical_profile,
    density,
    density_double_sum,
    free_propagator,
    ode_oracle_evolve,
    phi,
    profile_space,
    profile_time,
    psi,
)
from polydit.spiral import crossings
from polydit.units import initial_wavefunction


def test_propagator_identity_at_equal_times():
    assert free_propagator(3, 2.0, 3, 2.0) == 1
    assert free_propagator(3, 2.0, 4, 2.0) == 0


def test_propagator_unitarity():
    nus = np.arange(-80, 81)
    rows = {m: np.array([free_propagator(m, 3.0, int(n), 0.0) for n in nus]) for m in range(-5, 6)}
    for m in range(-5, 6):
        for m2 in range(-5, 6):
            ip = np.vdot(rows[m2], rows[m])
            assert abs(ip - (m == m2)) < 1e-8


def test_propagator_rejects_backward_time():
    with pytest.raises(ValueError):
        free_propagator(0, 1.0, 0, 2.0)


@pytest.mark.parametrize("mu", [-4, -1, 0, 1, 6])
def test_phi_at_zero_time(mu):
    assert phi(mu, 0.8, 0.0) == (1.0 if mu <= 0 else 0.0)
    assert psi(mu, 0.8, 0.0) == pytest.approx(initial_wavefunction(mu, 0.8), abs=1e-15)


def test_phi_vectorised_matches_scalar():
    taus = np.array([0.5, 7.0, 42.0, 250.0])
    vec = phi(3, 0.4, taus)
    for t, v in zip(taus, vec):
        assert abs(phi(3, 0.4, float(t)) - v) < 1e-13


def _pde_residual(mu, rho, tau, h=1e-2):
    t = tau + h * np.array([-2, -1, 1, 2])
    p = psi(mu, rho, t)
    dpsi = (p[0] - 8 * p[1] + 8 * p[2] - p[3]) / (12 * h)
    lhs = 2j * dpsi
    rhs = 2 * psi(mu, rho, tau) - psi(mu + 1, rho, tau) - psi(mu - 1, rho, tau)
    return abs(lhs - rhs)


def test_pde_residual_example():
    assert _pde_residual(4, 1.1, 20.0) <= 1e-5


def test_pde_residual_random(rng):
    for _ in range(50):
        mu = int(rng.integers(-20, 21))
        rho = float(rng.uniform(0.01, math.pi - 0.01))
        tau = float(rng.uniform(1, 100))
        assert _pde_residual(mu, rho, tau) <= 1e-5


def test_deep_in_beam():
    assert abs(density(-50, 0.3, 1.0) - 1) < 1e-3


def test_density_quoted_value():
    assert density(10, 2.5, 4.0) == pytest.approx(4.71e-8, rel=0.05)


def test_density_initial():
    assert density(5, 0.3, 0.0) == 0
    assert density(-3, 0.3, 0.0) == 1


def test_density_double_sum():
    # nu below -40 is negligible at tau = 5
    assert abs(density_double_sum(3, 0.7, 5.0, -40) - density(3, 0.7, 5.0)) < 1e-10


def test_oracle_matches_closed_form_probe():
    st = ode_oracle_evolve(0.3, 50.0, (-100, 120), probes=[10])
    assert abs(st.density(10) - density(10, 0.3, 50.0)) <= 1e-6


def test_oracle_matches_closed_form_all_probes():
    probes = np.arange(-5, 16)
    st = ode_oracle_evolve(1.1, 30.0, (-80, 90), probes=probes)
    got = np.array([st.density(int(p)) for p in probes])
    exact = np.array([density(int(p), 1.1, 30.0) for p in probes])
    assert np.abs(got - exact).max() <= 1e-6


def test_oracle_zero_time_is_initial():
    st = ode_oracle_evolve(0.3, 0.0, (-10, 10))
    np.testing.assert_array_equal(st.amplitudes, initial_wavefunction(np.arange(-10, 11), 0.3))


def test_oracle_norm_conservation():
    sites = np.arange(-100, 101)
    init = np.exp(-0.5 * (sites / 6.0) ** 2 + 0.9j * sites)
    st = ode_oracle_evolve(0.0, 30.0, (-100, 100), initial=init)
    assert abs(st.norm() / np.sum(np.abs(init) ** 2) - 1) < 1e-9


def test_oracle_light_cone_guard():
    with pytest.raises(ValueError, match="window edge"):
        ode_oracle_evolve(0.3, 50.0, (-30, 30), probes=[10])


def test_oracle_dt_guard():
    with pytest.raises(ValueError):
        ode_oracle_evolve(0.3, 1.0, (-30, 30), dt=0.2)


def test_polymer_state_validation():
    with pytest.raises(ValueError):
        PolymerState((0, 2), 0.0, np.zeros(2))
    with pytest.raises(ValueError):
        PolymerState((0, 1), 0.0, np.array([np.nan, 0]))
    with pytest.raises(IndexError):
        PolymerState((0, 1), 0.0, np.zeros(2)).amplitude(5)


def test_profile_validation():
    with pytest.raises(ValueError):
        Profile("time_at_fixed_site", [0, 0], [1, 1], "polymer")
    with pytest.raises(ValueError):
        Profile("time_at_fixed_site", [], [], "polymer")


def test_profile_time_residual_value():
    taus = np.arange(0.5, 400.0001, 0.5)
    prof = profile_time(10, 0.3, taus)
    diff = np.abs(prof.densities - moshinsky_density(xi_of(10, 0.3, taus))).max()
    # exact lattice residual; the first-order value 0.0474 is checked in the transition tests
    assert diff == pytest.approx(0.0811, abs=5e-4)


@pytest.mark.xfail(strict=True, reason="exact lattice residual is 0.081; 0.0474 is the first-order value")
def test_profile_time_quoted_pmax():
    taus = np.arange(0.5, 400.0001, 0.5)
    prof = profile_time(10, 0.3, taus)
    diff = np.abs(prof.densities - moshinsky_density(xi_of(10, 0.3, taus))).max()
    assert diff == pytest.approx(0.0473868, abs=1e-3)


def test_profile_space_edge_width():
    rep = crossings(profile_space(250.0, 0.3, (0, 120)))
    assert rep.width == pytest.approx(0.85 * math.sqrt(math.pi * 250), rel=0.15)


def test_high_energy_no_crossing():
    d = profile_time(10, 3.1, np.arange(0, 400.01, 0.1)).densities
    assert d.max() < 1


def test_profile_space_matches_density():
    prof = profile_space(40.0, 0.9, (-10, 30))
    for mu, d in zip(prof.coordinates[::7], prof.densities[::7]):
        assert abs(d - density(int(mu), 0.9, 40.0)) < 1e-12


def test_classical_profile():
    assert classical_profile(10, 2.5, 3.9) == 0
    assert classical_profile(10, 2.5, 4.1) == 1
    assert classical_profile(0, 0.7, 0.0) == 1
    assert classical_profile(10, 0.3, 33.4) == 1


@pytest.mark.xfail(strict=True, reason="arrival at mu=10, rho=0.3 is ~78 wide; window mean is 0.82 just past 2*tau_cl")
def test_sliding_mean_reaches_classical():
    mu, rho = 10, 0.3
    step = 0.1
    taus = np.arange(0, 600, step)
    d = density(mu, rho, taus)
    w = int(round(4 * 29.0 / step))
    mean = np.convolve(d, np.ones(w) / w, mode="valid")
    centres = taus[w // 2: w // 2 + mean.size]
    sel = centres > 2 * mu / rho
    assert np.abs(mean[sel] - 1).max() < 0.05


def test_sliding_mean_late_times():
    # once the window lies beyond tau = 300 the mean has settled to the classical value
    step = 0.1
    taus = np.arange(0, 600, step)
    d = density(10, 0.3, taus)
    w = int(round(4 * 29.0 / step))
    mean = np.convolve(d, np.ones(w) / w, mode="valid")
    assert np.abs(mean[taus[: mean.size] > 300] - 1).max() < 0.05
