import math

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate
from scipy import special as sc

from polydit.specfun import (
    bessel_j_row,
    bessel_j_table,
    bessel_tail_order,
    fresnel,
    gauss_2f1_unit,
    gauss_sum_weights,
    gauss_theta_sum,
    gamma_ratio,
    hankel_pq,
    incomplete_beta_unit,
    lerch_unit,
)


def test_bessel_at_zero():
    row = bessel_j_row(-3, 3, 0.0)
    np.testing.assert_array_equal(row.values, [0, 0, 0, 1, 0, 0, 0])


def test_bessel_reflection():
    row = bessel_j_row(-2, 2, 3.7)
    assert row[-2] == row[2]
    assert row[-1] == -row[1]


def test_bessel_normalisation():
    j = bessel_j_row(0, 120, 50.0).values
    assert abs(j[0] ** 2 + 2 * np.sum(j[1:] ** 2) - 1) < 1e-10


def test_bessel_vs_integral_representation():
    x = 50.0
    j = bessel_j_row(0, 120, x)
    for n in (0, 7, 49, 60, 90):
        ref = integrate.quad(lambda t: math.cos(n * t - x * math.sin(t)), 0, math.pi, limit=400)[0] / math.pi
        assert abs(j[n] - ref) < 1e-10


def test_bessel_vs_scipy_wide_range():
    x = np.array([1e-3, 0.7, 9.0, 77.7, 333.0, 2000.0])
    t = bessel_j_table(300, x)
    ref = sc.jv(np.arange(301)[:, None], x[None, :])
    assert np.abs(t - ref).max() < 1e-12


def test_bessel_recurrence_residual():
    x = 31.4
    j = bessel_j_row(0, 80, x).values
    n = np.arange(1, 80)
    res = (2 * n / x) * j[1:-1] - j[:-2] - j[2:]
    assert np.abs(res).max() < 1e-10


def test_tail_bound_overestimates(rng):
    for _ in range(100):
        x = float(rng.uniform(0, 500))
        n = bessel_tail_order(x) + int(rng.integers(0, 30))
        assert abs(sc.jv(n, x)) < 1e-12


def test_bessel_row_validation():
    with pytest.raises(ValueError):
        bessel_j_row(3, 2, 1.0)
    with pytest.raises(ValueError):
        bessel_j_row(0, 2, math.nan)
    with pytest.raises(ValueError):
        bessel_j_row(0, 2, 1.0, tol=1e-3)


def test_fresnel_values():
    assert fresnel(0.0) == (0.0, 0.0)
    c, s = fresnel(10.0)
    assert abs(c - 0.5) < 0.04 and abs(s - 0.5) < 0.04
    ref_c = integrate.quad(lambda u: math.cos(math.pi * u * u / 2), 0, 1.3)[0]
    ref_s = integrate.quad(lambda u: math.sin(math.pi * u * u / 2), 0, 1.3)[0]
    c, s = fresnel(1.3)
    assert abs(c - ref_c) < 1e-10 and abs(s - ref_s) < 1e-10


def test_cornu_unit_speed():
    h = 1e-4
    for xi in (0.1, 0.9, 2.3, 4.0):
        c1, s1 = fresnel(xi + h)
        c0, s0 = fresnel(xi - h)
        assert abs(math.hypot(c1 - c0, s1 - s0) / (2 * h) - 1) < 1e-6


def test_lerch_alternating():
    k = np.arange(2_000_000)
    direct = np.sum((-1.0) ** k / (1 + k))
    assert abs(lerch_unit(math.pi, 1.0) - math.log(2)) < 1e-12
    assert abs(lerch_unit(math.pi, 1.0) - direct) < 1e-6


def test_lerch_vs_quadrature():
    z = 1j
    a = 0.5
    f = lambda t: t ** (a - 1) / (1 - z * t)  # noqa: E731
    re = integrate.quad(lambda t: f(t).real, 0, 1, limit=200)[0]
    im = integrate.quad(lambda t: f(t).imag, 0, 1, limit=200)[0]
    assert abs(lerch_unit(math.pi / 2, a) - complex(re, im)) < 1e-8


@pytest.mark.parametrize("theta,a", [(0.3, 0.7), (1.9, 4.5), (-2.2, 13.0), (0.01, 2.0), (3.0, -2.5), (1.0, 250.0)])
def test_lerch_vs_mpmath(theta, a):
    ref = complex(mp.lerchphi(mp.expj(theta), 1, a))
    assert abs(lerch_unit(theta, a) - ref) <= 1e-8 * abs(ref)


def test_lerch_large_a():
    # a Phi(z, 1, a) -> sum z**k = 1/(1 - z) as a grows; it tends to 1 only when z -> 0
    z = np.exp(1j)
    assert abs(1e6 * lerch_unit(1.0, 1e6) - 1 / (1 - z)) < 1e-5


def test_lerch_contiguous_relation(rng):
    for _ in range(10):
        theta = float(rng.uniform(-3, 3))
        a = float(rng.uniform(0.2, 30))
        z = np.exp(1j * theta)
        assert abs(lerch_unit(theta, a) - (1 / a + z * lerch_unit(theta, a + 1))) < 1e-9


def test_lerch_errors():
    with pytest.raises(ValueError):
        lerch_unit(0.0, 1.0)
    with pytest.raises(ValueError):
        lerch_unit(1.0, -2.0)


def test_2f1_ln2():
    assert abs(gauss_2f1_unit(1.0, math.pi) - math.log(2)) < 1e-12


def test_2f1_cesaro_partial_sums():
    b, theta = 5.0, 1.0
    z = np.exp(1j * theta)
    n = 200_000
    k = np.arange(n)
    terms = b * z**k / (b + k)
    partial = np.cumsum(terms)
    cesaro = partial.mean()
    assert abs(gauss_2f1_unit(b, theta) - cesaro) < 1e-4
    # the Cesàro mean converges like 1/n; Richardson on two lengths removes that
    c2 = np.cumsum(terms[: n // 2]).mean()
    assert abs(gauss_2f1_unit(b, theta) - (2 * cesaro - c2)) < 1e-7


def test_2f1_near_origin():
    # damped series: 2F1(1, b; 1 + b; r e^{i theta}) -> 1 as r -> 0
    b = 2.5
    for r in (1e-3, 1e-5):
        k = np.arange(60)
        val = np.sum(b / (b + k) * (r * np.exp(0.4j)) ** k)
        assert abs(val - 1) < 2 * r


def test_incomplete_beta_definitional():
    a, theta = 3.0, math.pi / 2
    assert abs(incomplete_beta_unit(theta, a) * np.exp(-1j * a * theta) - lerch_unit(theta, a)) < 1e-14


def test_incomplete_beta_radial_path():
    # B(z; a, 0) = int_0^z t^{a-1} (1-t)^{-1} dt, along t = s z
    z, a = -1j, 2.0
    f = lambda s: (s * z) ** (a - 1) / (1 - s * z) * z  # noqa: E731
    re = integrate.quad(lambda s: f(s).real, 0, 1)[0]
    im = integrate.quad(lambda s: f(s).imag, 0, 1)[0]
    assert abs(incomplete_beta_unit(-math.pi / 2, a) - complex(re, im)) < 1e-10


def test_incomplete_beta_a1_pi():
    k = np.arange(1_000_000)
    direct = -np.sum((-1.0) ** k / (1 + k))  # z**a Phi with z = -1, a = 1
    assert abs(incomplete_beta_unit(math.pi, 1.0) - (-math.log(2))) < 1e-12
    assert abs(incomplete_beta_unit(math.pi, 1.0) - direct) < 1e-5


def test_theta_sum_damped():
    assert abs(gauss_theta_sum(50.0, damping=10.0) - 1) < 1e-4


def test_theta_sum_even_fold():
    tau = 40.0
    nu = np.arange(-400, 401, dtype=float)
    full = np.sum(np.exp(0.5j * nu**2 / tau) * gauss_sum_weights(nu, tau, 0.01))
    assert abs(gauss_theta_sum(tau, 0.01) - full) < 1e-12


def test_theta_sum_continuum_value():
    tau = 250.0
    assert abs(gauss_theta_sum(tau) / np.sqrt(2j * math.pi * tau) - 1) < 1e-6


def test_theta_sum_errors():
    with pytest.raises(ValueError):
        gauss_theta_sum(0.0)
    with pytest.raises(ValueError):
        gauss_theta_sum(1.0, damping=-1)


def test_gamma_ratio():
    nu = 50.0
    exact = math.exp(math.lgamma(nu + 1.5) - math.lgamma(nu - 0.5))
    assert gamma_ratio(nu, 1) == pytest.approx(exact, rel=1e-13)
    assert abs(gamma_ratio(nu, 1) / nu**2 - 1) < 1e-3


def test_hankel_pq():
    for nu, tau in ((3, 40.0), (20, 400.0)):
        t = hankel_pq(nu, tau)
        chi = tau - nu * math.pi / 2 - math.pi / 4
        approx = math.sqrt(2 / (math.pi * tau)) * (t.P * math.cos(chi) - t.Q * math.sin(chi))
        assert abs(approx - sc.jv(nu, tau)) < 1e-10
        assert not t.degraded
    assert hankel_pq(30, 12.0).degraded
