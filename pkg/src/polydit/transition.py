"""Transition from the lattice shutter to the continuum Moshinsky function.

Large-argument Bessel asymptotics turn the Bessel sum into a discrete
Gauss sum (the discrete Moshinsky function), and the Euler-Maclaurin
formula turns it into an integral plus a half end-point term.  The end-point
term survives as a correction ``exp(-i(pi/4 + mu**2/2tau)) / sqrt(8 pi tau)``
to the continuum amplitude.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import integrate, optimize
from scipy import special as sc

from polydit.moshinsky import moshinsky
from polydit.shutter import psi
from polydit.specfun import (
    AsymptoticTerms,
    bessel_tail_order,
    gauss_sum_extent,
    gauss_sum_weights,
    hankel_pq,
)

Model = Literal["exact", "first_order"]


@dataclass(frozen=True)
class TransitionReport:
    """Continuum main term, end-point correction and exact lattice amplitude."""

    main_term: complex
    correction: complex
    exact: complex
    residual_P: float

    @property
    def first_order(self) -> complex:
        return self.main_term + self.correction

    @property
    def first_order_residual(self) -> float:
        """``|main + correction|**2 - |main|**2``: the residual the correction predicts."""
        return abs(self.first_order) ** 2 - abs(self.main_term) ** 2


def asymptotic_bessel(nu: int, tau: float) -> complex:
    """Approximate ``J_nu(tau) exp(-i tau + i pi nu/2)`` for large tau.

    Keeps only the non-oscillating half of the Hankel form,
    ``exp(-i pi/4) / sqrt(2 pi tau) * exp(i nu**2 / 2 tau)``; the other half
    carries ``exp(-2 i tau)`` and is dropped.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    if tau < 10 or nu < 1:
        warnings.warn("outside the advisory region tau >= 10, nu >= 1", stacklevel=2)
    return complex(np.exp(-0.25j * math.pi) / math.sqrt(2 * math.pi * tau)
                   * np.exp(0.5j * nu**2 / tau))


def asymptotic_bessel_j(nu: int, tau: float) -> float:
    """Real ``J_nu(tau)`` implied by keeping both Hankel halves with ``R = exp(i nu**2/2tau)``."""
    chi = tau - 0.5 * math.pi * nu - 0.25 * math.pi
    r = np.exp(0.5j * nu**2 / tau)
    return float(math.sqrt(2 / (math.pi * tau)) * (r.real * math.cos(chi) - r.imag * math.sin(chi)))


def hankel_terms(nu: float, tau: float) -> AsymptoticTerms:
    """Full P/Q auxiliary series at ``(nu, tau)``."""
    return hankel_pq(nu, tau)


def _prefactor(mu, rho, tau):
    return np.exp(1j * (rho * mu - 0.5 * rho**2 * tau)) * np.exp(-0.25j * math.pi) / np.sqrt(
        2 * math.pi * tau
    )


def discrete_moshinsky(mu: int, rho: float, tau: float, damping: float = 0.0) -> complex:
    """Discrete Moshinsky function.

    ``exp(i(rho mu - rho**2 tau/2)) exp(-i pi/4)/sqrt(2 pi tau)``
    times ``sum_{nu <= floor(rho tau - mu)} exp(i nu**2 / 2tau) w(nu)`` where ``w``
    is :func:`polydit.specfun.gauss_sum_weights`.
    """
    tau = float(tau)
    if not tau > 0:
        raise ValueError("tau must be positive")
    top = math.floor(rho * tau - mu)
    extent = gauss_sum_extent(tau, damping)
    if top < -extent:
        return 0j
    nu = np.arange(-extent, min(top, extent) + 1, dtype=float)
    s = np.sum(np.exp(0.5j * nu**2 / tau) * gauss_sum_weights(nu, tau, damping))
    return complex(_prefactor(mu, rho, tau) * s)


def _em_integral(lo: float, hi: float, tau: float, theta: float) -> complex:
    # split into unit-length panels; the integrand oscillates with period ~ 2pi
    edges = np.arange(lo, hi, 4.0)
    edges = np.append(edges, hi)
    total = 0j
    for a, b in zip(edges[:-1], edges[1:]):
        re, err_re, *_ = integrate.quad(
            lambda n: sc.jv(n, tau) * math.cos(theta * n), a, b, epsabs=1e-13, full_output=1
        )
        im, err_im, *_ = integrate.quad(
            lambda n: sc.jv(n, tau) * math.sin(theta * n), a, b, epsabs=1e-13, full_output=1
        )
        if err_re > 1e-8 or err_im > 1e-8:
            raise ArithmeticError("quadrature did not converge")
        total += complex(re, im)
    return total


def euler_maclaurin_phi(mu: int, rho: float, tau: float) -> complex:
    """Euler-Maclaurin estimate of the Bessel sum ``Phi_mu(rho, tau)``.

    Negative orders are folded onto positive ones (``J_{-n} = (-1)**n J_n``),
    so the sum becomes ``sum_{n >= mu} J_n exp(i(pi/2 - rho) n)``, estimated by
    ``int_mu^N J_n exp(i(pi/2 - rho) n) dn + J_mu exp(i(pi/2 - rho) mu) / 2``
    with real-order Bessel functions and ``N`` the Bessel tail order.  For
    ``mu <= 0`` the complementary sum is used with the Jacobi-Anger total
    ``sum_nu J_nu exp(i(rho + pi/2) nu) = exp(i tau cos(rho))``.
    """
    tau = float(tau)
    if not tau > 0:
        raise ValueError("tau must be positive: the integrand degenerates at tau = 0")
    n_top = bessel_tail_order(tau)
    if mu >= 1:
        theta = math.pi / 2 - rho
        if mu >= n_top:
            return 0j
        head = 0.5 * sc.jv(mu, tau) * np.exp(1j * theta * mu)
        return complex(_em_integral(float(mu), float(n_top), tau, theta) + head)
    # complement: sum_{nu >= 1 - mu} J_nu exp(i(rho + pi/2) nu)
    theta = rho + math.pi / 2
    total = np.exp(1j * tau * math.sin(theta))
    a = 1 - mu
    if a >= n_top:
        return complex(total)
    tail = _em_integral(float(a), float(n_top), tau, theta) + 0.5 * sc.jv(a, tau) * np.exp(
        1j * theta * a
    )
    return complex(total - tail)


def em_correction(mu, tau):
    """End-point term ``exp(-i(pi/4 + mu**2/2tau)) / sqrt(8 pi tau)``."""
    tau = np.asarray(tau, dtype=float)
    out = np.exp(-1j * (0.25 * math.pi + 0.5 * np.asarray(mu, dtype=float) ** 2 / tau)) / np.sqrt(
        8 * math.pi * tau
    )
    return out if out.ndim else complex(out)


def asymptotic_moshinsky(mu: int, rho: float, tau: float) -> TransitionReport:
    """Moshinsky main term, end-point correction and exact amplitude at one point.

    The correction is added as is, without the plane-wave phase
    carried by the main term; the exact amplitude is :func:`polydit.shutter.psi`.
    """
    main = complex(moshinsky(mu, rho, tau))
    corr = complex(em_correction(mu, tau))
    exact = complex(psi(mu, rho, tau))
    return TransitionReport(main, corr, exact, abs(exact) ** 2 - abs(main) ** 2)


def residual_curve(mu: int, rho: float, taus, model: Model = "exact") -> np.ndarray:
    """Residual ``P(tau)`` on a grid of times.

    ``model="exact"`` uses ``|psi|**2 - |M|**2``; ``model="first_order"``
    uses ``|M + correction|**2 - |M|**2``.
    """
    taus = np.asarray(taus, dtype=float)
    m = moshinsky(mu, rho, taus)
    if model == "exact":
        p = np.abs(psi(mu, rho, taus)) ** 2 - np.abs(m) ** 2
    elif model == "first_order":
        p = np.abs(m + em_correction(mu, taus)) ** 2 - np.abs(m) ** 2
    else:
        raise ValueError(f"unknown model {model!r}")
    return np.asarray(p, dtype=float)


def residual_max(
    mu: int,
    rho: float,
    tau_range: tuple[float, float],
    grid_step: float = 0.05,
    model: Model = "exact",
) -> tuple[float, float]:
    """Time and signed value of the largest ``|P|`` over ``tau_range``.

    A grid scan locates the peak, which is then refined by bounded scalar
    minimisation within one grid step either side.
    """
    lo, hi = map(float, tau_range)
    if not 0 < lo < hi:
        raise ValueError("tau_range must satisfy 0 < lo < hi")
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    taus = np.arange(lo, hi + 0.5 * grid_step, grid_step)
    taus = taus[taus <= hi]
    p = residual_curve(mu, rho, taus, model)
    k = int(np.argmax(np.abs(p)))
    a = max(lo, taus[k] - grid_step)
    b = min(hi, taus[k] + grid_step)
    sign = 1.0 if p[k] >= 0 else -1.0
    res = optimize.minimize_scalar(
        lambda t: -sign * float(residual_curve(mu, rho, [t], model)[0]),
        bounds=(a, b),
        method="bounded",
        options={"xatol": 1e-8},
    )
    t_star = float(res.x)
    p_star = float(residual_curve(mu, rho, [t_star], model)[0])
    if abs(p_star) < abs(p[k]):
        t_star, p_star = float(taus[k]), float(p[k])
    return t_star, p_star
