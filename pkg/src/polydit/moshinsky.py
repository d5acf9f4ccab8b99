"""Continuum shutter (Moshinsky function) and its diffraction widths."""

from __future__ import annotations

import math
import warnings

import numpy as np

from polydit.shutter import Profile
from polydit.specfun import fresnel

#: Width in xi of the first Cornu-spiral excursion past the asymptote circle.
CORNU_XI_WIDTH = 0.85


def xi_of(mu, rho, tau):
    """Fresnel variable ``(rho tau - mu) / sqrt(pi tau)``."""
    tau = np.asarray(tau, dtype=float)
    if np.any(tau <= 0):
        raise ValueError("tau must be positive")
    out = (rho * tau - np.asarray(mu, dtype=float)) / np.sqrt(math.pi * tau)
    return out if np.ndim(out) else float(out)


def moshinsky(mu, rho, tau):
    """Moshinsky function for a shutter opened at ``tau = 0``.

    ``M = exp(-i pi/4)/sqrt(2) exp(i(rho mu - rho**2 tau/2)) {[1/2 + C] + i[1/2 + S]}``
    evaluated at ``xi = xi_of(mu, rho, tau)``.  Defined for ``tau > 0`` only.
    """
    xi = np.asarray(xi_of(mu, rho, tau))
    c, s = fresnel(xi)
    mu = np.asarray(mu, dtype=float)
    tau = np.asarray(tau, dtype=float)
    phase = np.exp(1j * (rho * mu - 0.5 * rho**2 * tau))
    out = np.exp(-0.25j * math.pi) / math.sqrt(2.0) * phase * ((0.5 + c) + 1j * (0.5 + s))
    return out if out.ndim else complex(out)


def moshinsky_density(xi):
    """``|M|**2 = ((1/2 + C)**2 + (1/2 + S)**2) / 2``."""
    c, s = fresnel(np.asarray(xi, dtype=float))
    out = 0.5 * ((0.5 + c) ** 2 + (0.5 + s) ** 2)
    return out if np.ndim(out) else float(out)


def with_reflectivity(mu, rho, tau, alpha: float):
    """Shutter with a reflecting wall: ``M(rho) + exp(i pi alpha) M(-rho)``."""
    return moshinsky(mu, rho, tau) + np.exp(1j * math.pi * alpha) * moshinsky(mu, -rho, tau)


def time_width(mu: float, rho: float) -> float:
    """Diffraction width in time, ``0.85 sqrt(pi mu / rho**3)``.

    Obtained by linearising ``xi`` about the classical arrival ``mu/rho``;
    a warning is issued when ``rho mu < 5`` where that step is poor.
    """
    if mu <= 0 or rho <= 0:
        raise ValueError("mu and rho must be positive")
    if rho * mu < 5:
        warnings.warn(
            f"rho*mu = {rho * mu:g} is small; the linearised time width is unreliable",
            stacklevel=2,
        )
    return CORNU_XI_WIDTH * math.sqrt(math.pi * mu / rho**3)


def space_width(tau: float) -> float:
    """Diffraction width in space, ``0.85 sqrt(pi tau)``."""
    if tau < 0:
        raise ValueError("tau must be non-negative")
    return CORNU_XI_WIDTH * math.sqrt(math.pi * tau)


def continuum_profile_time(mu: float, rho: float, tau_grid) -> Profile:
    taus = np.asarray(tau_grid, dtype=float)
    return Profile(
        "time_at_fixed_site", taus, moshinsky_density(xi_of(mu, rho, taus)), "continuum",
        density_fn=lambda t: float(moshinsky_density(xi_of(mu, rho, t))),
    )


def continuum_profile_space(tau: float, rho: float, mu_grid) -> Profile:
    mus = np.asarray(mu_grid, dtype=float)
    return Profile(
        "site_at_fixed_time", mus, moshinsky_density(xi_of(mus, rho, tau)), "continuum",
        density_fn=lambda m: float(moshinsky_density(xi_of(m, rho, tau))),
    )
