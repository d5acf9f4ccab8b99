"""Oracle cross-validation suites.

Each check compares a library value against an independent route and
yields a :class:`Check`.  ``tolerance_scale`` multiplies every tolerance;
values below 1 tighten the suite (useful for exercising the failure path).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Iterator

import numpy as np
from scipy import special as sc

from polydit.moshinsky import moshinsky_density
from polydit.shutter import density, ode_oracle_evolve
from polydit.specfun import bessel_j_table, fresnel, gauss_theta_sum, lerch_unit
from polydit.transition import discrete_moshinsky, residual_max
from polydit.wave import (
    closed_form,
    oracle_window,
    pv_solution,
    wave_ode_oracle,
    wave_oracle_value,
)

SUITES = ("specfun", "shutter", "transition", "wave")


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value <= self.tol)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def _specfun(scale: float) -> Iterator[Check]:
    x = np.array([0.5, 3.0, 17.3, 120.0, 400.0, 1500.0])
    table = bessel_j_table(200, x)
    ref = sc.jv(np.arange(201)[:, None], x[None, :])
    yield Check("specfun", "bessel_vs_scipy_max_abs", float(np.abs(table - ref).max()), 1e-10 * scale)

    worst = 0.0
    for tau in (5.0, 50.0, 250.0):
        n = int(tau + 10 * tau ** (1 / 3) + 30)
        j = bessel_j_table(n, [tau])[:, 0]
        for theta in (0.3, 1.1, 2.9):
            k = np.arange(1, n + 1)
            sign = (-1.0) ** k
            total = j[0] + np.sum(j[1:] * (np.exp(1j * theta * k) + sign * np.exp(-1j * theta * k)))
            worst = max(worst, abs(total - np.exp(1j * tau * math.sin(theta))))
    yield Check("specfun", "jacobi_anger_max_abs", worst, 1e-9 * scale)

    worst = 0.0
    for theta in (0.2, 1.0, 2.5, math.pi, -1.7):
        z = np.exp(1j * theta)
        worst = max(worst, abs(lerch_unit(theta, 1.0) - (-np.log(1 - z) / z)))
    yield Check("specfun", "lerch_a1_vs_log_max_abs", worst, 1e-10 * scale)

    xi = np.arange(0.0, 5.0, 1e-3)
    c, s = fresnel(xi)
    chord = np.hypot(np.diff(c), np.diff(s)) / np.diff(xi)
    yield Check("specfun", "cornu_unit_speed_max_dev", float(np.abs(chord - 1).max()), 1e-3 * scale)

    yield Check("specfun", "moshinsky_density_at_xi0", abs(moshinsky_density(0.0) - 0.25), 1e-10 * scale)


def _shutter(scale: float) -> Iterator[Check]:
    probes = np.arange(0, 21)
    worst = 0.0
    for rho in (0.3, 1.1, 2.5):
        for tau in (5.0, 20.0, 50.0):
            m = int(math.ceil(1.5 * tau + 20))
            st = ode_oracle_evolve(rho, tau, (-m, 20 + m), probes=probes)
            got = np.array([st.density(int(p)) for p in probes])
            exact = np.array([density(int(p), rho, tau) for p in probes])
            worst = max(worst, float(np.abs(got - exact).max()))
    yield Check("shutter", "ode_oracle_vs_closed_form_density", worst, 1e-6 * scale)
    yield Check(
        "shutter", "density_10_2.5_4_rel_err",
        abs(density(10, 2.5, 4.0) / 4.71e-8 - 1), 0.05 * scale,
    )


def _transition(scale: float) -> Iterator[Check]:
    worst = 0.0
    for mu, rho, tau in ((10, 0.3, 250.5), (7, 0.5, 100.3), (-4, 0.2, 60.7)):
        lhs = discrete_moshinsky(mu, rho, tau) + discrete_moshinsky(-mu, -rho, tau)
        pref = np.exp(1j * (rho * mu - 0.5 * rho**2 * tau)) * np.exp(-0.25j * math.pi) / math.sqrt(
            2 * math.pi * tau
        )
        worst = max(worst, abs(lhs - pref * gauss_theta_sum(tau)))
    yield Check("transition", "theta_inversion_identity", worst, 1e-3 * scale)

    mu, rho, tau = 10, 0.3, 2000.0
    ratio = discrete_moshinsky(mu, rho, tau) / np.exp(1j * (rho * mu - 0.5 * rho**2 * tau))
    yield Check("transition", "deep_pass_plane_wave_ratio", abs(ratio - 1), 0.05 * scale)

    _, p = residual_max(10, 0.3, (10.0, 400.0), 0.05, model="first_order")
    yield Check("transition", "first_order_P_max", abs(p - 0.0473868), 1e-3 * scale)


def _wave(scale: float) -> Iterator[Check]:
    rng = np.random.default_rng(20240611)
    worst_pv = worst_ode = 0.0
    for _ in range(10):
        mu = int(rng.integers(-5, 11))
        rho = float(rng.choice([0.4, 0.5, 1.1]))
        tau = float(rng.uniform(1.0, 20.0))
        cf = closed_form(mu, rho, tau)
        worst_pv = max(worst_pv, abs(cf - pv_solution(mu, rho, tau)))
        worst_ode = max(worst_ode, abs(cf - wave_oracle_value(mu, rho, tau)))
    yield Check("wave", "closed_form_vs_pv", worst_pv, 1e-3 * scale)
    yield Check("wave", "closed_form_vs_leapfrog", worst_ode, 1e-3 * scale)

    exc = max(
        abs(pv_solution(mu, rho, tau, 0.1) - pv_solution(mu, rho, tau, 0.05))
        for mu, rho, tau in ((3, 0.5, 10.0), (-2, 1.1, 5.0), (7, 0.4, 15.0))
    )
    yield Check("wave", "pv_excision_stability", exc, 1e-5 * scale)

    sites = np.arange(-200, 201)
    f = np.exp(-0.5 * (sites / 8.0) ** 2 + 0.7j * sites)
    st = wave_ode_oracle(0.5, 50.0, (-200, 200), dt=0.01, initial=(f, np.zeros_like(f)),
                         track_energy=True)
    e = st.energies
    yield Check("wave", "leapfrog_energy_drift", float(np.abs(e - e[0]).max() / abs(e[0])), 1e-6 * scale)


_REGISTRY: dict[str, Callable[[float], Iterator[Check]]] = {
    "specfun": _specfun,
    "shutter": _shutter,
    "transition": _transition,
    "wave": _wave,
}


def run_suite(suite: str = "all", tolerance_scale: float = 1.0) -> list[Check]:
    """Run one suite (or ``"all"``) and return its checks."""
    if tolerance_scale <= 0:
        raise ValueError("tolerance_scale must be positive")
    names = SUITES if suite == "all" else (suite,)
    out: list[Check] = []
    for name in names:
        if name not in _REGISTRY:
            raise ValueError(f"unknown suite {name!r}")
        out.extend(_REGISTRY[name](tolerance_scale))
    return out


__all__ = ["Check", "SUITES", "oracle_window", "run_suite"]
