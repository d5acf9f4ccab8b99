"""Polymer (lattice) Schrödinger shutter.

The released beam evolves under ``2i dpsi/dtau = 2 psi_mu - psi_{mu+1} - psi_{mu-1}``
from ``psi_mu(0) = exp(i rho mu) Theta(-mu)``.  The exact solution is a
Bessel sum,

    psi_mu(tau) = exp(-i(tau - rho mu)) Phi_mu(rho, tau),
    Phi_mu(rho, tau) = sum_{nu <= -mu} J_nu(tau) exp(i (rho + pi/2) nu),

evaluated here from one Miller table per time grid.  An explicit RK4
integration of the lattice equations serves as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from polydit.specfun import bessel_j_row, bessel_j_table, bessel_tail_order
from polydit.units import heaviside, initial_wavefunction

Axis = Literal["time_at_fixed_site", "site_at_fixed_time"]
Dynamics = Literal["polymer", "continuum", "classical", "wave"]


@dataclass
class Profile:
    """Density samples along one axis, tagged with the producing dynamics.

    ``density_fn``, when present, evaluates the same density at arbitrary
    coordinates; crossing searches use it to refine sign changes.
    """

    axis: Axis
    coordinates: np.ndarray
    densities: np.ndarray
    dynamics: Dynamics
    density_fn: Callable[[float], float] | None = field(default=None, repr=False)

    def __post_init__(self):
        self.coordinates = np.asarray(self.coordinates, dtype=float)
        self.densities = np.asarray(self.densities, dtype=float)
        if self.coordinates.shape != self.densities.shape or self.coordinates.ndim != 1:
            raise ValueError("coordinates and densities must be 1-D arrays of equal length")
        if self.coordinates.size == 0:
            raise ValueError("empty profile")
        if np.any(np.diff(self.coordinates) <= 0):
            raise ValueError("coordinates must be strictly increasing")
        if np.any(self.densities < 0):
            raise ValueError("densities must be non-negative")

    @property
    def samples(self) -> np.ndarray:
        """``(n, 2)`` array of ``(coordinate, density)`` rows."""
        return np.column_stack([self.coordinates, self.densities])


@dataclass
class PolymerState:
    """Lattice amplitudes on the sites ``window[0] .. window[1]`` at time ``tau``."""

    window: tuple[int, int]
    tau: float
    amplitudes: np.ndarray

    def __post_init__(self):
        lo, hi = self.window
        if hi < lo:
            raise ValueError("empty window")
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (hi - lo + 1,):
            raise ValueError("amplitude count does not match the window")
        if not np.all(np.isfinite(self.amplitudes)):
            raise ValueError("non-finite amplitudes")

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.window[0], self.window[1] + 1)

    def amplitude(self, mu: int) -> complex:
        lo, hi = self.window
        if not lo <= mu <= hi:
            raise IndexError(f"site {mu} outside window {self.window}")
        return complex(self.amplitudes[mu - lo])

    def density(self, mu: int) -> float:
        return abs(self.amplitude(mu)) ** 2

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


def free_propagator(mu: int, tau: float, nu: int, tau0: float) -> complex:
    """Lattice propagator ``i**(nu-mu) J_{nu-mu}(tau - tau0) exp(-i (tau - tau0))``."""
    dt = float(tau) - float(tau0)
    if dt < 0:
        raise ValueError("tau must not precede tau0")
    n = int(nu) - int(mu)
    j = bessel_j_row(n, n, dt)[n]
    return complex(1j**n * j * np.exp(-1j * dt))


def _phi_grid(mu: int, rho: float, taus: np.ndarray) -> np.ndarray:
    taus = np.asarray(taus, dtype=float)
    if np.any(taus < 0) or not np.all(np.isfinite(taus)):
        raise ValueError("tau must be finite and non-negative")
    mu = int(mu)
    n_tail = bessel_tail_order(float(taus.max()) if taus.size else 0.0)
    n_top = max(n_tail, -mu)
    table = bessel_j_table(n_top, taus)
    out = np.zeros(taus.shape, dtype=complex)
    # negative orders folded: J_{-n} e^{-i a n} = J_n e^{i(pi/2 - rho) n}
    lo = max(mu, 1)
    if lo <= n_tail:
        n = np.arange(lo, n_tail + 1)
        out += np.exp(1j * (math.pi / 2 - rho) * n) @ table[lo:n_tail + 1]
    if mu <= 0:
        n = np.arange(0, -mu + 1)
        out += np.exp(1j * (rho + math.pi / 2) * n) @ table[0:-mu + 1]
    return out


def phi(mu: int, rho: float, tau, tol: float = 1e-12):
    """Bessel sum ``Phi_mu(rho, tau)``; ``tau`` may be a scalar or an array.

    The sum is cut at ``|nu| = tau + 10 tau**(1/3) + 30``, beyond which every
    Bessel value is below 1e-12.
    """
    if not 0 < tol <= 1e-6:
        raise ValueError("tol must lie in (0, 1e-6]")
    if not math.isfinite(rho):
        raise ValueError("rho must be finite")
    t = np.asarray(tau, dtype=float)
    out = _phi_grid(mu, float(rho), np.atleast_1d(t))
    return out.reshape(t.shape) if t.ndim else complex(out[0])


def psi(mu: int, rho: float, tau):
    """Shutter wave function ``exp(-i (tau - rho mu)) Phi_mu(rho, tau)``."""
    t = np.asarray(tau, dtype=float)
    return np.exp(-1j * (t - rho * mu)) * phi(mu, rho, tau)


def density(mu: int, rho: float, tau):
    """Polymer density ``|psi_mu(tau)|**2`` (computed as ``|Phi|**2``)."""
    return np.abs(phi(mu, rho, tau)) ** 2


def density_double_sum(mu: int, rho: float, tau: float, nu_min: int) -> float:
    """Double cosine sum for the density, truncated to ``nu_min <= nu, alpha <= -mu``.

    Quadratic in the number of terms; only meant for cross-checks.
    """
    row = bessel_j_row(nu_min, -mu, tau)
    j = row.values
    nu = row.orders
    c = np.cos((rho + math.pi / 2) * (nu[:, None] - nu[None, :]))
    return float(j @ c @ j)


def classical_profile(mu, rho, tau):
    """Classical density: 1 once ``tau >= mu/rho`` (time of flight), else 0."""
    mu = np.asarray(mu, dtype=float)
    tau = np.asarray(tau, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        arrived = np.where(rho > 0, rho * tau - mu, -mu)
    out = heaviside(arrived)
    return out if out.ndim else float(out)


def profile_time(mu: int, rho: float, tau_grid) -> Profile:
    """Polymer density at site ``mu`` over an increasing grid of times."""
    taus = np.asarray(tau_grid, dtype=float)
    if taus.size == 0:
        raise ValueError("empty time grid")
    return Profile(
        "time_at_fixed_site",
        taus,
        density(mu, rho, taus),
        "polymer",
        density_fn=lambda t: float(density(mu, rho, t)),
    )


def profile_space(tau: float, rho: float, mu_range: tuple[int, int]) -> Profile:
    """Polymer density on the sites ``mu_range[0] .. mu_range[1]`` at fixed time."""
    lo, hi = int(mu_range[0]), int(mu_range[1])
    if hi < lo:
        raise ValueError("empty site range")
    sites = np.arange(lo, hi + 1)
    tau = float(tau)
    if tau < 0:
        raise ValueError("tau must be non-negative")
    n_tail = bessel_tail_order(tau)
    n_top = max(n_tail, abs(lo), abs(hi))
    j = bessel_row_all(n_top, tau)
    # cumulative sums give Phi on every site at once
    nus = np.arange(-n_top, n_top + 1)
    terms = j * np.exp(1j * (rho + math.pi / 2) * nus)
    cum = np.cumsum(terms)
    dens = np.abs(cum[-sites + n_top]) ** 2
    return Profile("site_at_fixed_time", sites.astype(float), dens, "polymer")


def bessel_row_all(n_top: int, x: float) -> np.ndarray:
    """``J_nu(x)`` for ``nu = -n_top .. n_top``."""
    return bessel_j_row(-n_top, n_top, x).values


def _lattice_rhs(psi_vec: np.ndarray, frozen: np.ndarray) -> np.ndarray:
    lap = np.zeros_like(psi_vec)
    lap[1:-1] = psi_vec[2:] + psi_vec[:-2] - 2.0 * psi_vec[1:-1]
    d = 0.5j * lap
    d[frozen] = 0.0
    return d


def ode_oracle_evolve(
    rho: float,
    tau_end: float,
    window: tuple[int, int],
    dt: float | None = None,
    probes=None,
    initial: np.ndarray | None = None,
) -> PolymerState:
    """Integrate the lattice equations with classical RK4 on a finite window.

    The two edge sites keep their initial values.  ``probes`` lists the
    sites that will be read; each must sit at least ``1.5 tau_end + 20``
    sites from either edge so the frozen boundary cannot reach it.
    ``initial`` overrides the shutter state (used for conservation checks).
    """
    lo, hi = int(window[0]), int(window[1])
    if hi - lo < 2:
        raise ValueError("window needs at least three sites")
    if tau_end < 0:
        raise ValueError("tau_end must be non-negative")
    h_norm = 2.0
    if dt is None:
        dt = min(0.01, 0.1 / h_norm)
    if not 0 < dt <= 0.05:
        raise ValueError("dt must lie in (0, 0.05] for the RK4 accuracy target")
    if probes is not None:
        margin = 1.5 * tau_end + 20
        for p in np.atleast_1d(probes):
            if p - lo < margin or hi - p < margin:
                raise ValueError(
                    f"probe site {p} lies within {margin:.0f} sites of the window edge"
                )
    sites = np.arange(lo, hi + 1)
    if initial is None:
        y = initial_wavefunction(sites, rho).astype(complex)
    else:
        y = np.array(initial, dtype=complex)
        if y.shape != sites.shape:
            raise ValueError("initial state does not match the window")
    frozen = np.zeros(sites.size, dtype=bool)
    frozen[[0, -1]] = True

    n_steps = int(math.ceil(tau_end / dt - 1e-9)) if tau_end > 0 else 0
    h = tau_end / n_steps if n_steps else 0.0
    for _ in range(n_steps):
        k1 = _lattice_rhs(y, frozen)
        k2 = _lattice_rhs(y + 0.5 * h * k1, frozen)
        k3 = _lattice_rhs(y + 0.5 * h * k2, frozen)
        k4 = _lattice_rhs(y + h * k3, frozen)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return PolymerState((lo, hi), float(tau_end), y)
