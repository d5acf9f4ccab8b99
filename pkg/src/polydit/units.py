"""Dimensionless conventions, lattice momentum and the shutter initial state."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Value of the Heaviside step at zero.  The site next to the shutter is
#: occupied, which is what the zero-time limit of the Bessel-sum solution gives.
HEAVISIDE_AT_ZERO = 1.0


def heaviside(y):
    """Step function with ``heaviside(0) == 1``; works on scalars and arrays."""
    return np.heaviside(y, HEAVISIDE_AT_ZERO)


def _check_finite(**values):
    for name, v in values.items():
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class UnitMap:
    """Map between physical quantities and the lattice-scaled ones.

    Parameters
    ----------
    lam : float
        Lattice spacing in metres.
    mass : float
        Particle mass in kg.
    hbar : float
        Reduced Planck constant in J s.

    Notes
    -----
    The dimensionless variables are ``mu = x/lam``, ``rho = p lam/hbar``,
    ``eps = m lam**2 E/hbar**2`` and ``tau = hbar t/(m lam**2)``.
    """

    lam: float
    mass: float
    hbar: float = 1.054571817e-34

    def __post_init__(self):
        for name in ("lam", "mass", "hbar"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive finite number, got {v!r}")

    def to_dimensionless(self, x, p, E, t):
        """Return ``(mu, rho, eps, tau)`` for physical ``(x, p, E, t)``."""
        _check_finite(x=x, p=p, E=E, t=t)
        lam, m, hb = self.lam, self.mass, self.hbar
        return x / lam, p * lam / hb, m * lam**2 * E / hb**2, hb * t / (m * lam**2)

    def to_physical(self, mu, rho, eps, tau):
        """Inverse of :meth:`to_dimensionless`."""
        _check_finite(mu=mu, rho=rho, eps=eps, tau=tau)
        lam, m, hb = self.lam, self.mass, self.hbar
        return mu * lam, rho * hb / lam, eps * hb**2 / (m * lam**2), tau * m * lam**2 / hb

    def lattice_momentum(self, p) -> "LatticeMomentum":
        """Dimensionless momentum of a beam with physical momentum ``p >= 0``.

        The value is folded into ``[0, pi)``, which leaves the polymer
        energy ``sin(rho)**2`` unchanged.
        """
        _check_finite(p=p)
        if p < 0:
            raise ValueError("beam momentum must be non-negative")
        return LatticeMomentum(math.fmod(p * self.lam / self.hbar, math.pi))


@dataclass(frozen=True)
class LatticeMomentum:
    rho: float

    def __post_init__(self):
        if not (0.0 <= self.rho < math.pi):
            raise ValueError(f"lattice momentum must lie in [0, pi), got {self.rho!r}")

    @property
    def energy(self) -> float:
        """Polymer energy ``sin(rho)**2``, bounded by 1."""
        return math.sin(self.rho) ** 2

    def __float__(self):
        return self.rho


def initial_wavefunction(mu, rho):
    """Truncated plane wave ``exp(i rho mu) Theta(-mu)`` on lattice sites."""
    mu = np.asarray(mu)
    out = np.exp(1j * float(rho) * mu) * heaviside(-mu)
    return out if out.ndim else complex(out)
