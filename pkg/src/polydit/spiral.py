"""Spiral pictures and crossing-width extraction.

The continuum amplitude traces a Cornu spiral in ``xi``; the lattice sum
``Phi_mu(rho, tau)`` traces a "like-spiral" in tau whose squared radius is
the density.  Diffraction widths are read either from the first two
crossings of a density profile through the classical level 1, or from
the first two intersections of the spiral with the matching circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np
from scipy import optimize

from polydit.shutter import Profile, phi
from polydit.specfun import fresnel

DENSITY_ONSET = 1e-3


class NoCrossingError(ValueError):
    """Fewer than two level crossings: no diffraction-in-time ringing."""


@dataclass(frozen=True)
class CrossingReport:
    """First two crossings of a profile through ``level``, in increasing coordinate."""

    first: float
    second: float
    width: float
    level: float

    def __post_init__(self):
        if not self.second > self.first:
            raise ValueError("second crossing must follow the first")


@dataclass
class SpiralCurve:
    """Sampled planar curve with rows ``(x, y, param)``.

    ``fn`` maps parameter arrays to complex points and allows resampling
    for arc lengths.
    """

    points: np.ndarray
    kind: Literal["cornu", "polymer_like"]
    fn: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        if self.points.ndim != 2 or self.points.shape[1] != 3:
            raise ValueError("points must have shape (n, 3)")
        if np.any(np.diff(self.points[:, 2]) <= 0):
            raise ValueError("param must be strictly increasing")

    @property
    def x(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.points[:, 1]

    @property
    def param(self) -> np.ndarray:
        return self.points[:, 2]


def _grid(lo: float, hi: float, step: float) -> np.ndarray:
    if step <= 0 or hi <= lo:
        raise ValueError("need lo < hi and step > 0")
    n = int(math.floor((hi - lo) / step + 1e-9))
    g = lo + step * np.arange(n + 1)
    return g if g[-1] >= hi - 1e-12 else np.append(g, hi)


def _cornu_points(xi: np.ndarray) -> np.ndarray:
    c, s = fresnel(xi)
    return c + 1j * s


def cornu_curve(xi_min: float, xi_max: float, step: float = 1e-3) -> SpiralCurve:
    """Cornu spiral ``(C(xi), S(xi), xi)``."""
    xi = _grid(xi_min, xi_max, step)
    z = _cornu_points(xi)
    return SpiralCurve(np.column_stack([z.real, z.imag, xi]), "cornu", _cornu_points)


def like_spiral(mu: int, rho: float, tau_max: float, step: float = 0.05) -> SpiralCurve:
    """Lattice like-spiral ``(Re Phi, Im Phi, tau)`` for ``tau`` in ``[0, tau_max]``."""
    taus = _grid(0.0, tau_max, step)

    def fn(t):
        return np.asarray(phi(mu, rho, np.asarray(t, dtype=float)))

    z = fn(taus)
    return SpiralCurve(np.column_stack([z.real, z.imag, taus]), "polymer_like", fn)


def arc_length(curve: SpiralCurve, param_a: float, param_b: float, tol: float = 1e-6) -> float:
    """Chord length of ``curve`` between two parameter values.

    With a generator attached the chord count is doubled until the length
    changes by less than ``tol``; otherwise the stored samples are used.
    """
    a, b = sorted((float(param_a), float(param_b)))
    if curve.fn is None:
        p = curve.param
        sel = (p >= a) & (p <= b)
        z = curve.x[sel] + 1j * curve.y[sel]
        return float(np.sum(np.abs(np.diff(z))))
    if a == b:
        return 0.0
    n = max(16, int(math.ceil((b - a) / 0.05)))
    prev = None
    for _ in range(20):
        z = curve.fn(np.linspace(a, b, n + 1))
        length = float(np.sum(np.abs(np.diff(z))))
        if prev is not None and abs(length - prev) < tol:
            return length
        prev = length
        n *= 2
    raise ArithmeticError("arc length did not stabilise")


def crossings(
    profile: Profile,
    level: float = 1.0,
    hysteresis: float = 0.0,
    direction: Literal["auto", "forward", "backward"] = "auto",
) -> CrossingReport:
    """First two crossings of ``profile.densities`` through ``level``.

    The scan starts once the density first exceeds 1e-3.  Time profiles are
    scanned forward from release; site profiles backward from the far side
    of the front, which is where the beam first arrives.  A crossing counts
    only once the density has moved at least ``hysteresis`` beyond ``level``
    on the new side, which suppresses lattice-scale ripple.  Crossings are
    refined by bisection on ``profile.density_fn`` when available and by
    linear interpolation otherwise.
    """
    if direction == "auto":
        direction = "forward" if profile.axis == "time_at_fixed_site" else "backward"
    x = profile.coordinates
    d = profile.densities
    if direction == "backward":
        x, d = x[::-1], d[::-1]
    onset = np.nonzero(d > DENSITY_ONSET)[0]
    if onset.size == 0:
        raise NoCrossingError("density never exceeds the onset threshold")
    i0 = int(onset[0])

    side = np.sign(d[i0] - level) or -1.0
    found: list[int] = []
    pending = None
    for i in range(i0 + 1, d.size):
        s = np.sign(d[i] - level)
        if pending is None:
            if s != 0 and s != side:
                pending = i
                if abs(d[i] - level) >= hysteresis:
                    found.append(pending)
                    side, pending = s, None
        else:
            if s == side:
                pending = None
            elif abs(d[i] - level) >= hysteresis:
                found.append(pending)
                side, pending = -side, None
        if len(found) == 2:
            break
    if len(found) < 2:
        raise NoCrossingError(f"found {len(found)} crossing(s) of level {level}")

    roots = []
    for i in found:
        a, b = x[i - 1], x[i]
        if profile.density_fn is not None:
            lo, hi = sorted((a, b))
            g = lambda c: profile.density_fn(c) - level  # noqa: E731
            if g(lo) * g(hi) < 0:
                roots.append(float(optimize.bisect(g, lo, hi, xtol=1e-9)))
                continue
        da, db = d[i - 1], d[i]
        roots.append(float(a + (b - a) * (level - da) / (db - da)))
    first, second = sorted(roots)
    return CrossingReport(first, second, second - first, float(level))


_CIRCLE_CENTRE = -0.5 - 0.5j
_CIRCLE_RADIUS = math.sqrt(2.0)


def cornu_circle_intersections(xi_max: float = 5.0) -> tuple[float, float]:
    """First two ``xi > 0`` where the Cornu spiral meets the circle ``|z + (1+i)/2| = sqrt 2``.

    On that circle the continuum density equals its classical value 1.
    """
    g = lambda xi: abs(_cornu_points(np.asarray(xi)) - _CIRCLE_CENTRE) - _CIRCLE_RADIUS  # noqa: E731
    xi = np.arange(0.0, xi_max, 1e-3)
    v = g(xi)
    idx = np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)[0]
    if idx.size < 2:
        raise NoCrossingError("Cornu spiral does not cross the circle twice")
    roots = [optimize.brentq(lambda t: float(g(t)), xi[i], xi[i + 1], xtol=1e-14) for i in idx[:2]]
    return float(roots[0]), float(roots[1])


def cornu_circle_width() -> float:
    """Arc length along the Cornu spiral between its first two circle intersections.

    The spiral has unit speed, so this is also the difference in ``xi``;
    the arc length is measured independently as a check.
    """
    a, b = cornu_circle_intersections()
    return arc_length(cornu_curve(0.0, 5.0), a, b)


def like_spiral_circle_params(curve: SpiralCurve, radius: float = 1.0) -> tuple[float, float]:
    """Parameters of the first two unit-circle crossings of a like-spiral."""
    r = np.hypot(curve.x, curve.y)
    prof = Profile(
        "time_at_fixed_site", curve.param, r**2, "polymer",
        density_fn=(lambda t: float(abs(curve.fn(np.array([t]))[0]) ** 2)) if curve.fn else None,
    )
    rep = crossings(prof, level=radius**2)
    return rep.first, rep.second
