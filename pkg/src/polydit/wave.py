"""Shutter problem for the polymer wave equation.

``d2psi/dtau2 = psi_{mu+1} + psi_{mu-1} - 2 psi_mu`` with initial data
``F_mu = exp(i rho mu) Theta(-mu)`` and ``G_mu = -i eps_rho F_mu``, where
``eps_k = 2|sin(k/2)|`` is the lattice dispersion.  Three routes are
provided:

* :func:`pv_solution`, the Fourier integral with the shutter transform
  ``f(k) = pi delta(k - rho) + 1/2 + (i/2) cot((k - rho)/2)`` taken as a
  principal value;
* :func:`closed_form`, the equivalent Bessel series
  ``psi_mu = sum_{nu <= 0} a_{nu - mu} exp(i rho nu)`` with
  ``a_n = J_{2n}(2tau) - i eps_rho sum_{k >= |n|} J_{2k+1}(2tau)``;
* :func:`wave_ode_oracle`, a leapfrog integration of the lattice equations.

:func:`hypergeometric_series` evaluates the solution as a series of unit-circle
hypergeometric functions, and :func:`series_discrepancy` measures how far it
sits from the three routes above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from polydit.shutter import PolymerState, Profile, psi as schrodinger_psi
from polydit.specfun import bessel_j_table, bessel_tail_order, gauss_2f1_unit
from polydit.spiral import CrossingReport, NoCrossingError, crossings
from polydit.units import initial_wavefunction


class StructuralSeriesError(ArithmeticError):
    """A term of the hypergeometric series sits on a pole of 2F1."""


def dispersion(kappa):
    """``eps_k = sqrt(2 (1 - cos k)) = 2 |sin(k/2)|``."""
    out = 2.0 * np.abs(np.sin(0.5 * np.asarray(kappa, dtype=float)))
    return out if out.ndim else float(out)


def _check_rho(rho: float) -> float:
    rho = float(rho)
    if not math.isfinite(rho):
        raise ValueError("rho must be finite")
    if abs(math.remainder(rho, math.pi)) < 1e-12:
        raise ValueError("rho must avoid 0 and pi, where the kernel poles degenerate")
    return rho


@dataclass(frozen=True)
class WaveInitialData:
    """Shutter data ``F = exp(i rho mu) Theta(-mu)`` and ``G = -i eps_rho F``."""

    rho: float

    def F(self, mu):
        return initial_wavefunction(mu, self.rho)

    def G(self, mu):
        return -1j * dispersion(self.rho) * self.F(mu)


@dataclass(frozen=True)
class FourierInitialData:
    """Transform ``f(k) = sum_mu F_mu exp(-i k mu)`` split into its distributional parts.

    ``f = delta_weight * delta(k - delta_location) + constant + pv_kernel(k)``.
    ``g = -i eps_rho f``.
    """

    delta_weight: float
    delta_location: float
    constant: float

    def pv_kernel(self, kappa):
        return 0.5j / np.tan(0.5 * (np.asarray(kappa) - self.delta_location))

    def regular(self, kappa):
        """Off-pole value ``constant + pv_kernel(k)``."""
        return self.constant + self.pv_kernel(kappa)

    def printed_kernel(self, kappa):
        """The kernel ``i cot(k - rho)`` in its commonly stated form."""
        return 1j / np.tan(np.asarray(kappa) - self.delta_location)


def fourier_initial(rho: float) -> FourierInitialData:
    """Fourier split of the truncated plane wave.

    From ``sum_{m >= 0} exp(i z m) = pi delta(z) + 1/2 + (i/2) cot(z/2)``.
    """
    return FourierInitialData(math.pi, float(rho), 0.5)


def cesaro_partial_sum(zeta: float, n: int) -> complex:
    """Cesàro mean of ``sum_{mu=-n}^{n} Theta(-mu) exp(-i zeta mu)``."""
    m = np.arange(n + 1)
    return complex(np.sum((1.0 - m / (n + 1.0)) * np.exp(1j * zeta * m)))


def step_difference_transform(zeta: float, heaviside_at_zero: float = 1.0) -> complex:
    """Exact finite sum ``sum_mu (Theta(mu+1) - Theta(mu-1))/2 exp(-i zeta mu)``."""
    th = lambda y: 1.0 if y > 0 else (heaviside_at_zero if y == 0 else 0.0)  # noqa: E731
    return complex(sum(0.5 * (th(m + 1) - th(m - 1)) * np.exp(-1j * zeta * m) for m in range(-3, 4)))


def two_delta_transform(zeta: float) -> complex:
    """``sum_mu (delta_{mu,1} + delta_{mu,-1})/2 exp(-i zeta mu) = cos zeta``."""
    return complex(0.5 * (np.exp(-1j * zeta) + np.exp(1j * zeta)))


# --- principal-value route ---------------------------------------------------

def _h(kappa, rho, tau):
    # (1 + er/ek) e^{-i ek t} + (1 - er/ek) e^{+i ek t}, halved; bounded at k = 0
    e = dispersion(kappa)
    return np.cos(e * tau) - 1j * dispersion(rho) * tau * np.sinc(e * tau / math.pi)


def _cquad(f, a, b):
    opts = dict(limit=2000, epsabs=1e-12, epsrel=1e-12, full_output=1)
    re = integrate.quad(lambda x: f(x).real, a, b, **opts)
    im = integrate.quad(lambda x: f(x).imag, a, b, **opts)
    for r in (re, im):
        if len(r) > 3 and r[1] > 1e-7:
            raise ArithmeticError(f"quadrature did not converge on [{a:g}, {b:g}]")
    return complex(re[0], im[0])


def pv_solution(mu: int, rho: float, tau: float, excision: float = 0.1) -> complex:
    """Fourier-integral solution with the pole at ``k = rho`` taken as a principal value.

    ``psi = exp(i(rho mu - eps_rho tau))/2 + (1/4pi) int exp(i k mu) h dk
    + (i/4pi) p.v. int cot((k - rho)/2) exp(i k mu) h dk``, where
    ``h = cos(eps_k tau) - i eps_rho sin(eps_k tau)/eps_k``.  Inside
    ``|k - rho| < excision`` the integrand is folded symmetrically about the
    pole, which cancels the singular part exactly.
    """
    rho = _check_rho(rho)
    rho = math.remainder(rho, 2 * math.pi)
    tau = float(tau)
    if tau < 0:
        raise ValueError("tau must be non-negative")
    d = float(excision)
    if not 0 < d < min(abs(rho), math.pi - abs(rho)):
        raise ValueError("excision radius must be positive and smaller than the pole distance to 0 and pi")

    def g(k):
        return np.exp(1j * k * mu) * _h(k, rho, tau)

    def kern(k):
        return g(k) / np.tan(0.5 * (k - rho))

    smooth = _cquad(g, -math.pi, 0.0) + _cquad(g, 0.0, math.pi)
    a, b = rho - d, rho + d
    pieces = [(-math.pi, a), (b, math.pi)]
    outer = 0j
    for lo, hi in pieces:
        cuts = sorted({lo, hi, *(c for c in (0.0,) if lo < c < hi)})
        for p, q in zip(cuts[:-1], cuts[1:]):
            outer += _cquad(kern, p, q)
    inner = _cquad(lambda s: kern(rho + s) + kern(rho - s), 0.0, d)
    plane = 0.5 * np.exp(1j * (rho * mu - dispersion(rho) * tau))
    return complex(plane + smooth / (4 * math.pi) + 1j / (4 * math.pi) * (outer + inner))


# --- Bessel-series route -----------------------------------------------------

def closed_form_terms(tau_max: float) -> int:
    """Default number of even Bessel orders for argument ``2 tau_max``."""
    return bessel_tail_order(2.0 * tau_max) // 2 + 2


def closed_form(mu: int, rho: float, tau, n_terms: int | None = None):
    """Bessel-series solution; ``tau`` may be a scalar or an array.

    ``psi_mu = sum_{n <= -mu} a_n exp(i rho (n + mu))`` with
    ``a_n = J_{2n}(2tau) - i eps_rho c_n`` and ``c_n = sum_{k >= |n|} J_{2k+1}(2tau)``.
    """
    rho = _check_rho(rho)
    t = np.asarray(tau, dtype=float)
    taus = np.atleast_1d(t)
    if np.any(taus < 0):
        raise ValueError("tau must be non-negative")
    need = closed_form_terms(float(taus.max()))
    k_max = need if n_terms is None else int(n_terms)
    if k_max < need:
        raise ValueError(f"n_terms must be at least {need} for tau up to {taus.max():g}")
    table = bessel_j_table(2 * k_max + 1, 2.0 * taus)
    even = table[0::2]  # J_{2k}, k = 0..k_max
    odd = table[1::2]  # J_{2k+1}
    c = np.cumsum(odd[::-1], axis=0)[::-1]  # c[k] = sum_{j >= k} J_{2j+1}
    er = dispersion(rho)
    n = np.arange(-k_max, k_max + 1)
    idx = np.abs(n)
    a = even[idx] - 1j * er * c[idx]
    sel = n <= -mu
    out = np.exp(1j * rho * (n[sel] + mu)) @ a[sel]
    return out.reshape(t.shape) if t.ndim else complex(out[0])


def hypergeometric_series(mu: int, rho: float, tau: float, heaviside_at_zero: float = 1.0,
                 n_terms: int | None = None) -> complex:
    """Solution as a series of unit-circle hypergeometric functions, term by term.

    ``exp(i(rho mu - eps_rho tau))/2 - cot(rho) sin(rho/2)
    + (2/(pi i)) sum_{nu != -mu} J_{2nu}(2tau)/(mu+nu) [1 - 2F1(1, -s/2; 1 - s/2; e^{2i rho}) Theta(2 - s)
    - 2F1(1, s/2; 1 + s/2; e^{-2i rho}) Theta(2 + s)]`` with ``s = mu + nu``.

    Raises
    ------
    StructuralSeriesError
        If a guarded term lands on a 2F1 pole (``s = +-2`` with
        ``Theta(0) = 1``).
    """
    rho = _check_rho(rho)
    tau = float(tau)
    k = closed_form_terms(tau) if n_terms is None else int(n_terms)
    j_even = bessel_j_table(2 * k, 2.0 * tau)[0::2, 0]

    def th(y):
        return 1.0 if y > 0 else (heaviside_at_zero if y == 0 else 0.0)

    total = 0j
    for nu in range(-k, k + 1):
        s = mu + nu
        if s == 0:
            continue
        jv = j_even[abs(nu)]
        if jv == 0.0:
            continue
        bracket = 1.0 + 0j
        try:
            if th(2 - s):
                bracket -= th(2 - s) * gauss_2f1_unit(-s / 2, 2 * rho)
            if th(2 + s):
                bracket -= th(2 + s) * gauss_2f1_unit(s / 2, -2 * rho)
        except ValueError as exc:
            raise StructuralSeriesError(f"term nu={nu} (mu+nu={s}): {exc}") from exc
        total += jv / s * bracket
    const = -math.sin(rho / 2) / math.tan(rho)
    plane = 0.5 * np.exp(1j * (rho * mu - dispersion(rho) * tau))
    return complex(plane + const + 2.0 / (math.pi * 1j) * total)


@dataclass(frozen=True)
class SeriesDiscrepancy:
    """Comparison of :func:`hypergeometric_series` against :func:`closed_form` at sample points."""

    offset: complex
    raw_max: float
    residual_max: float
    points: int

    @property
    def is_constant_offset(self) -> bool:
        return self.residual_max <= 1e-3


def series_discrepancy(points, heaviside_at_zero: float = 0.0) -> SeriesDiscrepancy:
    """Fit one complex constant ``c`` to ``hypergeometric_series - closed_form`` over ``points``.

    ``points`` is an iterable of ``(mu, rho, tau)``.  ``Theta(0) = 0`` is used
    by default because ``Theta(0) = 1`` puts the ``s = +-2`` terms on a pole.
    """
    diffs = []
    for mu, rho, tau in points:
        diffs.append(hypergeometric_series(mu, rho, tau, heaviside_at_zero) - closed_form(mu, rho, tau))
    diffs = np.asarray(diffs)
    c = complex(diffs.mean())
    return SeriesDiscrepancy(c, float(np.abs(diffs).max()), float(np.abs(diffs - c).max()), diffs.size)


# --- leapfrog oracle ---------------------------------------------------------

@dataclass
class WaveState(PolymerState):
    """Leapfrog end state plus optional diagnostics."""

    energies: np.ndarray | None = field(default=None, repr=False)
    record_times: np.ndarray | None = field(default=None, repr=False)
    records: np.ndarray | None = field(default=None, repr=False)


def _laplacian(p: np.ndarray, periodic: bool) -> np.ndarray:
    if periodic:
        return np.roll(p, 1) + np.roll(p, -1) - 2.0 * p
    out = np.zeros_like(p)
    out[1:-1] = p[2:] + p[:-2] - 2.0 * p[1:-1]
    return out


def _stiffness_form(u: np.ndarray, v: np.ndarray, periodic: bool) -> float:
    # Re <u, K v> with K = -Laplacian
    return float(np.real(np.vdot(u, -_laplacian(v, periodic))))


def wave_ode_oracle(
    rho: float,
    tau_end: float,
    window: tuple[int, int],
    dt: float = 0.005,
    probes=None,
    initial: tuple[np.ndarray, np.ndarray] | None = None,
    periodic: bool = False,
    track_energy: bool = False,
    record_sites=None,
    record_every: int = 1,
) -> WaveState:
    """Leapfrog (Störmer-Verlet) integration of the lattice wave equation.

    The first step is a third-order Taylor step from ``(F, G)``.  With
    ``periodic=False`` the edge sites are held fixed.  ``probes`` are
    checked against the light cone: each must sit at least ``tau_end + 20``
    sites from either edge.  With ``track_energy`` the staggered energy
    ``|(psi^{n+1} - psi^n)/dt|**2 + Re<psi^{n+1}, K psi^n>`` is stored per
    step; it is exactly conserved by the scheme when the edges stay at zero.
    """
    lo, hi = int(window[0]), int(window[1])
    if hi - lo < 2:
        raise ValueError("window needs at least three sites")
    if tau_end < 0:
        raise ValueError("tau_end must be non-negative")
    if not 0 < dt <= 0.5:
        raise ValueError("dt must lie in (0, 0.5] for leapfrog stability")
    if probes is not None and not periodic:
        margin = tau_end + 20
        for p in np.atleast_1d(probes):
            if p - lo < margin or hi - p < margin:
                raise ValueError(f"probe site {p} lies within {margin:.0f} sites of the window edge")
    sites = np.arange(lo, hi + 1)
    if initial is None:
        data = WaveInitialData(_check_rho(rho))
        f = data.F(sites).astype(complex)
        g = data.G(sites).astype(complex)
    else:
        f = np.asarray(initial[0], dtype=complex)
        g = np.asarray(initial[1], dtype=complex)
        if f.shape != sites.shape or g.shape != sites.shape:
            raise ValueError("initial data does not match the window")

    rec_idx = None if record_sites is None else np.asarray(record_sites) - lo
    n = int(math.ceil(tau_end / dt - 1e-9)) if tau_end > 0 else 0
    h = tau_end / n if n else dt
    times, recs, energies = [0.0], [], []
    if rec_idx is not None:
        recs.append(f[rec_idx].copy())
    if n == 0:
        return WaveState((lo, hi), 0.0, f, None, np.array(times), np.array(recs) if recs else None)

    lap_f = _laplacian(f, periodic)
    p0 = f
    p1 = f + h * g + 0.5 * h**2 * lap_f + h**3 / 6.0 * _laplacian(g, periodic)
    if not periodic:
        p1[[0, -1]] = f[[0, -1]]
    if track_energy:
        energies.append(np.sum(np.abs((p1 - p0) / h) ** 2) + _stiffness_form(p1, p0, periodic))
    if rec_idx is not None and record_every == 1:
        times.append(h)
        recs.append(p1[rec_idx].copy())
    for step in range(2, n + 1):
        p2 = 2.0 * p1 - p0 + h**2 * _laplacian(p1, periodic)
        p0, p1 = p1, p2
        if track_energy:
            energies.append(np.sum(np.abs((p1 - p0) / h) ** 2) + _stiffness_form(p1, p0, periodic))
        if rec_idx is not None and step % record_every == 0:
            times.append(step * h)
            recs.append(p1[rec_idx].copy())
    return WaveState(
        (lo, hi), float(tau_end), p1,
        np.asarray(energies) if track_energy else None,
        np.asarray(times) if rec_idx is not None else None,
        np.asarray(recs) if rec_idx is not None else None,
    )


def oracle_window(probes, tau_end: float) -> tuple[int, int]:
    """Window wide enough for ``probes`` with margin ``1.5 tau_end + 30``."""
    p = np.atleast_1d(probes)
    m = int(math.ceil(1.5 * tau_end + 30))
    return int(p.min()) - m, int(p.max()) + m


def wave_oracle_value(mu: int, rho: float, tau: float, dt: float = 0.005) -> complex:
    """Single amplitude from the leapfrog oracle on an automatically sized window."""
    st = wave_ode_oracle(rho, tau, oracle_window([mu, 0], tau), dt=dt, probes=[mu])
    return st.amplitude(mu)


# --- no-DIT diagnostics ------------------------------------------------------

def dominant_period(times: np.ndarray, values: np.ndarray, omega_max: float = 3.0) -> float:
    """Period of the best single-sinusoid least-squares fit (with offset)."""
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    span = t[-1] - t[0]
    if span <= 0:
        raise ValueError("need a time span")

    def misfit(w):
        a = np.column_stack([np.cos(w * t), np.sin(w * t), np.ones_like(t)])
        coef, *_ = np.linalg.lstsq(a, y, rcond=None)
        return float(np.sum((a @ coef - y) ** 2))

    w_min = 2 * math.pi / span
    grid = np.arange(w_min, omega_max, 0.25 * w_min)
    costs = np.array([misfit(w) for w in grid])
    k = int(np.argmin(costs))
    res = optimize.minimize_scalar(
        misfit, bounds=(grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]), method="bounded",
        options={"xatol": 1e-10},
    )
    return 2 * math.pi / float(res.x)


def longest_monotone_rise(times: np.ndarray, values: np.ndarray) -> float:
    """Longest time interval over which ``values`` strictly increase."""
    up = np.diff(values) > 0
    best = run = 0
    for u in up:
        run = run + 1 if u else 0
        best = max(best, run)
    dt = float(np.median(np.diff(times))) if len(times) > 1 else 0.0
    return best * dt


@dataclass(frozen=True)
class NoDitReport:
    """Oscillation signature of the wave shutter against the Schrödinger one."""

    mu: int
    rho: float
    period: float
    expected_period: float
    longest_rise: float
    front_time: float | None
    schrodinger: CrossingReport | None
    profile: Profile = field(repr=False)

    @property
    def period_ok(self) -> bool:
        return abs(self.period / self.expected_period - 1.0) <= 0.05

    @property
    def no_monotone_envelope(self) -> bool:
        return self.longest_rise < self.expected_period

    @property
    def passed(self) -> bool:
        return self.period_ok and self.no_monotone_envelope and self.schrodinger is not None


def no_dit_check(mu: int, rho: float, tau_range: tuple[float, float] = (0.0, 200.0),
                 step: float = 0.1, dt: float = 0.005, front_level: float = 0.05) -> NoDitReport:
    """Wave density at site ``mu`` from the leapfrog oracle and its no-DIT signature.

    The dominant period is taken from a sinusoid fit after the front has
    arrived; the Schrödinger crossings at the same ``(mu, rho)`` come from
    the exact lattice density.
    """
    rho = _check_rho(rho)
    lo, hi = map(float, tau_range)
    every = max(1, int(round(step / dt)))
    st = wave_ode_oracle(rho, hi, oracle_window([mu, 0], hi), dt=dt, probes=[mu],
                         record_sites=[mu], record_every=every)
    times = st.record_times
    dens = np.abs(st.records[:, 0]) ** 2
    keep = times >= lo - 1e-12
    times, dens = times[keep], dens[keep]
    arrived = np.nonzero(dens >= front_level)[0]
    front = float(times[arrived[0]]) if arrived.size else None
    expected = 2 * math.pi / dispersion(rho)
    start = (front or lo) + expected
    tail = times >= start
    period = dominant_period(times[tail], dens[tail]) if tail.sum() > 10 else math.nan
    rise = longest_monotone_rise(times[tail], dens[tail]) if tail.sum() > 1 else 0.0

    s_taus = np.arange(max(lo, step), hi + 0.5 * step, step)
    s_dens = np.abs(schrodinger_psi(mu, rho, s_taus)) ** 2
    s_prof = Profile("time_at_fixed_site", s_taus, s_dens, "polymer")
    try:
        s_rep = crossings(s_prof)
    except NoCrossingError:
        s_rep = None
    prof = Profile("time_at_fixed_site", times, dens, "wave")
    return NoDitReport(int(mu), rho, period, expected, rise, front, s_rep, prof)
