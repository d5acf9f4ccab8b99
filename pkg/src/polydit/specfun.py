"""Special functions used by the shutter solutions.

Integer-order Bessel rows come from Miller's downward recurrence so that a
few hundred orders are available for the price of one sweep.  The
hypergeometric and incomplete-Beta functions needed on the unit circle
all reduce to one Lerch-type sum ``Phi(z, 1, a) = sum_k z**k / (a + k)``,
which is conditionally convergent for ``|z| = 1``; it is evaluated with an
exact head sum plus a Watson-lemma tail (see :func:`lerch_unit`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

_RESCALE = 1e150


@dataclass(frozen=True)
class BesselRow:
    """Values ``J_n(x)`` for ``n = order_min .. order_max``."""

    order_min: int
    order_max: int
    argument: float
    values: np.ndarray

    @property
    def orders(self) -> np.ndarray:
        return np.arange(self.order_min, self.order_max + 1)

    def __getitem__(self, n: int) -> float:
        if not self.order_min <= n <= self.order_max:
            raise IndexError(f"order {n} outside [{self.order_min}, {self.order_max}]")
        return self.values[n - self.order_min]


def bessel_tail_order(x: float) -> int:
    """Order beyond which ``|J_n(x)|`` is below 1e-12 for every larger n."""
    x = abs(float(x))
    return int(math.ceil(x + 10.0 * np.cbrt(x) + 30.0))


def _miller_start(n_top: int, x_max: float, tol: float) -> int:
    digits = max(-math.log10(tol), 1.0)
    big = max(n_top, x_max)
    m = int(big + math.sqrt(10.0 * digits * max(big, 1.0))) + 20
    return m + (m % 2)


def bessel_j_table(n_max: int, x) -> np.ndarray:
    """``J_n(x_j)`` for ``n = 0..n_max`` and every entry of ``x``.

    Returns an array of shape ``(n_max + 1, len(x))``.  Internal workhorse
    of :func:`bessel_j_row`; vectorised over the arguments.
    """
    return _miller_table(int(n_max), np.atleast_1d(np.asarray(x, dtype=float)), 1e-14)


def _miller_table(n_max: int, x: np.ndarray, tol: float) -> np.ndarray:
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise ValueError("Bessel arguments must be finite and non-negative")
    out = np.zeros((n_max + 1, x.size))
    zero = x == 0.0
    out[0, zero] = 1.0
    live = ~zero
    if not live.any():
        return out
    xs = x[live]
    m = _miller_start(n_max, float(xs.max()), tol)

    rows = np.zeros((n_max + 1, xs.size))
    inv2x = 2.0 / xs
    j_next = np.zeros_like(xs)
    j_cur = np.full_like(xs, 1e-300)
    norm = np.zeros_like(xs)
    for k in range(m, 0, -1):
        # j_cur holds J_k (unnormalised); step down to J_{k-1}
        j_prev = k * inv2x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if k - 1 <= n_max:
            rows[k - 1] = j_cur
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j_cur
        big = np.abs(j_cur) > _RESCALE
        if big.any():
            j_cur[big] /= _RESCALE
            j_next[big] /= _RESCALE
            norm[big] /= _RESCALE
            if k - 1 <= n_max:
                rows[k - 1:, big] /= _RESCALE
    norm += j_cur
    out[:, live] = rows / norm
    return out


def bessel_j_row(n_min: int, n_max: int, x: float, tol: float = 1e-12) -> BesselRow:
    """Integer-order Bessel functions ``J_n(x)`` for a contiguous range of n.

    Parameters
    ----------
    n_min, n_max : int
        Inclusive order range; negative orders use ``J_{-n} = (-1)**n J_n``.
    x : float
        Argument, ``x >= 0``.
    tol : float
        Requested accuracy, in ``(0, 1e-6]``.  Controls how far above the
        largest order the downward recurrence is started.
    """
    n_min, n_max = int(n_min), int(n_max)
    if n_min > n_max:
        raise ValueError("n_min must not exceed n_max")
    if not (0 < tol <= 1e-6):
        raise ValueError("tol must lie in (0, 1e-6]")
    x = float(x)
    if not math.isfinite(x) or x < 0:
        raise ValueError("argument must be finite and non-negative")
    n_top = max(abs(n_min), abs(n_max))
    table = _miller_table(n_top, np.array([x]), tol)[:, 0]
    orders = np.arange(n_min, n_max + 1)
    vals = table[np.abs(orders)]
    vals = np.where((orders < 0) & (orders % 2 == 1), -vals, vals)
    return BesselRow(n_min, n_max, x, vals)


def fresnel(xi):
    """Fresnel integrals ``C(xi), S(xi)`` with the ``pi u**2 / 2`` kernel.

    With this normalisation the Cornu spiral is traced at unit speed and
    winds into ``(1/2, 1/2)``.
    """
    s, c = sc.fresnel(xi)
    return c, s


# --- unit-circle Lerch family -------------------------------------------------

def _reduce_angle(theta: float) -> float:
    t = math.remainder(float(theta), 2.0 * math.pi)
    return math.pi if t == -math.pi else t


def _tail_moments(z: complex, n_max: int) -> np.ndarray:
    """``h_n = n! [t**n] 1/(1 - z e**-t)`` for n = 0..n_max."""
    h = np.zeros(n_max + 1, dtype=complex)
    h[0] = 1.0 / (1.0 - z)
    for n in range(1, n_max + 1):
        j = np.arange(1, n + 1)
        c = sc.comb(n, j) * (-1.0) ** j
        h[n] = z * np.dot(c, h[n - j]) / (1.0 - z)
    return h


def lerch_unit(theta: float, a: float) -> complex:
    """Lerch sum ``Phi(e**(i theta), 1, a) = sum_{k>=0} e**(i k theta)/(a + k)``.

    The series converges only conditionally on the unit circle.  The first
    N terms are summed directly, with N chosen so that ``A = a + N`` satisfies
    ``A |theta| >= 40``; the remainder ``z**N Phi(z, 1, A)`` is the Laplace
    integral ``int_0^inf exp(-A t) / (1 - z exp(-t)) dt``, expanded by
    Watson's lemma and cut at its smallest term (about ``exp(-A|theta|)``).

    Raises
    ------
    ValueError
        If ``theta`` is a multiple of 2 pi (divergent) or ``a`` is a
        non-positive integer (pole).
    """
    a = float(a)
    if not math.isfinite(a) or not math.isfinite(theta):
        raise ValueError("theta and a must be finite")
    th = _reduce_angle(theta)
    if abs(th) < 1e-12:
        raise ValueError("Lerch sum diverges at z = 1 (theta = 0 mod 2 pi)")
    if a <= 0 and a == math.floor(a):
        raise ValueError(f"pole of the Lerch sum at a = {a}")
    z = complex(math.cos(th), math.sin(th))

    a_min = max(40.0 / abs(th), 12.0)
    n_head = max(0, int(math.ceil(a_min - a)))
    head = 0.0j
    if n_head:
        k = np.arange(n_head)
        head = np.sum(np.exp(1j * th * k) / (a + k))
    big_a = a + n_head

    # smallest term of the asymptotic tail sits near n = A |theta|
    n_max = int(min(big_a * abs(th), 60.0))
    h = _tail_moments(z, n_max)
    powers = big_a ** -np.arange(1.0, n_max + 2.0)
    tail = np.sum(h * powers)
    return complex(head + np.exp(1j * th * n_head) * tail)


def gauss_2f1_unit(b: float, theta: float) -> complex:
    """``2F1(1, b; 1 + b; e**(i theta))``, equal to ``b * Phi(z, 1, b)``."""
    if b == 0:
        raise ValueError("b = 0 is excluded")
    return b * lerch_unit(theta, b)


def incomplete_beta_unit(theta: float, a: float) -> complex:
    """Incomplete Beta ``B(z; a, 0) = z**a Phi(z, 1, a)`` at ``z = e**(i theta)``.

    ``z**a`` uses the principal branch, ``theta`` reduced to (-pi, pi].
    """
    th = _reduce_angle(theta)
    return complex(np.exp(1j * a * th) * lerch_unit(th, a))


# --- Gauss sums -------------------------------------------------------------

def gauss_sum_weights(nu, tau: float, damping: float = 0.0):
    """Regularising weights for lattice Gauss sums ``sum_nu exp(i nu**2 / 2 tau)``.

    The flat-topped window ``exp(-(nu / (pi tau))**8)`` removes the aliased
    stationary points at ``nu = 2 pi tau k`` (k != 0) without touching the
    physical one at ``nu = 0``; results are insensitive to its exact shape.
    An optional Gaussian factor ``exp(-damping nu**2)`` is applied on top.
    """
    nu = np.asarray(nu, dtype=float)
    w = np.exp(-((nu / (math.pi * tau)) ** 8))
    if damping:
        w = w * np.exp(-damping * nu**2)
    return w


def gauss_sum_extent(tau: float, damping: float = 0.0) -> int:
    """Largest ``|nu|`` with a non-negligible weight in :func:`gauss_sum_weights`."""
    n = 1.7 * math.pi * tau + 10.0
    if damping > 0:
        n = min(n, math.sqrt(40.0 / damping) + 10.0)
    return int(math.ceil(n))


def gauss_theta_sum(tau: float, damping: float = 0.0) -> complex:
    """Regularised full Gauss sum ``sum_{nu in Z} exp(i nu**2/(2 tau)) w(nu)``.

    ``w`` is :func:`gauss_sum_weights`.  With ``damping = 0`` this is the
    regularised theta value, close to ``sqrt(2 pi i tau)`` for large tau;
    the same weights are used by the discrete Moshinsky function so that
    identities between the two hold term by term.
    """
    tau = float(tau)
    if not tau > 0:
        raise ValueError("tau must be positive")
    if damping < 0:
        raise ValueError("damping must be non-negative")
    n = gauss_sum_extent(tau, damping)
    nu = np.arange(0, n + 1, dtype=float)
    terms = np.exp(1j * nu**2 / (2.0 * tau)) * gauss_sum_weights(nu, tau, damping)
    return complex(2.0 * terms.sum() - terms[0])


# --- large-argument Bessel asymptotics --------------------------------------

@dataclass(frozen=True)
class AsymptoticTerms:
    """Hankel auxiliary series for ``J_nu(tau)`` truncated at the smallest term."""

    P: float
    Q: float
    n_terms: int
    smallest: float

    @property
    def R(self) -> complex:
        return complex(self.P, self.Q)

    @property
    def degraded(self) -> bool:
        return self.smallest > 1e-6


def gamma_ratio(nu: float, a: int) -> float:
    """``Gamma(nu + a + 1/2) / Gamma(nu - a + 1/2)`` for integer ``a >= 0``."""
    m = np.arange(2 * a)
    return float(np.prod(nu - a + 0.5 + m))


def hankel_pq(nu: float, tau: float) -> AsymptoticTerms:
    """P and Q of the Hankel expansion; ``J = sqrt(2/(pi tau)) (P cos chi - Q sin chi)``."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    p = q = 0.0
    prev = math.inf
    k = 0
    smallest = math.inf
    while k < 200:
        t = gamma_ratio(nu, k) / (math.factorial(k) * (2.0 * tau) ** k)
        mag = abs(t)
        if k > 0 and mag > prev:
            break
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p += sign * t
        else:
            q += sign * t
        smallest = mag
        prev = mag
        k += 1
        if mag == 0.0 or mag < 1e-17:
            break
    return AsymptoticTerms(p, q, k, smallest)
