"""The 1-D periodic Schrodinger propagator, its Poisson-summation
decomposition into Gauss sums times oscillatory integrals, and dispersive
bound scans.

    G(t, x) = sum_k gamma(k/N) e(k x + k^2 t)

with gamma the plateau cutoff (1 on [-1,1], supported in [-2,2]), so the sum
runs over |k| <= 2N.  Near a rational time t = a/q + phi, Poisson summation
gives G = sum_m S(a, -m, q) J(x, phi, m, q) with

    J(x, phi, m, q) = int gamma(y/N) e((x + m/q) y + phi y^2) dy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import quad
from .arith import RationalArc, dirichlet_approx, is_prime, primes_in
from .expsum import gauss_sum_reduced
from .profiles import GAMMA


def gamma_cutoff(u):
    """The fixed frequency cutoff profile (1 on [-1,1], 0 outside [-2,2])."""
    return GAMMA(u)


def frequency_grid(N: int) -> tuple[np.ndarray, np.ndarray]:
    """(k, gamma(k/N)) for the support |k| <= 2N."""
    ks = np.arange(-2 * N, 2 * N + 1, dtype=np.int64)
    return ks, GAMMA(ks / N)


def propagator_G(t: float, x: float, N: int) -> complex:
    """G(t, x) by direct summation in ascending k."""
    if N < 2:
        raise ValueError("need N >= 2")
    t %= 1.0
    x %= 1.0
    ks, w = frequency_grid(N)
    phase = ks * x + (ks * ks) * t
    return complex(np.sum(w * np.exp(2j * math.pi * phase)))


def propagator_G_batch(t: float, xs: np.ndarray, N: int) -> np.ndarray:
    """G(t, x_i) for an array of positions (one t)."""
    t %= 1.0
    ks, w = frequency_grid(N)
    coef = w * np.exp(2j * math.pi * ((ks * ks) * t))
    return np.exp(2j * math.pi * np.multiply.outer(np.asarray(xs) % 1.0, ks)) @ coef


def phase_table(N: int, ts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(k, table) with table[j, k] = gamma(k/N) e(k^2 t_j).

    G(t_j, x) = table[j] @ e(k x); kernel quadratures reuse one table across
    many positions.
    """
    ks, w = frequency_grid(N)
    tab = w[None, :] * np.exp(2j * math.pi * np.multiply.outer(np.asarray(ts), ks * ks))
    return ks, tab


def oscillatory_J(x: float, phi: float, m: int, q: int, N: int,
                  tol: float | None = None) -> complex:
    """J(x, phi, m, q) by adaptive Gauss-Kronrod over [-2N, 2N].

    Default absolute tolerance 1e-9 * N.  Panel width respects the
    instantaneous frequency |x + m/q| + 4 N |phi| and never exceeds N/8.
    """
    if q < 1:
        raise ValueError("need q >= 1")
    if N < 2:
        raise ValueError("need N >= 2")
    xi = x + m / q
    if tol is None:
        tol = 1e-9 * N

    def f(y):
        return GAMMA(y / N) * np.exp(2j * math.pi * (xi * y + phi * y * y))

    osc = abs(xi) + 4.0 * N * abs(phi)
    return quad.integrate(f, -2.0 * N, 2.0 * N, tol, osc_scale=osc, max_width=N / 8.0)


def default_m_window(q: int, N: int) -> int:
    """Poisson truncation half-width with tail error below 1e-6 (2N+1)."""
    return int(math.ceil(8.0 * max(1.0, q / N))) + 16


def poisson_decomposition(arc: RationalArc, x: float, N: int,
                          m_window: int | None = None) -> complex:
    """Sum of S(a, -m, q) J(x, phi, m, q) over the m-window centred at the
    integer minimizing |x + m/q|; equals G(a/q + phi, x) up to truncation."""
    a, q, phi = arc.a, arc.q, arc.phi
    if m_window is None:
        m_window = default_m_window(q, N)
    m0 = round(-x * q)
    total = 0.0 + 0.0j
    for m in range(m0 - m_window, m0 + m_window + 1):
        if q == 1:
            s = 1.0 + 0.0j
        else:
            s = gauss_sum_reduced(a, -m, q).value
        if s != 0.0:
            total += s * oscillatory_J(x, phi, m, q, N)
    return total


@dataclass
class DispersiveScanReport:
    """max/ratio statistics of |G| against the arc-dispersive envelope."""

    N: int
    rows: list = field(default_factory=list)  # (t, x, q, a, phi, absG, bound, ratio)
    max_ratio: float = 0.0
    argmax: tuple = ()
    prime_arc_rows: list = field(default_factory=list)  # (q, a, phi, x, absG, ratio)
    prime_arc_max: float = 0.0
    hist_edges: np.ndarray = None
    hist_counts: np.ndarray = None


def dispersive_ratio_scan(N: int, t_samples: int = 512, x_samples: int = 32,
                          n_prime_arcs: int = 24, seed: int = 0,
                          keep_rows: bool = True) -> DispersiveScanReport:
    """Scan |G(t,x)| / (q^{-1/2} min(N, |t-a/q|^{-1/2})) over a (t, x) grid,
    classifying each t with Dirichlet approximation; separately scan
    |G|/sqrt(q) on arcs at odd primes q >= N with |phi| <= 1/q^2."""
    if N < 8:
        raise ValueError("need N >= 8")
    report = DispersiveScanReport(N=N)
    xs = np.arange(x_samples) / x_samples
    ratios = []
    for j in range(t_samples):
        t = j / t_samples
        arc = dirichlet_approx(t, N)
        bound = min(float(N), abs(arc.phi) ** -0.5 if arc.phi != 0.0 else float("inf"))
        bound /= math.sqrt(arc.q)
        absG = np.abs(propagator_G_batch(t, xs, N))
        i = int(np.argmax(absG))
        ratio = float(absG[i]) / bound
        ratios.append(ratio)
        if keep_rows:
            report.rows.append((t, xs[i], arc.q, arc.a, arc.phi, float(absG[i]),
                                bound, ratio))
        if ratio > report.max_ratio:
            report.max_ratio = ratio
            report.argmax = (t, float(xs[i]), arc.q, arc.a, arc.phi)

    rng = np.random.default_rng(seed)
    primes = [p for p in primes_in(N, N * N) if p % 2 == 1]
    if len(primes) > n_prime_arcs:
        idx = np.linspace(0, len(primes) - 1, n_prime_arcs).astype(int)
        primes = [primes[i] for i in idx]
    for p in primes:
        a = int(rng.integers(1, p))
        phi = float(rng.uniform(-1.0, 1.0)) / (p * p)
        t = a / p + phi
        absG = np.abs(propagator_G_batch(t, xs, N))
        i = int(np.argmax(absG))
        ratio = float(absG[i]) / math.sqrt(p)
        report.prime_arc_rows.append((p, a, phi, float(xs[i]), float(absG[i]), ratio))
        report.prime_arc_max = max(report.prime_arc_max, ratio)

    report.hist_counts, report.hist_edges = np.histogram(ratios, bins=32, range=(0.0, 8.0))
    return report
