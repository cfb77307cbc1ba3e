"""Generalized quadratic Gauss sums, Kloosterman and Salie sums, and the
singular series, with direct-summation oracles and fast reduced evaluators.

Conventions: e(y) = exp(2 pi i y) and

    S(a, m, q)  = (1/q) sum_{k=0}^{q-1} e((a k^2 + m k)/q)
    Kl(alpha, beta, q) = sum_{(a,q)=1} e((a alpha + a* beta)/q)
    Sa(alpha, beta, q) = sum_{(a,q)=1} (a|q) e((a alpha + a* beta)/q)
    SS(m, q) = sum_{(a,q)=1} prod_j S(a, m_j, q) e(-lambda a / q)

Direct sums use exact integer phase reduction mod q, so rounding stays at a
few ulps regardless of argument size.  Reduced evaluators use
multiplicativity, the completed-square closed form at odd moduli and the
classical two-power closed forms; they agree with the direct sums to within
the attached rounding bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import factorize, jacobi_symbol, mod_inverse, multiplicative_funcs
from .errors import EvenModulus, NotCoprime

_EPS = np.finfo(float).eps
_CHUNK = 1 << 22


@dataclass(frozen=True)
class ExpSumValue:
    """A complex sum value with a worst-case rounding bound."""

    value: complex
    err_bound: float

    def __abs__(self) -> float:
        return abs(self.value)


def _phase_sum(phases: np.ndarray, q: int) -> complex:
    """Sum of e(p/q) over an int64 array of residues p mod q."""
    theta = phases * (2.0 * math.pi / q)
    return complex(np.cos(theta).sum(), np.sin(theta).sum())


def gauss_sum_direct(a: int, m: int, q: int) -> ExpSumValue:
    """S(a, m, q) by direct summation (the oracle path)."""
    if q < 2:
        raise ValueError("modulus must be >= 2")
    a %= q
    m %= q
    total = 0.0 + 0.0j
    for lo in range(0, q, _CHUNK):
        k = np.arange(lo, min(lo + _CHUNK, q), dtype=np.int64)
        # two-step reduction keeps every product within int64
        ph = (a * (k * k % q) + m * k) % q
        total += _phase_sum(ph, q)
    return ExpSumValue(total / q, 8.0 * _EPS * q)


def _eps_factor(q: int) -> complex:
    # the classical normalizing unit for odd q: 1 if q = 1 (4), i if q = 3 (4)
    return 1.0 + 0.0j if q % 4 == 1 else 1.0j


def gauss_sum_closed_odd(a: int, m: int, q: int) -> complex:
    """Closed form for odd q, gcd(a,q)=1: completing the square gives
    S = e(-4* a* m^2 / q) (a|q) eps_q q^{-1/2}."""
    a %= q
    m %= q
    if q == 1:
        return 1.0 + 0.0j
    inv4 = mod_inverse(4, q)
    inva = mod_inverse(a, q)
    shift = (-inv4 * inva % q) * (m * m % q) % q
    phase = np.exp(2j * math.pi * shift / q)
    return phase * jacobi_symbol(a, q) * _eps_factor(q) / math.sqrt(q)


def _gauss_sum_two_power(a: int, m: int, e: int) -> complex:
    """S(a, m, 2^e) for odd a, in closed form.

    e >= 2 with m odd vanishes.  For even m = 2 m1, translation by a* m1
    reduces to S(a, 0, 2^e), whose classical value is
      (1 + i^a) 2^{-e/2}      for e even,
      e(a/8)  2^{-(e-1)/2}    for e odd >= 3.
    """
    q = 1 << e
    a %= q
    m %= q
    if e == 0:
        return 1.0 + 0.0j
    if e == 1:
        # two terms: (1 + e((a+m)/2))/2
        return 0.0j if (a + m) % 2 == 1 else 1.0 + 0.0j
    if m % 2 == 1:
        return 0.0 + 0.0j
    m1 = m // 2
    inva = mod_inverse(a, q)
    shift = (-inva * (m1 * m1 % q)) % q
    phase = np.exp(2j * math.pi * shift / q)
    if e % 2 == 0:
        base = (1.0 + 1.0j ** (a % 4)) * 2.0 ** (-e / 2)
    else:
        base = np.exp(2j * math.pi * a / 8.0) * 2.0 ** (-(e - 1) / 2)
    return complex(phase * base)


def gauss_sum_reduced(a: int, m: int, q: int) -> ExpSumValue:
    """S(a, m, q) via factorization and per-prime-power closed forms.

    Requires gcd(a, q) = 1.  Splits S(a,m,uv) = S(av,m,u) S(au,m,v) across
    coprime factors, evaluates odd prime powers by the completed square and
    the 2-part by its classical closed form.
    """
    if q < 2:
        raise ValueError("modulus must be >= 2")
    if math.gcd(a, q) != 1:
        raise NotCoprime(f"gcd({a}, {q}) != 1")
    value = 1.0 + 0.0j
    n_pieces = 0
    for p, e in factorize(q):
        piece_q = p**e
        cofactor = q // piece_q
        a_piece = a * cofactor % piece_q
        if p == 2:
            value *= _gauss_sum_two_power(a_piece, m, e)
        else:
            value *= gauss_sum_closed_odd(a_piece, m, piece_q)
        n_pieces += 1
    return ExpSumValue(value, 64.0 * _EPS * max(1, n_pieces))


def _unit_inverse_table(q: int) -> tuple[np.ndarray, np.ndarray]:
    """(units mod q, their inverses), as int64 arrays."""
    if q == 1:
        return np.array([0], dtype=np.int64), np.array([0], dtype=np.int64)
    a = np.arange(1, q, dtype=np.int64)
    units = a[np.gcd(a, q) == 1]
    inv = np.array([pow(int(u), -1, q) for u in units], dtype=np.int64)
    return units, inv


def kloosterman(alpha: int, beta: int, q: int) -> ExpSumValue:
    """Kl(alpha, beta, q) by direct summation with modular inverses."""
    if q < 1:
        raise ValueError("modulus must be >= 1")
    if q == 1:
        return ExpSumValue(1.0 + 0.0j, 4.0 * _EPS)
    units, inv = _unit_inverse_table(q)
    ph = (alpha % q * units + beta % q * inv) % q
    return ExpSumValue(_phase_sum(ph, q), 8.0 * _EPS * len(units))


def salie(alpha: int, beta: int, q: int) -> ExpSumValue:
    """Sa(alpha, beta, q) (Jacobi-twisted Kloosterman sum) for odd q >= 3."""
    if q % 2 == 0:
        raise EvenModulus("Salie sums need an odd modulus")
    if q < 3:
        raise ValueError("modulus must be >= 3")
    units, inv = _unit_inverse_table(q)
    chi = np.array([jacobi_symbol(int(u), q) for u in units], dtype=np.float64)
    ph = (alpha % q * units + beta % q * inv) % q
    theta = ph * (2.0 * math.pi / q)
    val = complex((chi * np.cos(theta)).sum(), (chi * np.sin(theta)).sum())
    return ExpSumValue(val, 8.0 * _EPS * len(units))


@dataclass(frozen=True)
class SingularSeriesParams:
    """Arguments of SS(m, q): frequency offset vector m, modulus q,
    eigenvalue lambda and dimension d = len(m)."""

    m: tuple[int, ...]
    q: int
    lam: int

    @property
    def d(self) -> int:
        return len(self.m)


def singular_series(params: SingularSeriesParams) -> ExpSumValue:
    """SS(m, q) by the direct double sum over units (oracle path)."""
    q, lam, mvec = params.q, params.lam, params.m
    if q < 2:
        raise ValueError("modulus must be >= 2")
    units, _ = _unit_inverse_table(q)
    k = np.arange(q, dtype=np.int64)
    ksq = k * k % q
    total = 0.0 + 0.0j
    err = 0.0
    for a in units:
        prod = 1.0 + 0.0j
        for mj in mvec:
            ph = (int(a) * ksq + (mj % q) * k) % q
            prod *= _phase_sum(ph, q) / q
        prod *= np.exp(-2j * math.pi * (lam % q) * int(a) / q)
        total += prod
        err += 8.0 * _EPS * q * params.d
    return ExpSumValue(total, err)


def singular_series_reduced(params: SingularSeriesParams) -> ExpSumValue:
    """SS(m, q) for odd q via S(1,0,q)^d times a Kloosterman (d even) or
    Salie (d odd) sum.

    Completing the square in each Gauss factor yields
        SS(m,q) = S(1,0,q)^d sum_{(a,q)=1} (a|q)^d e((nu a* - lam a)/q),
    nu = -4*(m_1^2+...+m_d^2) mod q, i.e. arguments (-lam mod q, nu mod q).
    """
    q, lam, d = params.q, params.lam, params.d
    if q % 2 == 0:
        raise EvenModulus("reduced singular series needs odd q")
    if q < 3:
        raise ValueError("modulus must be >= 3")
    inv4 = mod_inverse(4, q)
    nu = -inv4 * sum(mj * mj for mj in params.m) % q
    alpha = -lam % q
    beta = nu % q
    base = gauss_sum_closed_odd(1, 0, q) ** d
    tw = kloosterman(alpha, beta, q) if d % 2 == 0 else salie(alpha, beta, q)
    return ExpSumValue(base * tw.value, tw.err_bound + 64.0 * _EPS * d)
