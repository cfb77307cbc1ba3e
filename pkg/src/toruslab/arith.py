"""Exact integer number theory shared by every module.

All functions are pure and exact (Python integers); nothing here uses floats
except the stored offset of a RationalArc, whose exactness-critical checks are
done with fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import EvenModulus, NotCoprime

# Deterministic Miller-Rabin witnesses for the full 64-bit range.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_WHEEL = (4, 2, 4, 2, 4, 6, 2, 6)  # increments mod 30 after 2,3,5


def gcd(a: int, b: int) -> int:
    """Nonnegative greatest common divisor; gcd(0,0) = 0."""
    return math.gcd(a, b)


def mod_inverse(x: int, q: int) -> int:
    """Multiplicative inverse of x mod q, in [0, q). Raises NotCoprime."""
    if q < 2:
        raise ValueError("modulus must be >= 2")
    try:
        return pow(x, -1, q)
    except ValueError as exc:
        raise NotCoprime(f"{x} is not invertible mod {q}") from exc


def jacobi_symbol(a: int, q: int) -> int:
    """Jacobi symbol (a|q) for odd q >= 1; 0 iff gcd(a,q) > 1."""
    if q < 1 or q % 2 == 0:
        raise EvenModulus(f"Jacobi symbol needs odd q >= 1, got {q}")
    a %= q
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if q % 8 in (3, 5):
                result = -result
        a, q = q, a
        if a % 4 == 3 and q % 4 == 3:
            result = -result
        a %= q
    return result if q == 1 else 0


def is_prime(q: int) -> bool:
    """Deterministic primality for 0 <= q < 2^63 (fixed-witness Miller-Rabin)."""
    if q < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if q == p:
            return True
        if q % p == 0:
            return False
    d = q - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, q)
        if x == 1 or x == q - 1:
            continue
        for _ in range(r - 1):
            x = x * x % q
            if x == q - 1:
                break
        else:
            return False
    return True


def primes_in(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi."""
    return [p for p in range(max(lo, 2), hi + 1) if is_prime(p)]


def factorize(q: int) -> list[tuple[int, int]]:
    """Prime factorization of q >= 1 by trial division with a mod-30 wheel."""
    if q < 1:
        raise ValueError("factorize needs q >= 1")
    out = []
    for p in (2, 3, 5):
        if q % p == 0:
            e = 0
            while q % p == 0:
                q //= p
                e += 1
            out.append((p, e))
    p, i = 7, 0
    while p * p <= q:
        if q % p == 0:
            e = 0
            while q % p == 0:
                q //= p
                e += 1
            out.append((p, e))
        p += _WHEEL[i]
        i = (i + 1) % 8
    if q > 1:
        out.append((q, 1))
    return out


@dataclass(frozen=True)
class MultiplicativeFuncs:
    totient: int
    divisor_count: int
    moebius: int


def multiplicative_funcs(q: int) -> MultiplicativeFuncs:
    """Euler phi, divisor count tau and Moebius mu of q >= 1."""
    phi, tau, mu = 1, 1, 1
    for p, e in factorize(q):
        phi *= (p - 1) * p ** (e - 1)
        tau *= e + 1
        mu = 0 if e > 1 else -mu
    return MultiplicativeFuncs(phi, tau, mu)


def divisors(q: int) -> list[int]:
    """Sorted divisors of q >= 1."""
    divs = [1]
    for p, e in factorize(q):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def ramanujan_sum(q: int, l: int) -> int:
    """c_q(l) = sum over units a mod q of e(l a / q), exactly.

    Evaluated as sum_{d | gcd(q, l)} d * mu(q/d); c_q(0) = phi(q).
    """
    if q < 1:
        raise ValueError("ramanujan_sum needs q >= 1")
    g = q if l == 0 else math.gcd(q, abs(l))
    total = 0
    for d in divisors(g):
        total += d * multiplicative_funcs(q // d).moebius
    return total


@dataclass(frozen=True)
class RationalArc:
    """A reduced rational time a/q plus offset phi, t = a/q + phi.

    Dirichlet approximation outputs satisfy gcd(a,q)=1, q <= N and
    |phi| <= 1/(N q); q = 1 only occurs with a in {0, 1} for t within 1/N
    of the endpoints.
    """

    a: int
    q: int
    phi: float

    @property
    def t(self) -> float:
        return self.a / self.q + self.phi


def _convergents(t: Fraction):
    """Continued-fraction convergents p/q of t in [0,1], as exact pairs."""
    num, den = t.numerator, t.denominator
    a0 = num // den
    p_cur, q_cur, p_prev, q_prev = a0, 1, 1, 0
    yield p_cur, q_cur
    rem_num, rem_den = num - a0 * den, den
    while rem_num:
        rem_num, rem_den = rem_den, rem_num
        a = rem_num // rem_den
        rem_num -= a * rem_den
        p_cur, p_prev = a * p_cur + p_prev, p_cur
        q_cur, q_prev = a * q_cur + q_prev, q_cur
        yield p_cur, q_cur


def dirichlet_approx(t: float, N: int) -> RationalArc:
    """Best-arc rational approximation: t = a/q + phi with q <= N, |phi| <= 1/(Nq).

    Endpoint convention: t < 1/(2N) -> (0,1,t) and t > 1 - 1/(2N) -> (1,1,t-1).
    Otherwise the continued-fraction convergent of smallest denominator
    satisfying the bound is returned (one always exists).
    """
    if N < 2:
        raise ValueError("dirichlet_approx needs N >= 2")
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    ft = Fraction(t)
    half = Fraction(1, 2 * N)
    if ft < half:
        return RationalArc(0, 1, t)
    if ft > 1 - half:
        return RationalArc(1, 1, t - 1.0)
    best = None
    for p, q in _convergents(ft):
        if q > N:
            break
        # validity: |t - p/q| <= 1/(N q), exact comparison
        if abs(ft - Fraction(p, q)) <= Fraction(1, N * q):
            if best is None or q < best[1]:
                best = (p, q)
    if best is None:  # unreachable: the last convergent with q <= N qualifies
        raise AssertionError("no valid Dirichlet arc found")
    a, q = best
    return RationalArc(a, q, float(ft - Fraction(a, q)))
