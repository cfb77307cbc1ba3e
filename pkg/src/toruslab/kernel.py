"""The eigenspace-projector kernel K and its circle-method pieces.

    K(x)  = sum over the shell of e(k.x)
          = int_0^1 prod_j G(t, x_j) e(-lambda t) dt          (time integral)

Pieces: K0 (a neighbourhood of t = 0), K^Q (prime-denominator arcs in
[Q, 2Q], Q >= N), K_{Q,s} (all denominators in [Q, 2Q) at distance
~ 1/(N 2^s)), and the remainders K - K^Q and K_err = K - K0 - sum K_{Q,s}.
Closed-form Fourier coefficients come from the arc bumps' transforms and
Ramanujan sums; evaluators based on arc-restricted quadrature cross-check
them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import multiplicative_funcs, primes_in, ramanujan_sum
from .errors import EmptyArcSet, NyquistViolation, ScaleExceeded
from .lattice import Shell, enumerate_shell
from .profiles import ANNULAR_BUMP, ARC_BUMP, GAMMA
from .propagator import frequency_grid, phase_table

_LOG2 = math.log(2.0)


def log2q(Q: float) -> float:
    """log base 2; the Q-grids are dyadic so this is the natural log scale."""
    return math.log(Q) / _LOG2


@dataclass(frozen=True)
class KernelSpec:
    """Dimension, frequency scale and the enumerated shell lambda = N^2."""

    d: int
    N: int
    shell: Shell

    @property
    def lam(self) -> int:
        return self.shell.lam

    def __post_init__(self):
        if self.shell.d != self.d or self.shell.lam != self.N * self.N:
            raise ValueError("shell does not match (d, N)")


def make_spec(d: int, N: int, cache=None, budget_ops: float = 1e8) -> KernelSpec:
    shell = cache.get(d, N * N) if cache is not None else enumerate_shell(d, N * N, budget_ops)
    return KernelSpec(d, N, shell)


# ---------------------------------------------------------------------------
# direct kernel and the exact time integral

def kernel_direct(spec: KernelSpec, x) -> float:
    """K(x) = sum of cos(2 pi k.x); the sine part must cancel by symmetry."""
    x = np.asarray(x, dtype=float)
    phases = 2.0 * math.pi * (spec.shell.points @ x)
    resid = abs(float(np.sin(phases).sum()))
    if resid > 1e-9 * max(1, spec.shell.count):
        raise AssertionError(f"imaginary residue {resid:.3e} too large")
    return float(np.cos(phases).sum())


def kernel_direct_batch(spec: KernelSpec, X: np.ndarray) -> np.ndarray:
    """K at each row of X, shape (n, d)."""
    phases = 2.0 * math.pi * (np.asarray(X, dtype=float) @ spec.shell.points.T)
    resid = np.abs(np.sin(phases).sum(axis=1)).max() if len(X) else 0.0
    if resid > 1e-9 * max(1, spec.shell.count):
        raise AssertionError(f"imaginary residue {resid:.3e} too large")
    return np.cos(phases).sum(axis=1)


def nyquist_M(spec: KernelSpec) -> int:
    """Smallest admitted trapezoid size: 2 d (2N)^2 + 1."""
    return 2 * spec.d * (2 * spec.N) ** 2 + 1


def kernel_t_integral(spec: KernelSpec, x, M: int | None = None) -> float:
    """Uniform trapezoid (= rectangle) rule for the time integral.

    Exact for the trigonometric polynomial integrand once M exceeds its
    bandwidth; raises NyquistViolation below the guard.
    """
    if M is None:
        M = nyquist_M(spec)
    if M < nyquist_M(spec):
        raise NyquistViolation(f"M = {M} < {nyquist_M(spec)}")
    x = np.asarray(x, dtype=float)
    ts = np.arange(M) / M
    ks, tab = phase_table(spec.N, ts)
    prod = np.ones(M, dtype=complex)
    for j in range(spec.d):
        prod *= tab @ np.exp(2j * math.pi * ks * x[j])
    prod *= np.exp(-2j * math.pi * spec.lam * ts)
    return float(np.real(np.mean(prod)))


# ---------------------------------------------------------------------------
# arc families

@dataclass(frozen=True)
class ArcCutoffPrime:
    """Prime-denominator arc family: q prime in [Q, 2Q], width scale Q^2.

    eta_Q(t) = c_Q sum_{a/q} eta((t - a/q) Q^2) integrates to one; the arcs
    are pairwise disjoint because |a/q - a'/q'| >= 1/(4Q^2) > 2/(10Q^2).
    """

    Q: int
    primes: tuple[int, ...]
    qs: np.ndarray      # denominator per arc
    nums: np.ndarray    # numerator per arc
    c_Q: float

    @property
    def n_arcs(self) -> int:
        return len(self.qs)


def arc_cutoff_prime(spec_N: int, Q: int) -> ArcCutoffPrime:
    if not spec_N <= Q <= spec_N * spec_N:
        raise ValueError("need N <= Q <= N^2")
    ps = primes_in(Q, 2 * Q)
    if not ps:
        raise EmptyArcSet(f"no primes in [{Q}, {2 * Q}]")
    qs, nums = [], []
    for q in ps:
        for a in range(1, q):
            qs.append(q)
            nums.append(a)
    total_phi = sum(q - 1 for q in ps)
    c_Q = Q * Q / (ARC_BUMP.integral * total_phi)
    return ArcCutoffPrime(Q, tuple(ps), np.array(qs), np.array(nums), c_Q)


@dataclass(frozen=True)
class ArcCutoffDyadic:
    """All-denominator arc family: q in [Q, 2Q), annular width scale N 2^s.

    Supports are the annuli 1/(8 N 2^s) <= |t - a/q| <= 1/(N 2^s); they stay
    pairwise disjoint exactly when N 2^s >= 8 Q^2, i.e. 2Q <= 2^s <= N/2 with
    Q <= N/4.
    """

    Q: int
    s: int
    N: int
    qs: np.ndarray
    nums: np.ndarray

    @property
    def width_scale(self) -> int:
        return self.N << self.s

    @property
    def n_arcs(self) -> int:
        return len(self.qs)


def arc_cutoff_dyadic(N: int, Q: int, s: int) -> ArcCutoffDyadic:
    if Q < 2 or Q & (Q - 1):
        raise ValueError("Q must be a dyadic integer >= 2")
    if not (2 * Q <= 2**s <= N // 2):
        raise ValueError("need 2Q <= 2^s <= N/2 (disjoint supports)")
    qs, nums = [], []
    for q in range(Q, 2 * Q):
        for a in range(1, q):
            if math.gcd(a, q) == 1:
                qs.append(q)
                nums.append(a)
    return ArcCutoffDyadic(Q, s, N, np.array(qs), np.array(nums))


def default_prime_Qs(N: int) -> list[int]:
    """Dyadic Q grid N, 2N, ..., N^2 for the prime-arc regime."""
    out, Q = [], N
    while Q <= N * N:
        out.append(Q)
        Q *= 2
    if out[-1] != N * N:
        out.append(N * N)
    return out


def default_dyadic_pairs(N: int) -> list[tuple[int, int]]:
    """(Q, s) grid with dyadic Q <= N/128 and 2Q <= 2^s <= N/2.

    Empty below N = 256: at desk scale K_err degenerates to K - K0.
    """
    pairs = []
    Q = 2
    while Q <= N // 128:
        s = int(math.log2(2 * Q))
        while 2**s <= N // 2:
            pairs.append((Q, s))
            s += 1
        Q *= 2
    return pairs


# ---------------------------------------------------------------------------
# arc-restricted quadrature

_GK_NODES = 15


def _arc_quadrature(spec: KernelSpec, X, centers: np.ndarray, bands: list,
                    envelope, min_panels: int = 64, chunk_nodes: int = 1 << 18):
    """Integrate prod_j G(t, x_j) e(-lambda t) * envelope(t) over a union of
    bands around arc centers, for every position row of X at once.

    bands: list of (lo, hi) offsets relative to each center (hi > lo).
    envelope: callable t-array -> weight array (the arc bump, centered).
    Returns (values (n,), worst quadrature error estimate).

    The e(k^2 t) table is built once per node chunk and shared by all
    positions; per position only d small matvecs remain.
    """
    from .quad import _GAUSS_W, _KRONROD_W, _KRONROD_X

    X = np.atleast_2d(np.asarray(X, dtype=float))
    n_x = X.shape[0]
    max_freq = max(spec.lam, spec.d * (2 * spec.N) ** 2 - spec.lam)
    values = np.zeros(n_x, dtype=complex)
    errs = np.zeros(n_x)
    ks, _ = frequency_grid(spec.N)
    ex = np.exp(2j * math.pi * np.einsum("nd,k->ndk", X, ks))  # (n, d, K)

    for lo_off, hi_off in bands:
        width = hi_off - lo_off
        panels = max(min_panels, int(math.ceil(4.0 * max_freq * width)))
        rel = lo_off + width * np.arange(panels + 1) / panels
        half = 0.5 * (rel[1:] - rel[:-1])
        mids = 0.5 * (rel[1:] + rel[:-1])
        arc_block = max(1, chunk_nodes // (panels * _GK_NODES))
        for c0 in range(0, len(centers), arc_block):
            cs = centers[c0: c0 + arc_block]
            t = (cs[:, None, None] + mids[None, :, None]
                 + half[None, :, None] * _KRONROD_X[None, None, :])
            flat = t.reshape(-1)
            _, tab = phase_table(spec.N, flat)
            base = (np.exp(-2j * math.pi * spec.lam * flat)
                    * envelope(flat - np.repeat(cs, panels * _GK_NODES)))
            for i in range(n_x):
                prod = tab @ ex[i, 0]
                for j in range(1, spec.d):
                    prod *= tab @ ex[i, j]
                prod = (prod * base).reshape(t.shape)
                ik = (prod * _KRONROD_W).sum(axis=2) * half[None, :]
                ig = (prod * _GAUSS_W).sum(axis=2) * half[None, :]
                values[i] += ik.sum()
                errs[i] += np.abs(ik - ig).sum()
    return values, float(errs.max()) if n_x else 0.0


def kQ_eval_batch(spec: KernelSpec, X, arcs: ArcCutoffPrime):
    """K^Q at every row of X; returns (values, worst error estimate)."""
    Q2 = arcs.Q * arcs.Q
    sup = ARC_BUMP.support  # 1/10
    centers = arcs.nums / arcs.qs

    def env(dt):
        return ARC_BUMP(dt * Q2)

    vals, err = _arc_quadrature(spec, X, centers, [(-sup / Q2, sup / Q2)], env)
    return vals * arcs.c_Q, err * arcs.c_Q


def kQ_eval(spec: KernelSpec, x, arcs: ArcCutoffPrime, with_error: bool = False):
    """K^Q(x): quadrature over the prime-arc supports only."""
    vals, err = kQ_eval_batch(spec, [x], arcs)
    return (vals[0], err) if with_error else vals[0]


def kQs_eval_batch(spec: KernelSpec, X, arcs: ArcCutoffDyadic):
    """K_{Q,s} at every row of X; returns (values, worst error estimate)."""
    w = arcs.width_scale
    r0, r3 = ANNULAR_BUMP.r0 / w, ANNULAR_BUMP.r3 / w
    centers = arcs.nums / arcs.qs

    def env(dt):
        return ANNULAR_BUMP(dt * w)

    return _arc_quadrature(spec, X, centers, [(-r3, -r0), (r0, r3)], env)


def kQs_eval(spec: KernelSpec, x, arcs: ArcCutoffDyadic, with_error: bool = False):
    """K_{Q,s}(x): quadrature over the dyadic annular arc supports."""
    vals, err = kQs_eval_batch(spec, [x], arcs)
    return (vals[0], err) if with_error else vals[0]


def k0_eval_batch(spec: KernelSpec, X):
    """K0 at every row of X; returns (values, worst error estimate)."""
    N = spec.N
    sup = ARC_BUMP.support / N

    def env(dt):
        return ARC_BUMP(dt * N)

    return _arc_quadrature(spec, X, np.array([0.0]), [(-sup, sup)], env,
                           min_panels=128)


def k0_eval(spec: KernelSpec, x, with_error: bool = False):
    """K0(x): the time integral restricted to |t| <= 1/(10 N)."""
    vals, err = k0_eval_batch(spec, [x])
    return (vals[0], err) if with_error else vals[0]


# ---------------------------------------------------------------------------
# closed-form Fourier coefficients

def _gamma_product(spec: KernelSpec, k) -> float:
    return float(np.prod(GAMMA(np.asarray(k, dtype=float) / spec.N)))


def k0_fourier(spec: KernelSpec, k) -> float:
    """F(K0)(k) = N^{-1} eta0hat((|k|^2 - lambda)/N) prod_j gamma(k_j/N)."""
    k = np.asarray(k, dtype=np.int64)
    l = int(k @ k) - spec.lam
    g = _gamma_product(spec, k)
    if g == 0.0:
        return 0.0
    return g * float(ARC_BUMP.fourier(l / spec.N)) / spec.N


def kQs_fourier(spec: KernelSpec, k, arcs: ArcCutoffDyadic) -> float:
    """F(K_{Q,s})(k) = (N 2^s)^{-1} etahat(l/(N 2^s)) sum_{q ~ Q} c_q(l)
    times the gamma product, l = |k|^2 - lambda."""
    k = np.asarray(k, dtype=np.int64)
    l = int(k @ k) - spec.lam
    g = _gamma_product(spec, k)
    if g == 0.0:
        return 0.0
    w = arcs.width_scale
    csum = sum(ramanujan_sum(q, l) for q in range(arcs.Q, 2 * arcs.Q))
    return g * float(ANNULAR_BUMP.fourier(l / w)) * csum / w


def kQs_fourier_ceiling(arcs: ArcCutoffDyadic) -> float:
    """The asserted ceiling (Q^2 / (N 2^s)) * max |etahat|; the profile is
    nonnegative so its transform peaks at 0 where it equals the integral."""
    return arcs.Q**2 / arcs.width_scale * ANNULAR_BUMP.integral


def kerr_fourier(spec: KernelSpec, k, Q: int,
                 arcs: ArcCutoffPrime | None = None) -> complex:
    """F(K - K^Q)(k): exactly 0 on the shell; off it,
    -c_Q Q^{-2} etahat(l/Q^2) sum_{q in D_Q} c_q(l) times the gamma product,
    with c_q(l) = q-1 if q | l else -1 at primes."""
    if arcs is None:
        arcs = arc_cutoff_prime(spec.N, Q)
    k = np.asarray(k, dtype=np.int64)
    l = int(k @ k) - spec.lam
    if l == 0:
        return 0.0 + 0.0j
    g = _gamma_product(spec, k)
    if g == 0.0:
        return 0.0 + 0.0j
    csum = sum((q - 1) if l % q == 0 else -1 for q in arcs.primes)
    val = -arcs.c_Q / (Q * Q) * float(ARC_BUMP.fourier(l / (Q * Q))) * csum * g
    return complex(val)


def kerr_eval_batch(spec: KernelSpec, X,
                    pairs: list[tuple[int, int]] | None = None) -> np.ndarray:
    """K_err = K - K0 - sum K_{Q,s} at every row of X."""
    if pairs is None:
        pairs = default_dyadic_pairs(spec.N)
    total = kernel_direct_batch(spec, np.atleast_2d(X)).astype(complex)
    total -= k0_eval_batch(spec, X)[0]
    for Q, s in pairs:
        total -= kQs_eval_batch(spec, X, arc_cutoff_dyadic(spec.N, Q, s))[0]
    return total


def kerr_eval(spec: KernelSpec, x, pairs: list[tuple[int, int]] | None = None) -> complex:
    """K_err(x) = K(x) - K0(x) - sum over the dyadic grid of K_{Q,s}(x)."""
    return complex(kerr_eval_batch(spec, [x], pairs)[0])


# ---------------------------------------------------------------------------
# k-point samplers and scans

def first_representation(n: int, dims: int) -> tuple[int, ...] | None:
    """Some representation of n as a sum of `dims` squares (greedy with
    backtracking), or None."""
    if n < 0:
        return None

    def rec(rem: int, slots: int):
        if slots == 0:
            return () if rem == 0 else None
        if slots == 1:
            r = math.isqrt(rem)
            return (r,) if r * r == rem else None
        for v in range(math.isqrt(rem), -1, -1):
            tail = rec(rem - v * v, slots - 1)
            if tail is not None:
                return (v,) + tail
        return None

    return rec(n, dims)


def offset_lattice_point(spec: KernelSpec, l: int) -> np.ndarray | None:
    """A lattice point k with |k|^2 = lambda + l and every |k_i| <= N
    (so the gamma product is 1), or None."""
    N, d = spec.N, spec.d
    for lead in range(N, -1, -1):
        rem = spec.lam + l - lead * lead
        if rem < 0 or rem > (d - 1) * N * N:
            continue
        rep = first_representation(rem, d - 1)
        if rep is not None and max(rep) <= N:
            return np.array((lead,) + rep, dtype=np.int64)
    return None


def fourier_sample_points(spec: KernelSpec, Qs: list[int], n_random: int = 200,
                          seed: int = 0) -> list[np.ndarray]:
    """Deterministic k-sample for Fourier-bound scans: a few shell points,
    random boxes, and for each Q points with |k|^2 - lambda = q and 2q for
    q prime in [Q, 2Q] (the divisor-boosted offsets that dominate)."""
    rng = np.random.default_rng(seed)
    out = []
    shell_pts = spec.shell.points
    for i in np.linspace(0, max(0, len(shell_pts) - 1), min(8, len(shell_pts))).astype(int):
        out.append(shell_pts[i].astype(np.int64))
    for _ in range(n_random):
        out.append(rng.integers(-2 * spec.N + 1, 2 * spec.N, size=spec.d).astype(np.int64))
    for Q in Qs:
        for q in primes_in(Q, 2 * Q):
            for mult in (1, 2):
                pt = offset_lattice_point(spec, mult * q)
                if pt is not None:
                    out.append(pt)
    return out


def kronecker_x_grid(d: int, n: int, seed: int = 0) -> np.ndarray:
    """Deterministic low-discrepancy grid plus the origin and rational corners."""
    # generalized golden-ratio Kronecker sequence
    phi = 2.0
    for _ in range(64):
        phi = (1.0 + phi) ** (1.0 / (d + 1))
    alpha = np.array([phi ** -(j + 1) for j in range(d)])
    base = np.modf(np.multiply.outer(np.arange(1, n + 1), alpha)
                   + (seed * 0.237 + 0.5))[0]
    corners = [np.zeros(d), np.full(d, 0.5), np.full(d, 1.0 / 3.0),
               np.full(d, 0.25)]
    return np.vstack([corners, base])
