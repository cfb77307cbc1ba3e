"""Random and structured eigenfunctions, Monte-Carlo and exact L^p norms,
level-set measures, and scaling against the conjectured exponents.

F(x) = sum over shell points xi of a_xi e(xi . x), with the coefficient
vector l^2-normalized.  Even integer norms are computed exactly: by integer
representation-function convolution for the constant model at small scale,
and otherwise by an exact Nyquist-grid quadrature (|F|^{2n} is a
trigonometric polynomial of per-axis degree 2nN, so an M = 2nN+1 rectangle
rule per axis is exact up to rounding); the grid sum folds coordinate signs
and permutations when the coefficient model is symmetric.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .energy import additive_energy
from .errors import DimensionTooSmall, EmptyShell, ScaleExceeded
from .lattice import Shell

_EPS = np.finfo(float).eps

MODELS = ("constant", "rademacher", "gaussian", "custom")


@dataclass(frozen=True)
class Eigenfunction:
    shell: Shell
    coeffs: np.ndarray  # complex, l2-normalized
    model: str
    seed: int

    @property
    def count(self) -> int:
        return self.shell.count


def make_eigenfunction(shell: Shell, model: str = "constant", seed: int = 0,
                       coeffs=None) -> Eigenfunction:
    """Coefficient models: constant (count^-1/2), rademacher (random signs),
    gaussian (complex normals, normalized), custom (given, then normalized)."""
    if shell.count == 0:
        raise EmptyShell("cannot build an eigenfunction on an empty shell")
    n = shell.count
    rng = np.random.default_rng(seed)
    if model == "constant":
        a = np.full(n, n**-0.5, dtype=complex)
    elif model == "rademacher":
        a = (rng.integers(0, 2, size=n) * 2 - 1) * n**-0.5 + 0.0j
    elif model == "gaussian":
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        a /= np.linalg.norm(a)
    elif model == "custom":
        if coeffs is None:
            raise ValueError("custom model needs coeffs")
        a = np.asarray(coeffs, dtype=complex)
        a /= np.linalg.norm(a)
    else:
        raise ValueError(f"unknown model {model!r}")
    return Eigenfunction(shell, a, model, seed)


def evaluate_F(f: Eigenfunction, x) -> complex:
    """Direct summation in the shell's deterministic point order."""
    phases = 2.0 * math.pi * (f.shell.points @ np.asarray(x, dtype=float))
    return complex(np.sum(f.coeffs * np.exp(1j * phases)))


def evaluate_F_batch(f: Eigenfunction, X: np.ndarray,
                     chunk: int = 1 << 22) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    out = np.empty(len(X), dtype=complex)
    step = max(1, chunk // max(1, f.count))
    for lo in range(0, len(X), step):
        phases = 2.0 * math.pi * (X[lo: lo + step] @ f.shell.points.T)
        out[lo: lo + step] = np.exp(1j * phases) @ f.coeffs
    return out


# ---------------------------------------------------------------------------
# quasi Monte Carlo norms

def _korobov_lattice(n: int, d: int, shift: np.ndarray) -> np.ndarray:
    a = max(1, round(0.6180339887498949 * n))
    while math.gcd(a, n) != 1:
        a += 1
    z = np.empty(d, dtype=np.int64)
    z[0] = 1
    for j in range(1, d):
        z[j] = z[j - 1] * a % n
    i = np.arange(n, dtype=np.int64)
    return np.modf(np.multiply.outer(i, z) / n + shift)[0]


def lp_norm_mc(f: Eigenfunction, p: float, samples: int = 4096, seed: int = 0,
               replicates: int = 8) -> tuple[float, float]:
    """Quasi Monte-Carlo ||F||_p on the torus.

    A rank-1 lattice rule with `replicates` independent random shifts;
    returns (norm estimate, standard error of the norm) with a jackknife
    error on the p-th power mean pushed through the 1/p power.
    """
    if samples < 2 or replicates < 2:
        raise ValueError("need samples >= 2 and replicates >= 2")
    rng = np.random.default_rng(seed)
    means = np.empty(replicates)
    for r in range(replicates):
        X = _korobov_lattice(samples, f.shell.d, rng.random(f.shell.d))
        means[r] = np.mean(np.abs(evaluate_F_batch(f, X)) ** p)
    m = float(means.mean())
    leave_out = (means.sum() - means) / (replicates - 1)
    se_m = math.sqrt((replicates - 1) / replicates
                     * float(((leave_out - leave_out.mean()) ** 2).sum()))
    se_m = max(se_m, 8.0 * _EPS * max(1.0, m))  # rounding floor
    norm = m ** (1.0 / p)
    se_norm = se_m / p * m ** (1.0 / p - 1.0) if m > 0 else se_m
    return norm, se_norm


# ---------------------------------------------------------------------------
# exact even norms

def _folded_tuples(length: int, top: int):
    """Nondecreasing index tuples with entries in 0..top."""
    return itertools.combinations_with_replacement(range(top + 1), length)


def _fold_weight(tup: tuple[int, ...], length: int) -> int:
    perms = math.factorial(length)
    for _, g in itertools.groupby(tup):
        perms //= math.factorial(sum(1 for _ in g))
    signs = 1 << sum(1 for t in tup if t > 0)
    return perms * signs


def even_power_grid_integral(points: np.ndarray, coeffs: np.ndarray, n: int,
                             N: int, symmetric: bool,
                             budget: float = 4e9) -> float:
    """int |F|^{2n} over the torus by the exact M = 2nN+1 rectangle rule.

    The first two axes are evaluated as full FFT planes; remaining axes are
    enumerated, folded under signs and permutations when `symmetric` (the
    coefficient model is invariant under the shell symmetries).
    """
    d = points.shape[1]
    M = 2 * n * N + 1
    count = len(points)
    if d <= 2:
        shape = (M,) * d
        C = np.zeros(shape, dtype=complex)
        idx = tuple(points[:, j] % M for j in range(d))
        np.add.at(C, idx, coeffs)
        F = np.fft.ifftn(C) * M**d
        return float(np.mean(np.abs(F) ** (2 * n)))

    tail = d - 2
    H = (M - 1) // 2
    if symmetric:
        n_tuples = math.comb(H + tail, tail)
    else:
        n_tuples = M**tail
    cost = n_tuples * (count * tail + M * M * (2 * n + 4))
    if cost > budget:
        raise ScaleExceeded(f"grid cost {cost:.2e} exceeds budget {budget:.2e}")

    # sort points by (k1, k2) class for segment sums
    k12 = (points[:, 0] % M) * M + (points[:, 1] % M)
    order = np.argsort(k12, kind="stable")
    pts = points[order]
    cfs = np.asarray(coeffs, dtype=complex)[order]
    k12 = k12[order]
    starts = np.concatenate([[0], np.flatnonzero(np.diff(k12)) + 1])
    class_plane = k12[starts]
    ax_tables = [np.exp(2j * math.pi * np.multiply.outer(
        np.arange(M), pts[:, 2 + j]) / M) for j in range(tail)]

    if symmetric:
        tuples_iter = ((t, _fold_weight(t, tail)) for t in _folded_tuples(tail, H))
    else:
        tuples_iter = ((t, 1) for t in itertools.product(range(M), repeat=tail))

    total = 0.0
    block = max(1, int(2**22 // max(1, count)))
    buf_t = []
    buf_w = []

    def flush():
        nonlocal total
        if not buf_t:
            return
        J = np.array(buf_t, dtype=np.int64)  # (B, tail)
        W = np.array(buf_w, dtype=float)
        phases = ax_tables[0][J[:, 0]]
        for j in range(1, tail):
            phases = phases * ax_tables[j][J[:, j]]
        phases = phases * cfs[None, :]
        sums = np.add.reduceat(phases, starts, axis=1)
        plane = np.zeros((len(J), M, M), dtype=complex)
        plane[:, class_plane // M, class_plane % M] = sums
        F = np.fft.ifft2(plane, axes=(1, 2)) * (M * M)
        total += float(W @ (np.abs(F) ** (2 * n)).sum(axis=(1, 2)))
        buf_t.clear()
        buf_w.clear()

    for tup, w in tuples_iter:
        buf_t.append(tup)
        buf_w.append(w)
        if len(buf_t) >= block:
            flush()
    flush()
    return total / M**d


def lp_norm_even_exact(f: Eigenfunction, p: int, budget: float = 4e9,
                       conv_stream: float = 4e7) -> float:
    """||F||_p for even integer p, exact up to rounding.

    Constant model at small scale goes through the exact integer energy
    identity E_n = count^n ||F||_{2n}^{2n}; anything larger uses the exact
    Nyquist-grid rule.
    """
    if p < 2 or p % 2:
        raise ValueError("p must be an even integer >= 2")
    n = p // 2
    shell = f.shell
    if f.model == "constant":
        try:
            e = additive_energy(shell, n, conv_stream)
            return (e / shell.count**n) ** (1.0 / p)
        except ScaleExceeded:
            pass
    N = int(np.abs(shell.points).max()) if shell.count else 0
    symmetric = f.model == "constant"
    val = even_power_grid_integral(shell.points.astype(np.int64), f.coeffs,
                                   n, max(N, 1), symmetric, budget)
    return val ** (1.0 / p)


# ---------------------------------------------------------------------------
# level sets

@dataclass(frozen=True)
class LevelSetEstimate:
    alpha: float
    measure: float
    std_error: float
    samples: int


def level_set_measure(f: Eigenfunction, alpha: float, samples: int = 4096,
                      seed: int = 0) -> LevelSetEstimate:
    """Monte-Carlo measure of {|F| > alpha} with binomial standard error."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    rng = np.random.default_rng(seed)
    X = rng.random((samples, f.shell.d))
    frac = float(np.mean(np.abs(evaluate_F_batch(f, X)) > alpha))
    se = math.sqrt(max(frac * (1.0 - frac), 1.0 / samples) / samples)
    return LevelSetEstimate(alpha, frac, se, samples)


def level_set_sweep(f: Eigenfunction, alphas, samples: int = 4096,
                    seed: int = 0) -> np.ndarray:
    """Measures of {|F| > alpha} on one common sample set (nonincreasing)."""
    rng = np.random.default_rng(seed)
    X = rng.random((samples, f.shell.d))
    absF = np.abs(evaluate_F_batch(f, X))
    return np.array([np.mean(absF > a) for a in np.asarray(alphas, dtype=float)])


# ---------------------------------------------------------------------------
# conjectured scaling

def conjecture_rhs(d: int, p: float, N: int) -> float:
    """N^((d-2)/2 - d/p) + 1, the conjectured norm growth."""
    if d < 2 or p < 2:
        raise ValueError("need d >= 2 and p >= 2")
    return float(N) ** ((d - 2) / 2.0 - d / p) + 1.0


@dataclass(frozen=True)
class CriticalExponents:
    decoupling: float   # 2(d+1)/(d-1)
    balance: float      # 2d/(d-2)
    log_range: float    # 2d/(d-3)
    sharp_range: float  # 2d/(d-4)


def critical_exponents(d: int) -> CriticalExponents:
    if d <= 4:
        raise DimensionTooSmall(f"2d/(d-4) undefined for d = {d}")
    return CriticalExponents(2 * (d + 1) / (d - 1), 2 * d / (d - 2),
                             2 * d / (d - 3), 2 * d / (d - 4))


# ---------------------------------------------------------------------------
# scaling experiment

def _ball_volume(d: int, r: float) -> float:
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0) * r**d


@dataclass(frozen=True)
class RestrictionRow:
    N: int
    count: int
    norm_mc: float
    std_error: float
    norm_exact: float | None
    rhs: float
    ratio: float
    focusing_ratio: float | None


@dataclass(frozen=True)
class RestrictionReport:
    d: int
    p: float
    model: str
    seed: int
    rows: list
    slope: float
    slope_target: float


def restriction_scaling_experiment(d: int, p: float, N_list, model: str = "constant",
                                   samples: int = 2048, seed: int = 0, cache=None,
                                   budget: float = 4e9,
                                   budget_ops: float = 1e8) -> RestrictionReport:
    """Per N: ||F||_p by QMC (plus the exact even-norm when available), the
    conjectured right-hand side and their ratio; fitted log-log slope
    (smallest N excluded as pre-asymptotic); for the constant model, the
    focusing check comparing the |K|^p mass of the ball of radius 1/(10N)
    against count^p N^-d."""
    from .lattice import enumerate_shell

    rows = []
    rng = np.random.default_rng(seed + 1)
    for N in N_list:
        lam = N * N
        shell = cache.get(d, lam) if cache is not None else enumerate_shell(d, lam, budget_ops)
        if shell.count == 0:
            continue
        f = make_eigenfunction(shell, model, seed)
        norm_mc, se = lp_norm_mc(f, p, samples, seed)
        exact = None
        if model == "constant" and p == int(p) and int(p) % 2 == 0:
            try:
                exact = lp_norm_even_exact(f, int(p), budget)
            except ScaleExceeded:
                exact = None
        focusing = None
        if model == "constant":
            r = 1.0 / (10.0 * N)
            U = rng.random((samples, d))
            radii = r * U[:, 0] ** (1.0 / d)
            direc = rng.standard_normal((samples, d))
            direc /= np.linalg.norm(direc, axis=1)[:, None]
            ball = direc * radii[:, None]
            mass = float(np.mean(np.abs(evaluate_F_batch(f, ball)) ** p))
            mass *= shell.count ** (p / 2.0) * _ball_volume(d, r)  # |K|^p = count^(p/2) |F|^p
            focusing = mass / (shell.count**p * float(N) ** -d)
        rhs = conjecture_rhs(d, p, N)
        best = exact if exact is not None else norm_mc
        rows.append(RestrictionRow(N, shell.count, norm_mc, se, exact, rhs,
                                   best / rhs, focusing))
    fit_rows = rows[1:] if len(rows) > 2 else rows
    xs = [math.log(r.N) for r in fit_rows]
    ys = [math.log(r.norm_exact if r.norm_exact is not None else r.norm_mc)
          for r in fit_rows]
    slope = float(np.polyfit(xs, ys, 1)[0]) if len(xs) >= 2 else float("nan")
    return RestrictionReport(d, p, model, seed, rows, slope,
                             (d - 2) / 2.0 - d / p)
