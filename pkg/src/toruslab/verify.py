"""Runtime invariant suites, one per module, with machine-readable verdicts.

Each check returns a counterexample string on failure; the CLI maps any
failure to exit code 1.  Sizes shrink under quick=True.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import arith, energy, estimator, expsum, kernel, lattice, propagator
from .profiles import ARC_BUMP


@dataclass
class InvariantResult:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def as_dict(self):
        return {"suite": self.suite, "name": self.name,
                "passed": self.passed, "detail": self.detail}


@dataclass
class _Suite:
    name: str
    results: list = field(default_factory=list)

    def check(self, name: str, passed: bool, detail: str = ""):
        self.results.append(InvariantResult(self.name, name, bool(passed), detail))


# ---------------------------------------------------------------------------

def _arith_suite(quick: bool, seed: int) -> list[InvariantResult]:
    s = _Suite("arith")
    rng = np.random.default_rng(seed)
    n_samples = 400 if quick else 3000

    bad = ""
    for _ in range(n_samples):
        t = float(rng.random())
        N = int(rng.integers(2, 201))
        arc = arith.dirichlet_approx(t, N)
        ft, fa = Fraction(t), Fraction(arc.a, arc.q)
        ok = (math.gcd(arc.a, arc.q) == 1 and arc.q <= N
              and abs(ft - fa) <= Fraction(1, N * arc.q)
              and (arc.q >= 2 or arc.a in (0, 1)))
        if not ok:
            bad = f"t={t!r} N={N} -> ({arc.a},{arc.q},{arc.phi})"
            break
    s.check("dirichlet_postconditions_exact", not bad, bad)

    bad = ""
    for _ in range(n_samples // 4):
        t = float(rng.random())
        N = int(rng.integers(2, 41))
        arc = arith.dirichlet_approx(t, N)
        ft = Fraction(t)
        valid = []
        for q in range(1, N + 1):
            for a in (round(t * q) - 1, round(t * q), round(t * q) + 1):
                if 0 <= a <= q and math.gcd(a, q) == 1:
                    if abs(ft - Fraction(a, q)) <= Fraction(1, N * q):
                        if q >= 2 or a in (0, 1):
                            valid.append((a, q))
        if (arc.a, arc.q) not in valid:
            bad = f"t={t!r} N={N}: returned ({arc.a},{arc.q}) not in Farey-valid set"
            break
    s.check("dirichlet_matches_farey_oracle", not bad, bad)

    bad = ""
    qmax = 60 if quick else 200
    for q in range(1, qmax + 1):
        units = np.array([a for a in range(q) if math.gcd(a, q) == 1] or [0])
        for l in np.unique(rng.integers(-qmax, qmax + 1, size=6)):
            direct = np.exp(2j * math.pi * (int(l) * units % q) / q).sum()
            if abs(direct - arith.ramanujan_sum(q, int(l))) > 1e-9:
                bad = f"c_{q}({l}): direct {direct} vs {arith.ramanujan_sum(q, int(l))}"
                break
        if bad:
            break
    s.check("ramanujan_equals_direct_sum", not bad, bad)

    bad = ""
    for p in arith.primes_in(3, 100 if quick else 500):
        squares = {x * x % p for x in range(1, p)}
        for a in range(1, p):
            if (arith.jacobi_symbol(a, p) == 1) != (a in squares):
                bad = f"jacobi({a},{p}) disagrees with brute-force squares"
                break
        if bad:
            break
    s.check("jacobi_matches_squares_mod_p", not bad, bad)
    return s.results


def _lattice_suite(quick: bool, seed: int) -> list[InvariantResult]:
    import itertools

    s = _Suite("lattice")
    shells = [(2, 25), (3, 26), (4, 12), (5, 9)]
    bad = ""
    for d, lam in shells:
        sh = lattice.enumerate_shell(d, lam)
        pts = {tuple(p) for p in sh.points.tolist()}
        if len(pts) != sh.count:
            bad = f"duplicates in shell d={d} lam={lam}"
            break
        for p in list(pts)[:50]:
            if tuple(-c for c in p) not in pts:
                bad = f"negation closure fails at {p}"
                break
            perm = tuple(sorted(p))
            if perm not in pts:
                bad = f"permutation closure fails at {p}"
                break
            if tuple(abs(c) for c in p) not in pts:
                bad = f"sign-flip closure fails at {p}"
                break
        if bad:
            break
    s.check("shell_symmetry_closure", not bad, bad)

    bad = ""
    for n in range(1, (100 if quick else 200) + 1, 2):
        if lattice.enumerate_shell(4, n).count != 8 * lattice.sum_of_divisors(n):
            bad = f"r_4({n}) != 8 sigma({n})"
            break
    s.check("four_square_count_odd", not bad, bad)

    counts = [lattice.enumerate_shell(5, N * N).count for N in range(1, 21)]
    s.check("d5_square_counts_positive", all(c > 0 for c in counts),
            f"min count {min(counts)}")

    bad = ""
    for d in (1, 2, 3):
        for lam in range(0, 40 if quick else 101):
            m = math.isqrt(lam)
            brute = [p for p in itertools.product(range(-m, m + 1), repeat=d)
                     if sum(c * c for c in p) == lam]
            if sorted(brute) != [tuple(p) for p in lattice.enumerate_shell(d, lam).points.tolist()]:
                bad = f"d={d} lam={lam} brute-force mismatch"
                break
        if bad:
            break
    s.check("matches_full_box_bruteforce", not bad, bad)
    return s.results


def _expsum_suite(quick: bool, seed: int) -> list[InvariantResult]:
    s = _Suite("expsum")
    rng = np.random.default_rng(seed)
    qmax = 301 if quick else 1001

    def rand_coprime(q):
        while True:
            a = int(rng.integers(1, q))
            if math.gcd(a, q) == 1:
                return a

    bad = ""
    for q in range(3, qmax, 2):
        for _ in range(3):
            a, m = rand_coprime(q), int(rng.integers(0, q))
            if abs(abs(expsum.gauss_sum_direct(a, m, q).value) * math.sqrt(q) - 1.0) > 1e-6:
                bad = f"|S({a},{m},{q})| sqrt(q) != 1"
                break
        if bad:
            break
    s.check("gauss_magnitude_exact_odd_q", not bad, bad)

    bad = ""
    for q in range(4, qmax, 4):
        a = rand_coprime(q)
        m = int(rng.integers(0, q // 2)) * 2 + 1
        if abs(expsum.gauss_sum_direct(a, m, q).value) > 1e-9:
            bad = f"S({a},{m},{q}) != 0"
            break
    s.check("gauss_vanishing_4divq_odd_m", not bad, bad)

    worst = 0.0
    for q in range(2, qmax):
        a, m = rand_coprime(q), int(rng.integers(0, q))
        worst = max(worst, abs(expsum.gauss_sum_direct(a, m, q).value) * math.sqrt(q))
    s.check("gauss_sqrt2_ceiling", worst <= math.sqrt(2) + 1e-6, f"max {worst:.9f}")

    bad = ""
    for _ in range(40 if quick else 200):
        q1, q2 = int(rng.integers(2, 80)), int(rng.integers(2, 80))
        if math.gcd(q1, q2) != 1:
            continue
        a, m = rand_coprime(q1 * q2), int(rng.integers(0, q1 * q2))
        lhs = expsum.gauss_sum_direct(a, m, q1 * q2).value
        rhs = (expsum.gauss_sum_direct(a * q2, m, q1).value
               * expsum.gauss_sum_direct(a * q1, m, q2).value)
        if abs(lhs - rhs) > 1e-8:
            bad = f"multiplicativity fails at (a,m,q1,q2)=({a},{m},{q1},{q2})"
            break
    s.check("gauss_multiplicativity", not bad, bad)

    bad = ""
    for _ in range(60):
        q = int(rng.integers(2, 400))
        a, m = rand_coprime(q), int(rng.integers(-q, q))
        v1 = expsum.gauss_sum_direct(-a, -m, q).value
        v2 = np.conj(expsum.gauss_sum_direct(a, m, q).value)
        if abs(v1 - v2) > 1e-10:
            bad = f"conjugation fails at ({a},{m},{q})"
            break
    s.check("gauss_conjugation_symmetry", not bad, bad)

    bad = ""
    for _ in range(60):
        q = int(rng.integers(1, 200))
        al, be = int(rng.integers(-50, 50)), int(rng.integers(-50, 50))
        v1 = expsum.kloosterman(al, be, q).value
        v2 = expsum.kloosterman(be, al, q).value
        if abs(v1 - v2) > 1e-10:
            bad = f"Kl symmetry fails at ({al},{be},{q})"
            break
    s.check("kloosterman_argument_symmetry", not bad, bad)

    bad = ""
    for p in arith.primes_in(2, 300 if quick else 1000):
        for _ in range(3):
            al, be = int(rng.integers(0, p)), int(rng.integers(0, p))
            if al % p == 0 and be % p == 0:
                al = 1
            if abs(expsum.kloosterman(al, be, p).value) > 2 * math.sqrt(p) + 1e-9:
                bad = f"|Kl({al},{be},{p})| > 2 sqrt p"
                break
            if p > 2 and abs(expsum.salie(al, be, p).value) > 2 * math.sqrt(p) + 1e-9:
                bad = f"|Sa({al},{be},{p})| > 2 sqrt p"
                break
        if bad:
            break
    s.check("weil_bounds_at_primes", not bad, bad)

    bad = ""
    for _ in range(40 if quick else 150):
        q = int(rng.integers(2, 300))
        al, be = int(rng.integers(-300, 300)), int(rng.integers(-300, 300))
        tau = arith.multiplicative_funcs(q).divisor_count
        g = math.gcd(math.gcd(abs(al), abs(be)), q)
        cap = tau * math.sqrt(g) * math.sqrt(q) * (1 + 1e-6)
        if abs(expsum.kloosterman(al, be, q).value) > cap:
            bad = f"gcd-degradation cap fails at ({al},{be},{q})"
            break
    s.check("kloosterman_gcd_degradation", not bad, bad)

    bad = ""
    for q in range(3, (45 if quick else 99) + 1, 2):
        for d in range(2, 7):
            m = tuple(int(v) for v in rng.integers(-q, q, size=d))
            lam = int(rng.integers(0, 4 * q * q))
            params = expsum.SingularSeriesParams(m, q, lam)
            direct = expsum.singular_series(params).value
            red = expsum.singular_series_reduced(params).value
            scale = max(abs(direct), float(q) ** (1 - d / 2))
            if abs(direct - red) > 1e-8 * scale:
                bad = f"singular series reduction fails at q={q} d={d}"
                break
        if bad:
            break
    s.check("singular_series_reduction", not bad, bad)

    # reciprocity |S(a,m,q)| = sqrt(a/q) |S(-q,-m,a)| is exact for odd a, q
    # (mixed parity shifts the magnitude by a factor sqrt(2) either way)
    bad = ""
    tried = 0
    while tried < 40:
        a, q = int(rng.integers(3, 60)) | 1, int(rng.integers(3, 60)) | 1
        if math.gcd(a, q) != 1:
            continue
        m = int(rng.integers(-15, 15)) * 2 + 1  # aq odd, so m odd keeps aq+m even
        tried += 1
        lhs = abs(expsum.gauss_sum_direct(a, m, q).value)
        rhs = math.sqrt(a / q) * abs(expsum.gauss_sum_direct(-q, -m, a).value)
        if abs(lhs - rhs) > 1e-9:
            bad = f"reciprocity magnitude fails at (a,m,q)=({a},{m},{q})"
            break
    s.check("gauss_reciprocity_magnitude_odd", not bad, bad)
    return s.results


def _propagator_suite(quick: bool, seed: int) -> list[InvariantResult]:
    s = _Suite("propagator")
    rng = np.random.default_rng(seed)

    bad = ""
    for _ in range(25):
        N = int(rng.integers(4, 17))
        t, x = float(rng.random()), float(rng.random())
        if abs(propagator.propagator_G(t, -x % 1.0, N)
               - propagator.propagator_G(t, x, N)) > 1e-10:
            bad = f"reflection symmetry fails at N={N} t={t} x={x}"
            break
        j = float(rng.integers(1, 3))
        if abs(propagator.propagator_G(t + j, x, N)
               - propagator.propagator_G(t, x + j, N)) > 1e-10:
            bad = f"periodicity fails at N={N} t={t} x={x}"
            break
        g = abs(propagator.propagator_G(t, x, N))
        if g > 4 * N + 1:
            bad = f"|G| exceeds 4N+1 at N={N}"
            break
    s.check("symmetry_periodicity_triangle", not bad, bad)

    bad = ""
    for _ in range(8 if quick else 25):
        N = int(rng.choice([16, 24, 32]))
        q = int(rng.integers(1, 21))
        a = int(rng.integers(0, q)) if q > 1 else int(rng.integers(0, 2))
        while q > 1 and math.gcd(a, q) != 1:
            a = int(rng.integers(1, q))
        phi = float(rng.uniform(-1, 1)) / (N * q)
        x = float(rng.random())
        arc = arith.RationalArc(a, q, phi)
        direct = propagator.propagator_G(a / q + phi, x, N)
        poisson = propagator.poisson_decomposition(arc, x, N)
        if abs(direct - poisson) > 1e-6 * (2 * N + 1):
            bad = f"poisson mismatch at arc=({a},{q},{phi}) x={x} N={N}"
            break
    s.check("poisson_identity", not bad, bad)

    Ns = (16, 32) if quick else (16, 32, 64)
    maxima = {}
    prime_max = 0.0
    for N in Ns:
        rep = propagator.dispersive_ratio_scan(N, t_samples=256 if quick else 512,
                                               x_samples=16 if quick else 32,
                                               seed=seed, keep_rows=False)
        maxima[N] = rep.max_ratio
        prime_max = max(prime_max, rep.prime_arc_max)
    spread = max(maxima.values()) / min(maxima.values())
    s.check("dispersive_ratio_stability", spread < 2.0,
            f"maxima {maxima}, spread {spread:.3f}")
    s.check("prime_arc_ratio_below_constant", prime_max <= max(maxima.values()),
            f"prime-arc max {prime_max:.3f} vs C* {max(maxima.values()):.3f}")
    return s.results


def _kernel_suite(quick: bool, seed: int) -> list[InvariantResult]:
    s = _Suite("kernel")
    rng = np.random.default_rng(seed)

    bad = ""
    for d, N in [(1, 3), (2, 5), (3, 3)]:
        spec = kernel.make_spec(d, N)
        for _ in range(3 if quick else 8):
            x = rng.random(d)
            if abs(kernel.kernel_t_integral(spec, x) - kernel.kernel_direct(spec, x)) \
                    > 1e-8 * max(1, spec.shell.count):
                bad = f"t-integral mismatch d={d} N={N}"
                break
        if bad:
            break
    s.check("time_integral_identity", not bad, bad)

    bad = ""
    for d, N in [(2, 5), (3, 3)]:
        spec = kernel.make_spec(d, N)
        M = 2 * N + 1
        axes = [np.arange(M) / M] * d
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
        vals = kernel.kernel_direct_batch(spec, mesh)
        parseval = float(np.mean(vals**2))
        if abs(parseval - spec.shell.count) > 1e-6 * spec.shell.count:
            bad = f"Parseval fails d={d} N={N}: {parseval} vs {spec.shell.count}"
            break
        F = np.fft.fftn(vals.reshape((M,) * d)) / M**d
        on = {tuple(int(c) % M for c in p) for p in spec.shell.points.tolist()}
        for idx in np.ndindex(*(M,) * d):
            want = 1.0 if idx in on else 0.0
            if abs(F[idx] - want) > 1e-9:
                bad = f"orthogonality fails d={d} at {idx}"
                break
        if bad:
            break
    s.check("parseval_and_orthogonality", not bad, bad)

    spec = kernel.make_spec(2, 8)
    ks = np.arange(-16, 17)
    kvecs = np.stack(np.meshgrid(ks, ks, indexing="ij"), axis=-1).reshape(-1, 2)
    coeffs = np.array([kernel.k0_fourier(spec, kv) for kv in kvecs])
    bad = ""
    for _ in range(3):
        x = rng.random(2)
        inv = float(np.real(np.sum(coeffs * np.exp(2j * math.pi * (kvecs @ x)))))
        if abs(kernel.k0_eval(spec, x) - inv) > 1e-6 * spec.N**0:
            bad = f"K0 inversion mismatch at x={x}"
            break
    s.check("k0_fourier_inversion", not bad, bad)

    arcs = kernel.arc_cutoff_dyadic(8, 2, 2)
    M = 33
    grid = np.arange(M) / M
    X = np.array([(xi, xj) for xi in grid for xj in grid])
    vals, _ = kernel.kQs_eval_batch(spec, X, arcs)
    F = np.fft.fft2(vals.reshape(M, M)) / M**2
    bad = ""
    for kv in [(0, 0), (8, 0), (3, 4), (2, -13), (11, 7)]:
        got = F[kv[0] % M, kv[1] % M]
        if abs(got - kernel.kQs_fourier(spec, np.array(kv), arcs)) > 1e-6:
            bad = f"kQs closed form vs DFT fails at k={kv}"
            break
    s.check("kQs_fourier_matches_dft", not bad, bad)

    spec4 = kernel.make_spec(2, 4)
    arcs4 = kernel.arc_cutoff_prime(4, 4)
    M = 17
    grid = np.arange(M) / M
    X = np.array([(xi, xj) for xi in grid for xj in grid])
    kq, _ = kernel.kQ_eval_batch(spec4, X, arcs4)
    vals = kernel.kernel_direct_batch(spec4, X) - kq
    F = np.fft.fft2(vals.reshape(M, M)) / M**2
    bad = ""
    for kv in [(0, 4), (3, 3), (1, 2), (-4, 4), (5, 1), (0, 0)]:
        got = F[kv[0] % M, kv[1] % M]
        if abs(got - kernel.kerr_fourier(spec4, np.array(kv), 4, arcs4)) > 1e-6:
            bad = f"kerr closed form vs DFT fails at k={kv}"
            break
    s.check("kerr_fourier_matches_dft", not bad, bad)

    spec5 = kernel.make_spec(5, 16 if quick else 32)
    bad = ""
    for i in np.linspace(0, spec5.shell.count - 1, 12).astype(int):
        if abs(kernel.kerr_fourier(spec5, spec5.shell.points[i], 2 * spec5.N)) > 1e-9:
            bad = f"kerr_fourier not zero on shell point {i}"
            break
    s.check("kerr_fourier_zero_on_shell", not bad, bad)

    bad = ""
    pairs = [(Q, sdy) for Q in (2, 4, 8) for sdy in range(int(math.log2(2 * Q)),
                                                          int(math.log2(spec5.N // 2)) + 1)]
    for Q, sdy in pairs:
        arcs = kernel.arc_cutoff_dyadic(spec5.N, Q, sdy)
        ceiling = kernel.kQs_fourier_ceiling(arcs) * (1 + 1e-9)
        for kv in kernel.fourier_sample_points(spec5, [Q], n_random=30, seed=seed):
            if abs(kernel.kQs_fourier(spec5, kv, arcs)) > ceiling:
                bad = f"kQs ceiling breached at Q={Q} s={sdy} k={kv}"
                break
        if bad:
            break
    s.check("kQs_fourier_ceiling", not bad, bad)

    eta_q_integral = arcs4.c_Q * ARC_BUMP.integral / (4 * 4) * sum(q - 1 for q in arcs4.primes)
    s.check("eta_Q_normalization", abs(eta_q_integral - 1.0) < 1e-6,
            f"integral {eta_q_integral}")

    bad = ""
    for N, Q in [(8, 8), (8, 16), (8, 64), (16, 64), (16, 256)]:
        arcs = kernel.arc_cutoff_prime(N, Q)
        ratio = arcs.c_Q / kernel.log2q(Q)
        band = 4.0 if Q >= 64 else 8.0
        if not (1.0 / band <= ratio <= band):
            bad = f"c_Q/log2 Q = {ratio:.3f} outside band at Q={Q}"
            break
    s.check("c_Q_tracks_log", not bad, bad)

    x = rng.random(2)
    lhs = kernel.k0_eval(spec, x) + kernel.kQs_eval(spec, x, kernel.arc_cutoff_dyadic(8, 2, 2)) \
        + kernel.kerr_eval(spec, x, pairs=[(2, 2)])
    s.check("decomposition_completeness",
            abs(lhs - kernel.kernel_direct(spec, x)) <= 1e-8 * spec.shell.count,
            f"residual {abs(lhs - kernel.kernel_direct(spec, x)):.2e}")
    return s.results


def _energy_suite(quick: bool, seed: int) -> list[InvariantResult]:
    s = _Suite("energy")
    instances = [(2, 25, 2), (3, 9, 2), (3, 25, 2), (5, 9, 2), (2, 25, 3)]
    bad = ""
    for d, lam, n in instances:
        sh = lattice.enumerate_shell(d, lam)
        if energy.additive_energy(sh, n) != energy.additive_energy_bruteforce(sh.points, n):
            bad = f"oracle mismatch d={d} lam={lam} n={n}"
            break
    s.check("energy_equals_bruteforce", not bad, bad)

    bad = ""
    for d, lam, n in instances:
        sh = lattice.enumerate_shell(d, lam)
        rep = energy.energy_report(sh, n)
        if rep.rep_hist.total() != sh.count**n:
            bad = f"mass fails d={d} lam={lam} n={n}"
            break
        if rep.energy < rep.cs_floor:
            bad = f"Cauchy-Schwarz floor fails d={d} lam={lam} n={n}"
            break
        for v, c in list(rep.rep_hist.items())[:100]:
            if rep.rep_hist[tuple(-t for t in v)] != c:
                bad = f"negation symmetry fails d={d} lam={lam} at {v}"
                break
        if bad:
            break
    s.check("mass_symmetry_cs_floor", not bad, bad)

    bad = ""
    from .estimator import make_eigenfunction, lp_norm_even_exact
    for d, lam, n in [(2, 25, 2), (3, 9, 2), (5, 9, 2)]:
        sh = lattice.enumerate_shell(d, lam)
        f = make_eigenfunction(sh, "constant")
        e = energy.additive_energy(sh, n)
        norm = lp_norm_even_exact(f, 2 * n)
        if abs(norm ** (2 * n) * sh.count**n - e) > 1e-6 * e:
            bad = f"norm identity fails d={d} lam={lam} n={n}"
            break
    s.check("energy_equals_even_norm_power", not bad, bad)
    return s.results


def _estimator_suite(quick: bool, seed: int) -> list[InvariantResult]:
    s = _Suite("estimator")
    rng = np.random.default_rng(seed)

    bad = ""
    for d, lam in [(2, 25), (3, 9), (5, 9)]:
        sh = lattice.enumerate_shell(d, lam)
        for model in ("constant", "rademacher", "gaussian"):
            f = estimator.make_eigenfunction(sh, model, seed)
            norm, se = estimator.lp_norm_mc(f, 2.0, 1024 if quick else 2048, seed)
            if abs(norm - 1.0) > 3 * se:
                bad = f"Parseval fails d={d} lam={lam} model={model}"
                break
        if bad:
            break
    s.check("mc_parseval", not bad, bad)

    bad = ""
    hits = total = 0
    for run in range(10 if quick else 30):
        sh = lattice.enumerate_shell(2, 25)
        f = estimator.make_eigenfunction(sh, "constant")
        for p in (4, 6):
            exact = estimator.lp_norm_even_exact(f, p)
            mc, se = estimator.lp_norm_mc(f, float(p), 2048, seed + run)
            total += 1
            if abs(mc - exact) <= 3 * se:
                hits += 1
    s.check("exact_vs_mc_coverage", hits >= 0.8 * total, f"{hits}/{total} within 3 se")

    sh = lattice.enumerate_shell(3, 9)
    f = estimator.make_eigenfunction(sh, "gaussian", seed)
    X = rng.random((2048, 3))
    absF = np.abs(estimator.evaluate_F_batch(f, X))
    means = [float(np.mean(absF**p)) ** (1.0 / p) for p in (2, 3, 4, 6, 8)]
    s.check("power_mean_monotonicity", all(b >= a * (1 - 1e-12) for a, b in zip(means, means[1:])),
            f"means {means}")

    f = estimator.make_eigenfunction(sh, "constant")
    alphas = np.linspace(0.0, float(np.sqrt(sh.count)) + 1.0, 200)
    meas = estimator.level_set_sweep(f, alphas, 4096, seed)
    s.check("level_set_nonincreasing", bool(np.all(np.diff(meas) <= 1e-12)), "")
    # layer cake on one common sample set: p int alpha^(p-1) |E_alpha|
    p = 4.0
    X = np.random.default_rng(seed).random((4096, 3))
    absF = np.abs(estimator.evaluate_F_batch(f, X))
    meas_local = np.array([np.mean(absF > a) for a in alphas])
    layer = float(np.trapezoid(p * alphas ** (p - 1) * meas_local, alphas))
    direct = float(np.mean(absF**p))
    rel = abs(layer - direct) / direct
    s.check("layer_cake_consistency", rel < 0.05, f"relative gap {rel:.4f}")

    try:
        estimator.critical_exponents(4)
        s.check("critical_exponents_guard", False, "no error at d=4")
    except Exception:
        s.check("critical_exponents_guard", True, "")
    return s.results


SUITES = {
    "arith": _arith_suite,
    "lattice": _lattice_suite,
    "expsum": _expsum_suite,
    "propagator": _propagator_suite,
    "kernel": _kernel_suite,
    "energy": _energy_suite,
    "estimator": _estimator_suite,
}


def run_suites(names, quick: bool = False, seed: int = 0) -> list[InvariantResult]:
    results = []
    for name in names:
        results.extend(SUITES[name](quick, seed))
    return results
