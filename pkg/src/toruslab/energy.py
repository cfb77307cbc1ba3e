"""Exact additive energy of lattice shells via representation-function
convolution, with a literal tuple-enumeration oracle.

E_n(A) counts 2n-tuples with equal n-fold sums; it equals the sum of squares
of the n-fold representation function r(v) = #{(a_1..a_n): sum = v}.  All
counts are exact integers: convolutions run on packed int64 keys with
segment-summed int64 counts, and the final sums of squares accumulate into
Python integers (E_6 at d=5, N=8 exceeds 2^63).
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import ScaleExceeded
from .lattice import Shell


class RepHist:
    """Histogram of n-fold sums: packed int64 keys -> exact int64 counts."""

    def __init__(self, keys: np.ndarray, counts: np.ndarray, packer: "_Packer"):
        order = np.argsort(keys)
        self.keys = keys[order]
        self.counts = counts[order]
        self.packer = packer

    def __len__(self) -> int:
        return len(self.keys)

    def total(self) -> int:
        return int(sum(int(c) for c in self.counts))

    def vectors(self) -> np.ndarray:
        return self.packer.unpack(self.keys)

    def items(self):
        for v, c in zip(self.vectors(), self.counts):
            yield tuple(int(t) for t in v), int(c)

    def __getitem__(self, v) -> int:
        key = self.packer.pack(np.asarray(v, dtype=np.int64)[None, :])[0]
        i = np.searchsorted(self.keys, key)
        if i < len(self.keys) and self.keys[i] == key:
            return int(self.counts[i])
        return 0

    def energy(self) -> int:
        """Sum of squared counts, exact (chunked int64 partials)."""
        total = 0
        c = self.counts
        if len(c) and int(c.max()) >= 1 << 31:
            raise ScaleExceeded("representation counts too large for exact squares")
        sq = c * c
        chunk = 1 << 20
        for lo in range(0, len(sq), chunk):
            total += int(sq[lo: lo + chunk].sum(dtype=np.int64))
        return total


class _Packer:
    """Linear packing of integer vectors into int64 (fixed bits per axis)."""

    def __init__(self, d: int, max_abs: int):
        bits = max(2, (2 * max_abs + 1).bit_length())
        if d * bits > 62:
            raise ScaleExceeded(f"cannot pack d={d} coords of {bits} bits")
        self.d = d
        self.bits = bits
        self.offset = 1 << (bits - 1)
        self.scales = (1 << (bits * np.arange(d, dtype=np.int64)))
        self.zero_key = int(((self.offset) * self.scales).sum())

    def pack(self, vecs: np.ndarray) -> np.ndarray:
        return ((vecs.astype(np.int64) + self.offset) * self.scales).sum(axis=1)

    def unpack(self, keys: np.ndarray) -> np.ndarray:
        out = np.empty((len(keys), self.d), dtype=np.int64)
        rest = keys.copy()
        mask = (1 << self.bits) - 1
        for i in range(self.d):
            out[:, i] = (rest & mask) - self.offset
            rest >>= self.bits
        return out


def _convolve(a: RepHist, b: RepHist, max_stream: float) -> RepHist:
    if len(a) * len(b) > max_stream:
        raise ScaleExceeded(
            f"convolution stream {len(a) * len(b):.2e} exceeds budget {max_stream:.2e}")
    shift = b.keys - b.packer.zero_key
    keys = (a.keys[:, None] + shift[None, :]).ravel()
    cnts = (a.counts[:, None] * b.counts[None, :]).ravel()
    order = np.argsort(keys, kind="stable")
    keys = keys[order]
    cnts = cnts[order]
    edges = np.flatnonzero(np.diff(keys)) + 1
    starts = np.concatenate([[0], edges])
    uniq = keys[starts]
    sums = np.add.reduceat(cnts, starts)
    return RepHist(uniq, sums, a.packer)


def representation_counts(shell: Shell, n: int, max_stream: float = 8e7) -> RepHist:
    """Exact r^(n) by square-and-multiply over histogram convolution."""
    if n < 1:
        raise ValueError("need n >= 1")
    if shell.count == 0:
        packer = _Packer(shell.d, 1)
        return RepHist(np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64), packer)
    max_abs = int(np.abs(shell.points).max()) * n
    # overflow guard for exact int64 segment sums: total mass = count^n
    if n * math.log2(max(2, shell.count)) > 62:
        raise ScaleExceeded("count^n exceeds the exact int64 budget")
    packer = _Packer(shell.d, max_abs)
    base_keys = packer.pack(shell.points)
    base = RepHist(base_keys, np.ones(len(base_keys), dtype=np.int64), packer)
    result = None
    power = base
    e = n
    while e:
        if e & 1:
            result = power if result is None else _convolve(result, power, max_stream)
        e >>= 1
        if e:
            power = _convolve(power, power, max_stream)
    return result


def additive_energy(shell: Shell, n: int, max_stream: float = 8e7) -> int:
    """E_n(shell) = sum_v r^(n)(v)^2, exact."""
    return representation_counts(shell, n, max_stream).energy()


def additive_energy_bruteforce(points, n: int, max_ops: float = 1e9) -> int:
    """Literal n-tuple enumeration oracle (independent of the packed
    convolution path): histogram n-fold sums with a Counter, sum squares."""
    pts = [tuple(int(c) for c in p) for p in np.asarray(points).reshape(len(points), -1)]
    if not pts:
        return 0
    n_pts = len(pts)
    if n_pts**n * n * len(pts[0]) > max_ops:
        raise ScaleExceeded("brute-force tuple enumeration over budget")
    hist = Counter()
    for combo in itertools.product(pts, repeat=n):
        hist[tuple(map(sum, zip(*combo)))] += 1
    return sum(c * c for c in hist.values())


@dataclass(frozen=True)
class EnergyReport:
    d: int
    lam: int
    n: int
    count: int
    rep_hist: RepHist
    energy: int
    sumset_size: int
    cs_floor: int


def energy_report(shell: Shell, n: int, max_stream: float = 8e7) -> EnergyReport:
    """Representation histogram, exact energy, sumset size and the
    Cauchy-Schwarz floor ceil(count^(2n) / #(nA))."""
    hist = representation_counts(shell, n, max_stream)
    energy = hist.energy()
    sumset = len(hist)
    cs_floor = -(-shell.count ** (2 * n) // sumset) if sumset else 0
    return EnergyReport(shell.d, shell.lam, n, shell.count, hist, energy, sumset, cs_floor)


def energy_exponent(d: int, n: int) -> int:
    """The conjectured power law: E_n ~ N^(2n(d-2)-d)."""
    return 2 * n * (d - 2) - d


def energy_theorem_regime(d: int, n: int) -> str:
    """'sharp', 'log', or 'outside': where the power-law upper bound is
    known sharply, known up to a log power, or merely diagnostic."""
    if d >= 9 and n >= 2:
        return "sharp"
    if d in (7, 8):
        return "sharp" if n >= 3 else ("log" if n == 2 else "outside")
    if d == 6:
        return "sharp" if n >= 4 else ("log" if n == 3 else "outside")
    if d == 5:
        return "sharp" if n >= 6 else ("log" if n in (4, 5) else "outside")
    return "outside"


@dataclass(frozen=True)
class EnergyScalingRow:
    N: int
    count: int
    energy: int
    sumset_size: int
    cs_floor: int
    ratio_to_power_law: float
    cs_ratio: float


@dataclass(frozen=True)
class EnergyScalingReport:
    d: int
    n: int
    exponent: int
    regime: str
    rows: list
    slope: float


def energy_scaling_experiment(d: int, n: int, N_list, cache=None,
                              max_stream: float = 8e7,
                              budget_ops: float = 1e8) -> EnergyScalingReport:
    """Exact E_n across N, ratios to the conjectured power law, and the
    least-squares slope of log E_n against log N."""
    from .lattice import enumerate_shell

    rows = []
    expo = energy_exponent(d, n)
    for N in N_list:
        lam = N * N
        shell = cache.get(d, lam) if cache is not None else enumerate_shell(d, lam, budget_ops)
        rep = energy_report(shell, n, max_stream)
        scale = float(N) ** expo
        rows.append(EnergyScalingRow(N, shell.count, rep.energy, rep.sumset_size,
                                     rep.cs_floor, rep.energy / scale,
                                     rep.cs_floor / scale))
    pos = [(math.log(r.N), math.log(r.energy)) for r in rows if r.energy > 0]
    slope = float("nan")
    if len(pos) >= 2:
        xs, ys = zip(*pos)
        slope = float(np.polyfit(xs, ys, 1)[0])
    return EnergyScalingReport(d, n, expo, energy_theorem_regime(d, n), rows, slope)
