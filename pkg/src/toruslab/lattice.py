"""Integer lattice points on spheres and annuli, with a binary disk cache.

Shells F = {k in Z^d : |k|^2 = lambda} are enumerated exactly by recursive
descent with residual-norm pruning; the last two coordinates come from a
precomputed table of two-square representations, so the search space is the
(d-2)-ball.  Points are produced in lexicographic order.
"""

from __future__ import annotations

import math
import os
import struct
import tempfile
import zlib
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import CorruptCache, ScaleExceeded

_MAGIC = b"TRLB"
_VERSION = 1
_HEADER = struct.Struct("<4sHBQQI")  # magic, version, d, lambda, count, crc32


@dataclass(frozen=True)
class Shell:
    """All integer d-vectors of squared norm lambda, lexicographically sorted."""

    d: int
    lam: int
    points: np.ndarray  # (count, d) int32

    @property
    def count(self) -> int:
        return int(self.points.shape[0])

    def __post_init__(self):
        if self.points.shape != (self.points.shape[0], self.d):
            raise ValueError("point array shape does not match dimension")


@dataclass(frozen=True)
class Annulus:
    """Integer points with |k| in [N - delta/2, N + delta/2] (closed)."""

    d: int
    N: int
    delta: float
    lam_range: tuple[int, int]  # inclusive range of |k|^2
    points: np.ndarray


def _two_square_table(lam_max: int) -> dict[int, list[tuple[int, int]]]:
    """pairs[r] = all (a, b) with a^2 + b^2 = r, lexicographically sorted."""
    pairs: dict[int, list[tuple[int, int]]] = {}
    m = math.isqrt(lam_max)
    for a in range(-m, m + 1):
        aa = a * a
        bmax = math.isqrt(lam_max - aa)
        for b in range(-bmax, bmax + 1):
            pairs.setdefault(aa + b * b, []).append((a, b))
    return pairs


def enumeration_cost(d: int, lam: int) -> float:
    """Pruning-free cost estimate: the coordinate box for the free coordinates
    plus the two-square table."""
    if d <= 2:
        return float(lam + 1)
    side = 2 * math.isqrt(lam) + 1
    return float(side ** (d - 2) + lam + 1)


def enumerate_shell(d: int, lam: int, budget_ops: float = 1e8) -> Shell:
    """Exact enumeration of {k in Z^d : |k|^2 = lam}.

    Raises ScaleExceeded when lam > 1e6 or the cost estimate exceeds
    budget_ops.
    """
    if not 1 <= d <= 9:
        raise ValueError("dimension must be in 1..9")
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    if lam > 10**6 or enumeration_cost(d, lam) > budget_ops:
        raise ScaleExceeded(f"shell d={d} lambda={lam} exceeds the desk-scale budget")

    pts: list[tuple[int, ...]] = []
    if lam == 0:
        pts.append((0,) * d)
    elif d == 1:
        s = math.isqrt(lam)
        if s * s == lam:
            pts.extend([(-s,), (s,)])
    elif d == 2:
        table = _two_square_table(lam)
        pts.extend(table.get(lam, []))
    else:
        table = _two_square_table(lam)

        def descend(prefix: tuple[int, ...], residual: int, remaining: int):
            if remaining == 2:
                for ab in table.get(residual, ()):
                    pts.append(prefix + ab)
                return
            m = math.isqrt(residual)
            for k in range(-m, m + 1):
                descend(prefix + (k,), residual - k * k, remaining - 1)

        descend((), lam, d)

    arr = np.array(sorted(pts), dtype=np.int32).reshape(len(pts), d)
    return Shell(d, lam, arr)


def enumerate_annulus(d: int, N: int, delta: float, budget_ops: float = 1e8) -> Annulus:
    """Union of shells with |k|^2 in [ceil((N-delta/2)^2), floor((N+delta/2)^2)].

    Interval endpoints are resolved exactly (rational arithmetic); boundary
    ties are included.
    """
    if delta < 0 or delta > N:
        raise ValueError("need 0 <= delta <= N")
    half = Fraction(delta) / 2
    lo = (Fraction(N) - half) ** 2
    hi = (Fraction(N) + half) ** 2
    lam_lo = max(0, math.ceil(lo))
    lam_hi = math.floor(hi)
    total_cost = sum(enumeration_cost(d, lam) for lam in range(lam_lo, lam_hi + 1))
    if total_cost > budget_ops:
        raise ScaleExceeded(f"annulus d={d} N={N} delta={delta} exceeds the budget")
    chunks = [enumerate_shell(d, lam, budget_ops).points for lam in range(lam_lo, lam_hi + 1)]
    nonempty = [c for c in chunks if len(c)]
    if nonempty:
        pts = np.concatenate(nonempty, axis=0)
        order = np.lexsort(pts.T[::-1])
        pts = pts[order]
    else:
        pts = np.zeros((0, d), dtype=np.int32)
    return Annulus(d, N, delta, (lam_lo, lam_hi), pts)


def write_shell(shell: Shell, path: str | os.PathLike) -> None:
    """Write the binary cache file (atomic rename)."""
    payload = np.ascontiguousarray(shell.points, dtype="<i4").tobytes()
    header = _HEADER.pack(
        _MAGIC, _VERSION, shell.d, shell.lam, shell.count, zlib.crc32(payload)
    )
    directory = os.path.dirname(os.fspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(header)
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_shell(path: str | os.PathLike) -> Shell:
    """Read a cache file; raises CorruptCache on any validation failure."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise CorruptCache(f"{path}: truncated header")
    magic, version, d, lam, count, crc = _HEADER.unpack_from(raw)
    if magic != _MAGIC:
        raise CorruptCache(f"{path}: bad magic {magic!r}")
    if version != _VERSION:
        raise CorruptCache(f"{path}: unsupported version {version}")
    payload = raw[_HEADER.size:]
    if len(payload) != count * d * 4:
        raise CorruptCache(f"{path}: truncated payload")
    if zlib.crc32(payload) != crc:
        raise CorruptCache(f"{path}: checksum mismatch")
    pts = np.frombuffer(payload, dtype="<i4").reshape(count, d).astype(np.int32)
    return Shell(d, lam, pts)


@dataclass
class ShellCache:
    """Disk cache of enumerated shells, keyed by (d, lambda).

    A corrupt file falls back to re-enumeration (and is rewritten).
    Hit/miss counters make cache behaviour observable.
    """

    directory: str
    budget_ops: float = 1e8
    hits: int = 0
    misses: int = 0
    _mem: dict = field(default_factory=dict)

    def path_for(self, d: int, lam: int) -> str:
        return os.path.join(self.directory, f"shell_d{d}_lam{lam}.bin")

    def get(self, d: int, lam: int) -> Shell:
        key = (d, lam)
        if key in self._mem:
            self.hits += 1
            return self._mem[key]
        os.makedirs(self.directory, exist_ok=True)
        path = self.path_for(d, lam)
        if os.path.exists(path):
            try:
                shell = read_shell(path)
                if (shell.d, shell.lam) == key:
                    self.hits += 1
                    self._mem[key] = shell
                    return shell
            except CorruptCache:
                pass
        self.misses += 1
        shell = enumerate_shell(d, lam, self.budget_ops)
        write_shell(shell, path)
        self._mem[key] = shell
        return shell


def sum_of_divisors(n: int) -> int:
    """sigma(n), coded independently of arith.factorize (test oracle helper)."""
    total = 0
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            total += d
            if d != n // d:
                total += n // d
    return total
