"""Smooth cutoff profiles and their Fourier transforms.

Every cutoff in the package is built from one C-infinity smoothstep

    s(v) = int_0^v b / int_0^1 b,   b(w) = exp(-1/(w(1-w))),

so that s(0)=0, s(1)=1 and s(v) + s(1-v) = 1.  The step is tabulated once on a
fine grid (cumulative Simpson) and evaluated by cubic Hermite interpolation
with the exact derivative b/I at the knots; the interpolation error is at
rounding level.

Fourier transforms use the convention  fhat(xi) = int f(u) e(-xi u) du  with
e(y) = exp(2 pi i y); all profiles are even and nonnegative, so fhat is real,
even, and maximized at 0 where it equals the integral of the profile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

_N_KNOTS = 8192          # Hermite knots on [0, 1]
_REFINE = 16             # Simpson subintervals per knot interval


def _bump(w: np.ndarray) -> np.ndarray:
    out = np.zeros_like(w, dtype=float)
    inside = (w > 0.0) & (w < 1.0)
    wi = w[inside]
    out[inside] = np.exp(-1.0 / (wi * (1.0 - wi)))
    return out


def _build_smoothstep():
    n_fine = _N_KNOTS * _REFINE
    w = np.linspace(0.0, 1.0, n_fine + 1)
    b = _bump(w)
    h = 1.0 / n_fine
    # cumulative composite Simpson over pairs of fine intervals; only even
    # fine indices are filled, and knots subsample every _REFINE (even) index
    cum = np.zeros(n_fine + 1)
    pair = (b[0:-2:2] + 4.0 * b[1:-1:2] + b[2::2]) * (h / 3.0)
    cum[2::2] = np.cumsum(pair)
    total = cum[-1]
    values = cum[::_REFINE]
    knots_w = w[::_REFINE]
    deriv = b[::_REFINE] / total
    return knots_w, values / total, deriv


_KNOTS_W, _STEP_VAL, _STEP_DER = _build_smoothstep()


def smoothstep(v) -> np.ndarray | float:
    """The normalized bump-integral step: 0 for v<=0, 1 for v>=1, C-inf."""
    v_arr = np.asarray(v, dtype=float)
    scalar = v_arr.ndim == 0
    v_arr = np.atleast_1d(v_arr)
    out = np.empty_like(v_arr)
    out[v_arr <= 0.0] = 0.0
    out[v_arr >= 1.0] = 1.0
    mid = (v_arr > 0.0) & (v_arr < 1.0)
    if np.any(mid):
        x = v_arr[mid] * _N_KNOTS
        idx = np.minimum(x.astype(np.int64), _N_KNOTS - 1)
        t = x - idx
        h = 1.0 / _N_KNOTS
        y0, y1 = _STEP_VAL[idx], _STEP_VAL[idx + 1]
        d0, d1 = _STEP_DER[idx] * h, _STEP_DER[idx + 1] * h
        t2, t3 = t * t, t * t * t
        out[mid] = (
            (2 * t3 - 3 * t2 + 1) * y0
            + (t3 - 2 * t2 + t) * d0
            + (-2 * t3 + 3 * t2) * y1
            + (t3 - t2) * d1
        )
    return float(out[0]) if scalar else out


@dataclass
class PlateauBump:
    """Even profile: 1 on [-p1, p1], smoothstep down to 0 at |u| = p2."""

    p1: float
    p2: float
    _ft: "FourierTable" = field(init=False, repr=False, default=None)

    def __post_init__(self):
        if not 0 < self.p1 < self.p2:
            raise ValueError("need 0 < p1 < p2")
        self._ft = FourierTable(self)

    @property
    def support(self) -> float:
        return self.p2

    def __call__(self, u):
        a = np.abs(np.asarray(u, dtype=float))
        scalar = a.ndim == 0
        a = np.atleast_1d(a)
        out = np.zeros_like(a)
        out[a <= self.p1] = 1.0
        mid = (a > self.p1) & (a < self.p2)
        out[mid] = 1.0 - smoothstep((a[mid] - self.p1) / (self.p2 - self.p1))
        return float(out[0]) if scalar else out

    @property
    def integral(self) -> float:
        # transitions integrate to half their width: s(v) + s(1-v) = 1
        return self.p1 + self.p2

    def fourier(self, xi):
        return self._ft(xi)


@dataclass
class AnnularBump:
    """Even profile: 0 for |u|<=r0, 1 on [r1, r2], 0 for |u|>=r3."""

    r0: float
    r1: float
    r2: float
    r3: float
    _ft: "FourierTable" = field(init=False, repr=False, default=None)

    def __post_init__(self):
        if not 0 < self.r0 < self.r1 <= self.r2 < self.r3:
            raise ValueError("bad annulus radii")
        self._ft = FourierTable(self)

    @property
    def support(self) -> float:
        return self.r3

    def __call__(self, u):
        a = np.abs(np.asarray(u, dtype=float))
        scalar = a.ndim == 0
        a = np.atleast_1d(a)
        out = np.zeros_like(a)
        out[(a >= self.r1) & (a <= self.r2)] = 1.0
        up = (a > self.r0) & (a < self.r1)
        out[up] = smoothstep((a[up] - self.r0) / (self.r1 - self.r0))
        down = (a > self.r2) & (a < self.r3)
        out[down] = 1.0 - smoothstep((a[down] - self.r2) / (self.r3 - self.r2))
        return float(out[0]) if scalar else out

    @property
    def integral(self) -> float:
        return (self.r1 - self.r0) + 2.0 * (self.r2 - self.r1) + (self.r3 - self.r2)

    def fourier(self, xi):
        return self._ft(xi)


class FourierTable:
    """Cached even Fourier transform of a compactly supported even profile.

    Values are computed on a uniform xi-grid by composite Gauss-Legendre
    panels (panel count scales with the oscillation) and interpolated with a
    cubic spline; grid spacing 1/32 keeps the interpolation error far below
    the 1e-9 target.  The grid extends lazily in blocks.
    """

    _GL_NODES = 12

    def __init__(self, profile):
        self.profile = profile
        # fhat oscillates on scale 1/support; keep the spline error near 1e-10
        self._SPACING = 1.0 / max(32.0, math.ceil(320.0 * profile.support))
        self.xi_max = 0.0
        self._spline = None
        self._vals = np.empty(0)

    def _direct(self, xi: np.ndarray) -> np.ndarray:
        sup = self.profile.support
        x_gl, w_gl = np.polynomial.legendre.leggauss(self._GL_NODES)
        out = np.empty(len(xi))
        block = 64
        for lo in range(0, len(xi), block):
            xs = xi[lo: lo + block]
            # one panel layout per block, sized for the fastest oscillation
            panels = max(64, 3 * int(math.ceil(np.abs(xs).max() * sup)) + 6)
            edges = np.linspace(0.0, sup, panels + 1)
            mid = 0.5 * (edges[:-1] + edges[1:])
            half = 0.5 * (edges[1:] - edges[:-1])
            u = (mid[:, None] + half[:, None] * x_gl[None, :]).ravel()
            w = (half[:, None] * np.broadcast_to(w_gl, (panels, self._GL_NODES))).ravel()
            fw = self.profile(u) * w
            phases = np.cos(2.0 * math.pi * np.multiply.outer(xs, u))
            out[lo: lo + block] = 2.0 * phases @ fw
        return out

    def _extend(self, xi_needed: float):
        target = max(2.0, xi_needed * 1.05 + 1.0)
        grid = np.arange(0.0, target + self._SPACING, self._SPACING)
        new = self._direct(grid[len(self._vals):])
        self._vals = np.concatenate([self._vals, new])
        self.xi_max = grid[len(self._vals) - 1]
        # mirror a few points across 0 so the spline is accurate at xi = 0
        n_mirror = min(8, len(self._vals) - 1)
        g = np.concatenate([-grid[1: n_mirror + 1][::-1], grid[: len(self._vals)]])
        v = np.concatenate([self._vals[1: n_mirror + 1][::-1], self._vals])
        self._spline = CubicSpline(g, v)

    def __call__(self, xi):
        a = np.abs(np.asarray(xi, dtype=float))
        scalar = a.ndim == 0
        a = np.atleast_1d(a)
        if self._spline is None or (a.size and a.max() > self.xi_max):
            self._extend(float(a.max()) if a.size else 1.0)
        out = self._spline(a)
        return float(out[0]) if scalar else out

    @property
    def max_abs(self) -> float:
        # profiles are nonnegative, so |fhat| peaks at 0
        return self.profile.integral


# The three canonical profiles.
GAMMA = PlateauBump(1.0, 2.0)            # frequency cutoff gamma
ARC_BUMP = PlateauBump(1.0 / 20.0, 1.0 / 10.0)   # major-arc bump eta (and eta_0)
ANNULAR_BUMP = AnnularBump(1.0 / 8.0, 1.0 / 4.0, 1.0 / 2.0, 1.0)  # dyadic-arc eta
