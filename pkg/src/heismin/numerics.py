"""Shared numerical utilities: cumulative Simpson antiderivatives and
finite-difference derivatives."""
from __future__ import annotations

import math

import numpy as np

from .errors import QuadratureFailure


def simpson_panel(f, lo: float, hi: float) -> float:
    mid = 0.5 * (lo + hi)
    return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi))


class CumulativeIntegral:
    """Antiderivative F(x) = int_{x_base}^{x} f, by composite Simpson.

    Node values are cached on a regular lattice; an arbitrary x is handled
    by one extra Simpson panel over the residual subinterval, so F stays
    smooth to quadrature order and repeated calls are cheap.
    """

    def __init__(self, f, x_base: float, panels_per_unit: int = 512):
        self.f = f
        self.x_base = float(x_base)
        self.h = 1.0 / float(panels_per_unit)
        # cumulative sums indexed by signed node count from x_base
        self._cum = {0: 0.0}
        self._lo = 0
        self._hi = 0
        # memo of finished evaluations: nested antiderivatives hit the
        # same lattice points over and over
        self._memo = {}

    def _extend(self, n: int) -> None:
        while self._hi < n:
            a = self.x_base + self._hi * self.h
            val = self._cum[self._hi] + simpson_panel(self.f, a, a + self.h)
            self._hi += 1
            self._cum[self._hi] = val
        while self._lo > n:
            a = self.x_base + self._lo * self.h
            val = self._cum[self._lo] - simpson_panel(self.f, a - self.h, a)
            self._lo -= 1
            self._cum[self._lo] = val

    def __call__(self, x: float) -> float:
        hit = self._memo.get(x)
        if hit is not None:
            return hit
        t = (x - self.x_base) / self.h
        n = math.floor(t)
        self._extend(n)
        a = self.x_base + n * self.h
        out = self._cum[n] + simpson_panel(self.f, a, x)
        if not math.isfinite(out):
            raise QuadratureFailure(f"non-finite antiderivative at x = {x}")
        self._memo[x] = out
        return out


def central_d1(f, x: float, h: float) -> float:
    return (f(x + h) - f(x - h)) / (2.0 * h)


def central_d2(f, x: float, h: float) -> float:
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)


def partial_x(f, x: float, y: float, h: float) -> float:
    return (f(x + h, y) - f(x - h, y)) / (2.0 * h)


def partial_y(f, x: float, y: float, h: float) -> float:
    return (f(x, y + h) - f(x, y - h)) / (2.0 * h)


def invert_monotone(g, target: float, lo: float, hi: float,
                    tol: float = 1e-13, max_expand: int = 60):
    """Solve g(s) = target for strictly monotone g, expanding the bracket
    as needed, then bisecting."""
    glo, ghi = g(lo), g(hi)
    increasing = ghi >= glo
    span = hi - lo
    k = 0
    while not (min(glo, ghi) <= target <= max(glo, ghi)):
        if (target > max(glo, ghi)) == increasing:
            hi += span
            ghi = g(hi)
        else:
            lo -= span
            glo = g(lo)
        span *= 2.0
        k += 1
        if k > max_expand:
            raise ValueError("failed to bracket monotone inverse")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if abs(hi - lo) < tol * max(1.0, abs(mid)):
            return mid
        if (gm < target) == increasing:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def richardson_limit(values, ratio: float = 2.0):
    """Extrapolate the limit of a geometrically-refined sequence.

    values[k] corresponds to offsets shrinking by `ratio` each step; one
    round of Richardson extrapolation per column.
    """
    tab = [np.asarray(values, dtype=float)]
    while len(tab[-1]) > 1:
        prev = tab[-1]
        tab.append((ratio * prev[1:] - prev[:-1]) / (ratio - 1.0))
    return float(tab[-1][0])
