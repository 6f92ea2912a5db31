"""Integrability machinery: build the induced-metric representation
(a, b) from (alpha, H, k, h) by quadrature, and check the compatible-
coordinate integrability equations numerically,

    r1 = -a_x + a b_x/b - H alpha / sqrt(1 + alpha^2)
    r2 = -b_x/b - 2 alpha - alpha alpha_x / (1 + alpha^2)
    r3 = a H_x + b H_y - (alpha_xx + 6 alpha alpha_x + 4 alpha^3
                          + alpha H^2) / sqrt(1 + alpha^2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import QuadratureFailure
from .models import MetricRep, YFunction
from .numerics import CumulativeIntegral, central_d1


@dataclass
class Field2D:
    """A scalar field on a rectangle, with optional analytic partials.

    When a partial is absent the residual checkers fall back to central
    finite differences of the plain callable.
    """

    f: Callable[[float, float], float]
    dx: Optional[Callable[[float, float], float]] = None
    dy: Optional[Callable[[float, float], float]] = None
    domain: Optional[tuple] = None  # ((x_lo, x_hi), (y_lo, y_hi))

    def __call__(self, x: float, y: float) -> float:
        return float(self.f(x, y))

    @staticmethod
    def constant(c: float) -> "Field2D":
        return Field2D(lambda x, y: c, dx=lambda x, y: 0.0, dy=lambda x, y: 0.0)

    @staticmethod
    def from_model(m) -> "Field2D":
        """Field view of an AlphaModel, with analytic x-partial."""
        return Field2D(
            f=lambda x, y: m.slice_at(y).alpha(x),
            dx=lambda x, y: m.slice_at(y).alpha_x(x),
        )

    @staticmethod
    def from_x_profile(alpha_of_x, alpha_x_of_x=None) -> "Field2D":
        """A y-independent field from an x-profile (e.g. an RK4 solution
        curve for the constant-H case with no closed form)."""
        return Field2D(
            f=lambda x, y: alpha_of_x(x),
            dx=(lambda x, y: alpha_x_of_x(x)) if alpha_x_of_x else None,
            dy=lambda x, y: 0.0,
        )


def metric_from_alpha_H(alpha: Field2D, H: Field2D, k: YFunction,
                        h: YFunction, x_base: float,
                        panels_per_unit: int = 512) -> MetricRep:
    """Solve the first two integrability equations by quadrature:

        b = e^{k(y)} e^{-int 2 alpha dx} / sqrt(1 + alpha^2)
        a = e^{-int 2 alpha dx} / sqrt(1 + alpha^2)
            * (h(y) - int H alpha e^{int 2 alpha dx} dx)

    with both anti-derivatives cumulative from x_base (composite Simpson,
    cached per y-line).
    """
    cache = {}

    def line(y: float):
        if y not in cache:
            I = CumulativeIntegral(lambda x: 2.0 * alpha(x, y),
                                   x_base, panels_per_unit)
            J = CumulativeIntegral(lambda x: H(x, y) * alpha(x, y) * math.exp(I(x)),
                                   x_base, panels_per_unit)
            cache[y] = (I, J)
        return cache[y]

    def common(x, y):
        I, _ = line(y)
        al = alpha(x, y)
        val = math.exp(-I(x)) / math.sqrt(1.0 + al * al)
        if not math.isfinite(val):
            raise QuadratureFailure(f"non-finite integrand at ({x}, {y})")
        return val

    def b_fn(x, y):
        return math.exp(k(y)) * common(x, y)

    def a_fn(x, y):
        _, J = line(y)
        return common(x, y) * (h(y) - J(x))

    return MetricRep(a=a_fn, b=b_fn, k=k, h=h)


def _d_x(field: Field2D, x, y, h):
    if field.dx is not None:
        return field.dx(x, y)
    return central_d1(lambda s: field(s, y), x, h)


def _d_y(field: Field2D, x, y, h):
    if field.dy is not None:
        return field.dy(x, y)
    return central_d1(lambda s: field(x, s), y, h)


def _dd_x(field: Field2D, x, y, h):
    # second x-derivative: differentiate the best available first
    # derivative, which keeps the FD noise floor at first-derivative level
    if field.dx is not None:
        return central_d1(lambda s: field.dx(s, y), x, h)
    return (field(x + h, y) - 2.0 * field(x, y) + field(x - h, y)) / (h * h)


def expand_grid(grid):
    """Accept either an iterable of (x, y) pairs or a pair (xs, ys) to be
    meshed; return a flat list of points."""
    if (isinstance(grid, tuple) and len(grid) == 2
            and np.ndim(grid[0]) == 1 and np.ndim(grid[1]) == 1
            and not np.isscalar(grid[0])):
        xs, ys = grid
        return [(float(x), float(y)) for y in ys for x in xs]
    return [(float(p[0]), float(p[1])) for p in grid]


def default_fd_step(points) -> float:
    xs = [p[0] for p in points]
    extent = max(xs) - min(xs) if len(xs) > 1 else 1.0
    return 1e-5 * max(1.0, extent)


@dataclass
class ResidualStats:
    max: dict
    mean: dict

    def overall_max(self) -> float:
        return max(self.max.values())


def integrability_residual(alpha: Field2D, H: Field2D, rep: MetricRep,
                           grid, fd_step: Optional[float] = None) -> ResidualStats:
    """Max and mean absolute residuals of the three integrability
    equations over the grid.  The grid must stay a couple of
    finite-difference steps away from singular loci."""
    pts = expand_grid(grid)
    h = fd_step if fd_step is not None else default_fd_step(pts)
    r = {1: [], 2: [], 3: []}
    for x, y in pts:
        al = alpha(x, y)
        al_x = _d_x(alpha, x, y, h)
        al_xx = _dd_x(alpha, x, y, h)
        Hv = H(x, y)
        a = rep.a(x, y)
        b = rep.b(x, y)
        if rep.a_x is not None:
            a_x = rep.a_x(x, y)
        else:
            a_x = central_d1(lambda s: rep.a(s, y), x, h)
        if rep.b_x is not None:
            b_x = rep.b_x(x, y)
        else:
            b_x = central_d1(lambda s: rep.b(s, y), x, h)
        H_x = _d_x(H, x, y, h)
        H_y = _d_y(H, x, y, h)
        root = math.sqrt(1.0 + al * al)
        r[1].append(-a_x + a * b_x / b - Hv * al / root)
        r[2].append(-b_x / b - 2.0 * al - al * al_x / (1.0 + al * al))
        r[3].append(a * H_x + b * H_y
                    - (al_xx + 6.0 * al * al_x + 4.0 * al**3 + al * Hv**2) / root)
    return ResidualStats(
        max={i: float(np.max(np.abs(v))) for i, v in r.items()},
        mean={i: float(np.mean(np.abs(v))) for i, v in r.items()},
    )


def codazzi_residual_2d(alpha: Field2D, c: float, grid,
                        fd_step: Optional[float] = None) -> ResidualStats:
    """Per-point residual of alpha_xx + 6 alpha alpha_x + 4 alpha^3
    + c^2 alpha over the grid (y enters only as a parameter)."""
    pts = expand_grid(grid)
    h = fd_step if fd_step is not None else default_fd_step(pts)
    vals = []
    for x, y in pts:
        al = alpha(x, y)
        al_x = _d_x(alpha, x, y, h)
        al_xx = _dd_x(alpha, x, y, h)
        vals.append(al_xx + 6.0 * al * al_x + 4.0 * al**3 + c * c * al)
    return ResidualStats(
        max={1: float(np.max(np.abs(vals)))},
        mean={1: float(np.mean(np.abs(vals)))},
    )
