"""Explicit p-minimal surfaces: the ruled construction from a generating
curve, its invariants and zeta-extraction, the inverse problem
zeta -> curve, the immersion criterion, and the example charts (plane,
saddle, helicoid, conicoid).

The ruled surface over a curve C(t) = (x(t), y(t), z(t)) is

    Y(r, t) = (x + r cos t, y + r sin t, z + r y cos t - r x sin t),

i.e. each r-line is the left translation by C(t) of a ray of the plane
u = 0, hence a Legendrian straight line.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import BadRotation, DegenerateChart, SingularPoint
from .heis import HPoint
from .models import YFunction
from .numerics import CumulativeIntegral, central_d1

EPS_DEN = 1e-12


class GeneratingCurve:
    """A curve t -> (x(t), y(t), z(t)) with first and second derivatives."""

    def __init__(self, fns, d1=None, d2=None, interval=(0.0, 2.0 * math.pi),
                 fd_step: float = 1e-6):
        self.fns = fns
        self.interval = interval
        self._fd = fd_step
        self._d1 = d1
        self._d2 = d2

    def point(self, t: float) -> HPoint:
        x, y, z = self.fns
        return HPoint(x(t), y(t), z(t))

    def d1(self, t: float) -> np.ndarray:
        if self._d1 is not None:
            return np.array([f(t) for f in self._d1], dtype=float)
        return np.array([central_d1(f, t, self._fd) for f in self.fns])

    def d2(self, t: float) -> np.ndarray:
        if self._d2 is not None:
            return np.array([f(t) for f in self._d2], dtype=float)
        if self._d1 is not None:
            return np.array([central_d1(f, t, self._fd) for f in self._d1])
        h = self._fd
        return np.array(
            [(f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h) for f in self.fns])

    @staticmethod
    def from_exprs(x_src: str, y_src: str, z_src: str, var: str = "theta",
                   interval=(0.0, 2.0 * math.pi)) -> "GeneratingCurve":
        from . import expr as expr_mod

        asts = [expr_mod.parse_expr(s, var=var) for s in (x_src, y_src, z_src)]
        d1 = [a.deriv() for a in asts]
        d2 = [a.deriv() for a in d1]
        return GeneratingCurve(
            fns=[a.eval for a in asts],
            d1=[a.eval for a in d1],
            d2=[a.eval for a in d2],
            interval=interval,
        )

    # scalar invariants of the curve at angle t
    def D(self, t: float) -> float:
        """D = y' cos t - x' sin t."""
        xp, yp, _ = self.d1(t)
        return yp * math.cos(t) - xp * math.sin(t)

    def Q(self, t: float) -> float:
        """Q = x' cos t + y' sin t."""
        xp, yp, _ = self.d1(t)
        return xp * math.cos(t) + yp * math.sin(t)

    def contact_speed(self, t: float) -> float:
        """Theta(C'(t)) = z' + x y' - y x'."""
        p = self.point(t)
        xp, yp, zp = self.d1(t)
        return zp + p.x * yp - p.y * xp


@dataclass
class SurfaceChart:
    """A parametrized surface (u, v) -> H1 with first partials.

    e1_index marks which parameter direction spans the characteristic
    foliation when the chart is built in compatible coordinates (the
    corresponding partial is then a unit horizontal vector).
    """

    point: Callable[[float, float], HPoint]
    du: Callable[[float, float], np.ndarray]
    dv: Callable[[float, float], np.ndarray]
    domain: tuple = ((-1.0, 1.0), (-1.0, 1.0))
    e1_index: Optional[int] = None
    name: str = "chart"
    graph_u: Optional[object] = None  # verify.GraphSurface when applicable
    extras: dict = field(default_factory=dict)


@dataclass
class RuledChart(SurfaceChart):
    curve: Optional[GeneratingCurve] = None


def ruled_surface(c: GeneratingCurve,
                  r_range=(-2.0, 2.0)) -> RuledChart:
    """The ruled chart Y(r, t) over the generating curve; Y_r is the unit
    horizontal vector cos t e1* + sin t e2*."""

    def pt(r, t):
        p = c.point(t)
        ct, st = math.cos(t), math.sin(t)
        return HPoint(p.x + r * ct, p.y + r * st,
                      p.z + r * p.y * ct - r * p.x * st)

    def d_r(r, t):
        p = c.point(t)
        ct, st = math.cos(t), math.sin(t)
        return np.array([ct, st, p.y * ct - p.x * st])

    def d_t(r, t):
        p = c.point(t)
        xp, yp, zp = c.d1(t)
        ct, st = math.cos(t), math.sin(t)
        return np.array([
            xp - r * st,
            yp + r * ct,
            zp + r * (yp * ct - p.y * st - xp * st - p.x * ct),
        ])

    return RuledChart(point=pt, du=d_r, dv=d_t,
                      domain=(r_range, c.interval),
                      e1_index=0, name="ruled", curve=c)


def curve_invariants(c: GeneratingCurve, r: float, t: float):
    """(alpha, a, b) of the ruled chart at (r, t):

        alpha = (r + D) / E,     E = (r + D)^2 + Theta(C') - D^2
        a     = -Q / (E sqrt(1 + alpha^2))
        b     =  1 / (E sqrt(1 + alpha^2))
    """
    D = c.D(t)
    Q = c.Q(t)
    tc = c.contact_speed(t)
    rd = r + D
    E = rd * rd + tc - D * D
    if abs(E) <= EPS_DEN:
        if abs(rd) <= math.sqrt(EPS_DEN) and abs(tc - D * D) <= EPS_DEN:
            raise DegenerateChart(
                f"chart degenerates at (r, t) = ({r}, {t}): r + D = 0 and "
                "Theta(C') - D^2 = 0")
        raise SingularPoint(f"alpha blows up at (r, t) = ({r}, {t})")
    alpha = rd / E
    root = math.sqrt(1.0 + alpha * alpha)
    return alpha, -Q / (E * root), 1.0 / (E * root)


def zeta_from_curve(c: GeneratingCurve, theta_base: Optional[float] = None,
                    panels_per_unit: int = 512):
    """The invariants of the ruled surface over c:

        zeta1(t) = D(t) - int Q dt      (cumulative from theta_base)
        zeta2(t) = Theta(C'(t)) - D(t)^2

    zeta2 == 0 identifies special type I.
    """
    if theta_base is None:
        theta_base = c.interval[0]
    gamma = CumulativeIntegral(c.Q, theta_base, panels_per_unit)

    def z1(t):
        return c.D(t) - gamma(t)

    def dz1(t):
        xpp, ypp, _ = c.d2(t)
        return ypp * math.cos(t) - xpp * math.sin(t) - 2.0 * c.Q(t)

    def z2(t):
        return c.contact_speed(t) - c.D(t) ** 2

    def dz2(t):
        p = c.point(t)
        xp, yp, _ = c.d1(t)
        xpp, ypp, zpp = c.d2(t)
        dtc = zpp + p.x * ypp - p.y * xpp
        dD = ypp * math.cos(t) - xpp * math.sin(t) - c.Q(t)
        return dtc - 2.0 * c.D(t) * dD

    return YFunction(z1, dz1), YFunction(z2, dz2)


@dataclass
class ImmersionReport:
    theta: float
    immersed_everywhere: bool
    bad_radius: Optional[float] = None


def immersion_locus(c: GeneratingCurve, theta_grid, tol: float = 1e-10):
    """Per angle: the chart is an immersion for all r iff
    Theta(C') - D^2 != 0; otherwise it degenerates exactly at r = -D."""
    out = []
    for t in theta_grid:
        crit = c.contact_speed(t) - c.D(t) ** 2
        if abs(crit) > tol:
            out.append(ImmersionReport(float(t), True))
        else:
            out.append(ImmersionReport(float(t), False, bad_radius=-c.D(t)))
    return out


def curve_from_zeta(zeta1: YFunction, zeta2: YFunction,
                    theta_interval=(0.0, 2.0 * math.pi),
                    panels_per_unit: int = 512) -> GeneratingCurve:
    """The particular generating curve with gauge Q == 0, so P = zeta1:

        x' = -zeta1 sin t,   y' = zeta1 cos t,
        z' = zeta2 + zeta1^2 + y x' - x y',

    integrated cumulatively from the interval's left endpoint with the
    initial point (0, 0, 0).  Any other initial point differs by a left
    translation, which the invariants ignore.
    """
    t0 = theta_interval[0]

    def xp(t):
        return -zeta1(t) * math.sin(t)

    def yp(t):
        return zeta1(t) * math.cos(t)

    x_int = CumulativeIntegral(xp, t0, panels_per_unit)
    y_int = CumulativeIntegral(yp, t0, panels_per_unit)

    def zp(t):
        return (zeta2(t) + zeta1(t) ** 2
                + y_int(t) * xp(t) - x_int(t) * yp(t))

    z_int = CumulativeIntegral(zp, t0, panels_per_unit)

    def xpp(t):
        return -zeta1.d(t) * math.sin(t) - zeta1(t) * math.cos(t)

    def ypp(t):
        return zeta1.d(t) * math.cos(t) - zeta1(t) * math.sin(t)

    def zpp(t):
        # the x'y' cross terms cancel in d/dt of z'
        return (zeta2.d(t) + 2.0 * zeta1(t) * zeta1.d(t)
                + y_int(t) * xpp(t) - x_int(t) * ypp(t))

    return GeneratingCurve(
        fns=[x_int, y_int, z_int],
        d1=[xp, yp, zp],
        d2=[xpp, ypp, zpp],
        interval=theta_interval,
    )


def _graph_chart(u, u_x, u_y, domain, name, graph_u=None,
                 extras=None) -> SurfaceChart:
    def pt(x, y):
        return HPoint(x, y, u(x, y))

    def dx_(x, y):
        return np.array([1.0, 0.0, u_x(x, y)])

    def dy_(x, y):
        return np.array([0.0, 1.0, u_y(x, y)])

    return SurfaceChart(point=pt, du=dx_, dv=dy_, domain=domain,
                        name=name, graph_u=graph_u, extras=extras or {})


def bernstein_plane(A: float, B: float, C: float,
                    domain=((-3.0, 3.0), (-3.0, 3.0))) -> SurfaceChart:
    """The entire graph u = Ax + By + C; its unique singular point is
    (x, y) = (-B, A), and the left translation by (B, -A, -C) maps the
    graph onto u = 0."""
    from .verify import GraphSurface

    g = GraphSurface.from_callables(
        u=lambda x, y: A * x + B * y + C,
        u_x=lambda x, y: A, u_y=lambda x, y: B,
        u_xx=lambda x, y: 0.0, u_xy=lambda x, y: 0.0, u_yy=lambda x, y: 0.0,
        window=domain,
    )
    chart = _graph_chart(g.u, g.u_x, g.u_y, domain, "plane", graph_u=g,
                         extras={"singular_point": (-B, A),
                                 "coeffs": (A, B, C)})
    return chart


def bernstein_saddle(A: float, B: float, g: YFunction,
                     domain=((-3.0, 3.0), (-3.0, 3.0)),
                     tol: float = 1e-12) -> SurfaceChart:
    """The entire graph u = -AB x^2 + (A^2 - B^2) xy + AB y^2 + g(-Bx + Ay)
    with A^2 + B^2 = 1; the (A, B) rotation maps it onto u = XY + g(Y)."""
    if abs(A * A + B * B - 1.0) > tol:
        raise BadRotation(f"A^2 + B^2 = {A * A + B * B} != 1")
    from .verify import GraphSurface

    def u(x, y):
        w = -B * x + A * y
        return -A * B * x * x + (A * A - B * B) * x * y + A * B * y * y + g(w)

    def u_x(x, y):
        return -2.0 * A * B * x + (A * A - B * B) * y - B * g.d(-B * x + A * y)

    def u_y(x, y):
        return (A * A - B * B) * x + 2.0 * A * B * y + A * g.d(-B * x + A * y)

    fd = 1e-6

    def u_xx(x, y):
        return -2.0 * A * B + B * B * central_d1(g.d, -B * x + A * y, fd)

    def u_xy(x, y):
        return (A * A - B * B) - A * B * central_d1(g.d, -B * x + A * y, fd)

    def u_yy(x, y):
        return 2.0 * A * B + A * A * central_d1(g.d, -B * x + A * y, fd)

    gs = GraphSurface.from_callables(u, u_x, u_y, u_xx, u_xy, u_yy,
                                     window=domain)
    return _graph_chart(u, u_x, u_y, domain, "saddle", graph_u=gs,
                        extras={"rotation": (A, B), "g": g})


def helicoid_chart(theta_of_t: YFunction,
                   domain=((0.25, 3.0), (-1.0, 1.0))) -> SurfaceChart:
    """X(s, t) = (s cos theta(t), s sin theta(t), t); in these coordinates
    alpha = s theta'/(s^2 theta' + 1), a = 0, and the type follows the
    sign of theta'."""

    def pt(s, t):
        th = theta_of_t(t)
        return HPoint(s * math.cos(th), s * math.sin(th), t)

    def ds(s, t):
        th = theta_of_t(t)
        return np.array([math.cos(th), math.sin(th), 0.0])

    def dt(s, t):
        th, dth = theta_of_t(t), theta_of_t.d(t)
        return np.array([-s * dth * math.sin(th), s * dth * math.cos(th), 1.0])

    def alpha_closed(s, t):
        dth = theta_of_t.d(t)
        return s * dth / (s * s * dth + 1.0)

    return SurfaceChart(point=pt, du=ds, dv=dt, domain=domain, e1_index=0,
                        name="helicoid",
                        extras={"theta": theta_of_t,
                                "alpha_closed": alpha_closed})


def conicoid_chart(domain=((-2.0, 2.0), (-2.0, 2.0))) -> SurfaceChart:
    """X(t, s) = (cos s + t sin s, sin s - t cos s, t), with the (t, s)
    ordering chosen so the first parameter is the characteristic one;
    alpha = t/(1 + t^2) and a = b = 1/sqrt(t^4 + 3 t^2 + 1)."""

    def pt(t, s):
        return HPoint(math.cos(s) + t * math.sin(s),
                      math.sin(s) - t * math.cos(s), t)

    def dt(t, s):
        return np.array([math.sin(s), -math.cos(s), 1.0])

    def ds(t, s):
        return np.array([-math.sin(s) + t * math.cos(s),
                         math.cos(s) + t * math.sin(s), 0.0])

    def alpha_closed(t, s):
        return t / (1.0 + t * t)

    def ab_closed(t, s):
        v = 1.0 / math.sqrt(t**4 + 3.0 * t * t + 1.0)
        return v, v

    return SurfaceChart(point=pt, du=dt, dv=ds, domain=domain, e1_index=0,
                        name="conicoid",
                        extras={"alpha_closed": alpha_closed,
                                "ab_closed": ab_closed})
