"""Boundary-admissible area-preserving annulus maps and Hamiltonian flows.

The runtime surface is the annulus [0,1] x (R/Z) with area form dx ^ dy.
Maps are ordered compositions of primitive stages:

  * twist stage      (x, y) -> (x, y + rho(x)) for a smooth profile rho
  * Hamiltonian stage: time-1 flow of a time-periodic Hamiltonian
  * explicit stage   closed-form (x, y) -> (X(x,y), Y(x,y))

All y-coordinates are tracked with a real lift so that winding numbers and
braid extraction are well-defined; the circle value is the lift mod 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import sympy as sp
from scipy.integrate import quad

from . import expr as ex


class DomainError(ValueError):
    pass


class FlowError(RuntimeError):
    pass


_XTOL = 1e-9


@dataclass(frozen=True)
class AnnulusPoint:
    x: float
    y_lift: float

    @property
    def y(self):
        return self.y_lift % 1.0

    def with_lift(self, lift):
        return AnnulusPoint(self.x, self.y + lift)

    def __iter__(self):
        return iter((self.x, self.y_lift))


@dataclass(frozen=True)
class FlowSettings:
    steps: int = 256          # integrator steps per unit time
    fd_step: float = 1e-5     # central-difference step for grid Hamiltonians
    tol: float = 1e-9

    def __post_init__(self):
        if self.steps < 16:
            raise ValueError("integrator step count must be >= 16")
        if self.fd_step <= 0:
            raise ValueError("fd step must be positive")


# ---------------------------------------------------------------------------
# Hamiltonians


class TimeHamiltonian:
    """Time-periodic Hamiltonian H(t, x, y), symbolic or sampled-grid.

    The symbolic path compiles analytic first and second derivatives; the
    grid path interpolates and uses central differences of width fd_step.
    """

    def __init__(self, expression=None, grid=None, collar=0.1, fd_step=1e-5):
        if (expression is None) == (grid is None):
            raise ValueError("supply exactly one of expression / grid")
        self.collar = float(collar)
        self.fd_step = float(fd_step)
        self.expression = None
        if expression is not None:
            e = ex.parse(expression) if isinstance(expression, str) else sp.sympify(expression)
            self.expression = e
            v = ("t", "x", "y")
            self._f = ex.compile_expr(e, v)
            self._fx = ex.compile_expr(ex.diff(e, "x"), v)
            self._fy = ex.compile_expr(ex.diff(e, "y"), v)
            self._fxx = ex.compile_expr(ex.diff(ex.diff(e, "x"), "x"), v)
            self._fxy = ex.compile_expr(ex.diff(ex.diff(e, "x"), "y"), v)
            self._fyy = ex.compile_expr(ex.diff(ex.diff(e, "y"), "y"), v)
        else:
            from scipy.interpolate import RegularGridInterpolator
            ts, xs, ys, vals = grid
            self._interp = RegularGridInterpolator(
                (np.asarray(ts), np.asarray(xs), np.asarray(ys)),
                np.asarray(vals, dtype=float), method="cubic",
                bounds_error=False, fill_value=None)
            self._f = lambda t, x, y: float(self._interp([[t % 1.0, x, y % 1.0]])[0])
            h = self.fd_step
            self._fx = lambda t, x, y: (self._f(t, x + h, y) - self._f(t, x - h, y)) / (2 * h)
            self._fy = lambda t, x, y: (self._f(t, x, y + h) - self._f(t, x, y - h)) / (2 * h)
            self._fxx = lambda t, x, y: (self._fx(t, x + h, y) - self._fx(t, x - h, y)) / (2 * h)
            self._fxy = lambda t, x, y: (self._fx(t, x, y + h) - self._fx(t, x, y - h)) / (2 * h)
            self._fyy = lambda t, x, y: (self._fy(t, x, y + h) - self._fy(t, x, y - h)) / (2 * h)

    def value(self, t, x, y):
        return self._f(t % 1.0, x, y)

    def grad(self, t, x, y):
        t = t % 1.0
        return self._fx(t, x, y), self._fy(t, x, y)

    def hess(self, t, x, y):
        t = t % 1.0
        return self._fxx(t, x, y), self._fxy(t, x, y), self._fyy(t, x, y)

    def vector_field(self, t, x, y):
        """X_H with omega(X_H, .) = dH for omega = dx ^ dy: (dH/dy, -dH/dx)."""
        gx, gy = self.grad(t, x, y)
        return gy, -gx

    def collar_constant(self, n=24, tol=1e-8):
        """Check |grad H| ~ 0 on the declared boundary collars."""
        worst = 0.0
        for t in np.linspace(0, 1, 7):
            for xc in list(np.linspace(0, self.collar, n // 2)) + \
                      list(np.linspace(1 - self.collar, 1, n // 2)):
                for y in np.linspace(0, 1, 5, endpoint=False):
                    gx, gy = self.grad(t, xc, y)
                    worst = max(worst, abs(gx), abs(gy))
        return worst < tol, worst

    def check_twist_condition(self, base_map, n=40, tol=1e-7):
        """Sampled check of H~(1, x) = H~(0, phi(x)) for the attached base."""
        worst = 0.0
        for x in np.linspace(0.05, 0.95, 8):
            for y in np.linspace(0, 1, 5, endpoint=False):
                px, py = base_map.apply_xy(x, y)
                worst = max(worst, abs(self.value(1.0 - 1e-12, x, y)
                                       - self.value(0.0, px, py)))
        return worst < tol, worst


def hamiltonian_vector_field(H, t, p):
    vx, vy = H.vector_field(t, p.x, p.y_lift)
    return np.array([vx, vy])


# ---------------------------------------------------------------------------
# Stages


class TwistStage:
    """(x, y) -> (x, y + rho(x))."""

    def __init__(self, rho):
        e = ex.parse(rho) if isinstance(rho, str) else sp.sympify(rho)
        self.rho_expr = e
        self._rho = ex.compile_expr(e, ("x",))
        self._drho = ex.compile_expr(ex.diff(e, "x"), ("x",))

    def apply(self, x, y):
        return x, y + self._rho(x)

    def jac(self, x, y):
        return np.array([[1.0, 0.0], [self._drho(x), 1.0]])

    def path(self, x, y, svals):
        r = self._rho(x)
        return [(x, y + s * r) for s in svals]

    def tangent_path(self, x, y, v, svals):
        d = self._drho(x)
        return [np.array([v[0], v[1] + s * d * v[0]]) for s in svals]

    def action(self, x, y):
        # primitive of phi* (x dy) - x dy: S(x) = int_0^x u rho'(u) du
        val, _ = quad(lambda u: u * self._drho(u), 0.0, x, limit=200)
        return val


class HamiltonianStage:
    """Time-1 flow of X_H, fixed-step classical RK4 with exact tangent
    propagation and in-pass accumulation of the symplectic action
    int (lambda(X_H) - H) dt for lambda = x dy."""

    def __init__(self, H, settings=None, t0=0.0, t1=1.0):
        self.H = H
        self.settings = settings or FlowSettings()
        self.t0 = float(t0)
        self.t1 = float(t1)

    def _real_time(self, s):
        return self.t0 + s * (self.t1 - self.t0)

    def _field(self, s, x, y):
        dt = self.t1 - self.t0
        vx, vy = self.H.vector_field(self._real_time(s), x, y)
        return dt * vx, dt * vy

    def _field_jac(self, s, x, y):
        dt = self.t1 - self.t0
        hxx, hxy, hyy = self.H.hess(self._real_time(s), x, y)
        # d(Hy, -Hx)/d(x,y)
        return dt * np.array([[hxy, hyy], [-hxx, -hxy]])

    def _integrate(self, x, y, v=None, want_action=False, record=None):
        n = self.settings.steps
        h = 1.0 / n
        M = None if v is None else np.array(v, dtype=float)
        act = 0.0
        out = []
        for k in range(n):
            t = k * h
            if record is not None:
                out.append((x, y) if M is None else (x, y, M.copy()))

            def f(tt, xx, yy):
                return self._field(tt, xx, yy)

            k1 = f(t, x, y)
            k2 = f(t + h / 2, x + h / 2 * k1[0], y + h / 2 * k1[1])
            k3 = f(t + h / 2, x + h / 2 * k2[0], y + h / 2 * k2[1])
            k4 = f(t + h, x + h * k3[0], y + h * k3[1])
            if want_action:
                # integrand x * ydot - H along the trajectory (Simpson-ish
                # weighting matching the RK4 stages)
                def lag(tt, xx, yy, fy):
                    dt = self.t1 - self.t0
                    return xx * fy - dt * self.H.value(self._real_time(tt), xx, yy)
                a1 = lag(t, x, y, k1[1])
                a2 = lag(t + h / 2, x + h / 2 * k1[0], y + h / 2 * k1[1], k2[1])
                a3 = lag(t + h / 2, x + h / 2 * k2[0], y + h / 2 * k2[1], k3[1])
                a4 = lag(t + h, x + h * k3[0], y + h * k3[1], k4[1])
                act += h / 6 * (a1 + 2 * a2 + 2 * a3 + a4)
            if M is not None:
                def fj(tt, xx, yy, mm):
                    return self._field_jac(tt, xx, yy) @ mm
                m1 = fj(t, x, y, M)
                m2 = fj(t + h / 2, x + h / 2 * k1[0], y + h / 2 * k1[1], M + h / 2 * m1)
                m3 = fj(t + h / 2, x + h / 2 * k2[0], y + h / 2 * k2[1], M + h / 2 * m2)
                m4 = fj(t + h, x + h * k3[0], y + h * k3[1], M + h * m3)
                M = M + h / 6 * (m1 + 2 * m2 + 2 * m3 + m4)
            x = x + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
            y = y + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
            if not (-0.05 <= x <= 1.05) or not np.isfinite(x) or not np.isfinite(y):
                raise FlowError("flow left the annulus at step %d (x=%.4f)" % (k, x))
        if record is not None:
            out.append((x, y) if M is None else (x, y, M.copy()))
        return x, y, M, act, out

    def apply(self, x, y):
        x, y, _, _, _ = self._integrate(x, y)
        return x, y

    def jac(self, x, y):
        _, _, M, _, _ = self._integrate(x, y, v=np.eye(2))
        return M

    def apply_with_jac(self, x, y):
        x2, y2, M, _, _ = self._integrate(x, y, v=np.eye(2))
        return x2, y2, M

    def path(self, x, y, svals):
        _, _, _, _, pts = self._integrate(x, y, record=True)
        pts = np.asarray(pts)
        n = len(pts) - 1
        out = []
        for s in svals:
            u = min(max(s, 0.0), 1.0) * n
            j = min(int(u), n - 1)
            f = u - j
            out.append(tuple(pts[j] * (1 - f) + pts[j + 1] * f))
        return out

    def action(self, x, y):
        _, _, _, act, _ = self._integrate(x, y, want_action=True)
        return act


class ExplicitStage:
    """Closed-form stage (x, y) -> (X(x,y), Y(x,y)); Y in lifted coords."""

    def __init__(self, xmap, ymap):
        xe = ex.parse(xmap) if isinstance(xmap, str) else sp.sympify(xmap)
        ye = ex.parse(ymap) if isinstance(ymap, str) else sp.sympify(ymap)
        self.exprs = (xe, ye)
        v = ("x", "y")
        self._f = (ex.compile_expr(xe, v), ex.compile_expr(ye, v))
        self._j = [[ex.compile_expr(ex.diff(e, w), v) for w in v] for e in (xe, ye)]

    def apply(self, x, y):
        return self._f[0](x, y), self._f[1](x, y)

    def jac(self, x, y):
        return np.array([[self._j[0][0](x, y), self._j[0][1](x, y)],
                         [self._j[1][0](x, y), self._j[1][1](x, y)]])

    def path(self, x, y, svals):
        x2, y2 = self.apply(x, y)
        return [(x + s * (x2 - x), y + s * (y2 - y)) for s in svals]

    def action(self, x, y):
        raise NotImplementedError("discrete action not defined for explicit stages")


# ---------------------------------------------------------------------------
# SurfaceMap


class SurfaceMap:
    """Ordered composition of stages with boundary rotation data.

    boundary_theta holds the declared rotation numbers (theta_minus at x=0,
    theta_plus at x=1) as sympy constants; boundary_collar is the width of
    the collars on which the map must act as the rigid rotation.
    """

    def __init__(self, stages, boundary_theta=None, boundary_collar=0.1):
        self.stages = list(stages)
        self.boundary_collar = float(boundary_collar)
        if boundary_theta is None:
            self.boundary_theta = None
        else:
            tm, tp = boundary_theta
            tm = ex.parse(tm) if isinstance(tm, str) else sp.sympify(tm)
            tp = ex.parse(tp) if isinstance(tp, str) else sp.sympify(tp)
            self.boundary_theta = (tm, tp)

    # -- low-level lifted-coordinate interface

    def apply_xy(self, x, y):
        for st in self.stages:
            x, y = st.apply(x, y)
        if not (-_XTOL <= x <= 1 + _XTOL):
            raise DomainError("image x = %.6g outside [0,1]" % x)
        return min(max(x, 0.0), 1.0), y

    def jac_xy(self, x, y):
        M = np.eye(2)
        for st in self.stages:
            M = st.jac(x, y) @ M
            x, y = st.apply(x, y)
        return M

    def apply_with_jac_xy(self, x, y):
        M = np.eye(2)
        for st in self.stages:
            if isinstance(st, HamiltonianStage):
                x2, y2, J = st.apply_with_jac(x, y)
            else:
                J = st.jac(x, y)
                x2, y2 = st.apply(x, y)
            M = J @ M
            x, y = x2, y2
        return x, y, M

    def iterate_with_jac(self, x, y, k):
        M = np.eye(2)
        for _ in range(k):
            x, y, J = self.apply_with_jac_xy(x, y)
            M = J @ M
        return x, y, M

    def suspension_path(self, x, y, nsamples):
        """Sampled arc t -> (x(t), y_lift(t)) through the stages, on the
        uniform grid t = i / (ns * per), i = 0 .. ns * per (equal time share
        per stage)."""
        ns = max(1, len(self.stages))
        per = max(2, nsamples // ns)
        pts = []
        stages = self.stages or [ExplicitStage("x", "y")]
        for j, st in enumerate(stages):
            last = j == len(stages) - 1
            svals = np.linspace(0, 1, per + 1) if last else \
                np.arange(per) / per
            pts.extend(st.path(x, y, svals))
            x, y = st.apply(x, y)
        return np.asarray(pts)

    def suspension_times(self, nsamples):
        """The t grid used by suspension_path for the same nsamples."""
        ns = max(1, len(self.stages))
        per = max(2, nsamples // ns)
        return np.linspace(0.0, 1.0, ns * per + 1)

    def discrete_action(self, x, y):
        """Sum of stage generating-function values along one application."""
        total = 0.0
        for st in self.stages:
            total += st.action(x, y)
            x, y = st.apply(x, y)
        return total

    # -- point interface

    def apply(self, p):
        x, y = self.apply_xy(p.x, p.y_lift)
        return AnnulusPoint(x, y)

    def jacobian(self, p):
        return self.jac_xy(p.x, p.y_lift)


def flow_time_1(base, H, settings=None):
    """phi_H = base o (time-1 flow of X_H)."""
    ok, worst = H.check_twist_condition(base)
    if not ok:
        raise ValueError("Hamiltonian violates the twist boundary condition "
                         "(worst mismatch %.3g)" % worst)
    return SurfaceMap([HamiltonianStage(H, settings)] + base.stages,
                      boundary_theta=base.boundary_theta,
                      boundary_collar=base.boundary_collar)


# ---------------------------------------------------------------------------
# Hofer norms


def hofer_norm(H, nt=24, nx=96, ny=48):
    """max - min of H over the mapping torus, grid-sampled."""
    lo, hi = math.inf, -math.inf
    for t in np.linspace(0, 1, nt, endpoint=False):
        for x in np.linspace(0, 1, nx):
            for y in np.linspace(0, 1, ny, endpoint=False):
                v = H.value(t, x, y)
                lo, hi = min(lo, v), max(hi, v)
    return hi - lo


def hofer_norm_prime(H, nt=24, nx=96, ny=48):
    """int_0^1 (max_Sigma H_t - min_Sigma H_t) dt, trapezoid in t."""
    osc = []
    ts = np.linspace(0, 1, nt + 1)
    for t in ts:
        lo, hi = math.inf, -math.inf
        for x in np.linspace(0, 1, nx):
            for y in np.linspace(0, 1, ny, endpoint=False):
                v = H.value(t, x, y)
                lo, hi = min(lo, v), max(hi, v)
        osc.append(hi - lo)
    return float(np.trapezoid(osc, ts))


# ---------------------------------------------------------------------------
# Boundary admissibility


def check_boundary_admissible(m, n=16, tol=1e-10):
    """Sample the declared collars; confirm x fixed and y translated by the
    declared irrational constants.  Returns (theta_minus, theta_plus) floats
    or raises AdmissibilityError carrying a violation report."""
    if m.boundary_theta is None:
        raise AdmissibilityError({"reason": "no boundary rotation declared"})
    report = {"violations": []}
    for e in m.boundary_theta:
        if ex.is_rational_constant(e):
            raise AdmissibilityError({"reason": "rational boundary rotation",
                                      "value": str(e)})
    thetas = []
    for side, te in zip(("minus", "plus"), m.boundary_theta):
        tdecl = float(te)
        xs = (np.linspace(0, m.boundary_collar * 0.98, n) if side == "minus"
              else np.linspace(1 - m.boundary_collar * 0.98, 1, n))
        worst = (0.0, None)
        for x in xs:
            for y in np.linspace(0, 1, 7, endpoint=False):
                x2, y2 = m.apply_xy(x, y)
                err = max(abs(x2 - x), abs((y2 - y) - tdecl))
                if err > worst[0]:
                    worst = (err, (x, y))
        if worst[0] > tol:
            report["violations"].append(
                {"side": side, "error": worst[0], "point": worst[1]})
        thetas.append(tdecl)
    if report["violations"]:
        raise AdmissibilityError(report)
    return tuple(thetas)


class AdmissibilityError(ValueError):
    def __init__(self, report):
        super().__init__(str(report))
        self.report = report
