"""Periodic orbit finding, refinement, classification and actions.

Orbits of a SurfaceMap are cycles x_1, ..., x_k with phi(x_i) = x_{i+1} and
phi(x_k) = x_1 up to an integer y-winding.  Newton refinement works in lifted
coordinates; the monodromy d(phi^k) is propagated analytically through the
stages, so |det - 1| stays at roundoff and the trace classification is
trustworthy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .surface import (AnnulusPoint, HamiltonianStage, TwistStage,
                      ExplicitStage, DomainError, FlowError)


class ClassError(ValueError):
    pass


class GapUndefinedError(RuntimeError):
    pass


@dataclass
class PeriodicOrbit:
    points: list                 # [(x, y_lift), ...] length k, y_lift of x_1 in [0,1)
    period: int
    residual: float
    monodromy: np.ndarray        # d(phi^k) at points[0]
    winding: int
    degenerate_flag: bool = False

    def canonical_key(self, digits=8):
        pts = sorted((round(x, digits), round(y % 1.0, digits))
                     for x, y in self.points)
        return tuple(pts)

    def to_json(self):
        return {
            "points": [[float(x), float(y)] for x, y in self.points],
            "period": self.period,
            "residual": float(self.residual),
            "monodromy": [[float(v) for v in row] for row in self.monodromy],
            "winding": int(self.winding),
            "degenerate": bool(self.degenerate_flag),
        }


@dataclass
class OrbitClass:
    kind: str                    # elliptic | positive_hyperbolic | negative_hyperbolic | degenerate
    rotation_number: float = None
    eigenvector_winding: int = None


@dataclass
class OrbitSet:
    entries: list                # [(PeriodicOrbit, multiplicity)]

    @property
    def degree(self):
        return sum(m * o.period for o, m in self.entries)

    @property
    def winding(self):
        return sum(m * o.winding for o, m in self.entries)

    @property
    def homology(self):
        return (self.degree, self.winding)

    def is_simple(self):
        return all(m == 1 for _, m in self.entries)


def degree(orbit_set):
    return orbit_set.degree


# ---------------------------------------------------------------------------
# Newton refinement


def _wrap_half(v):
    return v - round(v)


def refine_newton(m, k, seed, tol=1e-12, maxiter=50, cond_limit=1e12):
    """Damped Newton on F(z) = phi^k(z) - z (y compared mod 1).

    Returns a PeriodicOrbit or None.  Orbits where 1 - d(phi^k) is nearly
    singular are returned with degenerate_flag set rather than discarded.
    """
    if isinstance(seed, AnnulusPoint):
        x, y = seed.x, seed.y_lift
    else:
        x, y = seed
    z = np.array([x, y % 1.0], dtype=float)
    degen = False
    for _ in range(maxiter):
        try:
            x2, y2, M = m.iterate_with_jac(z[0], z[1], k)
        except (DomainError, FlowError):
            return None
        F = np.array([x2 - z[0], _wrap_half(y2 - z[1])])
        r = np.linalg.norm(F)
        if r < tol:
            break
        J = M - np.eye(2)
        degen = np.linalg.cond(J) > cond_limit
        if degen:
            step, *_ = np.linalg.lstsq(J, -F, rcond=None)
        else:
            step = np.linalg.solve(J, -F)
        # Armijo backtracking on |F|^2
        lam = 1.0
        accepted = False
        for _ in range(25):
            znew = z + lam * step
            znew[0] = min(max(znew[0], 0.0), 1.0)
            try:
                x3, y3, _ = m.iterate_with_jac(znew[0], znew[1], k)
                rnew = np.linalg.norm([x3 - znew[0], _wrap_half(y3 - znew[1])])
            except (DomainError, FlowError):
                rnew = math.inf
            if rnew < r * (1 - 1e-4 * lam) or rnew < tol:
                z = znew
                accepted = True
                break
            lam /= 2
        if not accepted:
            return None
    else:
        return None

    # assemble the cycle
    pts = []
    x, y = z[0], z[1] % 1.0
    pts.append((x, y))
    for _ in range(k - 1):
        x, y = m.apply_xy(x, y)
        pts.append((x, y))
    xk, yk, M = m.iterate_with_jac(pts[0][0], pts[0][1], k)
    residual = max(abs(xk - pts[0][0]), abs(_wrap_half(yk - pts[0][1])))
    winding = round(yk - pts[0][1])
    degen = degen or np.linalg.cond(M - np.eye(2)) > cond_limit
    return PeriodicOrbit(points=pts, period=k, residual=residual,
                         monodromy=M, winding=winding, degenerate_flag=degen)


def _is_cover(m, orbit):
    """True if the period-k cycle is a repeat of a shorter cycle."""
    k = orbit.period
    x0, y0 = orbit.points[0]
    for j in range(1, k):
        if k % j == 0:
            xj, yj = x0, y0
            for _ in range(j):
                xj, yj = m.apply_xy(xj, yj)
            if abs(xj - x0) < 1e-8 and abs(_wrap_half(yj - y0)) < 1e-8:
                return True
    return False


def find_orbits(m, k, grid=(24, 24), tol=1e-10, max_orbits=64):
    """Grid-seeded Newton search for simple period-k orbits, deduplicated."""
    nx, ny = grid
    found = {}
    for x0 in np.linspace(0.02, 0.98, nx):
        for y0 in np.linspace(0, 1, ny, endpoint=False):
            orb = refine_newton(m, k, (x0, y0))
            if orb is None or orb.residual > tol:
                continue
            if any(abs(a[0] - b[0]) > 1e-5 or abs(_wrap_half(a[1] % 1 - b[1] % 1)) > 1e-5
                   for a, b in zip(orb.points, orb.points)):
                continue
            if _is_cover(m, orb):
                continue
            # simple-orbit check: points pairwise distinct
            pts = [(x, y % 1.0) for x, y in orb.points]
            distinct = all(max(abs(pts[i][0] - pts[j][0]),
                               abs(_wrap_half(pts[i][1] - pts[j][1]))) > 1e-6
                           for i in range(k) for j in range(i + 1, k))
            if not distinct:
                continue
            key = orb.canonical_key(digits=5)
            if key not in found:
                found[key] = orb
            if len(found) >= max_orbits:
                break
    return sorted(found.values(), key=lambda o: o.canonical_key())


# ---------------------------------------------------------------------------
# Classification


def _tangent_samples(m, x, y, k, v0, per_stage=32):
    """Continuous samples of the tangent vector transported along the orbit."""
    v = np.array(v0, dtype=float)
    out = [v.copy()]
    for _ in range(k):
        for st in m.stages:
            if isinstance(st, TwistStage):
                svals = np.linspace(0, 1, per_stage)[1:]
                out.extend(st.tangent_path(x, y, v, svals))
                v = st.jac(x, y) @ v
                x, y = st.apply(x, y)
            elif isinstance(st, HamiltonianStage):
                x2, y2, M, _, rec = st._integrate(x, y, v=np.eye(2), record=True)
                for (_, _, Mj) in rec[1:]:
                    out.append(Mj @ v)
                v = M @ v
                x, y = x2, y2
            else:
                J = st.jac(x, y)
                for s in np.linspace(0, 1, per_stage)[1:]:
                    out.append(((1 - s) * np.eye(2) + s * J) @ v)
                v = J @ v
                x, y = st.apply(x, y)
    return out


def _angle_change(samples):
    total = 0.0
    prev = math.atan2(samples[0][1], samples[0][0])
    for v in samples[1:]:
        a = math.atan2(v[1], v[0])
        d = a - prev
        while d > math.pi:
            d -= 2 * math.pi
        while d < -math.pi:
            d += 2 * math.pi
        total += d
        prev = a
    return total


def classify(orbit, m=None, degen_tol=1e-6):
    """Trace-based classification with framed rotation data.

    elliptic: |tr| < 2, rotation number lift computed (if the map is
    supplied) by continuous angle tracking of a transported tangent vector
    in the constant d/dy framing; hyperbolic: eigenvector winding likewise.
    """
    M = orbit.monodromy
    det = float(np.linalg.det(M))
    if abs(det - 1) > 1e-6:
        raise ValueError("monodromy is not symplectic (det = %.6g)" % det)
    tr = float(np.trace(M))
    if orbit.degenerate_flag or abs(abs(tr) - 2) < degen_tol:
        return OrbitClass(kind="degenerate")
    if abs(tr) < 2:
        # fractional part from the eigenvalue argument; rotation direction
        # from the sign-definite form v x Mv
        phi = math.acos(max(-1.0, min(1.0, tr / 2)))
        v = np.array([1.0, 0.3])
        cross = v[0] * (M @ v)[1] - v[1] * (M @ v)[0]
        frac = phi / (2 * math.pi) if cross > 0 else 1 - phi / (2 * math.pi)
        theta = frac
        if m is not None:
            x, y = orbit.points[0]
            samples = _tangent_samples(m, x, y, orbit.period, (1.0, 0.0))
            w = _angle_change(samples) / (2 * math.pi)
            theta = round(w - frac) + frac
        return OrbitClass(kind="elliptic", rotation_number=theta)
    kind = "positive_hyperbolic" if tr > 2 else "negative_hyperbolic"
    r = None
    if m is not None:
        evals, evecs = np.linalg.eig(M)
        iu = int(np.argmax(np.abs(evals)))
        e0 = np.real(evecs[:, iu])
        x, y = orbit.points[0]
        samples = _tangent_samples(m, x, y, orbit.period, e0)
        r = round(_angle_change(samples) / math.pi)
    return OrbitClass(kind=kind, eigenvector_winding=r)


# ---------------------------------------------------------------------------
# Continuation and actions


@dataclass
class ContinuationTrace:
    svals: list
    orbits: list
    flux: float
    fold: bool = False

    @property
    def start(self):
        return self.orbits[0]

    @property
    def end(self):
        return self.orbits[-1]


def _sheet_flux(path_a, path_b):
    """Signed omega-area of the strip between two suspension arcs, by
    shoelace areas of the sample quadrilaterals (omega = dx ^ dy in lifted
    coordinates)."""
    total = 0.0
    for i in range(len(path_a) - 1):
        quad = [path_a[i], path_a[i + 1], path_b[i + 1], path_b[i]]
        s = 0.0
        for j in range(4):
            x1, y1 = quad[j]
            x2, y2 = quad[(j + 1) % 4]
            s += x1 * y2 - x2 * y1
        total += s / 2.0
    return total


def _aligned_cycle(prev, cur):
    """Re-index cur's cycle so its points track prev's."""
    k = prev.period
    best, bestd = 0, math.inf
    for shift in range(k):
        d = max(max(abs(prev.points[i][0] - cur.points[(i + shift) % k][0]),
                    abs(_wrap_half(prev.points[i][1] - cur.points[(i + shift) % k][1])))
                for i in range(k))
        if d < bestd:
            best, bestd = shift, d
    pts = cur.points[best:] + cur.points[:best]
    return PeriodicOrbit(points=pts, period=cur.period, residual=cur.residual,
                         monodromy=cur.monodromy, winding=cur.winding,
                         degenerate_flag=cur.degenerate_flag), bestd


def continue_orbit(orbit, homotopy, steps=20, nt=64, tol=1e-10):
    """Predictor-corrector continuation s: 0 -> 1 with flux accumulation.

    homotopy: s -> SurfaceMap.  Fails cleanly at folds: returns the partial
    trace with fold=True.
    """
    svals = np.linspace(0, 1, steps + 1)
    orbits = [orbit]
    flux = 0.0
    prev = orbit
    prev_map = homotopy(0.0)
    for s in svals[1:]:
        m = homotopy(float(s))
        nxt = refine_newton(m, orbit.period, prev.points[0], tol=tol)
        if nxt is None or nxt.residual > 1e-8:
            return ContinuationTrace(svals=list(svals[:len(orbits)]),
                                     orbits=orbits, flux=flux, fold=True)
        nxt, drift = _aligned_cycle(prev, nxt)
        # flux between consecutive orbits: sum of strand sheets
        for i in range(orbit.period):
            pa = prev_map.suspension_path(*prev.points[i], nt)
            pb = m.suspension_path(*nxt.points[i], nt)
            flux += _sheet_flux(pa, pb)
        orbits.append(nxt)
        prev, prev_map = nxt, m
        if nxt.degenerate_flag:
            return ContinuationTrace(svals=list(svals[:len(orbits)]),
                                     orbits=orbits, flux=flux, fold=True)
    return ContinuationTrace(svals=list(svals), orbits=orbits, flux=flux)


def orbit_hamiltonian_integral(orbit, H, nt=128):
    """int_0^1 H(t, gamma(t)) dt summed over the k suspension arcs of the
    orbit, for the straight suspension parameterization."""
    total = 0.0
    for (x, y) in orbit.points:
        ts = np.linspace(0, 1, nt + 1)
        vals = [H.value(t, x, y) for t in ts]  # loop based at the orbit point
        total += float(np.trapezoid(vals, ts))
    return total


def orbit_set_action(alpha, m):
    """Generating-function (discrete symplectic) action W of an orbit set:
    sum over entries of multiplicity times the per-cycle stage action."""
    W = 0.0
    for orb, mult in alpha.entries:
        w = 0.0
        for (x, y) in orb.points:
            w += m.discrete_action(x, y)
        W += mult * w
    return W


def action_difference(alpha, beta, traces=None, m=None):
    """A(alpha, beta): continuation flux over supplied traces, or the
    W-functional difference when both sets belong to one map."""
    if alpha.homology != beta.homology:
        raise ClassError("orbit sets lie in different (degree, winding) classes: "
                         "%s vs %s" % (alpha.homology, beta.homology))
    if traces:
        return sum(t.flux for t in traces)
    if m is None:
        raise ValueError("need either traces or the underlying map")
    return orbit_set_action(alpha, m) - orbit_set_action(beta, m)


def action_difference_cobordism(alpha_plus, alpha_minus, traces, H_plus, H_minus,
                                m=None):
    """A = int_Z omega + int H_+ dt over alpha^+ minus int H_- dt over alpha^-."""
    if alpha_plus.homology != alpha_minus.homology:
        raise ClassError("cobordism ends lie in different classes")
    flux = sum(t.flux for t in traces) if traces else 0.0
    up = orbit_hamiltonian_integral_set(alpha_plus, H_plus) if H_plus else 0.0
    dn = orbit_hamiltonian_integral_set(alpha_minus, H_minus) if H_minus else 0.0
    return flux + up - dn


def orbit_hamiltonian_integral_set(alpha, H):
    return sum(mult * orbit_hamiltonian_integral(orb, H)
               for orb, mult in alpha.entries)


# ---------------------------------------------------------------------------
# Isolation gap


def _orbit_sets_of_degree(orbits, d, max_mult=4):
    """All orbit sets of total degree d over the given distinct orbits."""
    out = []

    def rec(i, remaining, picked):
        if remaining == 0:
            out.append(OrbitSet(entries=list(picked)))
            return
        if i >= len(orbits):
            return
        rec(i + 1, remaining, picked)
        o = orbits[i]
        for mult in range(1, max_mult + 1):
            if mult * o.period > remaining:
                break
            picked.append((o, mult))
            rec(i + 1, remaining - mult * o.period, picked)
            picked.pop()

    rec(0, d, [])
    return out


def isolation_gap(m, d, grid=(24, 24), margin=0.1, require_nondegenerate=True):
    """Action-spectrum gap at degree d.

    Enumerates orbit sets assembled from found simple orbits of period <= d,
    groups them by (degree, winding), and returns the smallest positive
    pairwise |A| minus a 10% safety margin, together with delta = eps / d.
    Returns eps = inf when every class is a singleton.
    """
    orbits = []
    for k in range(1, d + 1):
        for o in find_orbits(m, k, grid=grid):
            c = classify(o)
            if c.kind == "degenerate":
                if require_nondegenerate:
                    raise GapUndefinedError(
                        "degenerate orbit at period %d; gap undefined" % k)
                continue
            orbits.append(o)
    sets = _orbit_sets_of_degree(orbits, d)
    by_class = {}
    for s in sets:
        by_class.setdefault(s.homology, []).append(s)
    best = math.inf
    for cls, group in sorted(by_class.items()):
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                a = abs(action_difference(group[i], group[j], m=m))
                if a > 1e-12:
                    best = min(best, a)
    if math.isinf(best):
        eps = math.inf
        delta = math.inf
    else:
        eps = best * (1 - margin)
        delta = eps / d
    return {"epsilon": eps, "delta": delta, "degree": d,
            "n_orbits": len(orbits), "n_sets": len(sets)}
