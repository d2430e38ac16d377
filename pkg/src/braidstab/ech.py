"""Partition conditions, Conley-Zehnder / Fredholm / ECH indices, gluing counts.

Everything here is exact integer combinatorics.  The Conley-Zehnder
convention is pinned to the constant d/dy framing on the annulus: an
elliptic orbit with rotation-number lift theta-hat has CZ(k-th cover) =
2 * floor(k * theta-hat) + 1; a hyperbolic orbit with eigenvector winding r
has CZ(k-th cover) = k * r (r even for positive, odd for negative
eigenvalues).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

ELLIPTIC = "elliptic"
POS_HYP = "positive_hyperbolic"
NEG_HYP = "negative_hyperbolic"

RESONANCE_TOL = 1e-9


class DegeneracyError(ValueError):
    pass


@dataclass(frozen=True)
class OrbitSymbol:
    kind: str
    theta: float = None          # elliptic rotation-number lift
    r: int = None                # hyperbolic eigenvector winding

    def __post_init__(self):
        if self.kind not in (ELLIPTIC, POS_HYP, NEG_HYP):
            raise ValueError("unknown kind %r" % (self.kind,))
        if self.kind == ELLIPTIC and self.theta is None:
            raise ValueError("elliptic symbol needs theta")
        if self.kind in (POS_HYP, NEG_HYP):
            if self.r is None:
                raise ValueError("hyperbolic symbol needs eigenvector winding")
            if self.kind == POS_HYP and self.r % 2 != 0:
                raise ValueError("positive hyperbolic winding must be even")
            if self.kind == NEG_HYP and self.r % 2 == 0:
                raise ValueError("negative hyperbolic winding must be odd")


def _check_resonance(theta, m):
    for k in range(1, m + 1):
        if abs(k * theta - round(k * theta)) < RESONANCE_TOL:
            raise DegeneracyError(
                "elliptic resonance: %d * theta within %g of an integer"
                % (k, RESONANCE_TOL))


def _upper_concave_hull(points):
    """Upper hull of points sorted by x (Andrew monotone chain)."""
    hull = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop if p lies on or above segment hull[-2]..p through hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _lower_convex_hull(points):
    hull = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _displacements(hull):
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        dx, dy = x2 - x1, y2 - y1
        g = math.gcd(dx, abs(dy))
        out.extend([dx // g] * g)
    return tuple(sorted(out, reverse=True))


def positive_partition(s, m):
    """p^+ of the m-fold cover: ends approaching along the maximal concave
    lattice path below the line y = theta * x (elliptic); all-ones for
    positive hyperbolic; twos (and a one when m is odd) for negative."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if s.kind == POS_HYP:
        return (1,) * m
    if s.kind == NEG_HYP:
        return (2,) * (m // 2) + ((1,) if m % 2 else ())
    _check_resonance(s.theta, m)
    pts = [(i, math.floor(i * s.theta)) for i in range(m + 1)]
    return _displacements(_upper_concave_hull(pts))


def negative_partition(s, m):
    """p^- of the m-fold cover: minimal convex lattice path above the line."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if s.kind in (POS_HYP, NEG_HYP):
        return positive_partition(s, m)
    _check_resonance(s.theta, m)
    pts = [(i, math.ceil(i * s.theta)) for i in range(m + 1)]
    return _displacements(_lower_convex_hull(pts))


NOT_APPLICABLE = "not-applicable"


def partitions_disjoint(s, m):
    """Whether p^+(m) and p^-(m) share no entry (elliptic, m > 1)."""
    if s.kind != ELLIPTIC:
        raise ValueError("disjointness concerns elliptic symbols")
    if m <= 1:
        return NOT_APPLICABLE
    p = positive_partition(s, m)
    q = negative_partition(s, m)
    return not (set(p) & set(q))


def conley_zehnder(s, k=1):
    if k < 1:
        raise ValueError("cover multiplicity must be >= 1")
    if s.kind == ELLIPTIC:
        _check_resonance(s.theta, k)
        return 2 * math.floor(k * s.theta) + 1
    return k * s.r


@dataclass
class RelClassData:
    c_tau: int = 0
    q_tau: int = 0
    cz_plus: tuple = ()          # per positive end (or per-orbit double sums)
    cz_minus: tuple = ()
    euler: int = 0               # chi(C), Fredholm evaluation only

    @classmethod
    def from_orbit_sets(cls, alpha, beta, c_tau=0, q_tau=0, euler=0):
        """Build CZ double sums from (OrbitSymbol, multiplicity) lists."""
        czp = tuple(sum(conley_zehnder(s, k) for k in range(1, m + 1))
                    for s, m in alpha)
        czm = tuple(sum(conley_zehnder(s, k) for k in range(1, m + 1))
                    for s, m in beta)
        return cls(c_tau=c_tau, q_tau=q_tau, cz_plus=czp, cz_minus=czm,
                   euler=euler)


def fredholm_index(d):
    return -d.euler + 2 * d.c_tau + sum(d.cz_plus) - sum(d.cz_minus)


def ech_index(d):
    return d.c_tau + d.q_tau + sum(d.cz_plus) - sum(d.cz_minus)


def gluing_count(entries):
    """Number of end-matchings over an orbit set [(symbol, m)], with parity.

    g_i = 1 (elliptic, m=1), 0 (elliptic, m>1), m! (positive hyperbolic),
    2^floor(m/2) * floor(m/2)! (negative hyperbolic).  The product is odd
    exactly when the orbit set is simple."""
    count = 1
    for s, m in entries:
        kind = s.kind if isinstance(s, OrbitSymbol) else s
        if m < 1:
            raise ValueError("multiplicity must be >= 1")
        if kind == ELLIPTIC:
            g = 1 if m == 1 else 0
        elif kind == POS_HYP:
            g = math.factorial(m)
        elif kind == NEG_HYP:
            k = m // 2
            g = (2 ** k) * math.factorial(k)
        else:
            raise DegeneracyError("orbit of kind %r cannot be glued" % (kind,))
        count *= g
    return count, ("odd" if count % 2 else "even")
