"""Acceptance gate: one test per criterion, each printing a pass/fail line
(see the reporting hook in conftest.py) and enforcing its runtime budget."""
import itertools
import math
import random
import time

import numpy as np
import pytest

from braidstab import artin, ech
from braidstab import orbits as ob
from braidstab.braids import AnnularBraid, extract_braid, is_isotopic
from braidstab.entropy import braid_entropy
from braidstab.surface import (SurfaceMap, TimeHamiltonian, TwistStage,
                               flow_time_1)
from braidstab.sweep import stability_sweep


def E(theta):
    return ech.OrbitSymbol(ech.ELLIPTIC, theta=theta)


# ---------------------------------------------------------------------------
# 1. Hyperbolic partition tables, exact for all m <= 12, < 1 s


def test_criterion_1_hyperbolic_partition_tables():
    t0 = time.perf_counter()
    ph = ech.OrbitSymbol(ech.POS_HYP, r=0)
    nh = ech.OrbitSymbol(ech.NEG_HYP, r=1)
    for m in range(1, 13):
        expect_neg = (2,) * (m // 2) + ((1,) if m % 2 else ())
        assert ech.positive_partition(ph, m) == (1,) * m
        assert ech.negative_partition(ph, m) == (1,) * m
        assert ech.positive_partition(nh, m) == expect_neg
        assert ech.negative_partition(nh, m) == expect_neg
    assert time.perf_counter() - t0 < 1.0


# ---------------------------------------------------------------------------
# 2. Elliptic partitions vs. brute-force path enumeration, 10^3 theta values,
#    m <= 10; disjointness in every m > 1 case, < 1 min


def _enum_concave_paths(m, theta):
    """All concave lattice paths from (0,0) to (m, floor(m*theta)) weakly
    below the line y = theta*x, as vertex lists.  Paths that dip below the
    chord to the endpoint are pruned: they cannot be the maximal path."""
    yend = math.floor(m * theta)
    out = []

    def chord(x):
        return yend * x / m

    def rec(path, slope):
        x, y = path[-1]
        if x == m:
            out.append(list(path))
            return
        for x2 in range(x + 1, m + 1):
            lo = math.ceil(chord(x2) - 1e-12)
            hi = math.floor(x2 * theta)
            for y2 in range(lo, hi + 1):
                s = (y2 - y) / (x2 - x)
                if s <= slope + 1e-12:
                    rec(path + [(x2, y2)], s)

    rec([(0, 0)], math.inf)
    return out


def _enum_convex_paths(m, theta):
    yend = math.ceil(m * theta)
    out = []

    def chord(x):
        return yend * x / m

    def rec(path, slope):
        x, y = path[-1]
        if x == m:
            out.append(list(path))
            return
        for x2 in range(x + 1, m + 1):
            lo = math.ceil(x2 * theta)
            hi = math.floor(chord(x2) + 1e-12)
            for y2 in range(lo, hi + 1):
                s = (y2 - y) / (x2 - x)
                if s >= slope - 1e-12:
                    rec(path + [(x2, y2)], s)

    rec([(0, 0)], -math.inf)
    return out


def _area(path):
    return sum((x2 - x1) * (y1 + y2) for (x1, y1), (x2, y2)
               in zip(path, path[1:]))


def _path_partition(path):
    out = []
    for (x1, y1), (x2, y2) in zip(path, path[1:]):
        g = math.gcd(x2 - x1, abs(y2 - y1))
        out.extend([(x2 - x1) // g] * g)
    return tuple(sorted(out, reverse=True))


def test_criterion_2_elliptic_partition_oracle():
    t0 = time.perf_counter()
    # denominators are a power of two, so k*theta is never near an integer
    # for k <= 10 and no resonance can occur
    thetas = [(2 * k + 1) / 2048 for k in range(1024)]
    assert len(thetas) >= 1000
    for theta in thetas:
        for m in range(1, 11):
            best_p = max(_enum_concave_paths(m, theta), key=_area)
            best_q = min(_enum_convex_paths(m, theta), key=_area)
            p = ech.positive_partition(E(theta), m)
            q = ech.negative_partition(E(theta), m)
            assert p == _path_partition(best_p), (theta, m)
            assert q == _path_partition(best_q), (theta, m)
            if m > 1:
                assert ech.partitions_disjoint(E(theta), m) is True
    assert time.perf_counter() - t0 < 60.0


# ---------------------------------------------------------------------------
# 3. Gluing parity odd <=> simple, exhaustive <= 4 entries, m_i <= 5, < 1 s


def test_criterion_3_gluing_parity_exhaustive():
    t0 = time.perf_counter()
    kinds = [E(0.38196601125), ech.OrbitSymbol(ech.POS_HYP, r=0),
             ech.OrbitSymbol(ech.NEG_HYP, r=1)]
    for n_entries in range(1, 5):
        for combo in itertools.product(kinds, repeat=n_entries):
            for mults in itertools.product(range(1, 6), repeat=n_entries):
                _, parity = ech.gluing_count(list(zip(combo, mults)))
                assert (parity == "odd") == all(m == 1 for m in mults)
    assert time.perf_counter() - t0 < 1.0


# ---------------------------------------------------------------------------
# 4. Index evaluators: trivial cylinder, I(0)=0, additivity x 10^3, < 1 s


def test_criterion_4_index_evaluators():
    t0 = time.perf_counter()
    d0 = ech.RelClassData.from_orbit_sets([(E(0.3), 1)], [(E(0.3), 1)])
    assert ech.fredholm_index(d0) == 0
    assert ech.ech_index(d0) == 0

    rng = random.Random(0)
    syms = [E(0.31), E(0.7215), ech.OrbitSymbol(ech.POS_HYP, r=2),
            ech.OrbitSymbol(ech.NEG_HYP, r=-1)]

    def rand_data():
        al = [(rng.choice(syms), rng.randint(1, 3)) for _ in range(2)]
        be = [(rng.choice(syms), rng.randint(1, 3)) for _ in range(2)]
        return ech.RelClassData.from_orbit_sets(
            al, be, c_tau=rng.randint(-4, 4), q_tau=rng.randint(-4, 4),
            euler=rng.randint(-2, 2))

    for _ in range(1000):
        d1, d2 = rand_data(), rand_data()
        glued = ech.RelClassData(c_tau=d1.c_tau + d2.c_tau,
                                 q_tau=d1.q_tau + d2.q_tau,
                                 cz_plus=d1.cz_plus + d2.cz_plus,
                                 cz_minus=d1.cz_minus + d2.cz_minus,
                                 euler=d1.euler + d2.euler)
        assert ech.ech_index(glued) == ech.ech_index(d1) + ech.ech_index(d2)
        assert ech.fredholm_index(glued) == \
            ech.fredholm_index(d1) + ech.fredholm_index(d2)
    assert time.perf_counter() - t0 < 1.0


# ---------------------------------------------------------------------------
# 5. Dynamics fidelity on the kicked twist, < 30 s


def test_criterion_5_dynamics_fidelity(birkhoff_orbits, demo_map, timings):
    t0 = time.perf_counter()
    for o in birkhoff_orbits:
        assert o.residual < 1e-10
        assert abs(np.linalg.det(o.monodromy) - 1) < 1e-8
        c = ob.classify(o, demo_map)
        tr = float(np.trace(o.monodromy))
        if abs(tr) < 2:
            assert c.kind == "elliptic"
        elif tr > 2:
            assert c.kind == "positive_hyperbolic"
        else:
            assert c.kind == "negative_hyperbolic"
    # degenerate twist circles are flagged, not classified
    twist = SurfaceMap([TwistStage("sqrt(2)-1 + 3*smoothstep(x)/10")],
                       boundary_theta=("sqrt(2)-1", "sqrt(2)-1+3/10"))
    circles = ob.find_orbits(twist, 2, grid=(8, 8))
    assert circles and all(o.degenerate_flag for o in circles)
    elapsed = time.perf_counter() - t0 + timings["find_orbits"]
    assert elapsed < 30.0


# ---------------------------------------------------------------------------
# 6. Action consistency: flux additivity 1e-8; cobordism A = delta * d, < 10 s


def test_criterion_6_action_consistency(demo_cfg, demo_map, birkhoff_orbits,
                                        birkhoff_alpha):
    t0 = time.perf_counter()
    amp = 6e-5
    elliptic = min(birkhoff_orbits, key=lambda o: abs(np.trace(o.monodromy)))

    def hom(s):
        return flow_time_1(demo_map, demo_cfg.family_hamiltonian(amp * s),
                           demo_cfg.flow_settings())

    full = ob.continue_orbit(elliptic, hom, steps=4)
    first = ob.continue_orbit(elliptic, lambda s: hom(0.5 * s), steps=2)
    second = ob.continue_orbit(first.end, lambda s: hom(0.5 + 0.5 * s),
                               steps=2)
    assert abs(first.flux + second.flux - full.flux) < 1e-8

    delta = 1.7077531139450924e-4
    Hp = TimeHamiltonian(repr(delta) + " + 0*x")
    a = ob.action_difference_cobordism(birkhoff_alpha, birkhoff_alpha,
                                       traces=[], H_plus=Hp, H_minus=None)
    assert a == pytest.approx(delta * birkhoff_alpha.degree, abs=1e-15)
    assert time.perf_counter() - t0 < 10.0


# ---------------------------------------------------------------------------
# 7. Entropy estimates, < 30 s


def _burau_radius_oracle():
    """Independent sigma_1 sigma_2^-1 oracle: reduced Burau at t = -1,
    spectral radius by power iteration."""
    t = -1.0
    s1 = np.array([[-t, 1.0], [0.0, 1.0]])
    s2 = np.array([[1.0, 0.0], [t, -t]])
    P = np.linalg.inv(s2) @ s1
    v = np.array([1.0, 0.3])
    rad = 0.0
    for _ in range(200):
        w = P @ v
        rad = np.linalg.norm(w) / np.linalg.norm(v)
        v = w / np.linalg.norm(w)
    return math.log(rad)


def test_criterion_7_entropy():
    t0 = time.perf_counter()
    oracle = _burau_radius_oracle()
    est = braid_entropy((3, (1, -2)), iterations=64).value
    assert abs(est - oracle) / oracle < 0.02

    periodic = [(3, ()), (3, (1, 2)), (3, (1, 2, 1)), (4, (1, 2, 3)),
                (3, (1, 2, 1, 2, 1, 2))]
    for n, word in periodic:
        e = braid_entropy((n, word), iterations=64)
        assert e.value < 1e-3
        assert e.periodic

    rng = random.Random(2)
    for _ in range(10):
        c = tuple(rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(1, 6)))
        w = artin.concat(c, (1, -2), artin.invert(c))
        e = braid_entropy((3, w), iterations=64).value
        assert abs(e - est) < 1e-6
    assert time.perf_counter() - t0 < 30.0


# ---------------------------------------------------------------------------
# 8. Braid stability sweep on the shipped demo, < 10 min


def test_criterion_8_stability_sweep(sweep_manifest, timings):
    delta = sweep_manifest["delta"]
    assert isinstance(delta, float) and delta > 0
    below = [r for r in sweep_manifest["samples"] if r["hofer_norm"] < delta]
    assert below, "amplitude grid must sample below the threshold"
    for row in below:
        assert row["verdict"] == "stable", row
        assert abs(row["entropy_perturbed"] - row["entropy_base"]) < 1e-3
    assert timings["stability_sweep"] < 600.0


# ---------------------------------------------------------------------------
# 9. Determinism: byte-identical manifests for identical config and seed


def test_criterion_9_deterministic_manifests(sweep_manifest, demo_cfg):
    again = stability_sweep(demo_cfg)
    assert again.to_bytes() == sweep_manifest.to_bytes()
    assert again.manifest_hash() == sweep_manifest.manifest_hash()
