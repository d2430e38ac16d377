import math
import random

import pytest

from braidstab import artin
from braidstab.braids import AnnularBraid
from braidstab.entropy import (braid_entropy, burau_log_radius,
                               entropy_semicontinuity_run)
from braidstab.surface import TimeHamiltonian

# log of the largest root of x^2 - 3x + 1 (golden-mean dilatation squared)
PA_3 = math.log((3 + math.sqrt(5)) / 2)


def test_sigma1_sigma2inv_matches_known_dilatation():
    e = braid_entropy((3, (1, -2)), iterations=64)
    assert e.value == pytest.approx(PA_3, rel=1e-6)
    assert not e.periodic


def test_burau_oracle_agrees():
    b = burau_log_radius((1, -2), 3)
    assert b == pytest.approx(PA_3, rel=1e-9)
    e = braid_entropy((3, (1, -2)), method="burau_radius")
    assert e.value == pytest.approx(PA_3, rel=1e-9)


def test_periodic_braids_are_exactly_zero():
    for word in [(), (1, 2), (1, 2, 1, 2, 1, 2)]:
        e = braid_entropy((3, word), iterations=32)
        assert e.value == 0.0
        assert e.periodic


def test_two_strand_disk_is_zero():
    e = braid_entropy((2, (1, 1, 1)))
    assert e.value == 0.0 and e.periodic


def test_reducible_braid_zero():
    # sigma_1 in B_3 fixes the round curve around punctures 1,2: the
    # coordinates grow linearly, so the estimate decays like 1/iterations
    e1 = braid_entropy((3, (1,)), iterations=48)
    e2 = braid_entropy((3, (1,)), iterations=400)
    assert e2.value < e1.value
    assert e2.value == pytest.approx(0.0, abs=5e-3)


def test_power_scaling():
    e1 = braid_entropy((3, (1, -2)), iterations=64)
    e4 = braid_entropy((3, (1, -2) * 4), iterations=32)
    assert e4.value == pytest.approx(4 * e1.value, rel=1e-6)


def test_conjugation_invariance():
    rng = random.Random(5)
    base = (1, -2)
    for _ in range(10):
        c = tuple(rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(1, 5)))
        w = artin.concat(c, base, artin.invert(c))
        e = braid_entropy((3, w), iterations=64)
        assert e.value == pytest.approx(PA_3, rel=1e-6)


def test_inverse_invariance():
    e1 = braid_entropy((4, (1, -2, 3)), iterations=64)
    e2 = braid_entropy((4, artin.invert((1, -2, 3))), iterations=64)
    assert e2.value == pytest.approx(e1.value, rel=1e-6)


def test_trace_tail_is_stable():
    e = braid_entropy((3, (1, -2)), iterations=64)
    tail = e.trace[-8:]
    assert max(tail) - min(tail) < 1e-8


def test_annular_braid_estimate(birkhoff_braid):
    e = braid_entropy(birkhoff_braid, iterations=48)
    assert e.value == 0.0
    assert e.periodic


def test_burau_and_dynnikov_cross_validate():
    rng = random.Random(11)
    for _ in range(6):
        n = rng.choice([3, 4])
        w = tuple(rng.choice([g for i in range(1, n) for g in (i, -i)])
                  for _ in range(6))
        d = braid_entropy((n, w), iterations=80).value
        b = burau_log_radius(w, n)
        # Burau at -1 is a lower bound for the geometric growth
        assert b <= d + 1e-6


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        braid_entropy((3, (1,)), iterations=0)
    with pytest.raises(ValueError):
        braid_entropy((3, (1,)), method="nope")


def test_semicontinuity_run_trivial_family(demo_map, birkhoff_alpha, demo_cfg):
    fam = [("zero", TimeHamiltonian("0*x")),
           ("const", TimeHamiltonian("1/10 + 0*x"))]
    out = entropy_semicontinuity_run(demo_map, birkhoff_alpha, fam,
                                     settings=demo_cfg.flow_settings(),
                                     samples=192, iterations=32)
    assert out["entropy_base"] == 0.0
    for rec in out["records"]:
        assert rec["status"] == "ok"
        assert rec["isotopic"] is True
        assert rec["entropy_difference"] < 1e-3
