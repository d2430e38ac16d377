import os
import re
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from braidstab import orbits as ob
from braidstab.config import ExperimentConfig

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DEMO_CONFIG = os.path.join(REPO, "configs", "kicked_twist.json")

TIMINGS = {}


@pytest.fixture(scope="session")
def timings():
    return TIMINGS


@pytest.fixture(scope="session")
def demo_cfg():
    return ExperimentConfig.from_file(DEMO_CONFIG)


@pytest.fixture(scope="session")
def demo_map(demo_cfg):
    return demo_cfg.build_map()


@pytest.fixture(scope="session")
def birkhoff_orbits(demo_map, demo_cfg):
    t0 = time.perf_counter()
    orbs = ob.find_orbits(demo_map, 2, grid=demo_cfg.orbit_grid(),
                          tol=demo_cfg.orbit_tolerance())
    TIMINGS["find_orbits"] = time.perf_counter() - t0
    assert len(orbs) == 2, "expected the elliptic/hyperbolic Birkhoff pair"
    return orbs


@pytest.fixture(scope="session")
def birkhoff_alpha(birkhoff_orbits):
    return ob.OrbitSet(entries=[(o, 1) for o in birkhoff_orbits])


@pytest.fixture(scope="session")
def birkhoff_braid(birkhoff_alpha, demo_map):
    from braidstab.braids import extract_braid
    return extract_braid(birkhoff_alpha, demo_map, samples=256)


@pytest.fixture(scope="session")
def sweep_manifest(demo_cfg):
    from braidstab.sweep import stability_sweep
    t0 = time.perf_counter()
    manifest = stability_sweep(demo_cfg)
    TIMINGS["stability_sweep"] = time.perf_counter() - t0
    return manifest


_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if m and report.when == "call":
        status = "PASS" if report.passed else "FAIL"
        sys.stderr.write("\nacceptance criterion %s: %s (%.1fs)\n"
                         % (m.group(1), status, report.duration))
