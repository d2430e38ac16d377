import json
import os

import pytest
from click.testing import CliRunner

from braidstab.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def test_version(runner):
    r = runner.invoke(main, ["--version"])
    assert r.exit_code == 0
    assert "braidstab" in r.output


def test_partitions_neg_hyp(runner):
    r = runner.invoke(main, ["partitions", "--kind", "neg-hyp", "--m", "5"])
    assert r.exit_code == 0
    assert r.output.strip() == "(2,2,1)"


def test_partitions_elliptic(runner):
    r = runner.invoke(main, ["partitions", "--kind", "elliptic", "--m", "2",
                             "--theta", "0.9"])
    assert r.exit_code == 0
    assert r.output.splitlines() == ["p+ (2)", "p- (1,1)"]


def test_partitions_requires_theta(runner):
    r = runner.invoke(main, ["partitions", "--kind", "elliptic", "--m", "2"])
    assert r.exit_code == 2


def test_partitions_resonant_is_runtime_error(runner):
    r = runner.invoke(main, ["partitions", "--kind", "elliptic", "--m", "2",
                             "--theta", "0.5"])
    assert r.exit_code == 3


def test_index_trivial_cylinder(runner):
    r = runner.invoke(main, ["index", "--cz-plus", "1", "--cz-minus", "1"])
    assert r.exit_code == 0
    assert r.output.strip() == "0"
    r = runner.invoke(main, ["index", "--cz-plus", "1", "--cz-minus", "1",
                             "--fredholm"])
    assert r.output.strip() == "0"


def test_entropy_word(runner):
    r = runner.invoke(main, ["entropy", "--word", "1,-2", "--strands", "3"])
    assert r.exit_code == 0
    out = json.loads(r.output)
    assert out["value"] == pytest.approx(0.9624, abs=1e-3)


def test_entropy_needs_exactly_one_source(runner):
    assert runner.invoke(main, ["entropy"]).exit_code == 2
    assert runner.invoke(main, ["entropy", "--word", "1"]).exit_code == 2


def test_compare_braids(runner, tmp_path):
    p1 = tmp_path / "b1.json"
    p2 = tmp_path / "b2.json"
    p1.write_text(json.dumps({"n": 3, "word": [1, -1]}))
    p2.write_text(json.dumps({"n": 3, "word": []}))
    r = runner.invoke(main, ["compare", "--braid1", str(p1),
                             "--braid2", str(p2)])
    assert r.exit_code == 0
    assert r.output.strip() == "true"
    p2.write_text(json.dumps({"n": 3, "word": [0]}))
    r = runner.invoke(main, ["compare", "--braid1", str(p1),
                             "--braid2", str(p2)])
    assert r.output.strip() == "false"


def test_compare_rejects_bad_file(runner, tmp_path):
    p1 = tmp_path / "b1.json"
    p1.write_text("{broken")
    r = runner.invoke(main, ["compare", "--braid1", str(p1),
                             "--braid2", str(p1)])
    assert r.exit_code == 2


def test_config_error_exit_code(runner, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"name": "x"}))
    r = runner.invoke(main, ["orbits", "--config", str(p)])
    assert r.exit_code == 2
    assert "error:" in r.output


def test_inadmissible_map_exit_code(runner, tmp_path):
    cfg = {
        "name": "rational",
        "map": {"stages": [{"type": "twist", "rho": "1/2 + 0*x"}],
                "boundary_theta": ["1/2", "1/2"]},
        "orbits": {"periods": [1]},
        "hamiltonian_family": {"expression": "A*bump(x)", "amplitudes": [0.0]},
    }
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    r = runner.invoke(main, ["orbits", "--config", str(p)])
    assert r.exit_code == 2
    assert "admissible" in r.output


MINI_SWEEP = {
    "name": "mini",
    "map": {
        "stages": [
            {"type": "twist", "rho": "sqrt(2)-1 + 3*smoothstep(x)/10"},
            {"type": "hamiltonian", "expression": "bump(x)*cos(2*pi*y)/(2*pi)/25"},
        ],
        "boundary_theta": ["sqrt(2)-1", "sqrt(2)-1+3/10"],
        "flow_steps": 16,
    },
    "orbits": {"periods": [2], "grid": [10, 10]},
    "hamiltonian_family": {
        "expression": "A*bump(t)*bump(x)*sin(2*pi*y)",
        "amplitudes": [0.0, 2e-5],
    },
    "sweep": {"samples": 64, "gap_grid": [8, 8], "norm_grid": [6, 16, 8],
              "entropy_iterations": 16},
}


def test_sweep_end_to_end(runner, tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(MINI_SWEEP))
    out = str(tmp_path / "run")
    r = runner.invoke(main, ["sweep", "--config", str(p), "--out", out])
    assert r.exit_code == 0, r.output
    assert "verdicts" in r.output
    for rel in ("manifest.json", "sweep.csv", "verdicts.png", "entropy.png"):
        assert os.path.exists(os.path.join(out, rel)), rel
    with open(os.path.join(out, "manifest.json")) as fh:
        man = json.load(fh)
    assert man["summary"]["broken_below_threshold"] == 0


def test_spectrum_command(runner, tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(MINI_SWEEP))
    r = runner.invoke(main, ["spectrum", "--config", str(p), "--degree", "2"])
    assert r.exit_code == 0, r.output
    out = json.loads(r.output)
    assert out["delta"] == pytest.approx(out["epsilon"] / 2)
