"""The braid-stability sweep: threshold computation plus per-amplitude
verdicts.

For the configured base map the sweep finds the reference orbit set, its
braid, and the action-isolation threshold delta = epsilon / d.  Each
amplitude in the family grid then gets one of four verdicts:

  stable        some braid of refound simple nondegenerate orbits of the
                perturbed map is isotopic to the transported braid
  broken        comparison definitely failed
  indeterminate conjugacy search exhausted its budget
  orbit-lost    orbit refinement or braid extraction failed

Amplitudes are processed by a worker pool (BRAIDSTAB_WORKERS overrides the
size) and merged in grid order, so the manifest is deterministic.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from . import braids as br
from . import orbits as ob
from .config import canonical_json
from .entropy import braid_entropy
from .surface import (flow_time_1, hofer_norm, hofer_norm_prime,
                      check_boundary_admissible, FlowError, DomainError)


class RunManifest(dict):
    """Plain dict with a canonical byte serialization."""

    def to_bytes(self):
        return (canonical_json(self) + "\n").encode()

    def manifest_hash(self):
        import hashlib
        return hashlib.sha256(self.to_bytes()).hexdigest()


def _reference_orbit_set(m, cfg):
    entries = []
    for k in cfg.orbit_periods():
        for o in ob.find_orbits(m, k, grid=cfg.orbit_grid(),
                                tol=cfg.orbit_tolerance()):
            c = ob.classify(o, m)
            if c.kind == "degenerate":
                raise RuntimeError(
                    "degenerate reference orbit at period %d" % k)
            entries.append((o, 1))
    if not entries:
        raise RuntimeError("no reference orbits found for periods %s"
                           % cfg.orbit_periods())
    return ob.OrbitSet(entries=entries)


def _amplitude_record(m, cfg, alpha, zeta, e_base, delta, a, norm_grid,
                      samples, iters, budget):
    rec = {"amplitude": a, "delta": delta, "verdict": "orbit-lost",
           "entropy_base": e_base, "entropy_perturbed": None,
           "hofer_norm": 0.0, "hofer_norm_prime": 0.0, "note": ""}
    try:
        H = cfg.family_hamiltonian(a)
        nt, nx, ny = norm_grid
        rec["hofer_norm"] = hofer_norm(H, nt=nt, nx=nx, ny=ny)
        rec["hofer_norm_prime"] = hofer_norm_prime(H, nt=nt, nx=nx, ny=ny)
        pm = flow_time_1(m, H, cfg.flow_settings())
        entries = []
        for orb, mult in alpha.entries:
            o2 = ob.refine_newton(pm, orb.period, orb.points[0])
            if o2 is None or o2.residual > 1e-9:
                rec["note"] = "orbit refinement failed at period %d" % orb.period
                return rec
            if ob.classify(o2).kind == "degenerate":
                rec["note"] = "perturbed orbit degenerate"
                return rec
            entries.append((o2, mult))
        alpha2 = ob.OrbitSet(entries=entries)
        zeta2 = br.extract_braid(alpha2, pm, samples=samples)
        transported = br.transport_braid(zeta, H, cfg.flow_settings())
        iso = br.is_isotopic(transported, zeta2, budget=budget)
        e2 = braid_entropy(zeta2, iterations=iters)
        rec["entropy_perturbed"] = e2.value
        rec["perturbed_word"] = list(zeta2.word)
        rec["transported_word"] = list(transported.word)
        if iso is True:
            rec["verdict"] = "stable"
        elif iso is False:
            rec["verdict"] = "broken"
        else:
            rec["verdict"] = "indeterminate"
    except (FlowError, DomainError, br.ResolutionError, ValueError) as exc:
        rec["note"] = str(exc)
    return rec


def stability_sweep(cfg):
    """Run the full sweep for a validated ExperimentConfig."""
    m = cfg.build_map()
    thetas = check_boundary_admissible(m)
    alpha = _reference_orbit_set(m, cfg)
    d = alpha.degree
    samples = cfg.sweep_setting("samples", 256)
    iters = cfg.sweep_setting("entropy_iterations", 64)
    budget = cfg.sweep_setting("conjugacy_budget", 3000)
    gap_degree = cfg.sweep_setting("gap_degree", d)
    gap_grid = tuple(cfg.sweep_setting("gap_grid", list(cfg.orbit_grid())))
    norm_grid = tuple(cfg.sweep_setting("norm_grid", [12, 48, 24]))

    zeta = br.extract_braid(alpha, m, samples=samples)
    gap = {k: _plain(v) for k, v in
           ob.isolation_gap(m, gap_degree, grid=gap_grid).items()}
    delta = float(gap["delta"])
    e_base = braid_entropy(zeta, iterations=iters).value

    workers = int(os.environ.get("BRAIDSTAB_WORKERS", "1"))
    amps = cfg.amplitudes()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(
                lambda a: _amplitude_record(m, cfg, alpha, zeta, e_base,
                                            delta, a, norm_grid, samples,
                                            iters, budget),
                amps))
    else:
        rows = [_amplitude_record(m, cfg, alpha, zeta, e_base, delta, a,
                                  norm_grid, samples, iters, budget)
                for a in amps]

    manifest = RunManifest({
        "tool": "braidstab",
        "version": __version__,
        "config_hash": cfg.config_hash(),
        "name": cfg.name,
        "seed": cfg.seed,
        "boundary_theta": list(thetas),
        "degree": d,
        "epsilon": _json_float(gap["epsilon"]),
        "delta": _json_float(delta),
        "gap": {k: _json_float(v) for k, v in gap.items()},
        "orbits": [o.to_json() for o, _ in alpha.entries],
        "braid": zeta.to_json(),
        "braid_invariants": br.invariants(zeta).to_json(),
        "entropy_base": e_base,
        "samples": rows,
        "summary": _summary(rows, delta),
    })
    return manifest


def _plain(v):
    """Make a value exactly JSON-serializable (numpy scalars to python)."""
    if hasattr(v, "item"):
        v = v.item()
    return v


def _json_float(v):
    v = _plain(v)
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v


def _summary(rows, delta):
    below = [r for r in rows if r["hofer_norm"] < delta]
    out = {"n_samples": len(rows),
           "n_below_threshold": len(below),
           "verdicts": {}}
    for r in rows:
        out["verdicts"][r["verdict"]] = out["verdicts"].get(r["verdict"], 0) + 1
    out["broken_below_threshold"] = sum(
        1 for r in below if r["verdict"] == "broken")
    return out
