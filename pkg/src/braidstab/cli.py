"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 runtime error.
"""
from __future__ import annotations

import json
import sys

import click

from . import __version__
from . import braids as br
from . import ech
from . import orbits as ob
from .config import ExperimentConfig, ConfigError
from .entropy import braid_entropy
from .report import write_run_dir, render_figures
from .surface import check_boundary_admissible, AdmissibilityError
from .sweep import stability_sweep

CONFIG_EXIT = 2
RUNTIME_EXIT = 3


def _fail(code, msg):
    click.echo("error: %s" % msg, err=True)
    sys.exit(code)


def _load_config(path):
    try:
        return ExperimentConfig.from_file(path)
    except ConfigError as exc:
        _fail(CONFIG_EXIT, str(exc))


def _fmt_partition(p):
    return "(" + ",".join(str(v) for v in p) + ")"


_KINDS = {"elliptic": ech.ELLIPTIC, "pos-hyp": ech.POS_HYP,
          "neg-hyp": ech.NEG_HYP}


@click.group()
@click.version_option(version=__version__, prog_name="braidstab")
def main():
    """Braid stability laboratory for area-preserving annulus maps."""


@main.command()
@click.option("--kind", type=click.Choice(sorted(_KINDS)), required=True)
@click.option("--m", "mult", type=int, required=True)
@click.option("--theta", type=float, default=None,
              help="rotation number lift (elliptic)")
@click.option("--r", "winding", type=int, default=None,
              help="eigenvector winding (hyperbolic)")
def partitions(kind, mult, theta, winding):
    """Positive/negative ECH partitions of the m-fold cover."""
    try:
        if kind == "elliptic":
            if theta is None:
                _fail(CONFIG_EXIT, "--theta is required for elliptic symbols")
            s = ech.OrbitSymbol(ech.ELLIPTIC, theta=theta)
        else:
            if winding is None:
                winding = 0 if kind == "pos-hyp" else 1
            s = ech.OrbitSymbol(_KINDS[kind], r=winding)
        p = ech.positive_partition(s, mult)
        q = ech.negative_partition(s, mult)
    except (ech.DegeneracyError, ValueError) as exc:
        _fail(RUNTIME_EXIT, str(exc))
    if p == q:
        click.echo(_fmt_partition(p))
    else:
        click.echo("p+ %s" % _fmt_partition(p))
        click.echo("p- %s" % _fmt_partition(q))


@main.command()
@click.option("--c-tau", type=int, default=0)
@click.option("--q-tau", type=int, default=0)
@click.option("--cz-plus", type=int, multiple=True)
@click.option("--cz-minus", type=int, multiple=True)
@click.option("--euler", type=int, default=0)
@click.option("--fredholm", is_flag=True, help="print the Fredholm index instead")
def index(c_tau, q_tau, cz_plus, cz_minus, euler, fredholm):
    """ECH (default) or Fredholm index from relative class data."""
    d = ech.RelClassData(c_tau=c_tau, q_tau=q_tau, cz_plus=cz_plus,
                         cz_minus=cz_minus, euler=euler)
    click.echo(str(ech.fredholm_index(d) if fredholm else ech.ech_index(d)))


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "outdir", type=click.Path(file_okay=False), default=None)
def orbits(config_path, outdir):
    """Find and classify the configured periodic orbits."""
    cfg = _load_config(config_path)
    try:
        m = cfg.build_map()
        check_boundary_admissible(m)
        found = []
        for k in cfg.orbit_periods():
            for o in ob.find_orbits(m, k, grid=cfg.orbit_grid(),
                                    tol=cfg.orbit_tolerance()):
                c = ob.classify(o, m)
                rec = o.to_json()
                rec["kind"] = c.kind
                if c.rotation_number is not None:
                    rec["rotation_number"] = c.rotation_number
                if c.eigenvector_winding is not None:
                    rec["eigenvector_winding"] = c.eigenvector_winding
                found.append(rec)
    except AdmissibilityError as exc:
        _fail(CONFIG_EXIT, "map is not boundary-admissible: %s" % exc)
    except Exception as exc:
        _fail(RUNTIME_EXIT, str(exc))
    if outdir:
        import os
        os.makedirs(outdir, exist_ok=True)
        for i, rec in enumerate(found):
            with open(os.path.join(outdir, "orbit_%03d.json" % i), "w") as fh:
                json.dump(rec, fh, indent=2, sort_keys=True)
    click.echo(json.dumps(found, indent=2, sort_keys=True))


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--samples", type=int, default=None)
def braid(config_path, samples):
    """Extract the braid of the configured reference orbit set."""
    cfg = _load_config(config_path)
    try:
        m = cfg.build_map()
        from .sweep import _reference_orbit_set
        alpha = _reference_orbit_set(m, cfg)
        zeta = br.extract_braid(alpha, m,
                                samples=samples or cfg.sweep_setting("samples", 256))
    except Exception as exc:
        _fail(RUNTIME_EXIT, str(exc))
    out = zeta.to_json()
    out["invariants"] = br.invariants(zeta).to_json()
    click.echo(json.dumps(out, indent=2, sort_keys=True))


@main.command()
@click.option("--braid1", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--braid2", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--budget", type=int, default=3000)
def compare(braid1, braid2, budget):
    """Decide whether two serialized braids are isotopic."""
    try:
        with open(braid1) as fh:
            b1 = br.AnnularBraid.from_json(json.load(fh))
        with open(braid2) as fh:
            b2 = br.AnnularBraid.from_json(json.load(fh))
    except (OSError, ValueError, KeyError) as exc:
        _fail(CONFIG_EXIT, "cannot read braid file: %s" % exc)
    res = br.is_isotopic(b1, b2, budget=budget)
    click.echo(res if isinstance(res, str) else ("true" if res else "false"))


@main.command()
@click.option("--braid", "braid_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="serialized annular braid")
@click.option("--word", default=None, help="comma-separated disk braid word")
@click.option("--strands", type=int, default=None, help="disk strand count for --word")
@click.option("--method", type=click.Choice(["dynnikov_growth", "burau_radius"]),
              default="dynnikov_growth")
@click.option("--iterations", type=int, default=64)
def entropy(braid_path, word, strands, method, iterations):
    """Entropy lower-bound estimate of a braid."""
    if (braid_path is None) == (word is None):
        _fail(CONFIG_EXIT, "supply exactly one of --braid / --word")
    if braid_path:
        with open(braid_path) as fh:
            b = br.AnnularBraid.from_json(json.load(fh))
    else:
        if strands is None:
            _fail(CONFIG_EXIT, "--word needs --strands")
        b = (strands, tuple(int(v) for v in word.split(",") if v.strip()))
    try:
        e = braid_entropy(b, method=method, iterations=iterations)
    except ValueError as exc:
        _fail(CONFIG_EXIT, str(exc))
    click.echo(json.dumps(e.to_json(), sort_keys=True))


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--degree", type=int, default=None)
def spectrum(config_path, degree):
    """Action-spectrum isolation gap epsilon and threshold delta."""
    cfg = _load_config(config_path)
    try:
        m = cfg.build_map()
        d = degree or cfg.sweep_setting("gap_degree",
                                        sum(cfg.orbit_periods()))
        gap = ob.isolation_gap(m, d, grid=cfg.orbit_grid())
    except ob.GapUndefinedError as exc:
        _fail(RUNTIME_EXIT, str(exc))
    except Exception as exc:
        _fail(RUNTIME_EXIT, str(exc))
    gap = {k: (float(v) if hasattr(v, "item") or isinstance(v, float) else v)
           for k, v in gap.items()}
    click.echo(json.dumps(gap, sort_keys=True))


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "outdir", type=click.Path(file_okay=False),
              default="run")
@click.option("--no-figures", is_flag=True)
def sweep(config_path, outdir, no_figures):
    """Full braid-stability sweep; writes a run directory."""
    cfg = _load_config(config_path)
    try:
        manifest = stability_sweep(cfg)
        write_run_dir(manifest, cfg.raw, outdir)
        if not no_figures:
            render_figures(outdir)
    except AdmissibilityError as exc:
        _fail(CONFIG_EXIT, "map is not boundary-admissible: %s" % exc)
    except Exception as exc:
        _fail(RUNTIME_EXIT, str(exc))
    s = manifest["summary"]
    click.echo("run written to %s" % outdir)
    click.echo("degree=%d epsilon=%s delta=%s" %
               (manifest["degree"], manifest["epsilon"], manifest["delta"]))
    click.echo("verdicts: %s" % json.dumps(s["verdicts"], sort_keys=True))
    if s["broken_below_threshold"]:
        click.echo("WARNING: broken verdicts below the threshold", err=True)


if __name__ == "__main__":
    main()
