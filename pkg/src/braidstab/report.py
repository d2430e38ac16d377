"""Run-directory persistence and offline figure rendering.

Layout: <run>/config.json (verbatim copy), manifest.json, orbits/*.json,
braids/*.json, sweep.csv.  Figures are rendered from sweep.csv alone so
they can always be regenerated offline.
"""
from __future__ import annotations

import csv
import json
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .config import canonical_json

CSV_COLUMNS = ["amplitude", "hofer_norm", "hofer_norm_prime", "delta",
               "verdict", "entropy_base", "entropy_perturbed"]


def write_run_dir(manifest, cfg_raw, outdir):
    os.makedirs(outdir, exist_ok=True)
    os.makedirs(os.path.join(outdir, "orbits"), exist_ok=True)
    os.makedirs(os.path.join(outdir, "braids"), exist_ok=True)
    with open(os.path.join(outdir, "config.json"), "w") as fh:
        fh.write(canonical_json(cfg_raw) + "\n")
    with open(os.path.join(outdir, "manifest.json"), "wb") as fh:
        fh.write(manifest.to_bytes())
    for i, orb in enumerate(manifest["orbits"]):
        with open(os.path.join(outdir, "orbits", "orbit_%03d.json" % i), "w") as fh:
            json.dump(orb, fh, indent=2, sort_keys=True)
            fh.write("\n")
    with open(os.path.join(outdir, "braids", "reference.json"), "w") as fh:
        json.dump({"braid": manifest["braid"],
                   "invariants": manifest["braid_invariants"]},
                  fh, indent=2, sort_keys=True)
        fh.write("\n")
    write_sweep_csv(manifest, os.path.join(outdir, "sweep.csv"))
    return outdir


def write_sweep_csv(manifest, path):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, extrasaction="ignore")
        w.writeheader()
        for row in manifest["samples"]:
            w.writerow({k: row.get(k, "") for k in CSV_COLUMNS})
    return path


def _read_sweep_csv(path):
    rows = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            for k in CSV_COLUMNS:
                if k != "verdict":
                    try:
                        row[k] = float(row[k])
                    except (TypeError, ValueError):
                        row[k] = float("nan")
            rows.append(row)
    return rows


_VERDICT_STYLE = {
    "stable": ("tab:green", "o"),
    "broken": ("tab:red", "x"),
    "indeterminate": ("tab:orange", "s"),
    "orbit-lost": ("tab:gray", "^"),
}


def render_figures(run_dir):
    """Regenerate the report figures from sweep.csv; returns file paths."""
    rows = _read_sweep_csv(os.path.join(run_dir, "sweep.csv"))
    out = []
    delta = rows[0]["delta"] if rows else float("nan")

    fig, ax = plt.subplots(figsize=(7, 4.2))
    for verdict, (color, marker) in _VERDICT_STYLE.items():
        sel = [r for r in rows if r["verdict"] == verdict]
        if sel:
            ax.scatter([r["hofer_norm"] for r in sel],
                       [1.0] * len(sel), c=color, marker=marker,
                       label=verdict, zorder=3)
    if delta == delta:
        ax.axvline(delta, color="k", ls="--", lw=1,
                   label=r"$\delta = \varepsilon/d$")
    ax.set_xlabel("Hofer norm of the perturbation")
    ax.set_yticks([])
    ax.set_title("Braid stability verdicts")
    ax.legend(loc="upper left", fontsize=8)
    p = os.path.join(run_dir, "verdicts.png")
    fig.savefig(p, dpi=130, bbox_inches="tight")
    plt.close(fig)
    out.append(p)

    fig, ax = plt.subplots(figsize=(7, 4.2))
    ok = [r for r in rows if r["entropy_perturbed"] == r["entropy_perturbed"]]
    ax.plot([r["hofer_norm"] for r in ok],
            [r["entropy_perturbed"] for r in ok], "o-", label="perturbed")
    if rows:
        ax.axhline(rows[0]["entropy_base"], color="k", lw=1, label="base")
    if delta == delta:
        ax.axvline(delta, color="k", ls="--", lw=1)
    ax.set_xlabel("Hofer norm of the perturbation")
    ax.set_ylabel("braid entropy estimate")
    ax.set_title("Entropy across the sweep")
    ax.legend(fontsize=8)
    p = os.path.join(run_dir, "entropy.png")
    fig.savefig(p, dpi=130, bbox_inches="tight")
    plt.close(fig)
    out.append(p)
    return out
