"""Deterministic on-disk formats: branch/spectrum files and run manifests.

All floating-point text output uses %.17g so files round-trip exactly
and reruns produce byte-identical artifacts.
"""

import csv
import hashlib
import json
import os

import numpy as np

from .errors import BiwhithamError

FLOAT_FMT = "%.17g"


def _f(x):
    return FLOAT_FMT % float(x)


def write_branch_json(path, branch):
    """Full branch record: model, grid, per-point profiles, stop reason."""
    doc = {
        "model": branch.model_id,
        "kappa": float(branch.kappa),
        "n_points": int(branch.n_points),
        "stop_reason": branch.stop_reason,
        "points": [
            {
                "c": float(p.c),
                "waveheight": float(s["waveheight"]),
                "values": [float(v) for v in p.values],
            }
            for p, s in zip(branch.points, branch.summaries)
        ],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def write_branch_csv(path, branch):
    """Summary table: step, c, waveheight, max, min."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "c", "waveheight", "max", "min"])
        for i, s in enumerate(branch.summaries):
            writer.writerow([i, _f(s["c"]), _f(s["waveheight"]),
                             _f(s["max"]), _f(s["min"])])


def read_branch_json(path):
    """Rebuild a Branch (points and summaries) from its JSON record."""
    from .continuation import Branch, waveheight
    from .profile_solver import ContinuationPoint
    from .transforms import CosineGrid

    with open(path) as fh:
        doc = json.load(fh)
    branch = Branch(model_id=doc["model"], kappa=doc["kappa"],
                    n_points=doc["n_points"], stop_reason=doc["stop_reason"])
    grid = CosineGrid(branch.kappa, branch.n_points)
    for rec in doc["points"]:
        values = np.array(rec["values"], dtype=float)
        point = ContinuationPoint(c=rec["c"], values=values, residual_norm=0.0)
        branch.points.append(point)
        branch.summaries.append({
            "c": rec["c"],
            "waveheight": waveheight(values, grid),
            "max": float(np.max(values)),
            "min": float(np.min(values)),
            "tangent_dc": 0.0,
            "residual": 0.0,
        })
    return branch


def write_spectrum_csv(path, sweep_result):
    """All eigenvalues, one row per (mu, eigenvalue): mu, re, im."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["mu", "re", "im"])
        for sl in sweep_result.slices:
            for lam in sl.eigenvalues:
                writer.writerow([_f(sl.mu), _f(lam.real), _f(lam.imag)])


def write_growth_csv(path, sweep_result):
    """Max growth rate per Bloch parameter: mu, max_re."""
    mus, growth = sweep_result.growth_curve()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["mu", "max_re"])
        for mu, g in zip(mus, growth):
            writer.writerow([_f(mu), _f(g)])


def write_spectrum_meta(path, sweep_result, flags=None):
    doc = {
        "model": sweep_result.model_id,
        "kappa": float(sweep_result.kappa),
        "c": float(sweep_result.c),
        "n_modes": int(sweep_result.n_modes),
        "n_slices": len(sweep_result.slices),
    }
    if flags is not None:
        doc["flags"] = {k: (bool(v) if isinstance(v, (bool, np.bool_)) else float(v))
                        for k, v in flags.items()}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def sha256_file(path):
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(run_dir, extra=None):
    """manifest.json listing every artifact in the run directory with hashes."""
    entries = []
    for name in sorted(os.listdir(run_dir)):
        if name == "manifest.json":
            continue
        full = os.path.join(run_dir, name)
        if os.path.isfile(full):
            entries.append({
                "file": name,
                "bytes": os.path.getsize(full),
                "sha256": sha256_file(full),
            })
    doc = {"files": entries}
    if extra:
        doc.update(extra)
    path = os.path.join(run_dir, "manifest.json")
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
    return path


def verify_manifest(run_dir):
    """Check every hash in manifest.json; raise on any mismatch."""
    path = os.path.join(run_dir, "manifest.json")
    with open(path) as fh:
        doc = json.load(fh)
    for entry in doc["files"]:
        full = os.path.join(run_dir, entry["file"])
        if not os.path.isfile(full):
            raise BiwhithamError(f"manifest lists missing file {entry['file']}")
        if sha256_file(full) != entry["sha256"]:
            raise BiwhithamError(f"checksum mismatch for {entry['file']}")
    return True
