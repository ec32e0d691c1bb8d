"""Command-line entry point.

Subcommands: bifurcate, spectrum, evolve, branch-point, sample.  Options
may come from a flat key=value config file (--config); explicit flags
take precedence over the file, which takes precedence over defaults.
Each run writes into its own timestamped directory under the output
root (flag --output-root, else $BIWHITHAM_OUTPUT_ROOT, else cwd) and
finishes with a manifest of sha256 checksums.

Exit codes: 0 success, 2 bad input, 3 numerical failure, 4 I/O failure.
"""

import argparse
import csv
import json
import os
import sys
import time

import numpy as np

from . import io as bio
from .continuation import ContinuationConfig, continue_branch, sample_branch
from .errors import BiwhithamError, BlowUpError, CorrectorError, EigenError, \
    RootFindError, TargetRangeError
from .evolution import evolve, l2_error, save_state, state_from_point, \
    traveling_reference
from .models import get_model, solve_positive_branch_point
from .profile_solver import refine_to_grid
from .stability import Thresholds, classify, mu_mesh, sweep
from .transforms import CosineGrid

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def load_config(path):
    """Flat key=value file; blank lines and '#' comments ignored."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _apply_config(argv, parser, subparsers, args):
    """Re-parse with config-file values installed as subcommand defaults.

    Explicit command-line flags still win because argparse defaults only
    apply to options that were not given.
    """
    if not getattr(args, "config", None):
        return args
    cfg = load_config(args.config)
    sp = subparsers[args.command]
    defaults = {}
    for action in sp._actions:
        if action.dest in cfg:
            raw = cfg[action.dest]
            defaults[action.dest] = action.type(raw) if action.type else raw
    sp.set_defaults(**defaults)
    return parser.parse_args(argv)


def make_run_dir(command, output_root=None):
    root = output_root or os.environ.get("BIWHITHAM_OUTPUT_ROOT") or os.getcwd()
    stamp = time.strftime("%Y%m%dT%H%M%S")
    base = os.path.join(root, f"{command}-{stamp}")
    run_dir = base
    n = 1
    while os.path.exists(run_dir):
        run_dir = f"{base}-{n}"
        n += 1
    os.makedirs(run_dir)
    return run_dir


def _parse_floats(text):
    return [float(tok) for tok in text.split(",") if tok.strip()]


def cmd_bifurcate(args):
    model = get_model(args.model)
    config = ContinuationConfig(
        kappa=args.kappa, n_points=args.n_points, step=args.step,
        eps0=args.eps0, max_steps=args.max_steps,
        max_height=args.max_height,
        fold_stop=args.fold_stop if args.fold_stop > 0 else None)
    branch = continue_branch(model, config)
    run_dir = make_run_dir("bifurcate", args.output_root)
    bio.write_branch_json(os.path.join(run_dir, "branch.json"), branch)
    bio.write_branch_csv(os.path.join(run_dir, "branch.csv"), branch)
    bio.write_manifest(run_dir, extra={"command": "bifurcate",
                                       "stop_reason": branch.stop_reason})
    print(f"{len(branch.points)} points, stop: {branch.stop_reason}")
    print(run_dir)
    return EXIT_OK


def cmd_sample(args):
    branch = bio.read_branch_json(args.branch_file)
    model = get_model(branch.model_id)
    heights = _parse_floats(args.heights)
    points = sample_branch(branch, heights, model=model)
    run_dir = make_run_dir("sample", args.output_root)
    doc = {"model": branch.model_id, "kappa": branch.kappa,
           "samples": [{"waveheight": h, "c": p.c,
                        "values": [float(v) for v in p.values]}
                       for h, p in zip(heights, points)]}
    with open(os.path.join(run_dir, "samples.json"), "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
    bio.write_manifest(run_dir, extra={"command": "sample"})
    for h, p in zip(heights, points):
        print(f"waveheight {h:g}: c = {p.c:.10g}")
    print(run_dir)
    return EXIT_OK


def cmd_spectrum(args):
    branch = bio.read_branch_json(args.branch_file)
    model = get_model(branch.model_id)
    point = sample_branch(branch, [args.height], model=model)[0]
    grid = CosineGrid(branch.kappa, branch.n_points)
    sw = sweep(model, point, grid, mus=mu_mesh(args.mu_delta),
               n_modes=args.n_modes, workers=args.workers)
    flags = classify(sw, Thresholds())
    run_dir = make_run_dir("spectrum", args.output_root)
    bio.write_spectrum_csv(os.path.join(run_dir, "spectrum.csv"), sw)
    bio.write_growth_csv(os.path.join(run_dir, "growth.csv"), sw)
    bio.write_spectrum_meta(os.path.join(run_dir, "spectrum.json"), sw, flags)
    bio.write_manifest(run_dir, extra={"command": "spectrum"})
    for key in ("unstable", "modulational", "coperiodic", "high_frequency"):
        print(f"{key}: {flags[key]}")
    print(f"max_growth: {flags['max_growth']:.6g}")
    print(run_dir)
    return EXIT_OK


def cmd_branch_point(args):
    c_star, phi_star = solve_positive_branch_point(args.kappa, n0=args.n0)
    run_dir = make_run_dir("branch-point", args.output_root)
    doc = {"kappa": args.kappa, "n0": args.n0,
           "c_star": c_star, "phi_star": phi_star,
           "psi_star": c_star * phi_star - 0.5 * phi_star**2}
    with open(os.path.join(run_dir, "branch_point.json"), "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
    bio.write_manifest(run_dir, extra={"command": "branch-point"})
    print(f"c_star = {c_star:.10g}, phi_star = {phi_star:.10g}")
    print(run_dir)
    return EXIT_OK


def cmd_evolve(args):
    branch = bio.read_branch_json(args.branch_file)
    if branch.model_id not in ("ej", "ej-positive"):
        raise ValueError("time evolution is implemented for the first "
                         "model system only ('ej' / 'ej-positive')")
    model = get_model(branch.model_id)
    point = sample_branch(branch, [args.height], model=model)[0]
    grid = CosineGrid(branch.kappa, branch.n_points)
    if args.m_points > 2 * branch.n_points:
        fine = CosineGrid(branch.kappa, args.m_points // 2)
        point = refine_to_grid(model, point, grid, fine)
        grid = fine
    state = state_from_point(point, grid, args.m_points)
    state0 = state.copy()
    run_dir = make_run_dir("evolve", args.output_root)
    save_state(os.path.join(run_dir, "state_initial.bin"), state)
    stride = args.log_every or max(1, int(round(args.t_final / args.dt / 200)))
    try:
        log = evolve(state, args.t_final, args.dt, log_every=stride,
                     reference_speed=point.c)
        blew_up = False
    except BlowUpError as exc:
        log = exc.log if hasattr(exc, "log") else None
        blew_up = True
        print(f"blow-up: {exc}", file=sys.stderr)
    save_state(os.path.join(run_dir, "state_final.bin"), state)
    if log is not None:
        with open(os.path.join(run_dir, "log.csv"), "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "l2_residual", "max_norm", "tail_energy"])
            for row in zip(log.times, log.l2_residual, log.max_norm, log.tail):
                writer.writerow([bio.FLOAT_FMT % v for v in row])
    if blew_up:
        bio.write_manifest(run_dir, extra={"command": "evolve",
                                           "blow_up": True})
        print(run_dir)
        return EXIT_NUMERICAL
    err = l2_error(state, traveling_reference(state0, point.c, state.t))
    bio.write_manifest(run_dir, extra={"command": "evolve",
                                       "l2_error_vs_translate": err})
    print(f"t = {state.t:g}, L2 error vs translated initial data: {err:.6g}")
    print(run_dir)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="biwhitham",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers = {}

    def common(p):
        p.add_argument("--config", help="flat key=value options file")
        p.add_argument("--output-root",
                       help="where run directories are created "
                            "(default $BIWHITHAM_OUTPUT_ROOT or cwd)")

    p = subparsers["bifurcate"] = sub.add_parser("bifurcate", help="trace a traveling-wave branch")
    common(p)
    p.add_argument("--model", default="ej",
                   choices=["ej", "ej-positive", "hp", "bw"])
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--n-points", type=int, default=256)
    p.add_argument("--step", type=float, default=0.001)
    p.add_argument("--eps0", type=float, default=1e-5)
    p.add_argument("--max-steps", type=int, default=200000)
    p.add_argument("--max-height", type=float, default=None)
    p.add_argument("--fold-stop", type=int, default=0,
                   help="stop after this many turning points (0 = off)")
    p.set_defaults(func=cmd_bifurcate)

    p = subparsers["sample"] = sub.add_parser("sample", help="extract waves at given heights")
    common(p)
    p.add_argument("branch_file")
    p.add_argument("--heights", default=None,
                   help="comma-separated waveheights")
    p.set_defaults(func=cmd_sample)

    p = subparsers["spectrum"] = sub.add_parser("spectrum", help="Bloch-parameter stability sweep")
    common(p)
    p.add_argument("branch_file")
    p.add_argument("--height", type=float, default=None)
    p.add_argument("--n-modes", type=int, default=50)
    p.add_argument("--mu-delta", type=float, default=1.0 / 500.0)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_spectrum)

    p = subparsers["branch-point"] = sub.add_parser("branch-point",
                       help="locate the positive-branch bifurcation point")
    common(p)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--n0", type=int, default=1)
    p.set_defaults(func=cmd_branch_point)

    p = subparsers["evolve"] = sub.add_parser("evolve", help="time-evolve a wave of the first model")
    common(p)
    p.add_argument("branch_file")
    p.add_argument("--height", type=float, default=None)
    p.add_argument("--m-points", type=int, default=4096)
    p.add_argument("--dt", type=float, default=0.001)
    p.add_argument("--t-final", type=float, default=None)
    p.add_argument("--log-every", type=int, default=0)
    p.set_defaults(func=cmd_evolve)

    return parser, subparsers


def _check_required(args):
    needed = {"sample": ["heights"], "spectrum": ["height"],
              "evolve": ["height", "t_final"]}
    for dest in needed.get(args.command, []):
        if getattr(args, dest) is None:
            raise ValueError(f"--{dest.replace('_', '-')} is required "
                             "(flag or config file)")


def main(argv=None):
    parser, subparsers = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config(argv, parser, subparsers, args)
        _check_required(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        return args.func(args)
    except (ValueError, TargetRangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (CorrectorError, BlowUpError, EigenError, RootFindError,
            BiwhithamError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
