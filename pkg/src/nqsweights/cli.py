"""Command line front end: ``nqsweights {sweep,analyze,ed}``.

Exit codes: 0 success, 1 runtime failure, 2 usage/config error,
3 no interior extremum found by ``analyze``.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .analysis import detect_transition, export_projection_tracks, pca, select_weight_columns
from .exceptions import CapacityError, NoInteriorExtremumError, NqsError
from .io import (
    ConfigError,
    RunConfig,
    read_matrix_csv,
    read_sweep_couplings,
    write_json,
    write_matrix_csv,
    write_sweep,
)
from .spin_systems import build_j1j2, build_tfim, exact_ground_state
from .sweep import MODEL_DEFAULTS, run_sweep

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, EXIT_NO_SIGNATURE = 0, 1, 2, 3

log = logging.getLogger("nqsweights")


def _parse_grid(text):
    try:
        lo, hi, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MIN:MAX:STEP, got {text!r}")
    return lo, hi, step


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nqsweights", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sweep", help="train RBMs across a coupling grid")
    s.add_argument("--config", type=Path, help="JSON run config (or a previous manifest.json)")
    s.add_argument("--out", help="output directory")
    s.add_argument("--model", choices=["tfim", "j1j2"])
    s.add_argument("--strategy", choices=["independent", "adiabatic-forward", "adiabatic-backward"])
    s.add_argument("--seed", type=int)
    s.add_argument("--grid", type=_parse_grid, metavar="MIN:MAX:STEP")
    s.add_argument("--steps", type=int)
    s.add_argument("--lr", type=float)
    s.add_argument("--optimizer", choices=["sgd", "adam"])
    s.add_argument("--boundary", choices=["periodic", "open"])
    s.add_argument("--n-sites", type=int)
    s.add_argument("--alpha", type=int)
    s.add_argument("--field", choices=["real", "complex"])
    s.add_argument("--init-scale", type=float, help="std of the Gaussian initial parameters")
    s.add_argument("--fixed-coupling", type=float, help="J for tfim, J1 for j1j2")

    a = sub.add_parser("analyze", help="PCA of a sweep's weights and transition detection")
    a.add_argument("sweep_dir", type=Path)
    a.add_argument("--components", type=int, default=3)
    a.add_argument("--component-index", type=int, default=1, help="PC used for detection (1-based)")
    a.add_argument("--exclude-bias", action="store_true", help="analyze W only, without hidden biases")
    a.add_argument("--out", type=Path, help="defaults to the sweep directory")

    e = sub.add_parser("ed", help="exact ground-state energy")
    e.add_argument("--model", choices=["tfim", "j1j2"], required=True)
    e.add_argument("--coupling", type=float, required=True, help="h for tfim, J2/J1 for j1j2")
    e.add_argument("--n-sites", type=int)
    e.add_argument("--fixed-coupling", type=float, help="J for tfim (default -1), J1 for j1j2 (default 1)")
    e.add_argument("--boundary", choices=["periodic", "open"], default="periodic")
    e.add_argument("--dump", type=Path, help="write the ground-state vector to this .npy file")
    return parser


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    overrides = {
        "out": args.out, "model": args.model, "strategy": args.strategy, "seed": args.seed,
        "steps": args.steps, "learning_rate": args.lr, "optimizer": args.optimizer,
        "boundary": args.boundary, "n_sites": args.n_sites, "alpha": args.alpha,
        "field": args.field, "init_scale": args.init_scale, "fixed_coupling": args.fixed_coupling,
    }
    if args.grid:
        overrides.update(grid_min=args.grid[0], grid_max=args.grid[1], grid_step=args.grid[2])
    if args.model and args.model != cfg.model:
        # model-dependent defaults must be re-derived for the new model
        cfg = replace(cfg, n_sites=None, fixed_coupling=None, grid_min=None, grid_max=None,
                      grid_step=None, alpha=None, field=None, init_scale=None)
    return replace(cfg, **{k: v for k, v in overrides.items() if v is not None}).resolved()


def cmd_sweep(args) -> int:
    cfg = _config_from_args(args)
    grid = cfg.grid()
    log.info("sweep %s %s over %d points -> %s", cfg.model, cfg.strategy, len(grid), cfg.out)
    result = run_sweep(grid, cfg.training(), cfg.strategy, cfg.seed, alpha=cfg.alpha, field=cfg.field)
    write_sweep(result, cfg, cfg.out)
    if result.failed_couplings:
        print("failed couplings: " + ", ".join(f"{c:g}" for c in result.failed_couplings), file=sys.stderr)
        return EXIT_RUNTIME
    print(f"wrote {len(grid)} grid points to {cfg.out}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    sweep_dir = args.sweep_dir
    out = args.out or sweep_dir
    try:
        header, weights = read_matrix_csv(sweep_dir / "weights.csv")
        couplings = read_sweep_couplings(sweep_dir)
    except (OSError, NqsError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if len(couplings) != len(weights):
        print("input error: results.csv and weights.csv row counts differ", file=sys.stderr)
        return EXIT_USAGE

    header, weights = select_weight_columns(header, weights, not args.exclude_bias)
    result = pca(weights, args.components)
    cols, table = export_projection_tracks(result, couplings)
    write_matrix_csv(out / "pca.csv", cols, table)
    write_matrix_csv(out / "components.csv", header, result.components)
    try:
        est = detect_transition(result, couplings, args.component_index)
    except NoInteriorExtremumError as exc:
        write_json(out / "transition.json", {"found": False, "component_index": args.component_index,
                                             "message": "no interior extremum"})
        print(f"no interior extremum: {exc}", file=sys.stderr)
        return EXIT_NO_SIGNATURE
    payload = {"found": True, "include_bias": not args.exclude_bias, **est.to_dict(),
               "explained_variance": [float(v) for v in result.explained_variance]}
    write_json(out / "transition.json", payload)
    print(f"{est.coupling_at_extremum:.10g}")
    return EXIT_OK


def cmd_ed(args) -> int:
    d = MODEL_DEFAULTS[args.model]
    n = d["n_sites"] if args.n_sites is None else args.n_sites
    fixed = d["fixed"] if args.fixed_coupling is None else args.fixed_coupling
    if args.model == "tfim":
        op = build_tfim(n, fixed, args.coupling, args.boundary)
    else:
        op = build_j1j2(n, fixed, args.coupling * fixed, args.boundary)
    gs = exact_ground_state(op)
    print(f"{gs.energy:.15g}")
    if args.dump:
        np.save(args.dump, gs.amplitudes)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")
    handler = {"sweep": cmd_sweep, "analyze": cmd_analyze, "ed": cmd_ed}[args.command]
    try:
        return handler(args)
    except (ConfigError, CapacityError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NqsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
