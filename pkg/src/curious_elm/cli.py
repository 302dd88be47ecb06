"""Command-line harness: ``celm train | grid | reproduce | wundt``.

Exit codes: 0 success, 2 usage or configuration error, 3 data error,
4 numerical failure.  Standard output carries only the written path and a
one-line summary; everything else goes to standard error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import jsonio
from .arousal import WundtParams, wundt_argmax, wundt_hedonic
from .data import DataError, load_csv
from .experiment import DEFAULT_GRID, RunConfig, grid_search, markdown_table, reproduce, run_experiment
from .network import EmptyNetworkError

log = logging.getLogger("curious_elm")

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 2, 3, 4


class UsageError(Exception):
    pass


def _read_json(path, what: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{what} file not found: {p}")
    try:
        return json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} file {p} is not valid JSON: {exc}") from None


def _run_config(args) -> RunConfig:
    doc = _read_json(args.config, "config") if args.config else {}
    try:
        cfg = RunConfig.from_dict(doc)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad config: {exc}") from None
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    return cfg


def _load(path, cfg: RunConfig | None = None):
    if cfg is None:
        return load_csv(path)
    return load_csv(path, label_column=cfg.label_column, header=cfg.header)


def cmd_train(args) -> str:
    cfg = _run_config(args)
    if args.steps:
        cfg = replace(cfg, keep_steps=True)
    ds = _load(args.data, cfg)
    report = run_experiment(ds, cfg)
    jsonio.dump(report, args.out)
    return (f"{ds.name}: eta_o={report['eta_o']:.2f} eta_a={report['eta_a']:.2f} "
            f"K={report['final_k']} additions={report['additions']} deletions={report['deletions']}")


def cmd_grid(args) -> str:
    cfg = _run_config(args)
    grid = _read_json(args.grid, "grid") if args.grid else DEFAULT_GRID
    if not grid or any(isinstance(v, list) and not v for v in grid.values()):
        raise UsageError("grid is empty")
    ds = _load(args.data, cfg)
    spec = cfg.split_spec(len(ds))
    seeds = range(args.seeds) if args.seed is None else range(args.seed, args.seed + args.seeds)
    try:
        result = grid_search(ds, spec.n_train, spec.n_test, grid, seeds, base=cfg.celm, oracle=args.oracle,
                             stratified=cfg.stratified)
    except ValueError as exc:
        if "grid" in str(exc) or "theta" in str(exc):
            raise UsageError(str(exc)) from None
        raise
    log.info("%d grid tuples evaluated", result["n_tuples"])
    jsonio.dump(result, args.out)
    s = result["summary"]
    return (f"{ds.name} [{result['mode']}]: {result['n_tuples']} tuples, selected #{result['selected']['index']}, "
            f"eta_o={s['eta_o_mean']:.2f}+-{s['eta_o_sd']:.2f} K={s['final_k_mean']:.1f}")


def cmd_reproduce(args) -> str:
    if not Path(args.manifest).is_file():
        raise DataError(f"{args.manifest}: no such manifest")
    result = reproduce(
        args.manifest, seeds=args.seeds, oracle=args.oracle,
        progress=lambda r: log.info("%s done: eta_o %.2f, K %.1f", r["dataset"], r["eta_o_mean"], r["final_k_mean"]),
    )
    out = Path(args.out)
    json_path = out if out.suffix == ".json" else out.with_suffix(".json")
    jsonio.dump(result, json_path)
    json_path.with_suffix(".md").write_text(markdown_table(result), encoding="utf-8")
    args.out = str(json_path)
    ok = [r for r in result["rows"] if r["status"] == "OK"]
    accepted = sum(r["accepted"] for r in ok)
    return f"{len(ok)} datasets run, {len(result['rows']) - len(ok)} skipped, {accepted} within band [{result['mode']}]"


def cmd_wundt(args) -> str:
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    doc = _read_json(args.config, "Wundt parameter") if args.config else {}
    try:
        params = WundtParams(**doc)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad Wundt parameters: {exc}") from None
    grid = np.linspace(0.0, 1.0, args.points)
    hedonic = wundt_hedonic(grid, params)
    best = int(np.argmax(hedonic))
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["stimulation", "hedonic", "is_argmax"])
        for i, (s, h) in enumerate(zip(grid, hedonic)):
            w.writerow([f"{s:.17g}", f"{h:.17g}", int(i == best)])
    log.info("fine-grid argmax at %.3f", wundt_argmax(params))
    return f"{args.points} points, argmax at stimulation {grid[best]:.6g} (H={hedonic[best]:.6g})"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="celm", description="Curious extreme learning machine benchmark harness")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="split, fit and evaluate one run")
    p.add_argument("--data", required=True)
    p.add_argument("--config", help="JSON with CelmConfig and split fields")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--steps", action="store_true", help="include the per-sample step log")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("grid", help="threshold grid search")
    p.add_argument("--data", required=True)
    p.add_argument("--config")
    p.add_argument("--grid", help="JSON mapping axis name to a list of values; default is the full threshold grid")
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--seed", type=int, help="first seed (default 0)")
    p.add_argument("--oracle", action="store_true", help="select on test accuracy (labelled oracle)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("reproduce", help="benchmark table over a dataset manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--seeds", type=int)
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--out", required=True, help="JSON path; the markdown table goes next to it")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("wundt", help="Wundt curve as CSV")
    p.add_argument("--points", type=int, default=1001)
    p.add_argument("--config", help="JSON with WundtParams fields")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_wundt)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s", force=True)
    try:
        summary = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (np.linalg.LinAlgError, ArithmeticError, EmptyNetworkError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(args.out)
    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
