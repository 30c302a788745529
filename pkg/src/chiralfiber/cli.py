"""Command-line entry point.

    chiralfiber modes|rates|ddi|dynamics --config run.json --out table.csv
    chiralfiber figure fig12 --out fig12.csv

Exit status is 0 on success and the ``exit_code`` of the raised error
otherwise (2 config, 3 solver/domain, 4 multimode, 5 quadrature,
6 integrator).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .errors import ChiralFiberError, ConfigError
from .scenarios import cache
from .scenarios.commands import cmd_figure, run_command
from .scenarios.config import RunConfig
from .scenarios.presets import figure_config, figure_ids

OUTPUT_DIR_ENV = "CHIRALFIBER_OUTPUT_DIR"

log = logging.getLogger("chiralfiber")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chiralfiber", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("modes", "rates", "ddi", "dynamics", "figure"):
        sp = sub.add_parser(name)
        if name == "figure":
            sp.add_argument("figure_id", help="preset id, e.g. fig4b or fig22")
            sp.add_argument("--config", help="JSON file with fields overriding the preset")
            sp.add_argument("--dump-config", action="store_true", help="print the resolved config and exit")
        else:
            sp.add_argument("--config", help="run configuration (JSON); defaults if omitted")
        sp.add_argument("--out", help="output CSV path (stdout if omitted)")
        sp.add_argument("--baseline-single-atom", action="store_true", help="add single-atom reference runs")
        sp.add_argument("--no-cache", action="store_true", help="re-solve guided modes on every lookup")
        sp.add_argument("--radial-samples", type=int, help="number of radial profile samples (modes)")
        sp.add_argument("--workers", type=int, help="worker processes for sweeps")
        sp.add_argument("-v", "--verbose", action="store_true")
    sub.add_parser("list", help="list figure presets")
    return p


def _output_path(out):
    outdir = os.environ.get(OUTPUT_DIR_ENV)
    if outdir:
        os.makedirs(outdir, exist_ok=True)
        return os.path.join(outdir, os.path.basename(out) if out else "result.csv")
    return out


def _load_overrides(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return data


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        print("\n".join(figure_ids()))
        return 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    cache.set_cache_enabled(not args.no_cache)

    if args.command == "figure":
        overrides = _load_overrides(args.config) if args.config else {}
        if args.radial_samples is not None:
            overrides["radial_samples"] = args.radial_samples
        if args.dump_config:
            _, cfg = figure_config(args.figure_id, overrides)
            print(cfg.to_json(indent=2))
            return 0
        table = cmd_figure(args.figure_id, overrides, workers=args.workers, baseline_single_atom=args.baseline_single_atom)
    else:
        cfg = RunConfig.load(args.config) if args.config else RunConfig()
        if args.radial_samples is not None:
            cfg = cfg.replace(radial_samples=args.radial_samples)
        if args.baseline_single_atom:
            cfg = cfg.replace(baseline="single")
        out = args.out or cfg.output.path
        args.out = out
        table = run_command(args.command, cfg, workers=args.workers)

    path = _output_path(args.out)
    if path:
        table.write(path)
        log.info("wrote %d rows to %s", len(table), path)
    else:
        sys.stdout.write(table.to_csv())
    return 0


def main(argv=None) -> int:
    try:
        return run(argv)
    except ChiralFiberError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
