"""Regenerate the CSV of every figure preset and report the wall time of each."""

import argparse
import os
import time

from chiralfiber.errors import ChiralFiberError
from chiralfiber.scenarios import cmd_figure, figure_ids


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--outdir", default="figures")
    p.add_argument("--only", nargs="*", help="subset of figure ids")
    p.add_argument("--workers", type=int, default=None)
    args = p.parse_args()
    os.makedirs(args.outdir, exist_ok=True)
    for fid in args.only or figure_ids():
        t0 = time.perf_counter()
        try:
            table = cmd_figure(fid, workers=args.workers)
        except ChiralFiberError as exc:
            print(f"{fid:8s} FAILED  {type(exc).__name__}: {exc}")
            continue
        path = os.path.join(args.outdir, f"{fid}.csv")
        table.write(path)
        print(f"{fid:8s} {len(table):6d} rows  {time.perf_counter() - t0:6.1f} s  -> {path}")


if __name__ == "__main__":
    main()
