#!/usr/bin/env python3
"""Dump the full artifact set (enumerate/shapes/grids/stats) for one level.

Thin wrapper over the CLI so the artifacts land with the standard headers
and content hashes.  Output files go to OUTDIR/{d}_{D}.{kind}.{ext}.

    python3 scripts/census.py --d 3 --D 1009 --out-dir runs/
"""

import argparse
import pathlib
import sys

from orthogrids.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, required=True)
    ap.add_argument("--D", type=int, required=True)
    ap.add_argument("--mode", choices=("orbit", "raw"), default="orbit")
    ap.add_argument("--out-dir", type=pathlib.Path, default=pathlib.Path("runs"))
    args = ap.parse_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{args.d}_{args.D}"
    jobs = [
        ("enumerate", "csv"),
        ("shapes", "csv"),
        ("grids", "csv"),
        ("stats", "json"),
    ]
    for cmd, ext in jobs:
        out = args.out_dir / f"{stem}.{cmd}.{ext}"
        rc = cli_main([cmd, "--d", str(args.d), "--D", str(args.D),
                       "--mode", args.mode, "--out", str(out)])
        if rc != 0:
            print(f"{cmd} failed with exit code {rc}", file=sys.stderr)
            return rc
        print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
