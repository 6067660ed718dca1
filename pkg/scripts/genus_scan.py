#!/usr/bin/env python3
"""Scan local-invariant agreement over a range of levels.

Runs the genus check for every admissible D in [start, stop) and reports
any violations (there should be none).  Mostly useful as a long-running
smoke test against new primes or dimensions.

    python3 scripts/genus_scan.py --d 4 --start 2 --stop 200 --p 3
"""

import argparse
import json
import pathlib
import sys
import tempfile

from orthogrids.cli import main as cli_main
from orthogrids.sphere import is_admissible


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--start", type=int, default=2)
    ap.add_argument("--stop", type=int, default=100)
    ap.add_argument("--p", type=int, default=3)
    args = ap.parse_args()

    total = bad = skipped = 0
    scratch = pathlib.Path(tempfile.mkdtemp()) / "genus.json"
    for D in range(args.start, args.stop):
        if not is_admissible(args.d, D):
            continue
        rc = cli_main(["genus-check", "--d", str(args.d), "--D", str(D),
                       "--p", str(args.p), "--out", str(scratch)])
        if rc != 0:
            print(f"D={D}: exit code {rc}", file=sys.stderr)
            return rc
        payload = json.loads(scratch.read_text())["payload"]
        total += 1
        skipped += len(payload.get("skipped", []))
        n_bad = payload["violations"]
        bad += n_bad
        if n_bad:
            print(f"D={D}: {n_bad} violations", file=sys.stderr)
    print(f"levels checked: {total}, violations: {bad}, skipped (p | D): {skipped}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
