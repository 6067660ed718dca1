#!/usr/bin/env python3
"""Sweep the equidistribution statistics across a sequence of levels.

For each D in the sequence this samples the sphere in orbit mode, computes
the discrepancy report, and prints one table row.  The interesting output
is whether cap discrepancy, torus KS, and the shape statistic shrink as D
grows (they should, for admissible sequences with ordinary sphere sizes).

    python3 scripts/trend_sweep.py --d 3 --D-seq 101,1009,10009,100009
    python3 scripts/trend_sweep.py --d 4 --D-seq 10007,100003 --p 3
"""

import argparse
import sys

from orthogrids.equistats import compute_report, make_caps, sample_batch
from orthogrids.sphere import is_admissible


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--D-seq", dest="d_seq", type=str, required=True,
                    help="comma-separated levels, e.g. 101,1009,10009")
    ap.add_argument("--p", type=int, default=None,
                    help="optional odd prime for refined admissibility check")
    ap.add_argument("--seed", type=int, default=20406)
    args = ap.parse_args()

    levels = [int(tok) for tok in args.d_seq.split(",")]
    caps = None
    header = f"{'D':>8} {'n':>8} {'cap_disc':>10} {'torus_ks':>24} {'shape':>10} {'joint':>10}"
    print(header)
    print("-" * len(header))
    for D in levels:
        if not is_admissible(args.d, D, p=args.p):
            print(f"{D:>8}  (skipped: inadmissible)")
            continue
        batch = sample_batch(args.d, D, mode="orbit")
        if caps is None:
            caps = make_caps(args.d, seed=args.seed)
        report = compute_report(batch, caps=caps)
        ks = "/".join(f"{v:.4f}" for v in report.torus_ks)
        shape = "-" if report.shape_chi2 is None else f"{report.shape_chi2:.4f}"
        joint = "-" if report.joint_chi2 is None else f"{report.joint_chi2:.4f}"
        print(f"{D:>8} {report.n_points:>8} {report.cap_discrepancy:>10.5f} "
              f"{ks:>24} {shape:>10} {joint:>10}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
