#!/usr/bin/env python3
"""Regenerate the figure renderer's test fixtures from the CLI.

Real artifacts come straight from the subcommands; the two synthetic
torus fixtures (stratified-uniform and single-point) are written in the
same CSV envelope with a correct content hash so the renderer's strict
reader accepts them.

    python3 scripts/make_fixtures.py [--out-dir frontend/test/fixtures]
"""

import argparse
import hashlib
import json
import pathlib
import random
import sys
from fractions import Fraction

from orthogrids.cli import main as cli_main


def synthetic_grid_csv(tag: str, rows: list[list[str]], seed: int) -> str:
    config = {
        "D": [0],
        "budget": None,
        "cmd": "grids",
        "d": 3,
        "format": "csv",
        "mode": "orbit",
        "p": None,
        "seed": seed,
        "synthetic": tag,
    }
    header = "d,D,x1,x2,x3,weight,dim,canonical,g11,g12,g21,g22,t1,t2,t_orbit"
    body = header + "\n" + "".join(",".join(row) + "\n" for row in rows)
    digest = hashlib.sha256(body.encode()).hexdigest()
    line1 = "# run_config: " + json.dumps(config, sort_keys=True, separators=(",", ":"))
    return f"{line1}\n# content_hash: sha256:{digest}\n{body}"


def uniform_rows(n_side: int, seed: int) -> list[list[str]]:
    """One jittered rational point per lattice cell of an n_side grid."""
    rng = random.Random(seed)
    rows = []
    denom = n_side * 64
    for i in range(n_side):
        for j in range(n_side):
            a = Fraction(i * 64 + rng.randrange(64), denom)
            b = Fraction(j * 64 + rng.randrange(64), denom)
            t = f"{a.numerator}/{a.denominator}:{b.numerator}/{b.denominator}"
            rows.append(["3", "0", "1", "0", "0", "1", "2", "1", "2", "1", "1", "2",
                         f"{a.numerator}/{a.denominator}",
                         f"{b.numerator}/{b.denominator}", t])
    return rows


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", type=pathlib.Path,
                    default=pathlib.Path("frontend/test/fixtures"))
    args = ap.parse_args()
    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)

    cli_jobs = [
        ("hexagonal.grids.csv", ["grids", "--d", "3", "--D", "3"]),
        ("medium.grids.csv", ["grids", "--d", "3", "--D", "101"]),
        ("large.grids.csv", ["grids", "--d", "3", "--D", "100003"]),
        ("quaternary.grids.csv", ["grids", "--d", "4", "--D", "18"]),
        ("directions.enumerate.csv", ["enumerate", "--d", "3", "--D", "101"]),
        ("empty.grids.csv", ["grids", "--d", "3", "--D", "7"]),
        ("trend.report.json", ["report", "--d", "3", "--D-seq", "101,1009,10009"]),
    ]
    for name, argv in cli_jobs:
        rc = cli_main(argv + ["--out", str(out / name)])
        if rc != 0:
            print(f"{name}: exit code {rc}", file=sys.stderr)
            return rc
        print(f"wrote {out / name}")

    uniform = synthetic_grid_csv("stratified-uniform", uniform_rows(64, seed=9090), 9090)
    (out / "uniform.grids.csv").write_text(uniform)
    print(f"wrote {out / 'uniform.grids.csv'}")

    point = synthetic_grid_csv(
        "single-point",
        [["3", "0", "1", "0", "0", "937", "2", "1", "2", "1", "1", "2",
          "1/3", "1/3", "1/3:1/3"]],
        seed=7,
    )
    (out / "point.grids.csv").write_text(point)
    print(f"wrote {out / 'point.grids.csv'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
