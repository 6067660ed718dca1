"""Experiment harness: subcommands wiring enumeration -> construction ->
local invariants -> statistics, with reproducible CSV/JSON artifacts.

Artifact layout
---------------
CSV files start with two comment lines::

    # run_config: {...compact JSON...}
    # content_hash: sha256:<hex>

where the hash covers every byte after the content_hash line (header and
rows). JSON artifacts are objects {run_config, content_hash, payload} with
the hash taken over the canonical (sorted-keys, compact) payload dump. In
both formats a rerun of the same config is byte-identical.

Integer-exact fields stay integers; rationals are serialized "num/den";
floats appear only inside stats payloads.

Exit codes: 0 ok, 2 config error, 3 budget exceeded, 4 internal invariant
violation (including the bug sentinel: an admissible D whose sphere came
back empty, which the admissibility theory rules out).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .equistats import (
    DEFAULT_CAP_SEED,
    SampleBatch,
    compute_report,
    make_caps,
    sample_batch,
)
from .ortho import GridClass, InternalInvariantError, ShapeClass, grid
from .padic import diagonalize, hasse_invariant, is_isotropic
from .sphere import (
    BudgetExceeded,
    canonical_orbit_rep,
    enumerate_sphere_coords,
    is_admissible,
    orbit_info,
    stabilizer_size,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_INVARIANT = 4


@dataclass(frozen=True)
class RunConfig:
    cmd: str
    d: int
    D_values: tuple[int, ...]
    p: int | None
    mode: str
    seed: int
    budget: float | None
    fmt: str

    def validate(self) -> None:
        if self.d < 3:
            raise ValueError("need d >= 3")
        if not self.D_values:
            raise ValueError("need --D or --D-seq")
        if any(D < 1 for D in self.D_values):
            raise ValueError("D must be positive")
        if self.mode not in ("orbit", "raw"):
            raise ValueError("mode must be orbit or raw")
        if self.budget is not None and self.budget <= 0:
            raise ValueError("budget must be positive")

    def to_dict(self) -> dict:
        return {
            "cmd": self.cmd,
            "d": self.d,
            "D": list(self.D_values),
            "p": self.p,
            "mode": self.mode,
            "seed": self.seed,
            "budget": self.budget,
            "format": self.fmt,
        }


# ----------------------------------------------------------- serialization


def _frac(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _parse_frac(s: str) -> Fraction:
    num, den = s.split("/")
    return Fraction(int(num), int(den))


def _pack_orbit(t_orbit) -> str:
    return "|".join(":".join(_frac(c) for c in t) for t in t_orbit)


def _unpack_orbit(s: str):
    return tuple(
        tuple(_parse_frac(c) for c in part.split(":")) for part in s.split("|")
    )


def render_csv(config: RunConfig, header: list[str], rows: list[list[str]]) -> str:
    body = ",".join(header) + "\n"
    body += "".join(",".join(row) + "\n" for row in rows)
    digest = hashlib.sha256(body.encode()).hexdigest()
    cfg = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))
    return f"# run_config: {cfg}\n# content_hash: sha256:{digest}\n{body}"


def render_json(config: RunConfig, payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256(canonical.encode()).hexdigest()
    doc = {
        "run_config": config.to_dict(),
        "content_hash": f"sha256:{digest}",
        "payload": payload,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


# ------------------------------------------------------------- subcommands


def _admissibility_flag(config: RunConfig, D: int) -> int:
    return 1 if is_admissible(config.d, D, config.p) else 0


def _check_sentinel(config: RunConfig, D: int, vecs) -> None:
    if not vecs and is_admissible(config.d, D, config.p):
        raise InternalInvariantError(
            f"admissible D={D} produced an empty sphere (d={config.d})"
        )


def cmd_enumerate(config: RunConfig, out: str | None = None) -> int:
    d = config.d
    header = ["d", "D"] + [f"x{i + 1}" for i in range(d)] + [
        "orbit_id",
        "stab_size",
        "admissible",
    ]
    rows: list[list[str]] = []
    for D in config.D_values:
        vecs = enumerate_sphere_coords(d, D, config.budget)
        _check_sentinel(config, D, vecs)
        flag = _admissibility_flag(config, D)
        if not flag:
            _warn(f"(d={d}, D={D}) is inadmissible" + ("" if vecs else "; sphere is empty"))
        reps = sorted({canonical_orbit_rep(v) for v in vecs})
        rep_ids = {rep: i for i, rep in enumerate(reps)}
        for v in vecs:
            rows.append(
                [str(d), str(D)]
                + [str(c) for c in v]
                + [
                    str(rep_ids[canonical_orbit_rep(v)]),
                    str(stabilizer_size(v)),
                    str(flag),
                ]
            )
    _emit(render_csv(config, header, rows), out)
    return EXIT_OK


def _batch_rows(config: RunConfig, D: int) -> SampleBatch:
    return sample_batch(config.d, D, config.mode, config.budget)


def _shape_columns(dim: int) -> list[str]:
    return [f"g{i + 1}{j + 1}" for i in range(dim) for j in range(dim)]


def cmd_shapes(config: RunConfig, out: str | None = None) -> int:
    d = config.d
    dim = d - 1
    header = (
        ["d", "D"]
        + [f"x{i + 1}" for i in range(d)]
        + ["weight", "dim", "canonical"]
        + _shape_columns(dim)
    )
    rows = []
    for D in config.D_values:
        batch = _batch_rows(config, D)
        _check_sentinel(config, D, batch.reps)
        for rep, weight, g in zip(batch.reps, batch.weights, batch.grids):
            sh = g.shape
            rows.append(
                [str(d), str(D)]
                + [str(c) for c in rep]
                + [str(weight), str(sh.dim), str(int(sh.canonical))]
                + [str(e) for row in sh.canonical_gram for e in row]
            )
    _emit(render_csv(config, header, rows), out)
    return EXIT_OK


def cmd_grids(config: RunConfig, out: str | None = None) -> int:
    d = config.d
    dim = d - 1
    header = (
        ["d", "D"]
        + [f"x{i + 1}" for i in range(d)]
        + ["weight", "dim", "canonical"]
        + _shape_columns(dim)
        + [f"t{i + 1}" for i in range(dim)]
        + ["t_orbit"]
    )
    rows = []
    for D in config.D_values:
        batch = _batch_rows(config, D)
        _check_sentinel(config, D, batch.reps)
        for rep, weight, g in zip(batch.reps, batch.weights, batch.grids):
            sh = g.shape
            rows.append(
                [str(d), str(D)]
                + [str(c) for c in rep]
                + [str(weight), str(sh.dim), str(int(sh.canonical))]
                + [str(e) for row in sh.canonical_gram for e in row]
                + [_frac(c) for c in g.t]
                + [_pack_orbit(g.t_orbit)]
            )
    _emit(render_csv(config, header, rows), out)
    return EXIT_OK


def load_grid_batch(path: str) -> SampleBatch:
    """Rebuild a SampleBatch from a grids CSV so downstream statistics can
    run off the artifact instead of recomputing the construction."""
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    cfg_line = next(ln for ln in lines if ln.startswith("# run_config:"))
    cfg = json.loads(cfg_line.split(":", 1)[1])
    data = [ln for ln in lines if ln and not ln.startswith("#")]
    header = data[0].split(",")
    idx = {name: i for i, name in enumerate(header)}
    d = cfg["d"]
    dim = d - 1
    reps = []
    weights = []
    grids = []
    D_seen = None
    for ln in data[1:]:
        parts = ln.split(",")
        D_seen = int(parts[idx["D"]])
        rep = tuple(int(parts[idx[f"x{i + 1}"]]) for i in range(d))
        weight = int(parts[idx["weight"]])
        gram = tuple(
            tuple(int(parts[idx[f"g{i + 1}{j + 1}"]]) for j in range(dim))
            for i in range(dim)
        )
        canonical = bool(int(parts[idx["canonical"]]))
        shape = ShapeClass(dim, D_seen, gram, canonical)
        t = tuple(_parse_frac(parts[idx[f"t{i + 1}"]]) for i in range(dim))
        t_orbit = _unpack_orbit(parts[idx["t_orbit"]])
        reps.append(rep)
        weights.append(weight)
        grids.append(GridClass(shape, t, t_orbit))
    if D_seen is None:
        raise ValueError("grids artifact has no rows")
    return SampleBatch(
        d,
        D_seen,
        cfg["mode"],
        sum(weights),
        tuple(reps),
        tuple(weights),
        tuple(grids),
    )


_CONTROL_FORMS = (
    ("diag(1,1,1,p)", lambda p: ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, p))),
    ("diag(1,1,p,p)", lambda p: ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, p, 0), (0, 0, 0, p))),
)


def cmd_genus_check(config: RunConfig, out: str | None = None) -> int:
    """Hasse invariant and isotropy of every orthogonal-lattice Gram over
    the configured odd prime, plus two injected non-sphere control forms."""
    p = config.p if config.p is not None else 3
    rows = []
    skipped = []
    violations = 0
    for D in config.D_values:
        if D % p == 0:
            skipped.append({"D": D, "reason": "p divides D"})
            continue
        batch = _batch_rows(config, D)
        _check_sentinel(config, D, batch.reps)
        for rep, weight, g in zip(batch.reps, batch.weights, batch.grids):
            gram = [list(r) for r in g.shape.canonical_gram]
            h = hasse_invariant(gram, p)
            iso = is_isotropic(gram, p)
            # Isotropy is only guaranteed for rank >= 3; a rank-2 form is
            # anisotropic over Q_p whenever -det is a non-residue, so for
            # d = 3 only the trivial-Hasse claim is checkable.
            ok = h == 1 and (iso or g.shape.dim < 3)
            if not ok:
                violations += 1
            rows.append(
                {
                    "D": D,
                    "rep": list(rep),
                    "weight": weight,
                    "p": p,
                    "hasse": h,
                    "isotropic": iso,
                    "control": False,
                }
            )
    controls = []
    for name, build in _CONTROL_FORMS:
        gram = [list(r) for r in build(p)]
        controls.append(
            {
                "form": name,
                "p": p,
                "entries": [_frac(Fraction(e)) for e in diagonalize(gram).entries],
                "hasse": hasse_invariant(gram, p),
                "isotropic": is_isotropic(gram, p),
                "control": True,
            }
        )
    payload = {
        "rows": rows,
        "skipped": skipped,
        "controls": controls,
        "violations": violations,
    }
    _emit(render_json(config, payload), out)
    return EXIT_OK


def _report_payload(config: RunConfig, batch: SampleBatch) -> dict:
    caps = make_caps(batch.d, seed=config.seed)
    return compute_report(batch, caps).to_dict()


def cmd_stats(config: RunConfig, out: str | None = None, src: str | None = None) -> int:
    if src is not None:
        batch = load_grid_batch(src)
    else:
        D = config.D_values[0]
        batch = _batch_rows(config, D)
        _check_sentinel(config, D, batch.reps)
    payload = _report_payload(config, batch)
    _emit(render_json(config, payload), out)
    return EXIT_OK


def _first_last_verdict(values: list[float]) -> dict:
    return {
        "first": values[0],
        "last": values[-1],
        "strictly_decreasing": values[-1] < values[0],
    }


def cmd_report(config: RunConfig, out: str | None = None) -> int:
    """Reports across the D sequence plus a first-to-last trend verdict
    per statistic family."""
    reports = []
    for D in config.D_values:
        batch = _batch_rows(config, D)
        _check_sentinel(config, D, batch.reps)
        reports.append(_report_payload(config, batch))
    trend: dict = {}
    if len(reports) >= 2:
        trend["cap_discrepancy"] = _first_last_verdict(
            [r["cap_discrepancy"] for r in reports]
        )
        axes = min(len(r["torus_ks"]) for r in reports)
        trend["torus_ks"] = [
            _first_last_verdict([r["torus_ks"][i] for r in reports])
            for i in range(axes)
        ]
        if all(r["shape_chi2"] is not None for r in reports):
            trend["shape_chi2"] = _first_last_verdict(
                [r["shape_chi2"] for r in reports]
            )
        checks = [trend["cap_discrepancy"]["strictly_decreasing"]] + [
            t["strictly_decreasing"] for t in trend["torus_ks"]
        ]
        if "shape_chi2" in trend:
            checks.append(trend["shape_chi2"]["strictly_decreasing"])
        trend["verdict"] = "decreasing" if all(checks) else "mixed"
    payload = {"reports": reports, "trend": trend}
    _emit(render_json(config, payload), out)
    return EXIT_OK


# -------------------------------------------------------------- dispatcher


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="orthogrids",
        description="enumerate primitive sphere points and analyze their "
        "orthogonal-lattice shapes, marked grids, and statistics",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("enumerate", "shapes", "grids", "genus-check", "stats", "report"):
        sp = sub.add_parser(name)
        sp.add_argument("--d", type=int, required=True)
        sp.add_argument("--D", type=int, default=None)
        sp.add_argument("--D-seq", dest="D_seq", type=str, default=None,
                        help="comma-separated D values")
        sp.add_argument("--p", type=int, default=None)
        sp.add_argument("--mode", choices=("orbit", "raw"), default="orbit")
        sp.add_argument("--out", type=str, default=None)
        sp.add_argument("--seed", type=int, default=DEFAULT_CAP_SEED)
        sp.add_argument("--budget", type=float, default=None)
        sp.add_argument("--format", dest="fmt", choices=("csv", "json"),
                        default=None)
        if name == "stats":
            sp.add_argument("--in", dest="src", type=str, default=None,
                            help="grids CSV artifact to consume instead of "
                            "recomputing")
    return ap


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.D is not None and args.D_seq is not None:
        raise ValueError("give either --D or --D-seq, not both")
    if args.D is not None:
        values: tuple[int, ...] = (args.D,)
    elif args.D_seq is not None:
        try:
            values = tuple(int(tok) for tok in args.D_seq.split(",") if tok)
        except ValueError as exc:
            raise ValueError(f"bad --D-seq: {exc}") from None
    else:
        values = ()
    fmt = args.fmt
    if fmt is None:
        fmt = "json" if args.command in ("genus-check", "stats", "report") else "csv"
    cfg = RunConfig(
        cmd=args.command,
        d=args.d,
        D_values=values,
        p=args.p,
        mode=args.mode,
        seed=args.seed,
        budget=args.budget,
        fmt=fmt,
    )
    cfg.validate()
    if cfg.p is not None and (cfg.p < 3 or cfg.p % 2 == 0):
        raise ValueError("p must be an odd prime")
    return cfg


_HANDLERS = {
    "enumerate": cmd_enumerate,
    "shapes": cmd_shapes,
    "grids": cmd_grids,
    "genus-check": cmd_genus_check,
    "stats": cmd_stats,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    try:
        config = config_from_args(args)
        handler = _HANDLERS[config.cmd]
        if config.cmd == "stats":
            return handler(config, out=args.out, src=args.src)
        return handler(config, out=args.out)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InternalInvariantError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
