"""Command-line front end: ``gupqm {verify,overlap,spectrum,bethe,mlstate}``.

Output is deterministic: floats use 17 significant digits and nothing
depends on the clock. Exit status is 0 on success, 1 when a suite or
solver fails and 2 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import reports
from .params import ModelParameters


@dataclass(frozen=True)
class RunConfig:
    betas: tuple[float, ...] = (0.1,)
    hbar: float = 1.0
    mass: float = 1.0
    omega: float = 1.0
    n_max: int = 10
    grid_size: int = 1024
    format: str = "csv"
    out: str | None = None

    def __post_init__(self):
        for name in ("hbar", "mass", "omega"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"--{name} must be a positive number, got {v!r}")
        for b in self.betas:
            if not (math.isfinite(b) and b > 0):
                raise ValueError(f"--beta must be a positive number, got {b!r}")
        if self.n_max < 1:
            raise ValueError(f"--n-max must be >= 1, got {self.n_max!r}")
        if self.grid_size < 1:
            raise ValueError(f"--grid-size must be positive, got {self.grid_size!r}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"--format must be csv or json, got {self.format!r}")

    def parameters(self) -> list[ModelParameters]:
        return [ModelParameters(beta=b, hbar=self.hbar, mass=self.mass, omega=self.omega) for b in self.betas]


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _json_value(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    return v


def render(table: reports.Table, config: RunConfig, command: str, extra: dict) -> str:
    if config.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_cell(v) for v in row])
        if table.footer:
            buf.write("# footer\n")
            writer.writerow(["beta", "key", "value"])
            for row in table.footer:
                writer.writerow([_cell(v) for v in row])
        return buf.getvalue()
    meta = {"command": command, **asdict(config), **extra}
    meta["betas"] = list(config.betas)
    doc = {
        "meta": meta,
        "columns": {c: [_json_value(r[i]) for r in table.rows] for i, c in enumerate(table.columns)},
    }
    if table.footer:
        doc["footer"] = [{"beta": _json_value(b), "key": k, "value": _json_value(v)} for b, k, v in table.footer]
    doc["ok"] = table.ok
    return json.dumps(doc, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--beta", type=float, action="append", help="deformation strength (repeatable, default 0.1)")
    common.add_argument("--hbar", type=float, default=1.0)
    common.add_argument("--mass", type=float, default=1.0)
    common.add_argument("--omega", type=float, default=1.0)
    common.add_argument("--n-max", type=int, default=10, help="highest oscillator level")
    common.add_argument("--grid-size", type=int, default=1024, help="oracle finite-difference grid M")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output path (default stdout)")

    parser = argparse.ArgumentParser(prog="gupqm", description="Minimal-length quantum mechanics toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run every invariant suite")
    ov = sub.add_parser("overlap", parents=[common], help="position-eigenstate overlap curve")
    ov.add_argument("--lambda-min", type=float, default=-3.0)
    ov.add_argument("--lambda-max", type=float, default=3.0)
    ov.add_argument("--steps", type=int, default=61)
    sub.add_parser("spectrum", parents=[common], help="oscillator levels, closed form and oracle")
    be = sub.add_parser("bethe", parents=[common], help="Bethe roots for one level")
    be.add_argument("--n", type=int, required=True)
    ml = sub.add_parser("mlstate", parents=[common], help="maximal-localization state samples")
    ml.add_argument("--xi", type=float, default=0.0)
    ml.add_argument("--samples", type=int, default=64)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(
            betas=tuple(args.beta) if args.beta else (0.1,),
            hbar=args.hbar, mass=args.mass, omega=args.omega,
            n_max=args.n_max, grid_size=args.grid_size, format=args.format, out=args.out,
        )
        if args.command == "overlap" and args.steps < 2:
            raise ValueError("--steps must be >= 2")
        if args.command == "bethe" and not 1 <= args.n <= 12:
            raise ValueError("--n must lie in 1..12")
        if args.command == "mlstate" and args.samples < 16:
            raise ValueError("--samples must be >= 16")
    except ValueError as exc:
        parser.error(str(exc))  # exits with status 2

    params = config.parameters()
    extra: dict = {}
    if args.command == "verify":
        table = reports.verify_table(params, config.n_max, config.grid_size)
    elif args.command == "overlap":
        extra = {"lambda_min": args.lambda_min, "lambda_max": args.lambda_max, "steps": args.steps}
        table = reports.overlap_table(params, args.lambda_min, args.lambda_max, args.steps)
    elif args.command == "spectrum":
        table = reports.spectrum_table(params, config.n_max, config.grid_size)
    elif args.command == "bethe":
        extra = {"n": args.n}
        table = reports.bethe_table(params, args.n)
    else:
        extra = {"xi": args.xi, "samples": args.samples}
        table = reports.mlstate_table(params, args.xi, args.samples)

    text = render(table, config, args.command, extra)
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not table.ok:
        print(table.message, file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
