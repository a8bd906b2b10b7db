"""Command-line sweeps: ``tunneltime <subcommand> --config cfg.json [overrides]``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .errors import InvalidArgumentError
from .sweep import RUNNERS, SUBCOMMANDS, UNITS_NOTE, ConfigError, SweepConfig

WORKERS_ENV = "TUNNELTIME_WORKERS"


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return f"{value + 0.0:.17g}"


def _csv_list(text: str, conv, name: str):
    try:
        return [conv(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"--{name}: expected a comma-separated list of numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tunneltime", description=__doc__)
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--config", required=True, help="JSON sweep config")
    p.add_argument("--E", help="energy or comma-separated energies (replaces the config grid)")
    p.add_argument("--N", help="comma-separated repetition counts")
    p.add_argument("--L", help="comma-separated gaps")
    p.add_argument("--b", help="thickness grid (hartman/fractal) or rectangular width (others)")
    p.add_argument("--out", help="output file; a <out>.config.json echo is written next to CSV output")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--workers", type=int, help=f"worker processes (default ${WORKERS_ENV} or 1)")
    return p


def load_config(args) -> SweepConfig:
    try:
        with open(args.config) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"config: cannot read {args.config!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError("config: expected a JSON object")
    if args.E is not None:
        data["energy"] = _csv_list(args.E, float, "E")
    if args.N is not None or args.L is not None:
        periodic = dict(data.get("periodic") or {})
        if args.N is not None:
            periodic["N"] = _csv_list(args.N, int, "N")
        if args.L is not None:
            periodic["L"] = _csv_list(args.L, float, "L")
        data["periodic"] = periodic
    if args.b is not None:
        bs = _csv_list(args.b, float, "b")
        if args.subcommand in ("hartman", "fractal"):
            data["thickness"] = bs
        else:
            spec = data.get("potential")
            if not isinstance(spec, dict) or spec.get("type") != "rectangular" or len(bs) != 1:
                raise ConfigError("--b: needs a rectangular potential and a single width for this subcommand")
            data["potential"] = dict(spec, b=bs[0])
    if args.format is not None:
        data["format"] = args.format
    return SweepConfig.from_dict(data)


def render(cfg: SweepConfig, subcommand: str, columns, rows, extra) -> tuple[str, dict]:
    metadata = {"subcommand": subcommand, "units": UNITS_NOTE, "columns": list(columns),
                "config": cfg.to_dict(), **extra}
    if cfg.format == "json":
        doc = {"metadata": metadata, "rows": [dict(zip(columns, row)) for row in rows]}
        return json.dumps(doc, indent=2, allow_nan=False) + "\n", metadata
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue(), metadata


def resolve_workers(flag) -> int:
    if flag is not None:
        return max(1, flag)
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV}: expected an integer, got {env!r}") from None
    return 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        workers = resolve_workers(args.workers)
        columns, rows, extra = RUNNERS[args.subcommand](cfg, workers)
        text, metadata = render(cfg, args.subcommand, columns, rows, extra)
    except (InvalidArgumentError, ValueError, ArithmeticError) as exc:
        print(f"tunneltime: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
        if cfg.format == "csv":
            with open(args.out + ".config.json", "w") as fh:
                json.dump(metadata, fh, indent=2, allow_nan=False)
                fh.write("\n")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
