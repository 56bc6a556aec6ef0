"""Command-line front end.

Subcommands:
    run <config.json> --out <dir>        produce the configured CSV outputs
    sweep <config.json> --axis A --values v1,v2,... --out <dir>
    identities <config.json>             print identity-residual maxima
    accept [--fast]                      run the acceptance suite

Exit codes: 0 success, 1 validation/parse error, 2 numerical failure,
3 acceptance-suite failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import acceptance
from .errors import (DomainError, DressedAtomError, InsufficientSpan,
                     ParseError, QuadratureFailure, RegimeMismatch,
                     StepTooLarge, UnknownAxis, ValidationError)
from .scenario import parse_config, run_scenario, serialize_config, sweep

_USER_ERRORS = (ParseError, ValidationError, UnknownAxis, RegimeMismatch,
                DomainError)
_NUMERIC_ERRORS = (QuadratureFailure, StepTooLarge, InsufficientSpan)


def _load_config(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read config {path!r}: {exc}") from None
    return parse_config(text)


def _write_outputs(outdir: str, series: dict, report: dict, cfg) -> None:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    for kind, ts in series.items():
        (out / f"{kind}.csv").write_text(ts.to_csv())
    report = dict(report)
    report["config"] = json.loads(serialize_config(cfg))
    (out / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")


def _cmd_run(args) -> int:
    cfg = _load_config(args.config)
    series, report = run_scenario(cfg)
    _write_outputs(args.out, series, report, cfg)
    for key in ("compare", "current_fit", "identities_max"):
        if key in report:
            print(f"{key}: {report[key]}")
    print(f"wrote {', '.join(sorted(series))} to {args.out}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise ValidationError("--values must be a comma-separated list of numbers")
    if not values:
        raise ValidationError("--values is empty")
    table, reports = sweep(cfg, args.axis, values)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "sweep.csv").write_text(table.to_csv())
    (out / "sweep_report.json").write_text(
        json.dumps(reports, indent=2, sort_keys=True, default=str) + "\n")
    print(table.to_csv(), end="")
    return 0


def _cmd_identities(args) -> int:
    cfg = _load_config(args.config)
    series, report = run_scenario(replace(cfg, outputs="identities"))
    print(json.dumps(report["identities_max"], indent=2, sort_keys=True))
    return 0


def _cmd_accept(args) -> int:
    return acceptance.main(fast=args.fast)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dressedatom",
                                description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one scenario")
    run_p.add_argument("config")
    run_p.add_argument("--out", required=True, help="output directory")
    run_p.set_defaults(fn=_cmd_run)

    sweep_p = sub.add_parser("sweep", help="sweep one numeric config field")
    sweep_p.add_argument("config")
    sweep_p.add_argument("--axis", required=True)
    sweep_p.add_argument("--values", required=True,
                         help="comma-separated numeric values")
    sweep_p.add_argument("--out", required=True)
    sweep_p.set_defaults(fn=_cmd_sweep)

    id_p = sub.add_parser("identities", help="print identity residual maxima")
    id_p.add_argument("config")
    id_p.set_defaults(fn=_cmd_identities)

    acc_p = sub.add_parser("accept", help="run the acceptance suite")
    acc_p.add_argument("--fast", action="store_true",
                       help="reduced sampling; a smoke run, not the gate")
    acc_p.set_defaults(fn=_cmd_accept)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except _USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except _NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except DressedAtomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
