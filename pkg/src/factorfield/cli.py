"""Command-line front end: ``factorfield {point,scan,thermal,fig1,verify,plot}``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .chain import ChainSpec
from .closed_forms import cplus_maximum, factorization_point, side_limits
from .errors import ChainError, ConfigError

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY = 0, 2, 3

# flag name -> RunConfig key
_OVERRIDES = {
    "n": "n", "vx": "vx", "vy": "vy", "vz": "vz", "range": "range", "model": "model",
    "b_min": "b_min", "b_max": "b_max", "steps": "steps", "temperature": "temperature",
    "pairs": "pairs", "workers": "workers",
}


def _range_arg(text):
    if text in ("nn", "full"):
        return text
    return [float(x) for x in text.split(",")]


def _pairs_arg(text):
    if text == "all":
        return text
    return [int(x) for x in text.split(",")]


def _add_chain_args(p, defaults=True):
    p.add_argument("--n", type=int)
    p.add_argument("--vx", type=float)
    p.add_argument("--vy", type=float)
    p.add_argument("--vz", type=float)
    p.add_argument("--range", type=_range_arg, help="'nn', 'full' or comma-separated r_1..r_{n-1}")


def _add_run_args(p):
    p.add_argument("--config", type=Path, help="JSON run configuration; flags override its keys")
    _add_chain_args(p)
    p.add_argument("--model", choices=("collective", "freefermion", "oracle"))
    p.add_argument("--b-min", dest="b_min", type=float)
    p.add_argument("--b-max", dest="b_max", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--pairs", type=_pairs_arg, help="'all' or comma-separated separations")
    p.add_argument("--workers", type=int)
    p.add_argument("--out", type=Path, help="output stem; format taken from --format")
    p.add_argument("--format", dest="formats", action="append", choices=("csv", "json", "svg"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="factorfield",
        description="Entanglement near the factorizing field of cyclic XYZ chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", help="factorization quantities for one chain")
    _add_chain_args(p)
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("scan", help="ground-state field scan")
    _add_run_args(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("thermal", help="low-temperature field scan")
    _add_run_args(p)
    p.add_argument("--temperature", type=float)
    p.set_defaults(func=cmd_thermal)

    p = sub.add_parser("fig1", help="large-n rescaled side limits against delta")
    p.add_argument("--delta-min", type=float, default=0.1)
    p.add_argument("--delta-max", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", dest="formats", action="append", choices=("csv", "json", "svg"))
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("verify", help="cross-check fast routes against the exact oracle")
    p.add_argument("--quick", action="store_true", help="smaller size range")
    p.add_argument("--json", type=Path, help="write check results here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="render an SVG from a CSV written by scan/thermal/fig1")
    p.add_argument("csv", type=Path)
    p.add_argument("--out", type=Path)
    p.add_argument("--meta", type=Path, help="metadata sidecar (default: <csv stem>.meta.json)")
    p.add_argument("--raw", action="store_true", help="plot C_l instead of n C_l")
    p.set_defaults(func=cmd_plot)
    return parser


def _load_config(args, thermal=False):
    from .scan import RunConfig

    doc = {}
    if getattr(args, "config", None):
        try:
            doc = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    flat = {}
    flat.update(doc.pop("chain", {}))
    flat.update(doc.pop("scan", {}))
    flat.update(doc)
    for flag, key in _OVERRIDES.items():
        val = getattr(args, flag, None)
        if val is not None:
            flat[key] = val
    if args.out is not None or args.formats:
        outs = dict(flat.get("outputs") or {})
        if args.out is not None:
            outs["path"] = str(args.out)
        if args.formats:
            outs["formats"] = args.formats
        flat["outputs"] = outs
    missing = [k for k in ("n", "vx", "vy") if k not in flat]
    if missing:
        raise ConfigError(f"missing chain parameters: {missing}")
    if thermal and flat.get("temperature") is None:
        raise ConfigError("thermal scan needs --temperature")
    return RunConfig.from_dict(flat)


def _write_outputs(records, metadata, outputs, default_stem):
    from .scan import emit, write_metadata

    stem = Path(outputs.get("path", default_stem))
    if stem.suffix in (".csv", ".json", ".svg"):
        stem = stem.with_suffix("")
    formats = outputs.get("formats", ["csv"])
    written = [emit(records, fmt, stem.with_suffix("." + fmt), metadata) for fmt in formats]
    if metadata is not None:
        written.append(write_metadata(metadata, stem.with_suffix(".meta.json")))
    return written


def cmd_point(args):
    for k in ("n", "vx", "vy"):
        if getattr(args, k) is None:
            raise ConfigError(f"--{k} is required")
    spec = ChainSpec.from_keyword(args.n, args.vx, args.vy, args.vz or 0.0, args.range or "nn")
    fp = factorization_point(spec)
    out = {"factorization": asdict(fp), "b_c": spec.b_c}
    if 0 < fp.chi < 1:
        out["side_limits"] = asdict(side_limits(fp.chi, spec.n))
    print(json.dumps(out, indent=1))
    return EXIT_OK


def cmd_scan(args):
    from .scan import run_scan

    cfg = _load_config(args)
    res = run_scan(cfg)
    for p in _write_outputs(res.records, res.metadata, cfg.outputs, f"scan_{cfg.model}_n{cfg.n}"):
        print(p)
    print(f"transitions: {', '.join(format(t, '.12g') for t in res.metadata['transitions'])}")
    return EXIT_OK


def cmd_thermal(args):
    from .scan import thermal_scan

    cfg = _load_config(args, thermal=True)
    res = thermal_scan(cfg)
    for p in _write_outputs(res.records, res.metadata, cfg.outputs, f"thermal_{cfg.model}_n{cfg.n}"):
        print(p)
    print(f"method: {res.metadata['method']}")
    print(f"crossing field: {res.metadata['crossing_field']}")
    return EXIT_OK


def cmd_fig1(args):
    from .scan import fig1_curves

    if not 0 < args.delta_min < args.delta_max or args.steps < 2:
        raise ConfigError("need 0 < delta-min < delta-max and steps >= 2")
    records = fig1_curves(np.linspace(args.delta_min, args.delta_max, args.steps))
    d_star, c_star = cplus_maximum()
    meta = {"c_plus_maximum": {"delta": d_star, "c_plus": c_star}}
    outputs = {"formats": args.formats or ["csv"]}
    if args.out is not None:
        outputs["path"] = str(args.out)
    for p in _write_outputs(records, meta, outputs, "fig1"):
        print(p)
    print(f"c_+ maximum {c_star:.6f} at delta = {d_star:.6f}")
    return EXIT_OK


def cmd_verify(args):
    from .verify import run_all

    results = run_all(quick=args.quick)
    for r in results:
        print(r.line())
    if args.json:
        rows = [asdict(r) for r in results]
        args.json.write_text(json.dumps(rows, indent=1, default=float) + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def cmd_plot(args):
    from .scan import Fig1Record, emit, read_csv

    try:
        records = read_csv(args.csv)
    except (OSError, KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"cannot read records: {exc}") from None
    if not records:
        raise ConfigError("no records to plot")
    meta_path = args.meta or args.csv.with_suffix(".meta.json")
    meta = json.loads(meta_path.read_text()) if meta_path.exists() else None
    out = args.out or args.csv.with_suffix(".svg")
    opts = {} if isinstance(records[0], Fig1Record) else {"rescaled": not args.raw}
    print(emit(records, "svg", out, meta, **opts))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ChainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
