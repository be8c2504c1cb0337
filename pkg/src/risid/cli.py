"""Command-line front end: codebook inspection, Monte Carlo simulation,
capture-file detection, and chart rendering.

Exit codes: 0 success, 1 runtime error (I/O, malformed data), 2 usage or
configuration error.
"""

import argparse
import json
import sys
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from .capture import read_capture, read_meta, symbols_from_samples
from .codebook import ArpCode, CapacityError, build_codebook
from .detector import detect, estimate_noise_power, extract_and_center
from .errors import CaptureFormatError, ConfigError, InsufficientDataError, SchemaError
from .montecarlo import SWEEP_AXES, read_csv, sweep, write_csv
from .scenario import load_scenario, trial_config
from .svgplot import plot_rows


class UsageError(Exception):
    """Bad flags or bad configuration; maps to exit code 2."""


def _version() -> str:
    try:
        return version("risid")
    except PackageNotFoundError:
        return "0.1.0"


def _parse_values(spec: str):
    """Sweep values from 'start:step:stop' (inclusive) or 'v1,v2,...'."""
    try:
        if ":" in spec:
            start, step, stop = (float(p) for p in spec.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            count = int(round((stop - start) / step)) + 1
            # round away float accumulation so 0.6:0.2:1.8 ends exactly at 1.8
            return [round(start + i * step, 12) for i in range(count)]
        return [float(p) for p in spec.split(",") if p != ""]
    except ValueError:
        raise UsageError(
            f"cannot parse --values {spec!r}: use start:step:stop or a comma list"
        ) from None


def _codebook_json(report) -> dict:
    return {
        "codes": [
            {"ris_id": c.ris_id, "symbols": c.symbols.astype(int).tolist()}
            for c in report.codes
        ],
        "classes": report.ambiguity_classes,
        "max_pairwise_cyclic_corr": report.max_pairwise_cyclic_corr,
    }


def cmd_codebook(args) -> int:
    if args.length < 4 or (args.length & (args.length - 1)) != 0:
        raise UsageError(f"--length must be a power of two >= 4, got {args.length}")
    if args.count < 1:
        raise UsageError(f"--count must be >= 1, got {args.count}")
    try:
        report = build_codebook(args.length, args.count)
    except CapacityError as exc:
        raise UsageError(str(exc)) from exc
    text = json.dumps(_codebook_json(report), indent=2)
    print(text)
    if args.report:
        Path(args.report).write_text(text + "\n")
    return 0


def cmd_simulate(args) -> int:
    try:
        sc = load_scenario(args.config)
    except FileNotFoundError as exc:
        raise UsageError(f"config {args.config}: {exc}") from exc
    except ConfigError as exc:
        raise UsageError(str(exc)) from exc
    if args.trials is not None:
        sc.trials = args.trials
    if args.seed is not None:
        sc.seed = args.seed
    if args.thr_norm is not None:
        sc.thr_norm = args.thr_norm
    try:
        base = trial_config(sc)
    except ConfigError as exc:
        raise UsageError(str(exc)) from exc

    axis = args.sweep or "thr_norm"
    values = _parse_values(args.values) if args.values else [base.thr_norm]
    try:
        result = sweep(base, axis, values, workers=args.workers)
    except ValueError as exc:
        raise UsageError(f"config {args.config}: {exc}") from exc
    write_csv(result.rows, args.out)
    print(f"wrote {len(result.rows)} rows to {args.out}")
    return 0


def _load_codebook_file(path):
    try:
        raw = json.loads(Path(path).read_text())
        codes = [
            ArpCode(ris_id=int(c["ris_id"]), symbols=np.asarray(c["symbols"]))
            for c in raw["codes"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"codebook file {path}: {exc}") from exc
    if not codes:
        raise SchemaError(f"codebook file {path} contains no codes")
    return codes


def cmd_detect(args) -> int:
    if (args.noise_power is None) == (args.noise_from_head is None):
        raise UsageError("provide exactly one of --noise-power or --noise-from-head")
    meta = read_meta(args.meta)
    samples = read_capture(args.capture, meta)
    if args.noise_from_head is not None:
        head = args.noise_from_head
        if head < 100 or head >= samples.size:
            raise UsageError(
                f"--noise-from-head must be in [100, {samples.size - 1}] for this capture"
            )
        noise_sample = estimate_noise_power(samples[:head])
        samples = samples[head:]
    else:
        noise_sample = args.noise_power
    if noise_sample <= 0:
        raise UsageError(f"noise power must be > 0, got {noise_sample}")
    # The statistic lives at symbol rate; integrate-and-dump averages the
    # per-sample noise down by the oversampling factor.
    noise_symbol = noise_sample / meta.samples_per_symbol
    threshold = args.thr_norm * noise_symbol

    codes = _load_codebook_file(args.codebook)
    candidates = [extract_and_center(f) for f in symbols_from_samples(samples, meta)]
    results = []
    for code in codes:
        best = None
        best_offset = 0
        for offset, frame in enumerate(candidates):
            report = detect(frame, code, threshold)
            if best is None or report.d_max > best.d_max:
                best, best_offset = report, offset
        results.append(
            {
                "ris_id": best.ris_id,
                "d_max": best.d_max,
                "best_shift": best.best_shift,
                "decided_reachable": bool(best.decided_reachable),
                "threshold_used": best.threshold_used,
                "sample_offset": best_offset,
            }
        )
    text = json.dumps(results, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0


def cmd_plot(args) -> int:
    rows = read_csv(args.csv)
    try:
        written = plot_rows(rows, args.out_dir)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    for path in written:
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="risid",
        description="Detect and identify reachable reconfigurable surfaces from "
        "amplitude-coded reflections.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("codebook", help="generate and inspect pattern assignments")
    p.add_argument("--length", type=int, required=True, help="pattern length M (power of two)")
    p.add_argument("--count", type=int, required=True, help="number of surfaces L")
    p.add_argument("--report", help="also write the JSON report to this path")
    p.set_defaults(func=cmd_codebook)

    p = sub.add_parser("simulate", help="Monte Carlo metric sweeps to CSV")
    p.add_argument("--config", required=True, help="scenario TOML file")
    p.add_argument("--sweep", choices=SWEEP_AXES, help="swept axis (default thr_norm)")
    p.add_argument("--values", help="swept values: start:step:stop or comma list")
    p.add_argument("--trials", type=int, help="override trials per setting")
    p.add_argument("--seed", type=int, help="override master seed")
    p.add_argument("--thr-norm", type=float, dest="thr_norm", help="override threshold")
    p.add_argument("--workers", type=int, default=1, help="parallel trial workers")
    p.add_argument("--out", default="results.csv", help="output CSV path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("detect", help="run detection on a recorded IQ capture")
    p.add_argument("--capture", required=True, help="raw .iq capture file")
    p.add_argument("--meta", required=True, help="JSON sidecar with capture metadata")
    p.add_argument("--codebook", required=True, help="codebook JSON (from `risid codebook`)")
    p.add_argument("--thr-norm", type=float, dest="thr_norm", required=True)
    p.add_argument("--noise-power", type=float, dest="noise_power",
                   help="known per-sample noise power of the capture")
    p.add_argument("--noise-from-head", type=int, dest="noise_from_head",
                   help="estimate noise from this many leading signal-free samples")
    p.add_argument("--out", help="write JSON reports here instead of stdout")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("plot", help="render SVG charts from a results CSV")
    p.add_argument("--csv", required=True, help="results CSV from `risid simulate`")
    p.add_argument("--out-dir", dest="out_dir", default="plots", help="chart output directory")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, SchemaError, CaptureFormatError, InsufficientDataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
