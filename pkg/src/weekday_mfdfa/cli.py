"""Command line interface.

Subcommands: analyze, shuffle-test, evolve, synth.

Exit codes:
    0  success
    1  unexpected internal error
    2  invalid configuration or usage
    3  input could not be ingested (file, header, dates, closes)
    4  analysis failed (series too short, no usable windows, ...)
"""

from __future__ import annotations

import argparse
import hashlib
import logging
import os
import sys
from datetime import date

import numpy as np

from .config import AnalysisConfig
from .errors import AnalysisError, ConfigError, IngestionError, MFDFAError
from .pipeline import analyze_series
from .report import FORMATS, Report
from .series import (
    ALL,
    DAY_LABELS,
    WEEKDAYS,
    day_resolve,
    log_returns,
    parse_prices,
    shuffle_series,
)
from .synth import CascadeSpec, NoiseSpec, gen_binomial_cascade, gen_gaussian_noise
from .windows import difference_trace, evolve_spectra, plan_windows

log = logging.getLogger("weekday_mfdfa")

EXIT_OK, EXIT_INTERNAL, EXIT_CONFIG, EXIT_INGEST, EXIT_ANALYSIS = 0, 1, 2, 3, 4
DEFAULT_SEED = 42


def _analysis_options() -> argparse.ArgumentParser:
    d = AnalysisConfig()
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("analysis settings")
    g.add_argument("--detrend-order", type=int, default=d.detrend_order)
    g.add_argument("--q-min", type=float, default=d.q_min)
    g.add_argument("--q-max", type=float, default=d.q_max)
    g.add_argument("--q-step", type=float, default=d.q_step)
    g.add_argument("--n-min", type=int, default=d.n_min)
    g.add_argument("--n-max-divisor", type=float, default=d.n_max_divisor)
    g.add_argument("--n-scales", type=int, default=d.n_scales)
    g.add_argument("--fit-min", type=int, default=None, help="smallest scale in the h(q) fit")
    g.add_argument("--fit-max", type=int, default=None, help="largest scale in the h(q) fit")
    g.add_argument("--single-pass", action="store_true",
                   help="segment from the series start only (discard the tail)")
    g.add_argument("--stride5", action="store_true",
                   help="resolve weekdays as every fifth return instead of by calendar date")
    g.add_argument("--seed", type=int, default=None,
                   help=f"base seed (fallback: $MFDFA_SEED, then {DEFAULT_SEED})")
    g.add_argument("--repetitions", type=int, default=d.repetitions)
    g.add_argument("--transposition-factor", type=int, default=d.transposition_factor)
    g.add_argument("--window", type=int, default=d.window)
    g.add_argument("--step", type=int, default=d.step)
    g.add_argument("--column", choices=("Close", "Adj Close"), default=d.column)
    o = p.add_argument_group("output")
    o.add_argument("--format", choices=FORMATS, default="csv")
    o.add_argument("-o", "--output", default="-", help="output path (default stdout)")
    o.add_argument("--days", default=None,
                   help="comma-separated subset of Monday..Friday,All")
    return p


def _seed(value) -> int:
    if value is not None:
        return value
    env = os.environ.get("MFDFA_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"MFDFA_SEED must be an integer, got {env!r}") from None
    return DEFAULT_SEED


def config_from_args(args) -> AnalysisConfig:
    return AnalysisConfig(
        detrend_order=args.detrend_order,
        q_min=args.q_min,
        q_max=args.q_max,
        q_step=args.q_step,
        n_min=args.n_min,
        n_max_divisor=args.n_max_divisor,
        n_scales=args.n_scales,
        fit_min=args.fit_min,
        fit_max=args.fit_max,
        dual_pass=not args.single_pass,
        stride5=args.stride5,
        seed=_seed(args.seed),
        repetitions=args.repetitions,
        transposition_factor=args.transposition_factor,
        window=args.window,
        step=args.step,
        column=args.column,
    )


def _days(args, default) -> tuple:
    if not args.days:
        return default
    days = tuple(d.strip() for d in args.days.split(",") if d.strip())
    bad = [d for d in days if d not in DAY_LABELS]
    if bad or not days:
        raise ConfigError(f"unknown day labels {bad}; choose from {', '.join(DAY_LABELS)}")
    return days


def _load(path, config):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise IngestionError(f"cannot read {path}: {exc}") from None
    try:
        text = raw.decode("utf-8-sig")
    except UnicodeDecodeError:
        raise IngestionError(f"{path} is not UTF-8 text") from None
    prices = parse_prices(text, config.column, os.path.basename(path).split(".")[0])
    returns = log_returns(prices)
    return prices, day_resolve(returns, stride5=config.stride5), hashlib.sha256(raw).hexdigest()


def _new_report(command, config, path, digest) -> Report:
    return Report(command, config.to_dict(), os.path.basename(path), digest)


def _emit(report: Report, args) -> None:
    text = report.render(args.format)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_analyze(args) -> int:
    config = config_from_args(args)
    prices, resolved, digest = _load(args.input, config)
    report = _new_report("analyze", config, args.input, digest)
    rows = report.table("params", ["day", "n_obs", "alpha0", "W", "r", "alpha_min",
                                   "alpha_max", "h2", "status"])
    spectra = (report.table("spectrum", ["day", "q", "alpha", "f_alpha"])
               if args.spectra else None)
    first_error, ok = None, 0
    for label in _days(args, DAY_LABELS):
        series = resolved[label]
        try:
            res = analyze_series(series.returns, config)
        except AnalysisError as exc:
            log.warning("%s: %s", label, exc)
            first_error = first_error or exc
            rows.add(label, len(series), None, None, None, None, None, None, type(exc).__name__)
            continue
        ok += 1
        p = res.params
        rows.add(label, res.n_obs, res.alpha0, res.width, res.skew,
                 p.alpha_min if p else None, p.alpha_max if p else None,
                 res.hurst.hurst, res.status)
        if spectra is not None:
            sp = res.spectrum
            for q, a, f in zip(sp.source_q, sp.alpha, sp.f_alpha):
                spectra.add(label, q, a, f)
    if ok == 0:
        raise first_error
    _emit(report, args)
    return EXIT_OK


def cmd_shuffle_test(args) -> int:
    config = config_from_args(args)
    prices, resolved, digest = _load(args.input, config)
    report = _new_report("shuffle-test", config, args.input, digest)
    table = report.table("shuffle", [
        "day", "n_obs", "repetitions", "transpositions", "alpha0", "W", "r",
        "mean_alpha0", "mean_W", "mean_r", "std_alpha0", "std_W", "std_r",
        "delta_alpha0", "delta_W", "n_failed", "n_width_failed", "status",
    ])
    ok = 0
    for label in _days(args, WEEKDAYS):
        series = resolved[label]
        try:
            if len(series) < config.min_length:
                raise AnalysisError(
                    f"{label} has {len(series)} returns, need {config.min_length}")
            rep = shuffle_series(series.returns, config, label)
        except AnalysisError as exc:
            log.warning("%s: %s", label, exc)
            table.add(label, len(series), config.repetitions, None, *([None] * 13),
                      type(exc).__name__)
            continue
        ok += 1
        m, s = rep.mean_params, rep.std_params
        table.add(label, rep.n_obs, rep.n_repetitions, rep.transpositions_per_rep,
                  rep.original_alpha0, rep.original_width, rep.original_skew,
                  m.alpha0, m.width, m.skew, s.alpha0, s.width, s.skew,
                  rep.delta_alpha0, rep.delta_W, rep.n_failed, rep.n_width_failed, "ok")
    if ok == 0:
        raise AnalysisError("shuffle test failed for every requested day")
    _emit(report, args)
    return EXIT_OK


def cmd_evolve(args) -> int:
    config = config_from_args(args)
    prices, resolved, digest = _load(args.input, config)
    days = _days(args, WEEKDAYS)
    report = _new_report("evolve", config, args.input, digest)
    traces_table = report.table("traces", ["window_end_date", "day", "window_index",
                                           "alpha0", "W", "r", "status"])
    traces = {}
    for label in days:
        series = resolved[label]
        plan = plan_windows(len(series), config.window, config.step)
        trace = evolve_spectra(series, plan, config, label)
        traces[label] = trace
        for t in range(len(trace)):
            traces_table.add(trace.window_times[t], label, t, trace.alpha0[t],
                             trace.width[t], trace.skew[t], trace.errors[t] or "ok")
    baseline = "Monday"
    if baseline in traces and len(traces) > 1:
        diff_table = report.table("differences", ["window_end_date", "day", "window_index",
                                                  "delta_alpha0", "delta_W"])
        for label, trace in traces.items():
            if label == baseline:
                continue
            diff = difference_trace(traces[baseline], trace)
            for k in range(diff.window_index.size):
                diff_table.add(diff.window_times[k], label, diff.window_index[k],
                               diff.delta_alpha0[k], diff.delta_W[k])
    _emit(report, args)
    return EXIT_OK


def _parse_spec(tokens, aliases) -> dict:
    out = {}
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep:
            raise ConfigError(f"expected key=value, got {token!r}")
        name = aliases.get(key.strip())
        if name is None:
            raise ConfigError(f"unknown key {key!r}; expected one of {sorted(aliases)}")
        out[name] = value.strip()
    return out


def business_days(start: date, count: int) -> np.ndarray:
    """``count`` consecutive Monday..Friday dates from ``start`` (rolled forward)."""
    first = np.busday_offset(np.datetime64(start, "D"), 0, roll="forward")
    return np.busday_offset(first, np.arange(count), roll="forward")


def cmd_synth(args) -> int:
    if (args.cascade is None) == (args.noise is None):
        raise ConfigError("choose exactly one of --cascade or --noise")
    try:
        if args.cascade is not None:
            kw = _parse_spec(args.cascade, {"a": "a", "k": "levels", "levels": "levels",
                                            "seed": "seed"})
            spec = CascadeSpec(float(kw.get("a", 0.6)), int(kw.get("levels", 13)),
                               int(kw.get("seed", _seed(None))))
            values = gen_binomial_cascade(spec)
            scale = 1.0 if args.scale is None else args.scale
        else:
            kw = _parse_spec(args.noise, {"H": "hurst", "hurst": "hurst", "N": "length",
                                          "length": "length", "seed": "seed"})
            spec = NoiseSpec(int(kw.get("length", 8192)), float(kw.get("hurst", 0.5)),
                             int(kw.get("seed", _seed(None))))
            values = gen_gaussian_noise(spec)
            scale = 0.01 if args.scale is None else args.scale
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    try:
        start = date.fromisoformat(args.start_date)
    except ValueError:
        raise ConfigError(f"bad --start-date {args.start_date!r}") from None
    # Closes whose log returns reproduce the (scaled) generator output.
    closes = args.anchor * np.exp(np.concatenate([[0.0], np.cumsum(scale * values)]))
    dates = business_days(start, closes.size)
    lines = ["Date,Close"]
    lines += [f"{d},{c:.17g}" for d, c in zip(dates, closes)]
    text = "\n".join(lines) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weekday-mfdfa",
        description="MF-DFA of day-of-the-week resolved index returns.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)
    common = _analysis_options()

    p = sub.add_parser("analyze", parents=[common], help="(alpha0, W, r) per weekday and All")
    p.add_argument("input", help="price CSV with Date and Close columns")
    p.add_argument("--spectra", action="store_true", help="include (alpha, f) point sets")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("shuffle-test", parents=[common],
                       help="original vs shuffled spectra per weekday")
    p.add_argument("input")
    p.set_defaults(func=cmd_shuffle_test)

    p = sub.add_parser("evolve", parents=[common],
                       help="sliding-window traces and Monday differences")
    p.add_argument("input")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("synth", help="write a synthetic series as a Date,Close file")
    p.add_argument("--cascade", nargs="*", metavar="KEY=VAL",
                   help="binomial cascade: a=0.6 k=13 seed=1")
    p.add_argument("--noise", nargs="*", metavar="KEY=VAL",
                   help="Gaussian noise: H=0.5 N=8192 seed=1")
    p.add_argument("--scale", type=float, default=None,
                   help="multiplier applied before exponentiation (cascade 1, noise 0.01)")
    p.add_argument("--anchor", type=float, default=100.0, help="first close")
    p.add_argument("--start-date", default="2000-01-03")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IngestionError as exc:
        print(f"ingestion error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INGEST
    except AnalysisError as exc:
        print(f"analysis error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    except MFDFAError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
