"""Command-line interface wiring ingestion, analytics, and report files.

Subcommands:

    analyze      summary panels, ACF tables, distribution data, series dumps
    mincap       minimum capital requirement table for long and short positions
    simulate     synthetic tick file from the stochastic-volatility model
    convergence  estimator error vs sampling frequency on simulated data

Options can also come from a key=value config file (``--config``); explicit
flags win. Exit codes: 0 success, 2 usage, 3 I/O, 4 data quality.
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .errors import InvalidParameterError, RpvolError
from .ingest import (
    DEFAULT_MAX_GAP_INTERVALS,
    SessionCalendar,
    build_grid,
    parse_calendar_file,
    parse_tick_file,
    roll_contracts,
    write_tick_file,
)
from .mincap import MincapRequest, mincap, vol_forecast
from .powervar import BASES, PowerVariationSpec, standardize, volatility_proxy
from .report import ensure_outdir, write_sidecar, write_table
from .returns import daily_return, intraday_log_returns
from .simulate import (
    ConstantVol,
    LogOuVol,
    SvConfig,
    convergence_report,
    simulate_sv,
    simulated_tick_records,
)
from .stats import acf, distribution_data, summary

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DATA = 4


# ---------------------------------------------------------------------------
# Option plumbing: one table per command drives both argparse and config files
# ---------------------------------------------------------------------------

def _floats(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p.strip()]


def _ints(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p.strip()]


def _strings(text: str) -> list[str]:
    return [p.strip() for p in text.split(",") if p.strip()]


def _bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise InvalidParameterError(f"expected a boolean, got '{text}'")


def _timeofday(text: str) -> dt.time:
    return dt.time.fromisoformat(text.strip())


@dataclass(frozen=True)
class Opt:
    convert: Callable
    default: object
    help: str
    flag: bool = False  # presence-style flag (--strict), config value true/false


ANALYZE_OPTS = {
    "ticks": Opt(str, None, "tick file path (required)"),
    "calendar": Opt(str, None, "excluded-dates calendar file"),
    "out": Opt(str, "out", "output directory (created if missing)"),
    "format": Opt(str, "csv", "table format: csv or json"),
    "powers": Opt(_floats, [0.5, 0.75, 1.0, 1.25, 1.5], "comma-separated power list"),
    "bases": Opt(_strings, ["absolute", "squared"], "comma-separated bases"),
    "lags": Opt(int, 20, "ACF lag count"),
    "session_open": Opt(_timeofday, dt.time(8, 35), "session open HH:MM"),
    "session_close": Opt(_timeofday, dt.time(17, 35), "session close HH:MM"),
    "interval_minutes": Opt(int, 5, "grid spacing in minutes"),
    "max_gap": Opt(int, DEFAULT_MAX_GAP_INTERVALS, "max consecutive empty intervals"),
    "strict": Opt(_bool, False, "fail on the first malformed tick line", flag=True),
    "figures": Opt(_bool, True, "render PNG figures next to the tables"),
}

MINCAP_OPTS = {
    "ticks": Opt(str, None, "tick file path (required)"),
    "calendar": Opt(str, None, "excluded-dates calendar file"),
    "out": Opt(str, "out", "output directory"),
    "format": Opt(str, "csv", "table format: csv or json"),
    "coverage": Opt(_floats, [0.95, 0.96, 0.97, 0.98, 0.99], "coverage levels"),
    "proxy_base": Opt(str, "absolute", "volatility proxy base"),
    "proxy_power": Opt(float, 1.0, "volatility proxy power"),
    "vol_rule": Opt(str, "last_day", "forecast rule: last_day, rolling_mean, full_mean"),
    "rolling_window": Opt(int, None, "window for rolling_mean"),
    "ci_level": Opt(float, 0.95, "confidence level for the interval"),
    "session_open": Opt(_timeofday, dt.time(8, 35), "session open HH:MM"),
    "session_close": Opt(_timeofday, dt.time(17, 35), "session close HH:MM"),
    "interval_minutes": Opt(int, 5, "grid spacing in minutes"),
    "max_gap": Opt(int, DEFAULT_MAX_GAP_INTERVALS, "max consecutive empty intervals"),
    "strict": Opt(_bool, False, "fail on the first malformed tick line", flag=True),
    "figures": Opt(_bool, True, "render PNG figures next to the tables"),
}

SIMULATE_OPTS = {
    "out": Opt(str, "out", "output directory"),
    "format": Opt(str, "csv", "table format for the truth dump"),
    "days": Opt(int, 375, "number of simulated trading days"),
    "m": Opt(int, 107, "intraday intervals per day"),
    "fine_steps": Opt(int, 10, "fine Euler steps per interval"),
    "vol_model": Opt(str, "log_ou", "spot volatility model: constant or log_ou"),
    "sigma": Opt(float, 1.3, "constant model volatility (percent/day)"),
    "kappa": Opt(float, 0.1, "log-OU mean reversion speed per day"),
    "xi": Opt(float, 0.3, "log-OU vol-of-vol"),
    "mean_vol": Opt(float, 1.3, "log-OU stationary mean of sigma (percent)"),
    "theta": Opt(float, None, "log-OU level; overrides mean_vol when set"),
    "drift": Opt(float, 0.0, "price drift in percent per day"),
    "seed": Opt(int, 20240101, "simulation seed"),
    "start_price": Opt(float, 6000.0, "first synthetic price"),
    "volume": Opt(int, 100, "volume stamped on every synthetic trade"),
    "contract": Opt(str, "SYN1", "contract id stamped on every synthetic trade"),
}

CONVERGENCE_OPTS = {
    "out": Opt(str, "out", "output directory"),
    "format": Opt(str, "csv", "table format"),
    "days": Opt(int, 2000, "number of simulated trading days"),
    "m": Opt(int, 107, "intervals per day defining the fine grid"),
    "fine_steps": Opt(int, 24, "fine Euler steps per interval"),
    "m_set": Opt(_ints, [24, 107, 428], "sampling frequencies to evaluate"),
    "p_set": Opt(_floats, [1.0, 2.0], "power exponents to evaluate"),
    "vol_model": Opt(str, "log_ou", "spot volatility model: constant or log_ou"),
    "sigma": Opt(float, 1.3, "constant model volatility (percent/day)"),
    "kappa": Opt(float, 0.1, "log-OU mean reversion speed per day"),
    "xi": Opt(float, 0.3, "log-OU vol-of-vol"),
    "mean_vol": Opt(float, 1.3, "log-OU stationary mean of sigma (percent)"),
    "theta": Opt(float, None, "log-OU level; overrides mean_vol when set"),
    "drift": Opt(float, 0.0, "price drift in percent per day"),
    "seed": Opt(int, 20240101, "simulation seed"),
    "figures": Opt(_bool, True, "render PNG figures next to the tables"),
}

TABLES = {
    "analyze": ANALYZE_OPTS,
    "mincap": MINCAP_OPTS,
    "simulate": SIMULATE_OPTS,
    "convergence": CONVERGENCE_OPTS,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rpvol",
        description="Realized power variation volatility analytics",
    )
    parser.add_argument("--version", action="version", version=f"rpvol {__version__}")
    sub = parser.add_subparsers(dest="cmd")
    for cmd, table in TABLES.items():
        p = sub.add_parser(cmd, help=f"{cmd} command")
        p.add_argument("--config", default=None, help="key=value config file; flags override")
        for key, opt in table.items():
            flag = "--" + key.replace("_", "-")
            if opt.flag:
                p.add_argument(flag, dest=key, action="store_const", const="true",
                               default=None, help=opt.help)
            else:
                p.add_argument(flag, dest=key, default=None, help=opt.help)
        if "figures" in table and not table["figures"].flag:
            p.add_argument("--no-figures", dest="figures", action="store_const",
                           const="false", help="skip figure rendering")
    return parser


def read_config_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError:
        raise
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidParameterError(f"config line {line_no}: expected key=value, got '{line}'")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def resolve_options(args: argparse.Namespace, table: dict[str, Opt]) -> dict:
    file_cfg = read_config_file(args.config) if getattr(args, "config", None) else {}
    unknown = set(file_cfg) - set(table)
    if unknown:
        raise InvalidParameterError(f"unknown config keys: {', '.join(sorted(unknown))}")
    opts: dict = {}
    for key, opt in table.items():
        raw = getattr(args, key, None)
        if raw is not None:
            opts[key] = opt.convert(raw)
        elif key in file_cfg:
            opts[key] = opt.convert(file_cfg[key])
        else:
            opts[key] = opt.default
    return opts


def _require(opts: dict, key: str):
    if opts.get(key) is None:
        raise InvalidParameterError(f"--{key.replace('_', '-')} is required")
    return opts[key]


def _check_format(opts: dict) -> str:
    if opts["format"] not in ("csv", "json"):
        raise InvalidParameterError("--format must be csv or json")
    return opts["format"]


def _sidecar(opts: dict, command: str) -> dict:
    return {"command": command, "version": __version__, **opts}


def _load_pipeline(opts: dict):
    """Shared analyze/mincap front half: ticks -> grid -> returns."""
    ticks_path = _require(opts, "ticks")
    excluded = parse_calendar_file(opts["calendar"]) if opts["calendar"] else frozenset()
    cal = SessionCalendar(
        session_open=opts["session_open"],
        session_close=opts["session_close"],
        interval_minutes=opts["interval_minutes"],
        excluded_dates=excluded,
    )
    parsed = parse_tick_file(ticks_path, strict=opts["strict"])
    rolled = roll_contracts(parsed.records)
    grid = build_grid(rolled, cal, max_gap_intervals=opts["max_gap"])
    intra = intraday_log_returns(grid)
    daily = daily_return(intra)
    return parsed, grid, intra, daily


def _stat_cells(st) -> tuple:
    return (
        st.n, st.mean, st.sd,
        st.skewness, st.two_se_skew, st.skew_significant,
        st.excess_kurtosis, st.two_se_kurt, st.kurt_significant,
    )


SUMMARY_COLUMNS = (
    "panel", "base", "power", "n", "mean", "sd",
    "skewness", "skew_2se", "skew_significant",
    "excess_kurtosis", "kurt_2se", "kurt_significant",
)


def _normality_score(st) -> float:
    return abs(st.skewness) / st.se_skew + abs(st.excess_kurtosis) / st.se_kurt


def cmd_analyze(opts: dict) -> int:
    fmt = _check_format(opts)
    powers = opts["powers"]
    bases = opts["bases"]
    if not powers:
        raise InvalidParameterError("power list must not be empty")
    if any(p <= 0 for p in powers):
        raise InvalidParameterError("powers must be positive")
    if not bases or any(b not in BASES for b in bases):
        raise InvalidParameterError(f"bases must be a non-empty subset of {BASES}")
    outdir = ensure_outdir(opts["out"])
    side = _sidecar(opts, "analyze")

    parsed, grid, intra, daily = _load_pipeline(opts)
    if parsed.issues:
        write_table(outdir, "parse_errors", ("line", "message", "content"),
                    [(i.line_no, i.message, i.content) for i in parsed.issues], fmt, side)
    if grid.dropped:
        write_table(outdir, "dropped_days", ("day", "reason"),
                    [(d.day, d.reason) for d in grid.dropped], fmt, side)

    lags = min(opts["lags"], len(daily.days) - 1)
    if lags < 1:
        raise InvalidParameterError("need at least 2 retained days for ACF diagnostics")

    # Summary panels: A raw returns, B volatility proxies, C standardized returns.
    stats_a = summary(daily.r)
    summary_rows = [("A", "", "", *_stat_cells(stats_a))]
    vol_series: dict[tuple, object] = {}
    z_series: dict[tuple, object] = {}
    vol_stats: dict[tuple, object] = {}
    z_stats: dict[tuple, object] = {}
    for base in bases:
        for power in powers:
            spec = PowerVariationSpec(base, power)
            vol = volatility_proxy(intra, spec)
            z = standardize(daily, vol)
            vol_series[(base, power)] = vol
            z_series[(base, power)] = z
            vol_stats[(base, power)] = summary(vol.sigma)
            z_stats[(base, power)] = summary(z.z)
    for base in bases:
        for power in powers:
            summary_rows.append(("B", base, power, *_stat_cells(vol_stats[(base, power)])))
    for base in bases:
        for power in powers:
            summary_rows.append(("C", base, power, *_stat_cells(z_stats[(base, power)])))
    write_table(outdir, "summary", SUMMARY_COLUMNS, summary_rows, fmt, side)

    # Series dumps (time-series data for the diagnostics plots).
    write_table(outdir, "daily_returns", ("day", "value"),
                zip(daily.days, daily.r), fmt, side)
    intrarows = (
        (day, j + 1, intra.returns[i, j])
        for i, day in enumerate(intra.days)
        for j in range(intra.n_intervals)
    )
    write_table(outdir, "intraday_returns", ("day", "j", "value"), intrarows, fmt, side)
    for (base, power), vol in vol_series.items():
        write_table(outdir, f"volatility_{vol.spec.label}", ("day", "value"),
                    zip(vol.days, vol.sigma), fmt, side)
    zero_sigma_rows = []
    for (base, power), z in z_series.items():
        write_table(outdir, f"standardized_{z.proxy_spec.label}", ("day", "value"),
                    zip(z.days, z.z), fmt, side)
        zero_sigma_rows.extend((base, power, d) for d in z.excluded_days)
    if zero_sigma_rows:
        write_table(outdir, "zero_sigma_days", ("base", "power", "day"),
                    zero_sigma_rows, fmt, side)

    # ACF tables: returns as-is, volatility as-is, standardized returns squared.
    acf_ret = acf(daily.r, lags)
    write_table(outdir, "acf_returns", ("lag", "rho", "band"),
                zip(acf_ret.lags, acf_ret.rho, [acf_ret.band] * lags), fmt, side)
    vol_acf_rows = []
    z_acf_rows = []
    for base in bases:
        for power in powers:
            res_v = acf(vol_series[(base, power)].sigma, lags)
            vol_acf_rows.extend(
                (base, power, k, r, res_v.band) for k, r in zip(res_v.lags, res_v.rho)
            )
            res_z = acf(z_series[(base, power)].z, min(lags, z_stats[(base, power)].n - 1),
                        transform="square")
            z_acf_rows.extend(
                (base, power, k, r, res_z.band) for k, r in zip(res_z.lags, res_z.rho)
            )
    write_table(outdir, "acf_volatility", ("base", "power", "lag", "rho", "band"),
                vol_acf_rows, fmt, side)
    write_table(outdir, "acf_standardized", ("base", "power", "lag", "rho", "band"),
                z_acf_rows, fmt, side)

    # Distribution data: raw returns plus, per base, the series whose moments
    # sit closest to normality.
    selected: list[tuple[str, object]] = [("returns", daily.r)]
    for base in bases:
        best_v = min(powers, key=lambda p: _normality_score(vol_stats[(base, p)]))
        best_z = min(powers, key=lambda p: _normality_score(z_stats[(base, p)]))
        vol = vol_series[(base, best_v)]
        z = z_series[(base, best_z)]
        selected.append((f"volatility_{vol.spec.label}", vol.sigma))
        selected.append((f"standardized_{z.proxy_spec.label}", z.z))
    dists = {}
    for name, values in selected:
        dist = distribution_data(values)
        dists[name] = dist
        write_table(outdir, f"dist_{name}_hist", ("bin_left", "bin_right", "count"),
                    zip(dist.bin_left, dist.bin_right, dist.count), fmt, side)
        write_table(outdir, f"dist_{name}_qq", ("theoretical", "empirical"),
                    zip(dist.qq_theoretical, dist.qq_empirical), fmt, side)

    if opts["figures"]:
        from . import plots

        for name, dist in dists.items():
            plots.save_density_qq(dist, name, outdir / f"fig_{name}_density_qq.png")
        plots.save_timeseries(daily.days, daily.r, "daily returns (%)",
                              outdir / "fig_returns_timeseries.png")
        plots.save_acf(acf_ret, "daily returns ACF", outdir / "fig_returns_acf.png")
        for base in bases:
            best_v = min(powers, key=lambda p: _normality_score(vol_stats[(base, p)]))
            vol = vol_series[(base, best_v)]
            plots.save_timeseries(vol.days, vol.sigma, f"volatility {vol.spec.label}",
                                  outdir / f"fig_volatility_{vol.spec.label}_timeseries.png")
            plots.save_acf(acf(vol.sigma, lags), f"volatility {vol.spec.label} ACF",
                           outdir / f"fig_volatility_{vol.spec.label}_acf.png")
    return EXIT_OK


def cmd_mincap(opts: dict) -> int:
    fmt = _check_format(opts)
    coverages = opts["coverage"]
    if not coverages:
        raise InvalidParameterError("coverage list must not be empty")
    proxy_spec = PowerVariationSpec(opts["proxy_base"], opts["proxy_power"])
    outdir = ensure_outdir(opts["out"])
    side = _sidecar(opts, "mincap")

    _, _, intra, daily = _load_pipeline(opts)
    vol = volatility_proxy(intra, proxy_spec)
    z = standardize(daily, vol)
    sigma_hat = vol_forecast(vol, opts["vol_rule"], opts["rolling_window"])

    rows = []
    for position in ("long", "short"):
        for cov in coverages:
            req = MincapRequest(
                coverage=cov,
                position=position,
                vol_forecast_rule=opts["vol_rule"],
                rolling_window=opts["rolling_window"],
                proxy_spec=proxy_spec,
                ci_level=opts["ci_level"],
            )
            est = mincap(z, sigma_hat, req)
            rows.append((position, cov, est.lambda_pct, est.ci_low, est.ci_high,
                         est.z_quantile_used, est.sigma_forecast_used))
    write_table(outdir, "mincap",
                ("position", "coverage", "lambda", "ci_low", "ci_high", "z_q", "sigma_hat"),
                rows, fmt, side)
    if opts["figures"]:
        from . import plots

        plots.save_mincap(rows, outdir / "fig_mincap.png")
    return EXIT_OK


def _sv_config(opts: dict) -> SvConfig:
    model_name = opts["vol_model"]
    if model_name == "constant":
        model = ConstantVol(opts["sigma"])
    elif model_name == "log_ou":
        if opts["theta"] is not None:
            model = LogOuVol(kappa=opts["kappa"], theta=opts["theta"], xi=opts["xi"])
        else:
            model = LogOuVol.with_mean_sigma(opts["mean_vol"], kappa=opts["kappa"],
                                             xi=opts["xi"])
    else:
        raise InvalidParameterError("--vol-model must be constant or log_ou")
    return SvConfig(
        days=opts["days"],
        intervals_m=opts["m"],
        fine_steps_per_interval=opts["fine_steps"],
        spot_vol_model=model,
        drift=opts["drift"],
        seed=opts["seed"],
    )


def _session_for_intervals(m: int) -> SessionCalendar:
    """Calendar whose grid matches a simulated day of m intervals."""
    if m == SessionCalendar().n_intervals:
        return SessionCalendar()
    if m <= 185:
        open_t = dt.time(8, 35)
        minutes = 5
    elif m <= 1439:
        open_t = dt.time(0, 0)
        minutes = 1
    else:
        raise InvalidParameterError("tick export supports at most 1439 intervals per day")
    total = m * minutes
    close_t = dt.time((open_t.hour * 60 + open_t.minute + total) // 60 % 24,
                      (open_t.minute + total) % 60)
    return SessionCalendar(session_open=open_t, session_close=close_t,
                           interval_minutes=minutes)


def cmd_simulate(opts: dict) -> int:
    fmt = _check_format(opts)
    config = _sv_config(opts)
    outdir = ensure_outdir(opts["out"])
    side = _sidecar(opts, "simulate")
    sim = simulate_sv(config, p_set=(1.0, 2.0))
    cal = _session_for_intervals(config.intervals_m)
    records = simulated_tick_records(
        sim, cal, start_price=opts["start_price"],
        volume=opts["volume"], contract_id=opts["contract"],
    )
    ticks_path = outdir / "synthetic_ticks.csv"
    write_tick_file(ticks_path, records)
    side["session_open"] = cal.session_open
    side["session_close"] = cal.session_close
    side["interval_minutes"] = cal.interval_minutes
    write_sidecar(ticks_path, side)
    truth_rows = [
        (day, p, sim.true_integrated[p][i])
        for p in sorted(sim.true_integrated)
        for i, day in enumerate(sim.returns.days)
    ]
    write_table(outdir, "true_integrated", ("day", "p", "value"), truth_rows, fmt, side)
    return EXIT_OK


def cmd_convergence(opts: dict) -> int:
    fmt = _check_format(opts)
    config = _sv_config(opts)
    if not opts["m_set"] or not opts["p_set"]:
        raise InvalidParameterError("m_set and p_set must not be empty")
    outdir = ensure_outdir(opts["out"])
    side = _sidecar(opts, "convergence")
    report = convergence_report(config, p_set=tuple(opts["p_set"]),
                                m_set=tuple(opts["m_set"]))
    write_table(outdir, "convergence", ("p", "m", "mare"),
                [(c.p, c.m, c.mare) for c in report.cells], fmt, side)
    write_table(outdir, "convergence_flags", ("p", "monotone_decreasing"),
                sorted(report.monotone_decreasing.items()), fmt, side)
    if opts["figures"]:
        from . import plots

        plots.save_convergence(report, outdir / "fig_convergence.png")
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "mincap": cmd_mincap,
    "simulate": cmd_simulate,
    "convergence": cmd_convergence,
}


def _error_report(exc: Exception) -> None:
    print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cmd is None:
        parser.print_help()
        return EXIT_USAGE
    try:
        opts = resolve_options(args, TABLES[args.cmd])
        return COMMANDS[args.cmd](opts)
    except InvalidParameterError as exc:
        _error_report(exc)
        return EXIT_USAGE
    except OSError as exc:
        _error_report(exc)
        return EXIT_IO
    except RpvolError as exc:
        _error_report(exc)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
