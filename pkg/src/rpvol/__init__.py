"""Realized power variation volatility analytics.

High-frequency price ingestion, power-variation volatility proxies,
standardized-return diagnostics, minimum capital requirements, and a
stochastic-volatility simulator that provides ground truth for
convergence testing.
"""

from .errors import (
    DataQualityError,
    DegenerateSeriesError,
    InsufficientDataError,
    InvalidParameterError,
    MisalignedDaysError,
    RpvolError,
    TickFormatError,
)
from .ingest import (
    DEFAULT_MAX_GAP_INTERVALS,
    DroppedDay,
    IntradayGrid,
    ParseIssue,
    SessionCalendar,
    TickParseResult,
    TickRecord,
    build_grid,
    parse_calendar,
    parse_calendar_file,
    parse_tick_file,
    parse_ticks,
    roll_contracts,
    write_tick_file,
)
from .mincap import (
    MincapEstimate,
    MincapRequest,
    min_n_for_quantile_ci,
    mincap,
    mincap_ci,
    quantile_ci_ranks,
    vol_forecast,
)
from .powervar import (
    BASES,
    NormalAbsMoment,
    PowerVariationSpec,
    StandardizedReturns,
    VolatilitySeries,
    normal_abs_moment,
    normalized_rpv,
    realized_power_variation,
    standardize,
    volatility_proxy,
)
from .returns import DailyReturns, IntradayReturns, daily_return, intraday_log_returns
from .simulate import (
    ConstantVol,
    ConvergenceCell,
    ConvergenceReport,
    LogOuVol,
    SimOutput,
    SvConfig,
    convergence_report,
    simulate_sv,
    simulated_tick_records,
    trading_days,
)
from .stats import (
    AcfResult,
    DistributionData,
    SummaryStats,
    acf,
    distribution_data,
    empirical_quantile,
    summary,
)

__version__ = "0.1.0"

__all__ = [
    "AcfResult",
    "BASES",
    "ConstantVol",
    "ConvergenceCell",
    "ConvergenceReport",
    "DEFAULT_MAX_GAP_INTERVALS",
    "DailyReturns",
    "DataQualityError",
    "DegenerateSeriesError",
    "DistributionData",
    "DroppedDay",
    "InsufficientDataError",
    "IntradayGrid",
    "IntradayReturns",
    "InvalidParameterError",
    "LogOuVol",
    "MincapEstimate",
    "MincapRequest",
    "MisalignedDaysError",
    "NormalAbsMoment",
    "ParseIssue",
    "PowerVariationSpec",
    "RpvolError",
    "SessionCalendar",
    "SimOutput",
    "StandardizedReturns",
    "SummaryStats",
    "SvConfig",
    "TickFormatError",
    "TickParseResult",
    "TickRecord",
    "VolatilitySeries",
    "acf",
    "build_grid",
    "convergence_report",
    "daily_return",
    "distribution_data",
    "empirical_quantile",
    "intraday_log_returns",
    "min_n_for_quantile_ci",
    "mincap",
    "mincap_ci",
    "normal_abs_moment",
    "normalized_rpv",
    "parse_calendar",
    "parse_calendar_file",
    "parse_tick_file",
    "parse_ticks",
    "quantile_ci_ranks",
    "realized_power_variation",
    "roll_contracts",
    "simulate_sv",
    "simulated_tick_records",
    "standardize",
    "summary",
    "trading_days",
    "vol_forecast",
    "volatility_proxy",
    "write_tick_file",
]
