"""Price ingestion, log returns, weekday resolution and the shuffle test."""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from datetime import date

import numpy as np

from . import _backend
from .config import AnalysisConfig
from .errors import (
    AnalysisError,
    DuplicateDate,
    MalformedHeader,
    NonFiniteInput,
    NonPositiveClose,
    SeriesTooShort,
    UnparsableDate,
)
from .pipeline import analyze_series

log = logging.getLogger(__name__)

WEEKDAYS = ("Monday", "Tuesday", "Wednesday", "Thursday", "Friday")
ALL = "All"
DAY_LABELS = WEEKDAYS + (ALL,)
MISSING_MARKERS = {"", "null", "nan", "na", "n/a", "none", "."}

# Swaps drawn per block; bounds memory for the 1000*N transposition runs.
_SWAP_BLOCK = 1 << 20


@dataclass
class PriceSeries:
    market_code: str
    dates: np.ndarray  # datetime64[D], strictly increasing
    closes: np.ndarray
    n_dropped: int = 0

    def __len__(self):
        return self.closes.size


@dataclass
class ReturnSeries:
    dates: np.ndarray  # date of the later close of each pair
    returns: np.ndarray

    def __len__(self):
        return self.returns.size

    def take(self, index) -> "ReturnSeries":
        return ReturnSeries(self.dates[index], self.returns[index])


@dataclass
class DayResolvedReturns:
    series: dict
    n_weekend: int = 0
    stride5: bool = False

    def __getitem__(self, label) -> ReturnSeries:
        return self.series[label]

    def __iter__(self):
        return iter(self.series)

    def items(self):
        return self.series.items()


def weekday_index(dates) -> np.ndarray:
    """Monday=0 .. Sunday=6 for datetime64[D] values."""
    days = np.asarray(dates, dtype="datetime64[D]").astype(np.int64)
    return (days + 3) % 7  # 1970-01-01 was a Thursday


def parse_prices(text: str, column: str = "Close", market_code: str = "") -> PriceSeries:
    """Parse a comma-separated Date/Close table.

    Rows whose close is a missing marker (``null``, empty, ...) are dropped and
    counted in ``n_dropped``. Rows are sorted by date.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise MalformedHeader("empty input") from None
    if "Date" not in header:
        raise MalformedHeader(f"no Date column in header {header}")
    if column not in header:
        raise MalformedHeader(f"no {column!r} column in header {header}")
    i_date, i_close = header.index("Date"), header.index(column)

    dates, closes, dropped = [], [], 0
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) <= max(i_date, i_close):
            raise MalformedHeader(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        raw_date, raw_close = row[i_date].strip(), row[i_close].strip()
        try:
            day = date.fromisoformat(raw_date)
        except ValueError:
            raise UnparsableDate(f"line {lineno}: cannot parse date {raw_date!r}") from None
        if raw_close.lower() in MISSING_MARKERS:
            dropped += 1
            continue
        try:
            value = float(raw_close)
        except ValueError:
            raise NonFiniteInput(f"line {lineno}: cannot parse close {raw_close!r}") from None
        if not math.isfinite(value):
            raise NonFiniteInput(f"line {lineno}: non-finite close {raw_close!r}")
        if value <= 0:
            raise NonPositiveClose(f"line {lineno}: close {value} is not positive")
        dates.append(day)
        closes.append(value)

    d = np.array(dates, dtype="datetime64[D]")
    c = np.array(closes, dtype=np.float64)
    order = np.argsort(d, kind="stable")
    d, c = d[order], c[order]
    dup = np.flatnonzero(d[1:] == d[:-1])
    if dup.size:
        raise DuplicateDate(f"duplicate date {d[dup[0]]}")
    if dropped:
        log.info("dropped %d rows with missing closes", dropped)
    return PriceSeries(market_code, d, c, dropped)


def read_prices(path, column: str = "Close", market_code: str | None = None) -> PriceSeries:
    with open(path, newline="", encoding="utf-8-sig") as fh:
        text = fh.read()
    if market_code is None:
        market_code = str(path).rsplit("/", 1)[-1].split(".")[0]
    return parse_prices(text, column, market_code)


def log_returns(prices: PriceSeries) -> ReturnSeries:
    if len(prices) < 2:
        raise SeriesTooShort(f"need at least 2 prices, got {len(prices)}")
    r = np.log(prices.closes[1:] / prices.closes[:-1])
    return ReturnSeries(prices.dates[1:].copy(), r)


def day_resolve(returns: ReturnSeries, stride5: bool = False) -> DayResolvedReturns:
    """Split returns into Monday..Friday sub-series plus the full series.

    By default each return goes to the calendar weekday of its date and
    weekend-dated returns are excluded (counted in ``n_weekend``). With
    ``stride5`` the i-th series is simply every fifth return starting at
    position i, regardless of dates.
    """
    out = {}
    n_weekend = 0
    if stride5:
        for i, label in enumerate(WEEKDAYS):
            out[label] = returns.take(slice(i, None, 5))
    else:
        wd = weekday_index(returns.dates)
        for i, label in enumerate(WEEKDAYS):
            out[label] = returns.take(wd == i)
        n_weekend = int(np.sum(wd >= 5))
        if n_weekend:
            log.warning("excluded %d weekend-dated returns", n_weekend)
    out[ALL] = returns
    return DayResolvedReturns(out, n_weekend, stride5)


def shuffle(series, transpositions: int, seed: int) -> np.ndarray:
    """Permute by ``transpositions`` sequential swaps of uniformly drawn index pairs.

    Index pairs come from numpy's PCG64 (``default_rng(seed)``) in fixed-size
    blocks, so the result depends only on (series, transpositions, seed). A
    pair may repeat an index, which leaves the array unchanged for that swap.
    """
    out = np.array(series, dtype=np.float64, copy=True)
    n = out.size
    if transpositions < 1:
        raise ValueError("transpositions must be >= 1")
    if n < 2:
        return out
    rng = np.random.default_rng(seed)
    remaining = int(transpositions)
    while remaining:
        block = min(remaining, _SWAP_BLOCK)
        pairs = rng.integers(0, n, size=(2, block), dtype=np.int64)
        _backend.apply_transpositions(out, pairs[0], pairs[1])
        remaining -= block
    return out


@dataclass
class ParamStats:
    alpha0: float
    width: float
    skew: float


@dataclass
class ShuffleReport:
    weekday: str
    n_obs: int
    n_repetitions: int
    transpositions_per_rep: int
    original_alpha0: float
    original_width: float
    original_skew: float
    mean_params: ParamStats
    std_params: ParamStats
    delta_alpha0: float
    delta_W: float
    n_failed: int = 0
    n_width_failed: int = 0
    shuffled: list = field(default_factory=list, repr=False)  # (alpha0, W, r) per rep


def _nan_stats(values):
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v)]
    if v.size == 0:
        return float("nan"), float("nan")
    std = float(v.std(ddof=1)) if v.size > 1 else 0.0
    return float(v.mean()), std


def shuffle_series(x, config: AnalysisConfig | None = None, label: str = ALL) -> ShuffleReport:
    """Compare one series against ``config.repetitions`` shuffled copies.

    Repetition ``k`` is shuffled with seed ``config.seed + k``. A repetition
    whose pipeline raises is counted in ``n_failed`` and excluded; one whose
    quartic has no bracketing zeros still contributes its alpha0 and is
    counted in ``n_width_failed``.
    """
    config = config or AnalysisConfig()
    x = np.asarray(x, dtype=np.float64)
    original = analyze_series(x, config)
    n_swaps = config.transposition_factor * x.size
    rows, failed = [], 0
    for k in range(config.repetitions):
        shuffled = shuffle(x, n_swaps, config.seed + k)
        try:
            res = analyze_series(shuffled, config)
        except AnalysisError as exc:
            log.debug("repetition %d failed: %s", k, exc)
            failed += 1
            continue
        rows.append((res.alpha0, res.width, res.skew))
    cols = np.array(rows, dtype=float).reshape(-1, 3)
    (m_a, s_a), (m_w, s_w), (m_r, s_r) = (_nan_stats(cols[:, i]) for i in range(3))
    return ShuffleReport(
        weekday=label,
        n_obs=x.size,
        n_repetitions=config.repetitions,
        transpositions_per_rep=n_swaps,
        original_alpha0=original.alpha0,
        original_width=original.width,
        original_skew=original.skew,
        mean_params=ParamStats(m_a, m_w, m_r),
        std_params=ParamStats(s_a, s_w, s_r),
        delta_alpha0=abs(original.alpha0 - m_a),
        delta_W=abs(original.width - m_w),
        n_failed=failed,
        n_width_failed=int(np.sum(~np.isfinite(cols[:, 1]))),
        shuffled=rows,
    )


def shuffle_test(day_returns: DayResolvedReturns, config: AnalysisConfig | None = None, days=WEEKDAYS) -> dict:
    """Shuffle report per weekday series (the ``All`` series only if requested)."""
    config = config or AnalysisConfig()
    out = {}
    for label in days:
        series = day_returns[label]
        if len(series) < config.min_length:
            raise SeriesTooShort(
                f"{label} series has {len(series)} returns, need {config.min_length}"
            )
        out[label] = shuffle_series(series.returns, config, label)
    return out
