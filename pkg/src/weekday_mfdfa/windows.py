"""Sliding-window MF-DFA and Monday-minus-other difference traces."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .config import AnalysisConfig
from .errors import AnalysisError, NoCommonWindows, WindowLargerThanSeries
from .pipeline import analyze_series
from .series import ReturnSeries

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class WindowPlan:
    length: int
    size: int
    step: int

    @property
    def count(self) -> int:
        return (self.length - self.size) // self.step + 1

    def bounds(self, t: int) -> tuple[int, int]:
        """Half-open [start, stop) of window ``t`` (0-based)."""
        if not 0 <= t < self.count:
            raise IndexError(f"window {t} outside 0..{self.count - 1}")
        start = t * self.step
        return start, start + self.size

    def __iter__(self):
        return (self.bounds(t) for t in range(self.count))


def plan_windows(series_length: int, size: int, step: int) -> WindowPlan:
    if size > series_length:
        raise WindowLargerThanSeries(
            f"window of {size} exceeds series length {series_length}"
        )
    if size < 1 or not 1 <= step <= size:
        raise ValueError(f"need size >= 1 and 1 <= step <= size, got size={size}, step={step}")
    return WindowPlan(series_length, size, step)


@dataclass
class SpectrumTrace:
    """Per-window parameters; failed windows hold NaN and an error name."""

    label: str
    plan: WindowPlan
    window_times: np.ndarray  # last date in each window
    alpha0: np.ndarray
    width: np.ndarray
    skew: np.ndarray
    errors: list
    spectra: list = field(default_factory=list, repr=False)
    window_starts: np.ndarray = None  # first date in each window

    def __len__(self):
        return self.alpha0.size

    def contains(self, day) -> np.ndarray:
        """Mask of windows whose date span includes ``day``."""
        d = np.datetime64(day, "D")
        return (self.window_starts <= d) & (d <= self.window_times)

    @property
    def n_failed(self) -> int:
        return sum(e is not None for e in self.errors)


@dataclass
class DifferenceTrace:
    baseline_day: str
    other_day: str
    window_index: np.ndarray
    window_times: np.ndarray  # baseline window end dates
    delta_alpha0: np.ndarray
    delta_W: np.ndarray


def evolve_spectra(
    day_series: ReturnSeries,
    plan: WindowPlan,
    config: AnalysisConfig | None = None,
    label: str = "",
    keep_spectra: bool = False,
) -> SpectrumTrace:
    """Run the full pipeline independently on every window of ``plan``."""
    config = config or AnalysisConfig()
    if plan.length != len(day_series):
        raise ValueError("plan was built for a series of a different length")
    if plan.size < config.min_length:
        raise AnalysisError(
            f"window of {plan.size} too short for the scale grid (need {config.min_length})"
        )
    n = plan.count
    alpha0, width, skew = np.full(n, np.nan), np.full(n, np.nan), np.full(n, np.nan)
    errors, spectra = [None] * n, []
    times = np.empty(n, dtype="datetime64[D]")
    starts = np.empty(n, dtype="datetime64[D]")
    for t, (start, stop) in enumerate(plan):
        starts[t], times[t] = day_series.dates[start], day_series.dates[stop - 1]
        try:
            res = analyze_series(day_series.returns[start:stop], config)
        except AnalysisError as exc:
            errors[t] = type(exc).__name__
            if keep_spectra:
                spectra.append(None)
            continue
        alpha0[t], width[t], skew[t] = res.alpha0, res.width, res.skew
        if res.error is not None:
            errors[t] = type(res.error).__name__
        if keep_spectra:
            spectra.append(res.spectrum)
    if np.all(np.isnan(alpha0)):
        raise AnalysisError(f"all {n} windows failed for {label or 'series'}")
    return SpectrumTrace(label, plan, times, alpha0, width, skew, errors, spectra, starts)


def difference_trace(baseline: SpectrumTrace, other: SpectrumTrace) -> DifferenceTrace:
    """baseline minus other, aligned by window index.

    Weekday series differ in length by a few holidays, so the longer trace is
    truncated to the shorter count. Windows where either side has no alpha0
    are skipped; delta_W is NaN where either width is missing.
    """
    n = min(len(baseline), len(other))
    idx = np.arange(n)
    keep = np.isfinite(baseline.alpha0[:n]) & np.isfinite(other.alpha0[:n])
    if not keep.any():
        raise NoCommonWindows(f"no common windows between {baseline.label} and {other.label}")
    idx = idx[keep]
    return DifferenceTrace(
        baseline.label,
        other.label,
        idx,
        baseline.window_times[idx],
        baseline.alpha0[idx] - other.alpha0[idx],
        baseline.width[idx] - other.width[idx],
    )
