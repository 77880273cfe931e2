"""MF-DFA engine: profile, segment detrending, fluctuation functions, h(q)."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import logsumexp

from . import _backend
from .errors import (
    DegenerateFit,
    InsufficientScales,
    NonFiniteInput,
    SegmentOutOfRange,
    SeriesTooShort,
    ZeroVarianceSegment,
)

VARIANCE_FLOOR = 1e-30


@dataclass
class Profile:
    values: np.ndarray
    source_length: int

    def __len__(self):
        return self.source_length


@dataclass
class ScaleGrid:
    scales: np.ndarray

    @property
    def min_scale(self) -> int:
        return int(self.scales[0])

    @property
    def max_scale(self) -> int:
        return int(self.scales[-1])

    def validate(self, length: int, detrend_order: int) -> None:
        s = self.scales
        if s.ndim != 1 or s.size == 0:
            raise InsufficientScales("empty scale grid")
        if np.any(np.diff(s) <= 0):
            raise ValueError("scales must be strictly increasing")
        if s[0] < detrend_order + 2:
            raise DegenerateFit(
                f"min scale {s[0]} too small for detrend order {detrend_order}"
            )
        if 4 * s[-1] > length:
            raise SeriesTooShort(
                f"max scale {s[-1]} exceeds N/4 for series of length {length}"
            )


@dataclass
class QGrid:
    q_values: np.ndarray

    def __len__(self):
        return self.q_values.size


@dataclass
class FluctuationSurface:
    scale_grid: ScaleGrid
    q_grid: QGrid
    values: np.ndarray  # shape (len(q), len(scales))
    detrend_order: int
    dual_pass: bool = True
    n_floored: int = 0


@dataclass
class HurstFunction:
    q_grid: QGrid
    h: np.ndarray
    fit_r2: np.ndarray
    fit_range: tuple
    intercept: np.ndarray = field(default=None, repr=False)

    @property
    def hurst(self) -> float:
        """h(2), the ordinary Hurst exponent (nan when q=2 is off-grid)."""
        q = self.q_grid.q_values
        hit = np.flatnonzero(np.isclose(q, 2.0))
        return float(self.h[hit[0]]) if hit.size else float("nan")

    def monotonicity_violations(self, tol: float = 1e-6) -> int:
        """Count increases of h along the q-grid larger than ``tol``."""
        return int(np.sum(np.diff(self.h) > tol))


def default_q_grid(q_min: float = -5.0, q_max: float = 5.0, step: float = 0.25) -> QGrid:
    if step <= 0 or q_max <= q_min:
        raise ValueError("need q_max > q_min and step > 0")
    count = int(round((q_max - q_min) / step)) + 1
    q = np.round(q_min + step * np.arange(count), 12)
    return QGrid(q + 0.0)  # normalise -0.0


def default_scale_grid(
    length: int,
    n_min: int = 10,
    n_max_divisor: float = 4,
    count: int = 30,
) -> ScaleGrid:
    """~``count`` log-spaced integer scales between ``n_min`` and N/divisor."""
    n_max = int(length // n_max_divisor)
    if n_max < n_min:
        raise SeriesTooShort(
            f"series of length {length} too short for min scale {n_min}"
        )
    raw = np.geomspace(n_min, n_max, count)
    scales = np.unique(np.round(raw).astype(np.int64))
    return ScaleGrid(scales)


def integrate_profile(x) -> Profile:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size < 4:
        raise SeriesTooShort(f"need at least 4 points, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput("series contains NaN or infinite values")
    return Profile(np.cumsum(x - x.mean()), x.size)


@lru_cache(maxsize=512)
def _detrend_basis(n: int, order: int) -> np.ndarray:
    # Orthonormal polynomial basis on abscissa rescaled to [-1, 1].
    if n < order + 2:
        raise DegenerateFit(f"segment length {n} too short for order {order}")
    t = np.linspace(-1.0, 1.0, n)
    q, r = np.linalg.qr(np.vander(t, order + 1, increasing=True))
    if np.min(np.abs(np.diag(r))) < 1e-10:
        raise DegenerateFit(f"singular local fit for n={n}, order={order}")
    basis = np.ascontiguousarray(q)
    basis.setflags(write=False)
    return basis


def detrended_variance(profile: Profile, n: int, segment_index: int, detrend_order: int = 2) -> float:
    """Variance about the order-``detrend_order`` fit on ``profile[i*n:(i+1)*n]``."""
    values = profile.values
    if n < 1 or segment_index < 0 or (segment_index + 1) * n > values.size:
        raise SegmentOutOfRange(
            f"segment {segment_index} of length {n} outside profile of length {values.size}"
        )
    basis = _detrend_basis(n, detrend_order)
    seg = values[segment_index * n:(segment_index + 1) * n]
    seg = seg - seg.mean()
    resid = seg - basis @ (basis.T @ seg)
    return float(resid @ resid / n)


def segment_variances(profile: Profile, n: int, detrend_order: int = 2, dual_pass: bool = True) -> np.ndarray:
    """All F^2(n, v): forward segments first, then (if dual) those cut from the end."""
    basis = _detrend_basis(int(n), detrend_order)
    return _backend.segment_variances(profile.values, int(n), basis, bool(dual_pass))


def fluctuation_function(
    profile: Profile,
    scale_grid: ScaleGrid,
    q_grid: QGrid,
    detrend_order: int = 2,
    dual_pass: bool = True,
    zero_variance: str = "floor",
) -> FluctuationSurface:
    """q-order fluctuation functions over both grids.

    Segment variances below ``VARIANCE_FLOOR`` are floored and counted in
    ``n_floored``; with ``zero_variance="raise"`` the first one raises
    ZeroVarianceSegment instead.
    """
    scale_grid.validate(profile.source_length, detrend_order)
    q = q_grid.q_values
    out = np.empty((q.size, scale_grid.scales.size))
    floored = 0
    for j, n in enumerate(scale_grid.scales):
        f2 = segment_variances(profile, n, detrend_order, dual_pass)
        low = f2 < VARIANCE_FLOOR
        if low.any():
            if zero_variance == "raise":
                raise ZeroVarianceSegment(int(n), int(np.flatnonzero(low)[0]))
            floored += int(low.sum())
            f2 = np.where(low, VARIANCE_FLOOR, f2)
        log_f2 = np.log(f2)
        # log of the power mean, computed in log space to survive large |q|
        log_moment = logsumexp(0.5 * np.outer(q, log_f2), axis=1) - np.log(log_f2.size)
        with np.errstate(invalid="ignore", divide="ignore"):
            log_fq = np.where(q == 0.0, 0.5 * log_f2.mean(), log_moment / np.where(q == 0.0, 1.0, q))
        out[:, j] = np.exp(log_fq)
    return FluctuationSurface(scale_grid, q_grid, out, detrend_order, dual_pass, floored)


def hurst_exponents(surface: FluctuationSurface, fit_range=None) -> HurstFunction:
    """Per-q OLS slope of log F_q(n) against log n over ``fit_range`` (inclusive)."""
    scales = surface.scale_grid.scales
    if fit_range is None:
        fit_range = (int(scales[0]), int(scales[-1]))
    lo, hi = fit_range
    mask = (scales >= lo) & (scales <= hi)
    if mask.sum() < 5:
        raise InsufficientScales(
            f"fit range {fit_range} covers {int(mask.sum())} scales, need 5"
        )
    x = np.log(scales[mask].astype(float))
    y = np.log(surface.values[:, mask]).T  # (n_scales, n_q)
    design = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    slope, intercept = coef
    resid = y - design @ coef
    ss_res = np.sum(resid**2, axis=0)
    ss_tot = np.sum((y - y.mean(axis=0)) ** 2, axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        r2 = np.where(ss_tot > 0, 1.0 - ss_res / ss_tot, 1.0)
    r2 = np.clip(r2, 0.0, 1.0)
    return HurstFunction(surface.q_grid, slope, r2, (int(lo), int(hi)), intercept)
