"""One-shot series -> (alpha0, W, r) composition used by every front end."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import AnalysisConfig
from .core import (
    FluctuationSurface,
    HurstFunction,
    default_q_grid,
    default_scale_grid,
    fluctuation_function,
    hurst_exponents,
    integrate_profile,
)
from .errors import NoQuarticMaximum, NoRealRoot
from .spectrum import (
    ComplexityParams,
    QuarticFit,
    SingularitySpectrum,
    legendre_transform,
    renyi_exponents,
    spectrum_params,
)


@dataclass
class AnalysisResult:
    n_obs: int
    surface: FluctuationSurface
    hurst: HurstFunction
    spectrum: SingularitySpectrum
    fit: QuarticFit | None
    params: ComplexityParams | None
    error: Exception | None = None

    @property
    def alpha0(self) -> float:
        if self.params is not None:
            return self.params.alpha0
        return self.fit.alpha0 if self.fit is not None else float("nan")

    @property
    def width(self) -> float:
        return self.params.width if self.params is not None else float("nan")

    @property
    def skew(self) -> float:
        return self.params.skew if self.params is not None else float("nan")

    @property
    def status(self) -> str:
        if self.error is not None:
            return type(self.error).__name__
        return "degenerate" if self.params.degenerate else "ok"


def analyze_series(x, config: AnalysisConfig | None = None) -> AnalysisResult:
    """Run profile -> F_q(n) -> h(q) -> f(alpha) -> quartic on one series.

    Errors before the spectrum stage propagate. A quartic whose zeros cannot
    be bracketed is not fatal: the result keeps the fit (so alpha0 is known)
    and stores the error with ``params=None``. A quartic with no maximum is
    stored the same way, without a fit.
    """
    config = config or AnalysisConfig()
    x = np.asarray(x, dtype=np.float64)
    profile = integrate_profile(x)
    scales = default_scale_grid(x.size, config.n_min, config.n_max_divisor, config.n_scales)
    q_grid = default_q_grid(config.q_min, config.q_max, config.q_step)
    surface = fluctuation_function(profile, scales, q_grid, config.detrend_order, config.dual_pass)
    fit_range = (
        config.fit_min if config.fit_min is not None else scales.min_scale,
        config.fit_max if config.fit_max is not None else scales.max_scale,
    )
    hurst = hurst_exponents(surface, fit_range)
    spectrum = legendre_transform(renyi_exponents(hurst))
    try:
        fit, params = spectrum_params(spectrum)
    except NoRealRoot as exc:
        return AnalysisResult(x.size, surface, hurst, spectrum, exc.fit, None, exc)
    except NoQuarticMaximum as exc:
        return AnalysisResult(x.size, surface, hurst, spectrum, None, None, exc)
    return AnalysisResult(x.size, surface, hurst, spectrum, fit, params)
