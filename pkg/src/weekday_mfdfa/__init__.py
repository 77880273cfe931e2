"""Multifractal detrended fluctuation analysis of day-of-the-week resolved returns."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .config import AnalysisConfig
from .core import (
    FluctuationSurface,
    HurstFunction,
    Profile,
    QGrid,
    ScaleGrid,
    default_q_grid,
    default_scale_grid,
    detrended_variance,
    fluctuation_function,
    hurst_exponents,
    integrate_profile,
)
from .pipeline import AnalysisResult, analyze_series
from .series import (
    DayResolvedReturns,
    PriceSeries,
    ReturnSeries,
    ShuffleReport,
    day_resolve,
    log_returns,
    parse_prices,
    read_prices,
    shuffle,
    shuffle_series,
    shuffle_test,
)
from .spectrum import (
    ComplexityParams,
    QuarticFit,
    RenyiFunction,
    SingularitySpectrum,
    complexity_params,
    fit_quartic,
    legendre_transform,
    renyi_exponents,
)
from .synth import CascadeSpec, NoiseSpec, gen_binomial_cascade, gen_gaussian_noise
from .windows import (
    DifferenceTrace,
    SpectrumTrace,
    WindowPlan,
    difference_trace,
    evolve_spectra,
    plan_windows,
)
