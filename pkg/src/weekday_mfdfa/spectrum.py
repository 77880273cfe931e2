"""From h(q) to the singularity spectrum and its (alpha0, W, r) summary."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core import HurstFunction, QGrid
from .errors import (
    DegenerateSpectrum,
    GridTooSmall,
    NoQuarticMaximum,
    NoRealRootLeft,
    NoRealRootRight,
)

DEGENERATE_WIDTH = 1e-3
ROOT_SEARCH = 2.0


@dataclass
class RenyiFunction:
    q_grid: QGrid
    tau: np.ndarray

    def concavity_violations(self, tol: float = 1e-9) -> int:
        q = self.q_grid.q_values
        slopes = np.diff(self.tau) / np.diff(q)
        return int(np.sum(np.diff(slopes) > tol))


@dataclass
class SingularitySpectrum:
    alpha: np.ndarray
    f_alpha: np.ndarray
    source_q: np.ndarray

    def __len__(self):
        return self.alpha.size

    @property
    def alpha_range(self) -> float:
        return float(self.alpha.max() - self.alpha.min()) if self.alpha.size else 0.0

    def ordering_violations(self, tol: float = 1e-9) -> int:
        """Number of places where alpha increases with q."""
        return int(np.sum(np.diff(self.alpha) > tol))


@dataclass
class QuarticFit:
    """f(alpha) = A + B d + C d^2 + D d^3 + E d^4 with d = alpha - alpha0."""

    A: float
    B: float
    C: float
    D: float
    E: float
    alpha0: float

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([self.A, self.B, self.C, self.D, self.E])

    def __call__(self, alpha):
        d = np.asarray(alpha, dtype=float) - self.alpha0
        return np.polynomial.polynomial.polyval(d, self.coefficients)

    def derivative(self, alpha, order: int = 1):
        d = np.asarray(alpha, dtype=float) - self.alpha0
        c = np.polynomial.polynomial.polyder(self.coefficients, order)
        return np.polynomial.polynomial.polyval(d, c)


@dataclass
class ComplexityParams:
    alpha0: float
    width: float
    skew: float
    alpha_min: float
    alpha_max: float
    degenerate: bool = False

    def as_tuple(self):
        return (self.alpha0, self.width, self.skew)


def renyi_exponents(hurst: HurstFunction) -> RenyiFunction:
    q = hurst.q_grid.q_values
    return RenyiFunction(hurst.q_grid, q * hurst.h - 1.0)


def legendre_transform(renyi: RenyiFunction) -> SingularitySpectrum:
    """Central differences of tau on the q-grid; the two end points are dropped."""
    q = renyi.q_grid.q_values
    tau = renyi.tau
    if q.size < 3:
        raise GridTooSmall(f"need at least 3 q values, got {q.size}")
    alpha = (tau[2:] - tau[:-2]) / (q[2:] - q[:-2])
    inner_q = q[1:-1]
    f = inner_q * alpha - tau[1:-1]
    return SingularitySpectrum(alpha, f, inner_q.copy())


def _lstsq_quartic(alpha, f, center):
    design = np.vander(alpha - center, 5, increasing=True)
    coef, *_ = np.linalg.lstsq(design, f, rcond=None)
    return coef


def _roots(coef) -> np.ndarray:
    # Negligible leading terms only add roots far outside any search interval
    # and overflow the companion matrix, so drop them first.
    coef = np.asarray(coef, dtype=float)
    big = np.max(np.abs(coef)) if coef.size else 0.0
    keep = np.flatnonzero(np.abs(coef) > 1e-13 * big)
    if keep.size == 0 or keep[-1] == 0:
        return np.array([], dtype=complex)
    return np.polynomial.polynomial.polyroots(coef[: keep[-1] + 1])


def _apex_offset(coef, seed_offset):
    # Critical points of the quartic that are maxima, nearest to the seed.
    deriv = np.polynomial.polynomial.polyder(coef)
    second = np.polynomial.polynomial.polyder(coef, 2)
    roots = _roots(deriv)
    real = roots[np.abs(roots.imag) < 1e-9].real
    maxima = real[np.polynomial.polynomial.polyval(real, second) < 0]
    if maxima.size == 0:
        return None
    return maxima[np.argmin(np.abs(maxima - seed_offset))]


def fit_quartic(spectrum: SingularitySpectrum) -> QuarticFit:
    """Unweighted quartic least squares, recentred once on the fitted apex."""
    alpha, f = spectrum.alpha, spectrum.f_alpha
    if alpha.size < 7:
        raise DegenerateSpectrum(f"need at least 7 spectrum points, got {alpha.size}")
    if spectrum.alpha_range <= DEGENERATE_WIDTH:
        raise DegenerateSpectrum(
            f"alpha range {spectrum.alpha_range:.2e} below {DEGENERATE_WIDTH}: monofractal"
        )
    seed = float(alpha[np.argmax(f)])
    coef = _lstsq_quartic(alpha, f, seed)
    offset = _apex_offset(coef, 0.0)
    if offset is None:
        raise NoQuarticMaximum("fitted quartic has no local maximum")
    alpha0 = seed + float(offset)
    coef = _lstsq_quartic(alpha, f, alpha0)
    return QuarticFit(*map(float, coef), alpha0=alpha0)


def _polish(fit: QuarticFit, inner: float, root: float, direction: float) -> float:
    # Root is the first crossing beyond alpha0, so [inner, root + step] brackets it.
    if fit(root) == 0.0:
        return root
    for step in (1e-9, 1e-7, 1e-5, 1e-3):
        outer = root + direction * step
        if np.sign(fit(outer)) != np.sign(fit(inner)):
            lo, hi = sorted((inner, outer))
            return brentq(fit, lo, hi, xtol=1e-13, rtol=4 * np.finfo(float).eps, maxiter=200)
    return root


def complexity_params(fit: QuarticFit) -> ComplexityParams:
    """Zeros of the fitted quartic bracketing the apex, and the derived W and r."""
    roots = _roots(fit.coefficients) + fit.alpha0
    real = np.sort(roots[np.abs(roots.imag) < 1e-7 * (1 + np.abs(roots.real))].real)
    a0 = fit.alpha0
    left = real[(real < a0) & (real >= a0 - ROOT_SEARCH)]
    right = real[(real > a0) & (real <= a0 + ROOT_SEARCH)]
    if left.size == 0:
        raise NoRealRootLeft(f"quartic has no zero in [{a0 - ROOT_SEARCH:.3f}, {a0:.3f})", fit)
    if right.size == 0:
        raise NoRealRootRight(f"quartic has no zero in ({a0:.3f}, {a0 + ROOT_SEARCH:.3f}]", fit)
    a_min = _polish(fit, a0, float(left[-1]), -1.0)
    a_max = _polish(fit, a0, float(right[0]), 1.0)
    width = a_max - a_min
    return ComplexityParams(a0, width, (a_max - a0) / (a0 - a_min), a_min, a_max)


def degenerate_params(spectrum: SingularitySpectrum) -> ComplexityParams:
    """Single-point (monofractal) summary: W = 0, r reported as 1."""
    centre = float(np.mean(spectrum.alpha)) if len(spectrum) else float("nan")
    return ComplexityParams(centre, 0.0, 1.0, centre, centre, degenerate=True)


def spectrum_params(spectrum: SingularitySpectrum) -> tuple[QuarticFit | None, ComplexityParams]:
    """fit_quartic + complexity_params, falling back to the degenerate summary."""
    try:
        fit = fit_quartic(spectrum)
    except DegenerateSpectrum:
        if spectrum.alpha_range <= DEGENERATE_WIDTH:
            return None, degenerate_params(spectrum)
        raise
    return fit, complexity_params(fit)
