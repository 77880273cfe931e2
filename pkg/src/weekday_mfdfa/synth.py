"""Synthetic series with known scaling: binomial cascades and Gaussian noise."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, SynthesisFailure


@dataclass(frozen=True)
class CascadeSpec:
    a: float = 0.6
    levels: int = 13
    seed: int = 0

    def __post_init__(self):
        if not 0.5 <= self.a < 1.0:
            raise ConfigError(f"cascade multiplier must lie in [0.5, 1), got {self.a}")
        if self.levels < 1:
            raise ConfigError(f"cascade levels must be positive, got {self.levels}")


@dataclass(frozen=True)
class NoiseSpec:
    length: int = 8192
    hurst: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.hurst < 1.0:
            raise ConfigError(f"hurst must lie in (0, 1), got {self.hurst}")
        if self.length < 2:
            raise ConfigError(f"noise length must be at least 2, got {self.length}")


def cascade_hurst(q, a: float):
    """Closed-form h(q) of the binomial measure with weights a, 1-a."""
    q = np.asarray(q, dtype=float)
    b = 1.0 - a
    with np.errstate(divide="ignore", invalid="ignore"):
        h = 1.0 / q - np.log(a**q + b**q) / (q * np.log(2.0))
    # q -> 0 limit: 1 + ... ; d/dq ln(a^q+b^q) at 0 is (ln a + ln b)/2
    limit = -(np.log(a) + np.log(b)) / (2.0 * np.log(2.0))
    return np.where(q == 0.0, limit, h)


def cascade_tau(q, a: float):
    """Closed-form Renyi exponents tau(q) = -log2(a^q + (1-a)^q)."""
    q = np.asarray(q, dtype=float)
    return -np.log(a**q + (1.0 - a) ** q) / np.log(2.0)


def cascade_spectrum(q, a: float):
    """Closed-form Legendre pair (alpha(q), f(alpha(q)))."""
    q = np.asarray(q, dtype=float)
    b = 1.0 - a
    wa = a**q / (a**q + b**q)
    alpha = -(wa * np.log(a) + (1 - wa) * np.log(b)) / np.log(2.0)
    f = q * alpha - cascade_tau(q, a)
    return alpha, f


def gen_binomial_cascade(spec: CascadeSpec) -> np.ndarray:
    """Binomial multiplicative measure on 2**levels cells, total mass 1.

    At every split the heavier weight ``a`` goes left or right at random
    (driven by ``seed``); the multiset of cell masses does not depend on it.
    """
    rng = np.random.default_rng(spec.seed)
    mass = np.ones(1)
    for _ in range(spec.levels):
        heavy_left = rng.random(mass.size) < 0.5
        heavy = mass * spec.a
        light = mass - heavy  # exact, since heavy lies in [mass/2, mass]
        left = np.where(heavy_left, heavy, light)
        right = np.where(heavy_left, light, heavy)
        mass = np.column_stack([left, right]).ravel()
    return mass


def _fgn_autocovariance(hurst: float, lags: np.ndarray) -> np.ndarray:
    k = lags.astype(float)
    two_h = 2.0 * hurst
    return 0.5 * (np.abs(k + 1) ** two_h - 2 * np.abs(k) ** two_h + np.abs(k - 1) ** two_h)


def gen_gaussian_noise(spec: NoiseSpec) -> np.ndarray:
    """Standardised Gaussian noise; fractional (circulant embedding) when H != 0.5."""
    rng = np.random.default_rng(spec.seed)
    n = spec.length
    if spec.hurst == 0.5:
        x = rng.standard_normal(n)
    else:
        gamma = _fgn_autocovariance(spec.hurst, np.arange(n + 1))
        row = np.concatenate([gamma, gamma[-2:0:-1]])
        eig = np.fft.fft(row).real
        if eig.min() < -1e-10 * eig.max():
            raise SynthesisFailure(
                f"circulant embedding not positive definite for H={spec.hurst}, N={n}"
            )
        eig = np.clip(eig, 0.0, None)
        m = row.size
        z = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        x = np.fft.fft(np.sqrt(eig / m) * z).real[:n]
    return (x - x.mean()) / x.std()
