import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weekday_mfdfa import synth
from weekday_mfdfa.core import default_q_grid
from weekday_mfdfa.errors import ConfigError, SynthesisFailure
from weekday_mfdfa.pipeline import analyze_series
from weekday_mfdfa.spectrum import SingularitySpectrum, complexity_params, fit_quartic
from weekday_mfdfa.synth import (
    CascadeSpec,
    NoiseSpec,
    cascade_hurst,
    cascade_spectrum,
    cascade_tau,
    gen_binomial_cascade,
    gen_gaussian_noise,
)

Q = default_q_grid().q_values


# --- closed forms ------------------------------------------------------------

def test_closed_form_consistency():
    a = 0.65
    q = Q[Q != 0]
    np.testing.assert_allclose(cascade_tau(q, a), q * cascade_hurst(q, a) - 1, atol=1e-12)
    # alpha is d tau / dq
    eps = 1e-6
    alpha, f = cascade_spectrum(q, a)
    numeric = (cascade_tau(q + eps, a) - cascade_tau(q - eps, a)) / (2 * eps)
    np.testing.assert_allclose(alpha, numeric, atol=1e-6)
    assert cascade_hurst(0.0, a) == pytest.approx(cascade_hurst(1e-7, a), abs=1e-6)


def test_closed_form_range():
    a = 0.7
    alpha, _ = cascade_spectrum(np.array([-200.0, 200.0]), a)
    assert alpha[0] - alpha[1] == pytest.approx(math.log2(a / (1 - a)), rel=1e-6)


def test_half_is_monofractal():
    np.testing.assert_allclose(cascade_hurst(Q, 0.5), 1.0, atol=1e-12)
    m = gen_binomial_cascade(CascadeSpec(0.5, 10, 3))
    assert np.all(m == 2.0**-10)


# --- cascade -----------------------------------------------------------------

@settings(max_examples=40)
@given(st.floats(0.5, 0.99), st.integers(1, 14), st.integers(0, 2**31))
def test_cascade_mass_conserved(a, levels, seed):
    m = gen_binomial_cascade(CascadeSpec(a, levels, seed))
    assert m.size == 2**levels
    assert math.fsum(m) == 1.0
    assert np.all(m > 0)


def test_cascade_orientation_only():
    a, b = (gen_binomial_cascade(CascadeSpec(0.6, 12, s)) for s in (1, 2))
    assert not np.array_equal(a, b)
    np.testing.assert_array_equal(np.sort(a), np.sort(b))


def test_cascade_deterministic():
    spec = CascadeSpec(0.7, 11, 9)
    np.testing.assert_array_equal(gen_binomial_cascade(spec), gen_binomial_cascade(spec))


@pytest.mark.parametrize("kw", [{"a": 0.4}, {"a": 1.0}, {"levels": 0}])
def test_cascade_spec_validation(kw):
    with pytest.raises(ConfigError):
        CascadeSpec(**kw)


def test_cascade_a075_h2():
    res = analyze_series(gen_binomial_cascade(CascadeSpec(0.75, 13, 0)))
    assert res.hurst.hurst == pytest.approx(float(cascade_hurst(2.0, 0.75)), abs=0.05)


def test_width_grows_with_a():
    def closed_width(a):
        q = Q[1:-1]
        sp = SingularitySpectrum(*cascade_spectrum(q, a), q)
        return complexity_params(fit_quartic(sp)).width

    assert closed_width(0.7) > closed_width(0.6)
    w = {a: np.mean([analyze_series(gen_binomial_cascade(CascadeSpec(a, 13, s))).width
                     for s in range(3)]) for a in (0.6, 0.7)}
    assert w[0.7] > w[0.6]


# --- noise -------------------------------------------------------------------

@pytest.mark.parametrize("hurst", [0.5, 0.3, 0.7, 0.9])
def test_noise_standardised(hurst):
    n = 4096
    x = gen_gaussian_noise(NoiseSpec(n, hurst, 1))
    assert abs(x.mean()) < 5 / math.sqrt(n)
    assert abs(x.var() - 1) < 5 / math.sqrt(n)


def test_noise_deterministic():
    spec = NoiseSpec(1000, 0.7, 5)
    np.testing.assert_array_equal(gen_gaussian_noise(spec), gen_gaussian_noise(spec))


def test_fgn_autocorrelation():
    # lag-1 correlation of fGn is 2^(2H-1) - 1
    hurst = 0.8
    x = np.concatenate([gen_gaussian_noise(NoiseSpec(8192, hurst, s)) for s in range(10)])
    r1 = np.mean([np.corrcoef(x[i:i + 8192][:-1], x[i:i + 8192][1:])[0, 1]
                  for i in range(0, x.size, 8192)])
    assert r1 == pytest.approx(2 ** (2 * hurst - 1) - 1, abs=0.02)


def test_synthesis_failure(monkeypatch):
    def bad(hurst, lags):
        out = np.zeros(lags.size)
        out[1] = 2.0  # not a valid covariance: |rho(1)| > rho(0)
        return out

    monkeypatch.setattr(synth, "_fgn_autocovariance", bad)
    with pytest.raises(SynthesisFailure):
        gen_gaussian_noise(NoiseSpec(256, 0.7, 0))


@pytest.mark.parametrize("kw", [{"hurst": 0.0}, {"hurst": 1.0}, {"length": 1}])
def test_noise_spec_validation(kw):
    with pytest.raises(ConfigError):
        NoiseSpec(**kw)


@pytest.mark.slow
@pytest.mark.parametrize("hurst, tol", [(0.5, 0.03), (0.7, 0.05)])
def test_noise_h2(hurst, tol):
    h2 = [analyze_series(gen_gaussian_noise(NoiseSpec(8192, hurst, s))).hurst.hurst
          for s in range(20)]
    assert np.mean(h2) == pytest.approx(hurst, abs=tol)


@pytest.mark.slow
def test_noise_is_monofractal():
    spread = []
    for s in range(20):
        h = analyze_series(gen_gaussian_noise(NoiseSpec(8192, 0.5, s))).hurst.h
        spread.append(h.max() - h.min())
    assert np.mean(spread) < 0.1
