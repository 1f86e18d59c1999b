import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lambheat.spectral import (
    BathSpec,
    SpectralKind,
    bose_occupation,
    bose_occupation_dT,
    rate,
    spectral_density,
)

KINDS = list(SpectralKind)


def test_kind_parse():
    assert SpectralKind.parse("Gaussian") is SpectralKind.GAUSSIAN
    with pytest.raises(ValueError):
        SpectralKind.parse("lorentz")


@pytest.mark.parametrize("field", ["temperature", "gamma", "omega_d"])
def test_bath_validation(field):
    kw = dict(temperature=1.0, gamma=0.01, omega_d=50.0)
    kw[field] = -1.0
    with pytest.raises(ValueError):
        BathSpec(**kw)


def test_values_at_cutoff():
    g, wd = 0.02, 40.0
    assert spectral_density(BathSpec(1, g, wd, "drude"), wd) == pytest.approx(g * wd / 2, rel=1e-15)
    assert spectral_density(BathSpec(1, g, wd, "sharp"), wd) == 0.0
    assert spectral_density(BathSpec(1, g, wd, "sharp"), wd * (1 - 1e-12)) > 0
    assert spectral_density(BathSpec(1, g, wd, "gaussian"), wd) == pytest.approx(g * wd / math.e, rel=1e-15)


def test_reference_density(eig):
    # 30-digit evaluation
    assert spectral_density(BathSpec(1.0, 0.01, 50.0), float(eig.omega[0])) == pytest.approx(
        0.0183990479062192721, rel=1e-14
    )


def test_negative_frequency_rejected():
    with pytest.raises(ValueError):
        spectral_density(BathSpec(1, 0.01, 50), -1.0)


def test_bose_values():
    assert bose_occupation(1.0, math.log(2.0)) == pytest.approx(1.0, rel=1e-15)
    assert bose_occupation(1.0, 10.0) == pytest.approx(4.54019910096877683e-5, rel=1e-14)
    assert bose_occupation(1.0, 1e-6) == pytest.approx(1e6, rel=1e-6)
    assert abs(bose_occupation(1.0, 1e-6) - 1e6) / 1e6 < 1e-6
    # no overflow deep in the quantum regime
    assert bose_occupation(1e-3, 1000.0) == 0.0


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_bose_pole(bad):
    with pytest.raises(ValueError):
        bose_occupation(1.0, bad)


def test_bose_temperature_derivative():
    for T, w in [(0.3, 1.0), (1.0, 2.5), (10.0, 0.1)]:
        h = 1e-6 * T
        fd = (bose_occupation(T + h, w) - bose_occupation(T - h, w)) / (2 * h)
        assert bose_occupation_dT(T, w) == pytest.approx(fd, rel=1e-7)


def test_reference_rate(eig):
    w1 = float(eig.omega[0])
    n = 1.0 / math.expm1(w1)
    b = BathSpec(1.0, 0.01, 50.0)
    assert rate(b, w1, +1) == pytest.approx(2 * 0.0183990479062192721 * (n + 1), rel=1e-13)
    assert rate(b, w1, -1) == pytest.approx(2 * 0.0183990479062192721 * n, rel=1e-13)
    with pytest.raises(ValueError):
        rate(b, w1, 0)


def test_zero_temperature_rates():
    b = BathSpec(1e-4, 0.01, 50.0)
    assert rate(b, 1.5, -1) == 0.0
    assert rate(b, 1.5, +1) == pytest.approx(2 * spectral_density(b, 1.5), rel=1e-15)


@settings(max_examples=300, deadline=None)
@given(
    st.sampled_from(KINDS),
    st.floats(min_value=0.05, max_value=20.0),
    st.floats(min_value=1e-3, max_value=0.99),
    st.floats(min_value=1.0, max_value=200.0),
)
def test_kms(kind, T, frac, wd):
    b = BathSpec(T, 0.01, wd, kind)
    w = frac * wd
    up, down = rate(b, w, +1), rate(b, w, -1)
    assert down == pytest.approx(math.exp(-w / T) * up, rel=1e-12, abs=1e-300)


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=1.0, max_value=500.0), st.floats(min_value=1e-4, max_value=0.5))
def test_small_frequency_agreement(wd, frac):
    g = 0.03
    w = frac * wd
    sharp = spectral_density(BathSpec(1, g, wd, "sharp"), w)
    # analytic bound plus rounding of the difference
    bound = g * w**3 / wd**2 + 8 * np.finfo(float).eps * sharp
    assert abs(spectral_density(BathSpec(1, g, wd, "drude"), w) - sharp) <= bound
    assert abs(spectral_density(BathSpec(1, g, wd, "gaussian"), w) - sharp) <= bound


@pytest.mark.parametrize("kind", KINDS)
def test_nonnegative_and_continuous(kind):
    b = BathSpec(1, 0.01, 10.0, kind)
    w = np.linspace(0, 50, 20001)
    J = spectral_density(b, w)
    assert np.all(J >= 0)
    if kind is not SpectralKind.SHARP:
        assert np.max(np.abs(np.diff(J))) < 1e-3
