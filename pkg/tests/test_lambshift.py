import math

import numpy as np
import pytest

from lambheat import lambshift, pvquad
from lambheat.lambshift import (
    SeriesConvergenceError,
    combined_2d_plus_dprime,
    delta_analytic,
    delta_prime_analytic,
    lamb_shift_report,
    level_shifts,
    level_shifts_from_s,
    matsubara_r,
    matsubara_r_estimate,
    transition_shifts,
)
from lambheat.spectral import BathSpec

from conftest import assert_rel


@pytest.mark.parametrize("T", [0.1, 1.0, 10.0])
@pytest.mark.parametrize("wd", [10.0, 50.0, 100.0])
def test_series_matches_quadrature(eig, T, wd):
    bath = BathSpec(T, 0.01, wd)
    for w in map(float, eig.omega):
        assert_rel(delta_analytic(bath, w), pvquad.delta_quad(bath, w), 1e-6)
        assert_rel(delta_prime_analytic(bath, w), pvquad.delta_prime_quad(bath, w), 1e-6)


def test_golden_matsubara(eig, fig2_bath):
    w1 = float(eig.omega[0])
    # frozen from the quadrature-verified evaluation
    assert matsubara_r(fig2_bath, w1) == pytest.approx(-2.6165992869782158, rel=1e-12)
    assert matsubara_r_estimate(fig2_bath, w1) == pytest.approx(-2.1512762584804603, rel=1e-14)
    assert delta_analytic(fig2_bath, w1) == pytest.approx(0.00437596214571183230548575857248, rel=1e-10)


def test_delta_prime_reference(eig, fig2_bath):
    w1 = float(eig.omega[0])
    J = 0.0183990479062192721
    assert delta_prime_analytic(fig2_bath, w1) == pytest.approx(-2 * J / math.pi * math.log(50 / w1), rel=1e-14)
    assert delta_prime_analytic(fig2_bath, 50.0) == 0.0


def test_combined_form(eig):
    for T in (0.05, 1.0, 20.0):
        bath = BathSpec(T, 0.01, 50.0)
        for w in map(float, eig.omega):
            both = 2 * delta_analytic(bath, w) + delta_prime_analytic(bath, w)
            assert combined_2d_plus_dprime(bath, w) == pytest.approx(both, rel=1e-10, abs=1e-15)


def test_low_temperature_limits(eig):
    w = float(eig.omega[0])
    cold = BathSpec(1e-3, 0.01, 50.0)
    assert abs(delta_analytic(cold, w)) < 1e-8
    assert combined_2d_plus_dprime(cold, w) == pytest.approx(delta_prime_analytic(cold, w), rel=1e-6)
    assert combined_2d_plus_dprime(BathSpec(1.0, 0.01, 50.0), w) < 0
    # estimate tends to ln(w/wD)
    assert matsubara_r_estimate(BathSpec(1e-7, 0.01, 50.0), w) == pytest.approx(math.log(w / 50), rel=1e-6)


def test_high_temperature_limits(eig):
    w = float(eig.omega[0])
    hot = BathSpec(1e7, 0.01, 50.0)
    assert abs(matsubara_r(hot, w)) < 1e-5
    assert abs(matsubara_r_estimate(hot, w)) < 1e-5


def test_continuity_at_pole_coincidences(eig):
    """beta*wD crossing 2 pi k, where the cotangent form has canceling poles."""
    wd, w = 50.0, float(eig.omega[0])
    for k in (1, 2, 3):
        T0 = wd / (2 * math.pi * k)
        Ts = T0 * (1 + np.linspace(-1e-6, 1e-6, 41))
        vals = np.array([delta_analytic(BathSpec(T, 0.01, wd), w) for T in Ts])
        slope = np.diff(vals) / np.diff(Ts)
        assert np.all(np.isfinite(vals))
        # smooth: the finite-difference slope is nearly constant across the crossing
        assert np.ptp(slope) < 1e-4 * np.max(np.abs(slope)) + 1e-12


def test_estimate_order(eig):
    w1 = float(eig.omega[0])
    wd = 50.0
    betas = np.logspace(-4, -2, 9) / wd
    errs = [abs(matsubara_r(BathSpec(1 / b, 0.01, wd), w1) - matsubara_r_estimate(BathSpec(1 / b, 0.01, wd), w1))
            for b in betas]
    slope = np.polyfit(np.log(betas), np.log(errs), 1)[0]
    assert abs(slope - 1) <= 0.2


def test_r_over_dT_vanishes(eig):
    w = float(eig.omega[1])
    r3 = matsubara_r(BathSpec(1 + 1e3, 0.01, 50.0), w) / 1e3
    r4 = matsubara_r(BathSpec(1 + 1e4, 0.01, 50.0), w) / 1e4
    assert abs(r4) < abs(r3)


def test_series_budget():
    with pytest.raises(SeriesConvergenceError) as info:
        matsubara_r(BathSpec(1e-3, 0.01, 50.0), 1.0, max_terms=100)
    assert np.isfinite(info.value.estimate)


def test_requires_drude(eig):
    with pytest.raises(ValueError):
        delta_analytic(BathSpec(1.0, 0.01, 50.0, "sharp"), 1.0)
    with pytest.raises(ValueError):
        transition_shifts(eig, (BathSpec(1, 0.01, 50, "gaussian"),) * 2, method="series")
    with pytest.raises(ValueError):
        transition_shifts(eig, (BathSpec(1, 0.01, 50),) * 2, method="magic")


def test_negative_at_low_temperature(eig):
    d = transition_shifts(eig, (BathSpec(1e-2, 0.01, 50.0), BathSpec(1e-2, 0.01, 50.0)))
    assert np.all(d < 0)


def test_reference_shifts(eig, blue_baths):
    d = transition_shifts(eig, blue_baths)
    assert_rel(d, [-0.007863746794440851, -0.03849064168287558], 1e-10)


def test_level_differences_reproduce_transition_shifts(eig, blue_baths):
    lv, plus, minus = level_shifts(eig, blue_baths)
    d1, d2 = transition_shifts(eig, blue_baths)
    assert lv[1] - lv[2] == pytest.approx(d1, rel=1e-10)
    assert lv[3] - lv[0] == pytest.approx(d1, rel=1e-10)
    assert lv[2] - lv[0] == pytest.approx(d2, rel=1e-10)
    assert lv[1] - lv[3] == pytest.approx(d2, rel=1e-10)
    # the split of Delta' into Delta+ and Delta- is the quadrature one
    w = float(eig.omega[0])
    assert minus[0, 0] == pytest.approx(pvquad.delta_minus_quad(blue_baths[0], w), rel=1e-8)


def test_level_shifts_match_s_form(eig, blue_baths):
    lv, _, _ = level_shifts(eig, blue_baths)
    assert_rel(level_shifts_from_s(eig, blue_baths), lv, 1e-8)


def test_cold_level_shifts_finite(eig):
    cold = (BathSpec(1e-3, 0.01, 50.0), BathSpec(1e-3, 0.01, 50.0))
    lv, plus, minus = level_shifts(eig, cold)
    assert np.all(np.isfinite(lv))
    # ground level only goes down through the Delta+ channels
    assert lv[0] < 0


@pytest.mark.parametrize("kind", ["sharp", "gaussian"])
def test_non_drude_shift_grows_linearly(eig, kind):
    def d(dT):
        return transition_shifts(eig, (BathSpec(1.0, 0.01, 50.0, kind), BathSpec(1.0 + dT, 0.01, 50.0, kind)))

    a, b, c = d(2e3), d(4e3), d(8e3)
    np.testing.assert_allclose((c - b) / (b - a), 2.0, rtol=0.02)
    assert np.all(c > b)


def test_report_fields(eig, blue_baths):
    rep = lamb_shift_report(eig, blue_baths)
    assert rep.method == "series"
    assert rep.r_jmu.shape == (2, 2) and rep.level_shifts.shape == (4,)
    np.testing.assert_allclose(rep.transition_shifts, transition_shifts(eig, blue_baths))
    q = lamb_shift_report(eig, blue_baths, method="quadrature", with_levels=False)
    assert q.method == "quadrature" and q.level_shifts is None
    assert_rel(q.transition_shifts, rep.transition_shifts, 1e-7)
