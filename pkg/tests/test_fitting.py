import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from airsea_owc.empirical import EmpiricalPdf
from airsea_owc.fitting import (ALL_FAMILIES, BLACK_SEA_WEIBULL_FITS, Family, FitError, FitWarning,
                                RegressionError, RegressionModel, family_pdf, fit_family, mae, moment_seed,
                                mse_curve, rank_families, regress_linear, regress_power, weibull_wind_table)
from airsea_owc.surface import CoxMunkModel, cm_pdf

from conftest import synthetic_pdf


def test_family_parse_aliases():
    assert Family.parse("weibull") is Family.WEIBULL
    assert Family.parse("Birnbaum-Saunders") is Family.BIRNBAUM_SAUNDERS
    assert Family.parse("normal") is Family.GAUSSIAN
    with pytest.raises(ValueError):
        Family.parse("cauchy")


def test_weibull_round_trip(weibull_pdf):
    fit = fit_family(weibull_pdf, Family.WEIBULL)
    assert fit.params[0] == pytest.approx(1.84, rel=5e-3)
    assert fit.params[1] == pytest.approx(15.61, rel=5e-3)
    assert fit.mse < 1e-9
    assert fit.param_dict == {"shape": fit.params[0], "scale": fit.params[1]}


def test_weibull_input_ranks_weibull_first(weibull_pdf):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FitWarning)
        ranking = rank_families(weibull_pdf)
    assert ranking[0].family is Family.WEIBULL
    by_family = {r.family: r for r in ranking}
    assert by_family[Family.LOGNORMAL].mse > by_family[Family.WEIBULL].mse
    assert [r.mse for r in ranking] == sorted(r.mse for r in ranking)


def test_gamma_input_ranks_gamma_first(gamma_pdf):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FitWarning)
        ranking = rank_families(gamma_pdf)
    assert ranking[0].family is Family.GAMMA
    assert ranking[0].params == pytest.approx((4.0, 3.5), rel=5e-3)


def test_single_family_ranking(weibull_pdf):
    ranking = rank_families(weibull_pdf, families=["Gamma"])
    assert [r.family for r in ranking] == [Family.GAMMA]
    with pytest.raises(ValueError):
        rank_families(weibull_pdf, families=[])


def test_point_mass_raises_with_best_result():
    x = np.arange(0.0, 20.5, 0.5)
    d = np.zeros_like(x)
    d[20] = 2.0  # unit area on the 0.5 deg grid
    pdf = EmpiricalPdf(x, d)
    with pytest.raises(FitError) as info:
        fit_family(pdf, Family.WEIBULL)
    assert info.value.best is not None
    assert info.value.best.family is Family.WEIBULL
    assert not info.value.best.converged


def test_fit_improves_on_moment_seed(gamma_pdf):
    mean, var = gamma_pdf.moments()
    for fam in (Family.WEIBULL, Family.LOGNORMAL, Family.BIRNBAUM_SAUNDERS):
        fit = fit_family(gamma_pdf, fam)
        assert fit.mse <= mse_curve(gamma_pdf, fam, moment_seed(fam, mean, var))


@pytest.mark.parametrize("family", ALL_FAMILIES)
def test_moment_seed_matches_moments(family):
    params = moment_seed(family, 12.0, 40.0)
    dist = {
        Family.LOGNORMAL: lambda p: stats.lognorm(s=p[1], scale=math.exp(p[0])),
        Family.GAUSSIAN: lambda p: stats.norm(p[0], p[1]),
        Family.EXPONENTIAL: lambda p: stats.expon(scale=p[0]),
        Family.GAMMA: lambda p: stats.gamma(a=p[0], scale=p[1]),
        Family.WEIBULL: lambda p: stats.weibull_min(c=p[0], scale=p[1]),
        Family.BIRNBAUM_SAUNDERS: lambda p: stats.fatiguelife(c=p[0], scale=p[1]),
    }[family](params)
    assert dist.mean() == pytest.approx(12.0, rel=1e-6)
    if family is not Family.EXPONENTIAL:
        assert dist.var() == pytest.approx(40.0, rel=1e-6)


def test_normalize_flag_rescales_area():
    x = np.arange(0.0, 90.5, 0.5)
    d = stats.weibull_min(c=1.84, scale=15.61).pdf(x)
    half = EmpiricalPdf(x, 0.5 * d, area_bounds=(0.0, np.inf))
    raw = fit_family(half, Family.WEIBULL)
    scaled = fit_family(half, Family.WEIBULL, normalize=True)
    assert scaled.params == pytest.approx((1.84, 15.61), rel=5e-3)
    assert scaled.mse < 1e-9 < raw.mse


def test_cox_munk_curve_fitted_with_weibull():
    # A slope-statistics curve is close to, but not exactly, Weibull shaped.
    x = np.arange(0.0, 89.75, 0.5)
    d = cm_pdf(np.radians(x), CoxMunkModel(10.0)) * math.pi / 180
    pdf = EmpiricalPdf(x, d)
    fit = fit_family(pdf, Family.WEIBULL)
    assert 1e-9 < fit.mse < 1e-4
    assert fit.params[0] > 1.0


def test_mse_curve_identities(weibull_pdf):
    assert mse_curve(weibull_pdf, "Weibull", (1.84, 15.61)) == pytest.approx(0.0, abs=1e-30)
    shifted = EmpiricalPdf(weibull_pdf.angles_deg, weibull_pdf.densities_per_deg + 1e-3,
                           area_bounds=(0.0, np.inf))
    assert mse_curve(shifted, "Weibull", (1.84, 15.61)) == pytest.approx(1e-6, rel=1e-9)


def test_family_pdf_checks_parameter_count():
    with pytest.raises(ValueError):
        family_pdf(Family.WEIBULL, (1.0,), [1.0])
    assert family_pdf("Exponential", (2.0,), 0.0) == pytest.approx(0.5)


# ---------------------------------------------------------------- regression


def test_regress_linear_two_points_interpolate():
    model = regress_linear([(1.0, 1.0), (2.0, 2.0)])
    assert (model.a, model.b) == pytest.approx((0.0, 1.0), abs=1e-15)


def test_regress_power_exact_law():
    pts = [(u, 2.0 * u) for u in (1.0, 3.0, 7.0)]
    for space in ("linear", "log"):
        model = regress_power(pts, space=space)
        assert (model.a, model.b) == pytest.approx((2.0, 1.0), rel=1e-9)


@pytest.mark.parametrize("pts", [[(5.0, 1.0)], [(5.0, 1.0), (5.0, 2.0)], [[1.0, 2.0, 3.0]]])
def test_regress_linear_rejects_degenerate(pts):
    with pytest.raises(RegressionError):
        regress_linear(pts)


@pytest.mark.parametrize("pts", [[(0.0, 1.0), (2.0, 2.0)], [(1.0, -1.0), (2.0, 2.0)]])
def test_regress_power_rejects_non_positive(pts):
    with pytest.raises(RegressionError):
        regress_power(pts)


def test_regression_model_validation():
    with pytest.raises(ValueError):
        RegressionModel("quadratic", 1.0, 1.0)
    with pytest.raises(ValueError):
        RegressionModel("power", 0.0, 1.0)
    assert RegressionModel("power", 2.0, 0.5).predict(4.0) == pytest.approx(4.0)


@settings(max_examples=30)
@given(st.lists(st.floats(0.5, 20.0), min_size=3, max_size=8, unique=True),
       st.floats(-5, 5), st.floats(-2, 2))
def test_ols_recovers_exact_line(us, a, b):
    model = regress_linear([(u, a + b * u) for u in us])
    assert model.a == pytest.approx(a, abs=1e-9)
    assert model.b == pytest.approx(b, abs=1e-9)


@settings(max_examples=30)
@given(st.lists(st.tuples(st.floats(0.5, 20.0), st.floats(-5, 5)), min_size=3, max_size=8))
def test_ols_is_idempotent(pts):
    us = [p[0] for p in pts]
    if max(us) - min(us) < 1e-3:
        return
    first = regress_linear(pts)
    again = regress_linear([(u, first.predict(u)) for u in us])
    assert again.a == pytest.approx(first.a, abs=1e-8)
    assert again.b == pytest.approx(first.b, abs=1e-8)


def test_mae_examples():
    assert mae([1.0, 2.0], [1.5, 1.0]) == pytest.approx(0.75)
    with pytest.raises(ValueError):
        mae([], [])
    with pytest.raises(ValueError):
        mae([1.0], [1.0, 2.0])


def test_weibull_wind_table_errors():
    table = weibull_wind_table()
    assert table[("k", "linear")]["mae"] == pytest.approx(0.0201, abs=5e-5)
    assert table[("k", "power")]["mae"] == pytest.approx(0.0176, abs=5e-5)
    assert table[("lambda", "linear")]["mae"] == pytest.approx(0.0877, abs=5e-5)
    assert table[("lambda", "power")]["mae"] == pytest.approx(0.1714, abs=5e-5)
    u = np.array([f[0] for f in BLACK_SEA_WEIBULL_FITS])
    for entry in table.values():
        assert entry["predicted"].shape == u.shape


@pytest.mark.parametrize("family, params", [
    (Family.LOGNORMAL, (2.5, 0.6)), (Family.GAUSSIAN, (12.0, 7.0)), (Family.EXPONENTIAL, (20.0,)),
    (Family.GAMMA, (2.7, 5.5)), (Family.GAMMA, (1.0, 5.0)), (Family.WEIBULL, (1.84, 15.61)),
    (Family.WEIBULL, (1.0, 4.0)), (Family.BIRNBAUM_SAUNDERS, (0.67, 13.4)),
])
def test_optimizer_densities_match_scipy(family, params):
    from airsea_owc.fitting import _fast_pdf
    x = np.arange(0.0, 90.5, 0.5)
    np.testing.assert_allclose(_fast_pdf(family, params, x), family_pdf(family, params, x), rtol=1e-10, atol=1e-300)
