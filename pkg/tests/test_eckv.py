import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from airsea_owc.eckv import (EckvParams, SpectrumQuadratureError, cox_munk_variance, elevation_variance,
                             mean_square_slope, omnidirectional_spectrum, psi, significant_wave_height,
                             spreading)

P10 = EckvParams(10.0)


def test_spectrum_vanishes_at_both_ends():
    s = omnidirectional_spectrum(np.array([1e-4, 1e-3, 1e5, 1e6]), P10)
    assert np.all(s < 1e-150)
    assert omnidirectional_spectrum(P10.k_peak, P10) > 1.0


def test_spectrum_rejects_non_positive_wavenumber():
    with pytest.raises(ValueError):
        omnidirectional_spectrum([0.0, 1.0], P10)


def test_significant_wave_height_fully_developed_sea():
    # Fully developed 10 m/s sea: Pierson-Moskowitz scale gives Hs of roughly 2.2-2.7 m.
    assert 2.2 < significant_wave_height(P10) < 2.7


@pytest.mark.parametrize("k", [0.01, P10.k_peak, 1.0, 100.0, 370.0, 3000.0])
def test_spreading_normalised(k):
    total, _ = integrate.quad(lambda f: spreading(k, f, P10), -math.pi, math.pi)
    assert total == pytest.approx(1.0, abs=1e-6)


@given(st.floats(1e-2, 1e4), st.floats(-math.pi, math.pi))
def test_spreading_symmetry_and_downwind_preference(k, phi):
    d = spreading(k, phi, P10)
    assert d == pytest.approx(spreading(k, -phi, P10), rel=1e-12)
    assert d == pytest.approx(spreading(k, phi + math.pi, P10), rel=1e-12)
    assert spreading(k, 0.0, P10) > spreading(k, math.pi / 2, P10)
    assert d >= 0.0


@given(st.floats(1e-2, 1e4), st.floats(-math.pi, math.pi))
def test_psi_factorisation(k, phi):
    expected = omnidirectional_spectrum(k, P10) * spreading(k, phi, P10) / k
    assert psi(k, phi, P10) == pytest.approx(expected, rel=1e-12)
    assert psi(k, phi, P10) >= 0.0


def test_psi_integrates_back_to_omnidirectional():
    k = 0.3
    total, _ = integrate.quad(lambda f: psi(k, f, P10) * k, -math.pi, math.pi)
    assert total == pytest.approx(omnidirectional_spectrum(k, P10), rel=1e-8)


@pytest.mark.parametrize("u", [5.0, 8.0, 12.0])
def test_mean_square_slope_near_cox_munk(u):
    mss = mean_square_slope(EckvParams(u))
    assert abs(mss / cox_munk_variance(u) - 1.0) < 0.25


def test_mean_square_slope_and_elevation_variance_monotone():
    winds = np.arange(3.0, 16.5, 1.0)
    mss = [mean_square_slope(EckvParams(u)) for u in winds]
    var = [elevation_variance(EckvParams(u)) for u in winds]
    assert np.all(np.diff(mss) > 0)
    assert np.all(np.diff(var) > 0)


def test_grid_doubling_converged():
    coarse = mean_square_slope(P10, rtol=1e-3)
    fine = mean_square_slope(P10, rtol=1e-8)
    assert coarse == pytest.approx(fine, rel=1e-3)


def test_quadrature_failure_reports_partial_sums():
    def noisy(k, params):
        # A spectrum with unresolved structure that never settles under refinement.
        return np.where(np.sin(1e6 * np.log(k)) > 0, 1.0, 0.0) * k**-3

    with pytest.raises(SpectrumQuadratureError) as info:
        mean_square_slope(P10, spectrum=noisy, rtol=1e-12)
    assert len(info.value.partial_sums) >= 2
    assert all(math.isfinite(v) for v in info.value.partial_sums)


def test_pluggable_spectrum():
    # k^-3 between 1 and e gives mss = int k^-1 dk = 1.
    def box(k, params):
        return np.where((k >= 1.0) & (k <= math.e), k**-3.0, 0.0)

    assert mean_square_slope(P10, spectrum=box, k_min=1.0, k_max=math.e, rtol=1e-10) == pytest.approx(1.0,
                                                                                                       rel=1e-9)
    assert psi(2.0, 0.0, P10, spectrum=box, spread=lambda k, f, p: 1 / (2 * math.pi)) == pytest.approx(
        2.0**-4 / (2 * math.pi))


def test_params_validation():
    with pytest.raises(ValueError):
        EckvParams(0.0)
    with pytest.raises(ValueError):
        EckvParams(10.0, inverse_wave_age=0.5)
    young = EckvParams(10.0, inverse_wave_age=2.0)
    assert young.k_peak == pytest.approx((2.0 / 0.84) ** 2 * P10.k_peak)
    assert elevation_variance(young) < elevation_variance(P10)


def test_friction_velocity_drag_law():
    assert P10.friction_velocity == pytest.approx(math.sqrt(1.45e-3) * 10.0)
