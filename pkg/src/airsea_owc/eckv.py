"""Unified long/short-wave directional spectrum of wind-driven seas
(Elfouhaily, Chapron, Katsaros & Vandemark, JGR 1997).

The directional elevation spectrum is composed as ``psi(k, phi) = S(k) D(k, phi) / k``
with the omnidirectional spectrum ``S(k) = (B_l + B_h) / k^3`` and the
spreading function ``D = (1 + Delta(k) cos 2 phi) / (2 pi)``. ``S`` and ``D``
are passed around as plain callables, so alternative parameterisations can be
used with the same integrals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

GRAVITY = 9.81
K_M = 370.0  # rad/m, gravity-capillary wavenumber of the phase-speed minimum
C_M = 0.23  # m/s, minimum phase speed
FULLY_DEVELOPED = 0.84


class SpectrumQuadratureError(RuntimeError):
    def __init__(self, message: str, partial_sums: list[float]):
        super().__init__(f"{message}; partial sums {partial_sums}")
        self.partial_sums = partial_sums


@dataclass(frozen=True)
class EckvParams:
    """Wind speed at 10 m and inverse wave age ``U10 / c_p``."""

    wind_speed_mps: float
    inverse_wave_age: float = FULLY_DEVELOPED
    gravity: float = GRAVITY
    k_m: float = K_M
    c_m: float = C_M

    def __post_init__(self):
        if not self.wind_speed_mps > 0:
            raise ValueError("wind speed must be positive")
        if not 0.83 <= self.inverse_wave_age <= 5.0:
            raise ValueError("inverse wave age must lie in [0.83, 5]")

    @property
    def k_peak(self) -> float:
        return self.gravity / self.wind_speed_mps**2 * self.inverse_wave_age**2

    @property
    def friction_velocity(self) -> float:
        # Wu (1982) neutral drag coefficient.
        u = self.wind_speed_mps
        return math.sqrt((0.8 + 0.065 * u) * 1e-3) * u


def phase_speed(k, params: EckvParams):
    k = np.asarray(k, dtype=float)
    return np.sqrt(params.gravity / k * (1.0 + (k / params.k_m) ** 2))


def curvature_components(k, params: EckvParams):
    """Long-wave and short-wave curvature spectra ``(B_l, B_h)``."""
    k = np.asarray(k, dtype=float)
    om = params.inverse_wave_age
    kp = params.k_peak
    c = phase_speed(k, params)
    cp = float(phase_speed(kp, params))

    alpha_p = 6e-3 * math.sqrt(om)
    gamma = 1.7 if om < 1.0 else 1.7 + 6.0 * math.log10(om)
    sigma = 0.08 * (1.0 + 4.0 * om**-3)
    ratio = np.sqrt(k / kp)
    jonswap = gamma ** np.exp(-((ratio - 1.0) ** 2) / (2.0 * sigma**2))
    l_pm = np.exp(-1.25 * (kp / k) ** 2)
    f_p = l_pm * jonswap * np.exp(-om / math.sqrt(10.0) * (ratio - 1.0))
    b_l = 0.5 * alpha_p * cp / c * f_p

    us = params.friction_velocity
    cm = params.c_m
    if us < cm:
        alpha_m = 1e-2 * (1.0 + math.log(us / cm))
    else:
        alpha_m = 1e-2 * (1.0 + 3.0 * math.log(us / cm))
    # Short-wave part shares the long-wave cut-off so it stays out of the gravity peak.
    f_m = l_pm * jonswap * np.exp(-0.25 * (k / params.k_m - 1.0) ** 2)
    b_h = 0.5 * alpha_m * cm / c * f_m
    return b_l, b_h


def omnidirectional_spectrum(k, params: EckvParams):
    """Elevation variance spectrum ``S(k)`` in m^3/rad."""
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise ValueError("wavenumber must be positive")
    b_l, b_h = curvature_components(k, params)
    out = (b_l + b_h) / k**3
    return out if out.ndim else float(out)


def spreading(k, phi, params: EckvParams):
    """Angular spreading ``D(k, phi)``, normalised to unit integral over ``[-pi, pi]``."""
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise ValueError("wavenumber must be positive")
    c = phase_speed(k, params)
    cp = float(phase_speed(params.k_peak, params))
    a0 = math.log(2.0) / 4.0
    ap = 4.0
    am = 0.13 * params.friction_velocity / params.c_m
    delta = np.tanh(a0 + ap * (c / cp) ** 2.5 + am * (params.c_m / c) ** 2.5)
    out = (1.0 + delta * np.cos(2.0 * np.asarray(phi, dtype=float))) / (2.0 * math.pi)
    return out if np.ndim(out) else float(out)


def psi(k, phi, params: EckvParams, spectrum=omnidirectional_spectrum, spread=spreading):
    """Directional elevation spectrum ``S(k) D(k, phi) / k``."""
    k = np.asarray(k, dtype=float)
    out = spectrum(k, params) * spread(k, phi, params) / k
    return out if np.ndim(out) else float(out)


def _log_moment(params, power, spectrum, k_min, k_max, rtol, n0=4097, max_doublings=8):
    """``int k^power S(k) dk`` by Simpson's rule in ``ln k``, doubling the grid until
    successive estimates agree to ``rtol``."""
    partial = []
    n = n0
    for _ in range(max_doublings):
        lk = np.linspace(math.log(k_min), math.log(k_max), n)
        k = np.exp(lk)
        val = float(simpson(k ** (power + 1) * spectrum(k, params), x=lk))
        partial.append(val)
        if len(partial) > 1 and abs(partial[-1] - partial[-2]) <= rtol * abs(partial[-1]):
            return val
        n = 2 * n - 1
    raise SpectrumQuadratureError(f"spectral moment k^{power} did not converge to {rtol}", partial)


def mean_square_slope(params: EckvParams, spectrum=omnidirectional_spectrum,
                      k_min: float = 1e-3, k_max: float = 1e5, rtol: float = 1e-4) -> float:
    """Total mean square slope ``int k^2 S(k) dk``."""
    return _log_moment(params, 2, spectrum, k_min, k_max, rtol)


def elevation_variance(params: EckvParams, spectrum=omnidirectional_spectrum,
                       k_min: float = 1e-3, k_max: float = 1e5, rtol: float = 1e-4) -> float:
    return _log_moment(params, 0, spectrum, k_min, k_max, rtol)


def significant_wave_height(params: EckvParams, **kwargs) -> float:
    return 4.0 * math.sqrt(elevation_variance(params, **kwargs))


def cox_munk_variance(wind_speed_mps: float) -> float:
    return 0.003 + 0.00512 * wind_speed_mps
