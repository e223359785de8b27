"""Deterministic link budget of the vertical water-to-air optical link.

The channel gain factorises as::

    h = h_c * cos^m(phi_t) * cos(phi_r) * [phi_r <= FoV]

with the deterministic part ``h_c = (m+1)/(2 pi) * A_PD T_s g / Z^2 * exp(-Z K_eff)``.
Defaults of every record reproduce the baseline simulation parameters
(470 nm LED, 20 W, SiPM receiver, 9 mm^2, ...).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ELECTRON_CHARGE = 1.602176634e-19  # C
BOLTZMANN = 1.380649e-23  # J/K

# 1 dB/km in 1/m: 10 log10(e) dB per neper, 1000 m per km.
_DB_PER_KM_TO_PER_M = 1.0 / (10.0 * math.log10(math.e) * 1000.0)


@dataclass(frozen=True)
class LinkGeometry:
    """Underwater depth and air height of the vertical link, in metres."""

    depth_water_m: float
    height_air_m: float

    def __post_init__(self):
        if self.depth_water_m < 0 or self.height_air_m < 0:
            raise ValueError("depth and height must be non-negative")
        if not self.range_m > 0:
            raise ValueError("total link range must be positive")

    @classmethod
    def equal_split(cls, range_m: float) -> "LinkGeometry":
        """Equal water and air path, ``Z_w = Z_a = Z/2``."""
        return cls(range_m / 2.0, range_m / 2.0)

    @property
    def range_m(self) -> float:
        return self.depth_water_m + self.height_air_m


@dataclass(frozen=True)
class TxModel:
    lambertian_order: float = 20.0
    power_w: float = 20.0
    wavelength_nm: float = 470.0

    def __post_init__(self):
        if self.lambertian_order < 1:
            raise ValueError("Lambertian order must be >= 1")
        if not self.power_w > 0:
            raise ValueError("transmit power must be positive")


@dataclass(frozen=True)
class RxModel:
    """SiPM receiver with concentrator, optical filter and TIA front end."""

    area_m2: float = 9e-6
    atm_transmittance: float = 0.98
    filter_transmittance: float = 1.0
    filter_bandwidth_nm: float = 20.0
    refractive_index: float = 1.5
    fov_deg: float = 30.0
    gain: float = 1e6
    excess_noise: float = 1.1
    responsivity_a_per_w: float = 9e4
    dark_current_a: float = 1.10e-6
    load_ohm: float = 1e3
    bandwidth_hz: float = 5e6

    def __post_init__(self):
        for name in ("area_m2", "atm_transmittance", "filter_transmittance", "filter_bandwidth_nm",
                     "refractive_index", "gain", "excess_noise", "responsivity_a_per_w",
                     "dark_current_a", "load_ohm", "bandwidth_hz"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 < self.fov_deg <= 90.0:
            raise ValueError(f"field of view must lie in (0, 90] degrees, got {self.fov_deg}")

    @property
    def transmittance(self) -> float:
        return self.atm_transmittance * self.filter_transmittance


@dataclass(frozen=True)
class Environment:
    """Optical environment: attenuation, background radiance and temperature.

    ``k_air_db_per_km`` is the one attenuation given in dB/km; it is converted
    on use by :func:`k_air_per_m`.
    """

    k_water_per_m: float = 0.08
    k_air_db_per_km: float = 0.19
    radiance_w_m2_nm_sr: float = 0.025
    temperature_k: float = 300.0

    def __post_init__(self):
        if self.k_water_per_m < 0 or self.k_air_db_per_km < 0:
            raise ValueError("attenuation coefficients must be non-negative")
        if self.radiance_w_m2_nm_sr < 0:
            raise ValueError("background radiance must be non-negative")
        if self.temperature_k < 0:
            raise ValueError("temperature must be non-negative")


@dataclass(frozen=True)
class NoiseCoeffs:
    """SNR coefficients: ``gamma = mu^2 h^2 / (alpha h + beta)``."""

    mu: float
    alpha: float
    beta: float


def k_air_per_m(k_db_per_km: float) -> float:
    return k_db_per_km * _DB_PER_KM_TO_PER_M


def k_eff(env: Environment, geometry: LinkGeometry) -> float:
    """Path-weighted attenuation ``(K_w Z_w + K_a Z_a) / Z`` in 1/m."""
    z = geometry.range_m
    if not z > 0:
        raise ValueError("link range must be positive")
    return (env.k_water_per_m * geometry.depth_water_m
            + k_air_per_m(env.k_air_db_per_km) * geometry.height_air_m) / z


def concentrator_gain(refractive_index: float, fov_deg: float) -> float:
    if not 0.0 < fov_deg <= 90.0:
        raise ValueError(f"field of view must lie in (0, 90] degrees, got {fov_deg}")
    return refractive_index**2 / math.sin(math.radians(fov_deg)) ** 2


def path_loss(geometry: LinkGeometry, tx: TxModel, rx: RxModel, env: Environment) -> float:
    """Deterministic gain ``h_c`` (dimensionless)."""
    z = geometry.range_m
    m = tx.lambertian_order
    g = concentrator_gain(rx.refractive_index, rx.fov_deg)
    return ((m + 1.0) / (2.0 * math.pi) * rx.area_m2 * rx.transmittance * g / z**2
            * math.exp(-z * k_eff(env, geometry)))


def channel_gain(h_c, phi_t_deg, phi_r_deg, lambertian_order: float, fov_deg: float):
    """Instantaneous gain; exactly zero when the receiver tilt exceeds the FoV."""
    t = np.radians(np.asarray(phi_t_deg, dtype=float))
    r = np.asarray(phi_r_deg, dtype=float)
    h = h_c * np.cos(t) ** lambertian_order * np.cos(np.radians(r))
    h = np.where(r <= fov_deg, np.maximum(h, 0.0), 0.0)
    return h if h.ndim else float(h)


def lambertian_order_from_half_angle(half_angle_deg: float) -> float:
    """Lambertian order whose half-power semi-angle is ``half_angle_deg``."""
    if not 0.0 < half_angle_deg < 90.0:
        raise ValueError("half angle must lie strictly inside (0, 90) degrees")
    return -math.log(2.0) / math.log(math.cos(math.radians(half_angle_deg)))


def solid_angle(fov_deg: float) -> float:
    """Filter acceptance solid angle ``2 pi (1 - cos(FoV/2))`` in steradians."""
    return 2.0 * math.pi * (1.0 - math.cos(math.radians(fov_deg) / 2.0))


def background_current(rx: RxModel, radiance: float, fov_deg: float | None = None) -> float:
    """Background photocurrent (A) from upwelling radiance in W m^-2 nm^-1 sr^-1."""
    fov = rx.fov_deg if fov_deg is None else fov_deg
    return (rx.responsivity_a_per_w * radiance * solid_angle(fov) * rx.atm_transmittance
            * rx.filter_transmittance * rx.filter_bandwidth_nm * rx.area_m2)


def noise_coeffs(tx: TxModel, rx: RxModel, background_a: float, temperature_k: float = 300.0) -> NoiseCoeffs:
    mu = rx.load_ohm * rx.responsivity_a_per_w * tx.power_w
    shot = 2.0 * ELECTRON_CHARGE * rx.gain * rx.excess_noise * rx.bandwidth_hz
    alpha = shot * rx.load_ohm * mu
    beta = (rx.load_ohm**2 * shot * (rx.dark_current_a + background_a)
            + 4.0 * BOLTZMANN * temperature_k * rx.bandwidth_hz * rx.load_ohm)
    return NoiseCoeffs(mu, alpha, beta)


def snr(h, coeffs: NoiseCoeffs):
    """Electrical SNR; zero gain gives zero SNR even when ``beta`` vanishes."""
    h = np.asarray(h, dtype=float)
    num = coeffs.mu**2 * h * h
    den = coeffs.alpha * h + coeffs.beta
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(h > 0, num / den, 0.0)
    return out if out.ndim else float(out)


def link_budget(geometry: LinkGeometry, tx: TxModel, rx: RxModel, env: Environment) -> dict[str, float]:
    """Audit of every deterministic link-budget quantity, keyed by name."""
    i_b = background_current(rx, env.radiance_w_m2_nm_sr)
    c = noise_coeffs(tx, rx, i_b, env.temperature_k)
    return {
        "Z_m": geometry.range_m,
        "K_eff_per_m": k_eff(env, geometry),
        "K_a_per_m": k_air_per_m(env.k_air_db_per_km),
        "g": concentrator_gain(rx.refractive_index, rx.fov_deg),
        "h_c": path_loss(geometry, tx, rx, env),
        "phi_FoV_deg": rx.fov_deg,
        "phi_FoVr_deg": rx.fov_deg,
        "Omega_sr": solid_angle(rx.fov_deg),
        "I_b_A": i_b,
        "mu": c.mu,
        "alpha": c.alpha,
        "beta": c.beta,
        "thermal_to_beta": 4.0 * BOLTZMANN * env.temperature_k * rx.bandwidth_hz * rx.load_ohm / c.beta,
    }
