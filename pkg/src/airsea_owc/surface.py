"""Tilt-angle statistics of the transmitter (sea-surface slope) and the receiver.

Three transmitter tilt models share one small interface (``pdf_deg``,
``cdf_deg``, ``sample_deg``, ``mode_deg``, ``support_deg``):

* :class:`CoxMunkModel` -- Gaussian slope components with variance
  ``0.003 + 0.00512 U``; natural unit is the radian.
* :class:`ModifiedWeibullModel` -- Weibull law in degrees whose shape and
  scale grow with wind speed.
* :class:`EmpiricalSlopeModel` -- tabulated density (e.g. stereo or ECKV curves).

The receiver tilt is a folded zero-mean Gaussian (:class:`RxTiltModel`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import special

from .empirical import EmpiricalPdf, EmpiricalPdfError

DEG = math.pi / 180.0

CM_WIND_RANGE = (1.0, 14.0)
MW_WIND_RANGE = (6.0, 15.2)

# Weibull regressions of shape/scale against wind speed, as published (4 d.p.).
MW_LINEAR = {"shape": (1.7454, 0.0071), "scale": (13.6485, 0.2406)}
MW_POWER = {"shape": (1.6506, 0.0428), "scale": (11.4724, 0.1499)}
# Full-precision least-squares refits of the three Black Sea Weibull fits
# (``fitting.weibull_wind_table``); the tests check them against a fresh refit.
MW_LINEAR_EXACT = {"shape": (1.7453865877712031, 0.007094674556213031),
                   "scale": (13.648501183431954, 0.24057988165680472)}
MW_POWER_EXACT = {"shape": (1.6505892759884133, 0.042832782611620324),
                  "scale": (11.472372382878634, 0.14990317266949799)}
_MW_COEFFS = {("linear", "rounded"): MW_LINEAR, ("power", "rounded"): MW_POWER,
              ("linear", "exact"): MW_LINEAR_EXACT, ("power", "exact"): MW_POWER_EXACT}

# Redraws allowed before giving up on a Weibull sample beyond 90 degrees.
_MAX_REDRAWS = 64


def _range_note(name: str, wind: float, bounds: tuple[float, float]) -> str | None:
    lo, hi = bounds
    if lo <= wind <= hi:
        return None
    return f"{name}: wind speed {wind:g} m/s outside calibrated range [{lo:g}, {hi:g}] m/s"


# --------------------------------------------------------------------------
# Cox-Munk
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CoxMunkModel:
    """Cox-Munk slope statistics at wind speed ``wind_speed_mps``."""

    wind_speed_mps: float

    def __post_init__(self):
        if not self.slope_variance > 0:
            raise ValueError(f"non-positive slope variance at U={self.wind_speed_mps}")

    @property
    def slope_variance(self) -> float:
        return 0.003 + 0.00512 * self.wind_speed_mps

    @property
    def validity_warning(self) -> str | None:
        return _range_note("Cox-Munk", self.wind_speed_mps, CM_WIND_RANGE)

    @property
    def support_deg(self) -> tuple[float, float]:
        return (0.0, 90.0)

    def with_wind_speed(self, wind_speed_mps: float) -> "CoxMunkModel":
        return CoxMunkModel(wind_speed_mps)

    def pdf_deg(self, angle_deg):
        a = np.asarray(angle_deg, dtype=float)
        out = np.zeros_like(a)
        inside = (a >= 0) & (a < 90.0)
        out[inside] = cm_pdf(a[inside] * DEG, self) * DEG
        return out if out.ndim else float(out)

    def cdf_deg(self, angle_deg):
        a = np.clip(np.asarray(angle_deg, dtype=float), 0.0, 90.0)
        t = np.tan(np.minimum(a, 90.0 - 1e-12) * DEG)
        out = -np.expm1(-(t**2) / (2.0 * self.slope_variance))
        out = np.where(a >= 90.0, 1.0, out)
        return out if out.ndim else float(out)

    def sample_deg(self, rng: np.random.Generator, size=None):
        return cm_sample(rng.random(size), self) / DEG

    def mode_deg(self) -> float:
        # Stationary point of t (1 + t^2) exp(-t^2 / 2s) with t = tan(phi).
        s = self.slope_variance
        t2 = 0.5 * (-(1.0 - 3.0 * s) + math.sqrt((1.0 - 3.0 * s) ** 2 + 4.0 * s))
        return math.degrees(math.atan(math.sqrt(t2)))


def cm_pdf(phi_rad, model: CoxMunkModel, normalized: bool = True):
    """Cox-Munk density of the transmitter tilt angle (1/radian).

    Parameters
    ----------
    phi_rad : float or array_like
        Tilt angle in radians, in ``[0, pi/2)``.
    model : CoxMunkModel
    normalized : bool
        When False the printed joint-slope form with its ``1/(2 pi sigma^2)``
        prefactor is returned; it integrates to ``1/(2 pi)`` over the
        quarter-circle. The default multiplies by ``2 pi`` to obtain a proper
        marginal density.
    """
    phi = np.asarray(phi_rad, dtype=float)
    if np.any(phi < 0) or np.any(phi >= math.pi / 2) or np.any(~np.isfinite(phi)):
        raise ValueError("Cox-Munk tilt angle must lie in [0, pi/2)")
    s2 = model.slope_variance
    t = np.tan(phi)
    sec2 = 1.0 + t * t
    dens = t * sec2 / s2 * np.exp(-t * t / (2.0 * s2))
    if not normalized:
        dens = dens / (2.0 * math.pi)
    return dens if dens.ndim else float(dens)


def cm_sample(u, model: CoxMunkModel):
    """Inverse-CDF draw of the Cox-Munk tilt angle (radians) from uniforms ``u``."""
    u = np.asarray(u, dtype=float)
    if np.any(u < 0) or np.any(u >= 1):
        raise ValueError("uniform variates must lie in [0, 1)")
    out = np.arctan(np.sqrt(-2.0 * model.slope_variance * np.log1p(-u)))
    return out if out.ndim else float(out)


# --------------------------------------------------------------------------
# Modified Weibull
# --------------------------------------------------------------------------


def mw_params(wind_speed_mps: float, law: str = "linear", coefficients: str = "rounded") -> tuple[float, float]:
    """Weibull (shape, scale in degrees) at the given wind speed.

    Parameters
    ----------
    wind_speed_mps : float
    law : {"linear", "power"}
        Regression form against wind speed.
    coefficients : {"rounded", "exact"}
        Published 4-decimal coefficients, or the unrounded least-squares
        values they were rounded from.
    """
    u = float(wind_speed_mps)
    if not u > 0:
        raise ValueError("wind speed must be positive")
    try:
        coeffs = _MW_COEFFS[(law, coefficients)]
    except KeyError:
        raise ValueError(f"unknown regression law/coefficients {law!r}/{coefficients!r}") from None
    (k0, k1), (l0, l1) = coeffs["shape"], coeffs["scale"]
    if law == "linear":
        return k0 + k1 * u, l0 + l1 * u
    return k0 * u**k1, l0 * u**l1


@dataclass(frozen=True)
class ModifiedWeibullModel:
    """Weibull tilt-angle law (degrees), truncated to 90 degrees by rejection.

    Build it from a wind speed with :meth:`from_wind_speed`; direct construction
    lets fitted or synthetic parameters be used.
    """

    wind_speed_mps: float
    shape: float
    scale_deg: float
    law: str = "linear"

    def __post_init__(self):
        if not self.shape > 1:
            raise ValueError(f"Weibull shape must exceed 1, got {self.shape}")
        if not self.scale_deg > 0:
            raise ValueError(f"Weibull scale must be positive, got {self.scale_deg}")

    @classmethod
    def from_wind_speed(cls, wind_speed_mps: float, law: str = "linear") -> "ModifiedWeibullModel":
        k, lam = mw_params(wind_speed_mps, law)
        return cls(float(wind_speed_mps), k, lam, law)

    def with_wind_speed(self, wind_speed_mps: float) -> "ModifiedWeibullModel":
        return ModifiedWeibullModel.from_wind_speed(wind_speed_mps, self.law)

    @property
    def validity_warning(self) -> str | None:
        return _range_note("modified Weibull", self.wind_speed_mps, MW_WIND_RANGE)

    @property
    def support_deg(self) -> tuple[float, float]:
        return (0.0, 90.0)

    @property
    def truncated_mass(self) -> float:
        """Probability beyond 90 degrees, dropped without renormalisation."""
        return math.exp(-((90.0 / self.scale_deg) ** self.shape))

    def pdf_deg(self, angle_deg):
        return mw_pdf(angle_deg, self)

    def cdf_deg(self, angle_deg):
        a = np.clip(np.asarray(angle_deg, dtype=float), 0.0, 90.0)
        out = -np.expm1(-((a / self.scale_deg) ** self.shape))
        out = np.where(a >= 90.0, 1.0, out)
        return out if out.ndim else float(out)

    def sample_deg(self, rng: np.random.Generator, size=None):
        return mw_sample(rng.random(size), self, rng)

    def mode_deg(self) -> float:
        k = self.shape
        return self.scale_deg * (1.0 - 1.0 / k) ** (1.0 / k)

    def mean_deg(self) -> float:
        return self.scale_deg * math.gamma(1.0 + 1.0 / self.shape)


def mw_pdf(angle_deg, model: ModifiedWeibullModel):
    """Weibull tilt density in 1/degree; zero beyond 90 degrees."""
    a = np.asarray(angle_deg, dtype=float)
    if np.any(a < 0) or np.any(np.isnan(a)):
        raise ValueError("tilt angle must be non-negative")
    k, lam = model.shape, model.scale_deg
    x = np.minimum(a, 90.0) / lam
    dens = (k / lam) * x ** (k - 1.0) * np.exp(-(x**k))
    dens = np.where(a > 90.0, 0.0, dens)
    return dens if dens.ndim else float(dens)


def mw_sample(u, model: ModifiedWeibullModel, rng: np.random.Generator | None = None):
    """Weibull inverse-CDF draw in degrees.

    Draws beyond 90 degrees are replaced by fresh draws from ``rng`` (a
    ``default_rng(0)`` stream when omitted, so the call stays deterministic).
    """
    u = np.asarray(u, dtype=float)
    if np.any(u < 0) or np.any(u >= 1):
        raise ValueError("uniform variates must lie in [0, 1)")
    k, lam = model.shape, model.scale_deg
    out = np.atleast_1d(lam * (-np.log1p(-u)) ** (1.0 / k)).copy()
    bad = out > 90.0
    if np.any(bad):
        rng = rng if rng is not None else np.random.default_rng(0)
        for _ in range(_MAX_REDRAWS):
            out[bad] = lam * (-np.log1p(-rng.random(int(bad.sum())))) ** (1.0 / k)
            bad = out > 90.0
            if not np.any(bad):
                break
        else:
            raise RuntimeError("Weibull rejection sampler failed to land inside 90 degrees")
    return out.reshape(u.shape) if u.ndim else float(out[0])


# --------------------------------------------------------------------------
# Empirical table
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EmpiricalSlopeModel:
    """Tilt-angle law given by a tabulated, linearly interpolated density."""

    pdf: EmpiricalPdf
    wind_speed_mps: float = float("nan")

    def __post_init__(self):
        a = self.pdf.angles_deg
        if a[0] < 0 or a[-1] > 90.0:
            raise EmpiricalPdfError("tilt-angle table must lie within [0, 90] degrees")
        area = self.pdf.area
        if not 0.98 <= area <= 1.02:
            raise EmpiricalPdfError(f"tilt-angle table area {area:.4f} outside [0.98, 1.02]")

    @property
    def validity_warning(self) -> str | None:
        return None

    @property
    def support_deg(self) -> tuple[float, float]:
        return float(self.pdf.angles_deg[0]), float(self.pdf.angles_deg[-1])

    def with_wind_speed(self, wind_speed_mps: float):
        raise ValueError("an empirical tilt table cannot be re-evaluated at another wind speed")

    def pdf_deg(self, angle_deg):
        a = np.asarray(angle_deg, dtype=float)
        dens = np.interp(a, self.pdf.angles_deg, self.pdf.densities_per_deg, left=0.0, right=0.0)
        dens = dens / self.pdf.area
        return dens if np.ndim(dens) else float(dens)

    def _cumulative(self) -> np.ndarray:
        a, d = self.pdf.angles_deg, self.pdf.densities_per_deg
        c = np.concatenate([[0.0], np.cumsum(0.5 * (d[1:] + d[:-1]) * np.diff(a))])
        return c / c[-1]

    def cdf_deg(self, angle_deg):
        a0 = np.asarray(angle_deg, dtype=float)
        x, d = self.pdf.angles_deg, self.pdf.densities_per_deg / self.pdf.area
        c = self._cumulative()
        a = np.clip(a0, x[0], x[-1])
        i = np.clip(np.searchsorted(x, a, side="right") - 1, 0, x.size - 2)
        s = a - x[i]
        w = x[i + 1] - x[i]
        slope = (d[i + 1] - d[i]) / w
        out = np.clip(c[i] + d[i] * s + 0.5 * slope * s * s, 0.0, 1.0)
        return out if out.ndim else float(out)

    def sample_deg(self, rng: np.random.Generator, size=None):
        u = np.asarray(rng.random(size))
        x, d = self.pdf.angles_deg, self.pdf.densities_per_deg / self.pdf.area
        c = self._cumulative()
        i = np.clip(np.searchsorted(c, u, side="right") - 1, 0, x.size - 2)
        w = x[i + 1] - x[i]
        slope = (d[i + 1] - d[i]) / w
        r = u - c[i]
        # Invert the quadratic CDF segment; fall back to linear where the slope vanishes.
        disc = np.maximum(d[i] ** 2 + 2.0 * slope * r, 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            quad = 2.0 * r / (d[i] + np.sqrt(disc))
            lin = r / d[i]
        s = np.where(d[i] + np.sqrt(disc) > 0, quad, np.where(d[i] > 0, lin, 0.0))
        out = x[i] + np.clip(s, 0.0, w)
        return out if out.ndim else float(out)

    def mode_deg(self) -> float:
        return float(self.pdf.angles_deg[np.argmax(self.pdf.densities_per_deg)])


SlopeModel = Union[CoxMunkModel, ModifiedWeibullModel, EmpiricalSlopeModel]


def make_slope_model(kind: str, wind_speed_mps: float, law: str = "linear") -> SlopeModel:
    """Build a wind-driven tilt model by name (``"MW"``/``"IE"`` or ``"CM"``)."""
    key = kind.strip().upper()
    if key in ("MW", "IE", "WEIBULL"):
        return ModifiedWeibullModel.from_wind_speed(wind_speed_mps, law)
    if key in ("CM", "COX-MUNK", "COXMUNK"):
        return CoxMunkModel(float(wind_speed_mps))
    raise ValueError(f"unknown slope model {kind!r}; expected 'MW' or 'CM'")


# --------------------------------------------------------------------------
# Receiver tilt
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RxTiltModel:
    """Folded zero-mean Gaussian receiver tilt on [0, 90] degrees.

    ``sigma_deg == 0`` is accepted as the perfectly aligned limit.
    """

    sigma_deg: float

    def __post_init__(self):
        if not self.sigma_deg >= 0 or not math.isfinite(self.sigma_deg):
            raise ValueError(f"receiver tilt spread must be >= 0, got {self.sigma_deg}")

    @property
    def degenerate(self) -> bool:
        return self.sigma_deg == 0

    def pdf_deg(self, angle_deg):
        """Continuous density on [0, 90); the clamped tail mass at 90 is excluded."""
        a = np.asarray(angle_deg, dtype=float)
        if self.degenerate:
            raise ValueError("degenerate receiver tilt has no density")
        s = self.sigma_deg
        dens = math.sqrt(2.0 / math.pi) / s * np.exp(-0.5 * (a / s) ** 2)
        dens = np.where((a < 0) | (a > 90.0), 0.0, dens)
        return dens if dens.ndim else float(dens)

    def cdf_deg(self, angle_deg):
        a = np.asarray(angle_deg, dtype=float)
        if self.degenerate:
            out = np.where(a >= 0, 1.0, 0.0)
        else:
            out = special.erf(np.clip(a, 0.0, None) / (self.sigma_deg * math.sqrt(2.0)))
            out = np.where(a >= 90.0, 1.0, out)
        return out if out.ndim else float(out)

    def sample_deg(self, rng: np.random.Generator, size=None):
        return rx_sample(rng, self, size)


def rx_sample(rng: np.random.Generator, model: RxTiltModel, size=None):
    """Draw receiver tilt angles (degrees): ``|N(0, sigma^2)|`` clamped to 90.

    No field-of-view truncation happens here; out-of-FoV draws are kept and
    zeroed later by the channel gate.
    """
    z = rng.standard_normal(size)
    return np.minimum(np.abs(z) * model.sigma_deg, 90.0)


def p_in(sigma_deg: float, fov_deg: float) -> float:
    """Probability that the receiver tilt lies inside the field of view."""
    if not 0.0 < fov_deg <= 90.0:
        raise ValueError(f"field of view must lie in (0, 90] degrees, got {fov_deg}")
    if sigma_deg < 0:
        raise ValueError("receiver tilt spread must be >= 0")
    if sigma_deg == 0:
        return 1.0
    return float(special.erf(fov_deg / (sigma_deg * math.sqrt(2.0))))
