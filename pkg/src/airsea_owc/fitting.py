"""Least-squares fitting of candidate families to sampled tilt-angle PDFs, and
wind-speed regressions of the fitted Weibull parameters.

Fits minimise the pointwise mean squared error between the family PDF and the
sampled densities on the sample grid (not the likelihood), so results are
directly comparable with an MSE table.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special, stats

from .empirical import EmpiricalPdf

# Black Sea Weibull fits: (wind speed m/s, shape k, scale lambda in degrees).
BLACK_SEA_WEIBULL_FITS = (
    (6.1, 1.7671, 15.2100),
    (8.7, 1.8373, 15.6100),
    (15.2, 1.8446, 17.3429),
)

N_RESTARTS = 5
MAX_ITER = 500
FATOL = 1e-12


class Family(enum.Enum):
    """Candidate families, in tie-break order."""

    LOGNORMAL = "Lognormal"
    GAUSSIAN = "Gaussian"
    EXPONENTIAL = "Exponential"
    GAMMA = "Gamma"
    WEIBULL = "Weibull"
    BIRNBAUM_SAUNDERS = "BirnbaumSaunders"

    @classmethod
    def parse(cls, name) -> "Family":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("-", "").replace("_", "").replace(" ", "")
        for fam in cls:
            if fam.value.lower() == key or fam.name.lower().replace("_", "") == key:
                return fam
        if key in ("bs", "fatiguelife"):
            return cls.BIRNBAUM_SAUNDERS
        if key in ("normal", "gauss"):
            return cls.GAUSSIAN
        raise ValueError(f"unknown family {name!r}")

    @property
    def order(self) -> int:
        return list(Family).index(self)


ALL_FAMILIES = tuple(Family)

# Parameter names per family; ``free`` marks parameters allowed to be <= 0.
PARAM_NAMES = {
    Family.LOGNORMAL: ("mu_log", "sigma_log"),
    Family.GAUSSIAN: ("mean", "std"),
    Family.EXPONENTIAL: ("scale",),
    Family.GAMMA: ("shape", "scale"),
    Family.WEIBULL: ("shape", "scale"),
    Family.BIRNBAUM_SAUNDERS: ("shape", "scale"),
}
_FREE = {Family.LOGNORMAL: (True, False), Family.GAUSSIAN: (True, False)}


class FitError(RuntimeError):
    """Fit did not converge; ``best`` carries the best parameters found."""

    def __init__(self, message: str, best: "FitResult | None" = None):
        super().__init__(message)
        self.best = best


class RegressionError(ValueError):
    pass


class FitWarning(UserWarning):
    pass


@dataclass(frozen=True)
class FitResult:
    family: Family
    params: tuple[float, ...]
    mse: float
    converged: bool = True

    def pdf(self, angles_deg):
        return family_pdf(self.family, self.params, angles_deg)

    @property
    def param_dict(self) -> dict[str, float]:
        return dict(zip(PARAM_NAMES[self.family], self.params))


def _frozen(family: Family, params):
    p = tuple(float(v) for v in params)
    if family is Family.LOGNORMAL:
        return stats.lognorm(s=p[1], scale=math.exp(p[0]))
    if family is Family.GAUSSIAN:
        return stats.norm(loc=p[0], scale=p[1])
    if family is Family.EXPONENTIAL:
        return stats.expon(scale=p[0])
    if family is Family.GAMMA:
        return stats.gamma(a=p[0], scale=p[1])
    if family is Family.WEIBULL:
        return stats.weibull_min(c=p[0], scale=p[1])
    return stats.fatiguelife(c=p[0], scale=p[1])


def family_pdf(family: Family, params, angles_deg):
    """PDF of ``family`` with ``params`` at ``angles_deg`` (1/degree)."""
    family = Family.parse(family)
    if len(params) != len(PARAM_NAMES[family]):
        raise ValueError(f"{family.value} takes {len(PARAM_NAMES[family])} parameters")
    return _frozen(family, params).pdf(np.asarray(angles_deg, dtype=float))


def _fast_pdf(family: Family, p, x):
    # Closed forms of the scipy.stats densities, for the optimiser's inner loop.
    pos = x > 0
    xs = np.where(pos, x, 1.0)
    if family is Family.GAUSSIAN:
        return np.exp(-0.5 * ((x - p[0]) / p[1]) ** 2) / (p[1] * math.sqrt(2 * math.pi))
    if family is Family.LOGNORMAL:
        out = np.exp(-0.5 * ((np.log(xs) - p[0]) / p[1]) ** 2) / (xs * p[1] * math.sqrt(2 * math.pi))
    elif family is Family.EXPONENTIAL:
        return np.where(x >= 0, np.exp(-x / p[0]) / p[0], 0.0)
    elif family is Family.GAMMA:
        a, sc = p
        out = np.exp((a - 1) * np.log(xs / sc) - xs / sc - special.gammaln(a)) / sc
        if a == 1:
            return np.where(x >= 0, np.exp(-x / sc) / sc, 0.0)
    elif family is Family.WEIBULL:
        k, lam = p
        z = xs / lam
        out = k / lam * z ** (k - 1) * np.exp(-(z**k))
        if k == 1:
            return np.where(x >= 0, np.exp(-x / lam) / lam, 0.0)
    else:
        a, b = p
        r = np.sqrt(xs / b)
        out = (r + 1 / r) / (2 * a * xs) * np.exp(-((r - 1 / r) ** 2) / (2 * a * a)) / math.sqrt(2 * math.pi)
    return np.where(pos, out, 0.0)


def family_std(family: Family, params) -> float:
    return float(_frozen(family, params).std())


def mse_curve(pdf: EmpiricalPdf, family, params) -> float:
    """Mean over the grid of the squared density difference."""
    model = family_pdf(family, params, pdf.angles_deg)
    return float(np.mean((model - pdf.densities_per_deg) ** 2))


def mae(actual, predicted) -> float:
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    if a.size == 0:
        raise ValueError("mean absolute error of an empty sequence")
    if a.shape != p.shape:
        raise ValueError("actual and predicted must have equal lengths")
    return float(np.mean(np.abs(a - p)))


# --------------------------------------------------------------------------
# Method-of-moments seeds
# --------------------------------------------------------------------------


def moment_seed(family: Family, mean: float, var: float) -> tuple[float, ...]:
    """Parameters matching the given mean and variance (degrees, degrees^2)."""
    if not (mean > 0 and var > 0):
        raise ValueError("moment seeds need positive mean and variance")
    cv2 = var / mean**2
    if family is Family.LOGNORMAL:
        s2 = math.log1p(cv2)
        return (math.log(mean) - 0.5 * s2, math.sqrt(s2))
    if family is Family.GAUSSIAN:
        return (mean, math.sqrt(var))
    if family is Family.EXPONENTIAL:
        return (mean,)
    if family is Family.GAMMA:
        return (1.0 / cv2, var / mean)
    if family is Family.WEIBULL:
        def resid(log_k):
            k = math.exp(log_k)
            g1 = special.gammaln(1 + 1 / k)
            return math.exp(special.gammaln(1 + 2 / k) - 2 * g1) - 1.0 - cv2
        lo, hi = math.log(0.05), math.log(500.0)
        if resid(hi) > 0:
            k = math.exp(hi)
        elif resid(lo) < 0:
            k = math.exp(lo)
        else:
            k = math.exp(optimize.brentq(resid, lo, hi))
        return (k, mean / math.gamma(1 + 1 / k))

    # Birnbaum-Saunders: mean = b(1 + a^2/2), var = (a b)^2 (1 + 5 a^2 / 4).
    def resid_bs(log_a):
        a2 = math.exp(2 * log_a)
        return a2 * (1 + 1.25 * a2) / (1 + 0.5 * a2) ** 2 - cv2

    hi = math.log(1e3)
    if resid_bs(hi) < 0:
        a = math.exp(hi)
    else:
        a = math.exp(optimize.brentq(resid_bs, math.log(1e-6), hi))
    return (a, mean / (1 + 0.5 * a * a))


# --------------------------------------------------------------------------
# Fitting
# --------------------------------------------------------------------------


def _to_internal(family, params):
    free = _FREE.get(family, (False,) * len(params))
    return np.array([p if f else math.log(p) for p, f in zip(params, free)])


def _to_params(family, z):
    free = _FREE.get(family, (False,) * len(z))
    return tuple(float(v) if f else float(math.exp(v)) for v, f in zip(z, free))


def fit_family(pdf: EmpiricalPdf, family, normalize: bool = False, seed: int = 0) -> FitResult:
    """Least-squares fit of one family to a sampled PDF.

    The simplex search starts from method-of-moments estimates, then restarts
    from ``N_RESTARTS`` jittered copies of that seed and from the best point of
    a coarse log-grid around it. With ``normalize`` the sampled densities are
    first rescaled to unit area; by default they are taken as absolute.

    Raises
    ------
    FitError
        When no restart converges, or the best fit is narrower than the
        sampling grid (e.g. a point mass); ``best`` carries the best result.
    """
    family = Family.parse(family)
    if normalize:
        pdf = EmpiricalPdf(pdf.angles_deg, pdf.densities_per_deg / pdf.area, pdf.metadata,
                           area_bounds=(0.0, np.inf))
    x, y = pdf.angles_deg, pdf.densities_per_deg
    mean, var = pdf.moments()
    step = float(np.min(np.diff(x)))
    # A single dominant bin has zero grid variance; floor it at the bin resolution.
    var = max(var, step * step / 12.0)
    seed_params = moment_seed(family, mean, var)

    def objective(z):
        try:
            params = _to_params(family, z)
        except OverflowError:
            return np.inf
        with np.errstate(all="ignore"):
            val = float(np.mean((_fast_pdf(family, params, x) - y) ** 2))
        return val if math.isfinite(val) else np.inf

    z0 = _to_internal(family, seed_params)
    rng = np.random.default_rng(seed)
    starts = [z0] + [z0 + rng.normal(0.0, 0.2, z0.size) * np.where(np.abs(z0) > 0, 1.0, 0.0)
                     + rng.normal(0.0, 0.05, z0.size) for _ in range(N_RESTARTS)]

    # Coarse log-grid around the seed.
    steps = np.log([0.25, 0.5, 1.0, 2.0, 4.0])
    grid = np.array(np.meshgrid(*[steps] * z0.size)).reshape(z0.size, -1).T
    grid_best = min((z0 + g for g in grid), key=objective)
    starts.append(grid_best)

    opts = {"maxiter": MAX_ITER, "xatol": 1e-10, "fatol": FATOL}
    best_z, best_f, any_ok = z0, objective(z0), False
    for start in starts:
        res = optimize.minimize(objective, start, method="Nelder-Mead", options=opts)
        # Polish from the end point; a fresh simplex escapes premature collapse.
        for _ in range(3):
            again = optimize.minimize(objective, res.x, method="Nelder-Mead", options=opts)
            if not again.fun < res.fun:
                break
            res = again
        any_ok |= bool(res.success)
        if res.fun < best_f:
            best_z, best_f = res.x, float(res.fun)

    params = _to_params(family, best_z)
    with np.errstate(all="ignore"):
        exact = float(np.mean((family_pdf(family, params, x) - y) ** 2))
    best_f = exact if math.isfinite(exact) else best_f
    result = FitResult(family, params, best_f, converged=any_ok)
    if not any_ok:
        raise FitError(f"{family.value} fit did not converge after {len(starts)} starts", result)
    spread = family_std(family, params)
    if not spread >= step:
        bad = FitResult(family, params, best_f, converged=False)
        raise FitError(f"{family.value} fit collapsed below the grid spacing "
                       f"(std {spread:.3g} < {step:.3g} deg)", bad)
    return result


def rank_families(pdf: EmpiricalPdf, families=ALL_FAMILIES, normalize: bool = False) -> list[FitResult]:
    """Fit every family and order by ascending MSE (ties by family order).

    Families whose fit fails are left out with a :class:`FitWarning`.
    """
    fams = [Family.parse(f) for f in families]
    if not fams:
        raise ValueError("need at least one family")
    fits = []
    for fam in sorted(set(fams), key=lambda f: f.order):
        try:
            fits.append(fit_family(pdf, fam, normalize=normalize))
        except (FitError, ValueError) as exc:
            warnings.warn(f"{fam.value} excluded from ranking: {exc}", FitWarning, stacklevel=2)
    return sorted(fits, key=lambda r: (r.mse, r.family.order))


# --------------------------------------------------------------------------
# Regression against wind speed
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RegressionModel:
    """``a + b U`` (linear) or ``a U^b`` (power)."""

    kind: str
    a: float
    b: float

    def __post_init__(self):
        if self.kind not in ("linear", "power"):
            raise ValueError(f"unknown regression kind {self.kind!r}")
        if self.kind == "power" and not self.a > 0:
            raise ValueError("power-law prefactor must be positive")

    def predict(self, wind_speed):
        u = np.asarray(wind_speed, dtype=float)
        out = self.a + self.b * u if self.kind == "linear" else self.a * u**self.b
        return out if out.ndim else float(out)


def _xy(points):
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise RegressionError("points must be a sequence of (U, value) pairs")
    return arr[:, 0], arr[:, 1]


def regress_linear(points) -> RegressionModel:
    """Ordinary least squares line through ``(U, value)`` points."""
    u, v = _xy(points)
    if u.size < 2 or np.ptp(u) == 0:
        raise RegressionError("need at least two distinct wind speeds")
    um, vm = u.mean(), v.mean()
    b = float(np.sum((u - um) * (v - vm)) / np.sum((u - um) ** 2))
    return RegressionModel("linear", float(vm - b * um), b)


def regress_power(points, space: str = "linear") -> RegressionModel:
    """Least-squares power law ``a U^b``.

    ``space="log"`` returns the straight-line fit of ``log v`` on ``log U``.
    The default refines that fit by minimising the squared residuals of
    ``v`` itself (Gauss-Newton / trust region), which weights every point
    equally in the original units.
    """
    u, v = _xy(points)
    if np.any(u <= 0) or np.any(v <= 0):
        raise RegressionError("power-law regression needs strictly positive data")
    if u.size < 2 or np.ptp(u) == 0:
        raise RegressionError("need at least two distinct wind speeds")
    line = regress_linear(np.column_stack([np.log(u), np.log(v)]))
    a0, b0 = math.exp(line.a), line.b
    if space == "log":
        return RegressionModel("power", a0, b0)
    if space != "linear":
        raise ValueError(f"unknown regression space {space!r}")
    res = optimize.least_squares(lambda p: p[0] * u ** p[1] - v, [a0, b0], method="lm",
                                 xtol=1e-15, ftol=1e-15, gtol=1e-15)
    a, b = (float(t) for t in res.x)
    return RegressionModel("power", a, b)


def weibull_wind_table(fits=BLACK_SEA_WEIBULL_FITS) -> dict:
    """Linear and power regressions of Weibull (k, lambda) on wind speed with their MAE."""
    arr = np.asarray(fits, dtype=float)
    u, k, lam = arr[:, 0], arr[:, 1], arr[:, 2]
    out = {}
    for name, col in (("k", k), ("lambda", lam)):
        pts = np.column_stack([u, col])
        for kind, model in (("linear", regress_linear(pts)), ("power", regress_power(pts))):
            pred = model.predict(u)
            out[(name, kind)] = {"model": model, "predicted": pred, "mae": mae(col, pred)}
    return out
