"""Instantaneous and ergodic capacity of the water-to-air link.

Three independent evaluations of the ergodic capacity are provided:

``angle_quadrature``
    nested adaptive quadrature over the transmitter and receiver tilt angles;
``gain_density``
    the gain density ``f_h`` built by change of variables from the tilt laws,
    integrated against the instantaneous capacity;
``monte_carlo``
    seeded sample mean over independent tilt realisations.

The instantaneous capacity uses the IM/DD approximation
``C = 1/2 log2(1 + E/(2 pi) gamma)`` where ``E`` is Euler's number.
"""
from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from . import channel
from .channel import Environment, LinkGeometry, NoiseCoeffs, RxModel, TxModel
from .surface import RxTiltModel, SlopeModel, make_slope_model, p_in as _p_in

DEG = math.pi / 180.0
# Prefactor of the SNR inside the capacity logarithm.
SNR_FACTOR = math.e / (2.0 * math.pi)

METHODS = ("angle_quadrature", "gain_density", "monte_carlo")
_METHOD_ALIASES = {
    "angle": "angle_quadrature", "quad": "angle_quadrature", "quadrature": "angle_quadrature",
    "angle_quadrature": "angle_quadrature",
    "density": "gain_density", "gain": "gain_density", "gain_density": "gain_density",
    "mc": "monte_carlo", "monte_carlo": "monte_carlo", "montecarlo": "monte_carlo",
}

SWEEP_AXES = ("Z", "U", "FoV", "sigma_phi_r", "L_t", "m")
_AXIS_ALIASES = {
    "z": "Z", "range": "Z", "u": "U", "wind": "U", "fov": "FoV",
    "sigma_phi_r": "sigma_phi_r", "sigma": "sigma_phi_r", "l_t": "L_t", "lt": "L_t",
    "radiance": "L_t", "m": "m",
}


class QuadratureError(RuntimeError):
    """Adaptive quadrature missed its tolerance; ``achieved`` holds the error estimate."""

    def __init__(self, message: str, value: float, achieved: float):
        super().__init__(f"{message} (value={value:.6g}, error estimate={achieved:.3g})")
        self.value = value
        self.achieved = achieved


@dataclass(frozen=True)
class LinkScenario:
    """Everything needed to evaluate the capacity of one link configuration."""

    geometry: LinkGeometry
    tx: TxModel
    rx: RxModel
    env: Environment
    slope_model: SlopeModel
    rx_tilt: RxTiltModel

    @property
    def h_c(self) -> float:
        return channel.path_loss(self.geometry, self.tx, self.rx, self.env)

    @property
    def background_current(self) -> float:
        # Recomputed from radiance and FoV so FoV sweeps move signal and noise together.
        return channel.background_current(self.rx, self.env.radiance_w_m2_nm_sr)

    @property
    def noise(self) -> NoiseCoeffs:
        return channel.noise_coeffs(self.tx, self.rx, self.background_current, self.env.temperature_k)

    @property
    def p_in(self) -> float:
        return _p_in(self.rx_tilt.sigma_deg, self.rx.fov_deg)

    @property
    def warnings(self) -> tuple[str, ...]:
        note = self.slope_model.validity_warning
        return (note,) if note else ()

    def replace(self, **changes) -> "LinkScenario":
        return dataclasses.replace(self, **changes)


def make_scenario(range_m: float = 20.0, fov_deg: float = 15.0, wind_speed_mps: float = 10.0,
                  sigma_phi_r_deg: float = 10.0, lambertian_order: float = 20.0,
                  radiance: float = 0.025, slope_model: str = "MW", law: str = "linear",
                  **overrides) -> LinkScenario:
    """Baseline scenario with an equal water/air split.

    Extra keyword arguments override fields of :class:`RxModel`,
    :class:`TxModel` or :class:`Environment` by name.
    """
    parts = {"rx": {"fov_deg": fov_deg}, "tx": {"lambertian_order": lambertian_order},
             "env": {"radiance_w_m2_nm_sr": radiance}}
    owners = {"rx": RxModel, "tx": TxModel, "env": Environment}
    for key, value in overrides.items():
        for part, cls in owners.items():
            if key in {f.name for f in dataclasses.fields(cls)}:
                parts[part][key] = value
                break
        else:
            raise TypeError(f"unknown scenario parameter {key!r}")
    return LinkScenario(
        geometry=LinkGeometry.equal_split(range_m),
        tx=TxModel(**parts["tx"]),
        rx=RxModel(**parts["rx"]),
        env=Environment(**parts["env"]),
        slope_model=make_slope_model(slope_model, wind_speed_mps, law),
        rx_tilt=RxTiltModel(sigma_phi_r_deg),
    )


@dataclass(frozen=True)
class CapacityEstimate:
    """Ergodic capacity (bit/s/Hz) with the method that produced it."""

    c_erg: float
    method: str
    p_in: float
    p_out: float
    std_error: float | None = None
    seed: int | None = None
    n_samples: int | None = None
    abs_error: float | None = None
    warnings: tuple[str, ...] = field(default=())


# --------------------------------------------------------------------------
# Instantaneous capacity
# --------------------------------------------------------------------------


def instantaneous_capacity(gamma):
    """IM/DD capacity approximation in bit/s/Hz."""
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise ValueError("SNR must be non-negative")
    out = 0.5 * np.log2(1.0 + SNR_FACTOR * g)
    return out if out.ndim else float(out)


def _capacity_of_gain(h: float, c: NoiseCoeffs) -> float:
    if h <= 0.0:
        return 0.0
    gamma = c.mu * c.mu * h * h / (c.alpha * h + c.beta)
    return 0.5 * math.log2(1.0 + SNR_FACTOR * gamma)


def _quad(f, a, b, epsabs, epsrel, what, accept_rel=None, **kw):
    """QUADPACK call that raises only when the error estimate exceeds ``accept_rel``
    (default ``100 * epsrel``) relative to the value."""
    res = integrate.quad(f, a, b, epsabs=epsabs, epsrel=epsrel, full_output=1, **kw)
    val, err = res[0], res[1]
    accept = 100.0 * epsrel if accept_rel is None else accept_rel
    if len(res) > 3 and err > max(epsabs, accept * abs(val)):
        raise QuadratureError(f"{what}: {res[3].strip().splitlines()[0]}", val, err)
    return val, err


def _slope_pdf_rad(model: SlopeModel):
    pdf = model.pdf_deg
    return lambda phi: pdf(phi / DEG) / DEG


_BREAK_QUANTILES = (1e-6, 1e-3, 0.05, 0.25, 0.5, 0.75, 0.95, 0.999, 1.0 - 1e-6)


def _slope_breaks_rad(model: SlopeModel) -> list[float]:
    """Break points for the outer quadrature: table nodes for empirical laws,
    otherwise a few quantiles so that narrow densities are not stepped over."""
    x = getattr(getattr(model, "pdf", None), "angles_deg", None)
    if x is not None:
        return [float(v) * DEG for v in x[1:-1]]
    lo, hi = model.support_deg
    cdf = model.cdf_deg
    pts = set()
    for q in _BREAK_QUANTILES:
        if cdf(hi) <= q:
            continue
        pts.add(optimize.brentq(lambda a: cdf(a) - q, lo, hi, xtol=1e-12))
    return sorted(p * DEG for p in pts if lo < p < hi)


# --------------------------------------------------------------------------
# Angle-domain quadrature
# --------------------------------------------------------------------------


def ergodic_capacity_angle(scenario: LinkScenario, rtol: float = 1e-6, atol: float = 1e-12) -> CapacityEstimate:
    """Ergodic capacity by nested adaptive quadrature over both tilt angles."""
    h_c = scenario.h_c
    coeffs = scenario.noise
    m = scenario.tx.lambertian_order
    fov = scenario.rx.fov_deg * DEG
    f_t = _slope_pdf_rad(scenario.slope_model)
    lo, hi = (v * DEG for v in scenario.slope_model.support_deg)
    hi = min(hi, math.pi / 2)
    pin = scenario.p_in

    if scenario.rx_tilt.degenerate:
        def outer(phi_t):
            return f_t(phi_t) * _capacity_of_gain(h_c * math.cos(phi_t) ** m, coeffs)
    else:
        s = scenario.rx_tilt.sigma_deg * DEG
        norm = math.sqrt(2.0 / math.pi)
        # Inner integral in x = phi_r / sigma; the Gaussian weight is below 1e-31 past x = 12.
        x_max = min(fov / s, 12.0)

        def outer(phi_t):
            dens = f_t(phi_t)
            if dens == 0.0:
                return 0.0
            base = h_c * math.cos(phi_t) ** m

            def inner(x):
                return _capacity_of_gain(base * math.cos(s * x), coeffs) * norm * math.exp(-0.5 * x * x)

            val, _ = _quad(inner, 0.0, x_max, atol, rtol * 0.1, "receiver-tilt integral")
            return dens * val

    breaks = _slope_breaks_rad(scenario.slope_model)
    kw = {"points": breaks, "limit": max(200, 4 * len(breaks))} if breaks else {"limit": 200}
    val, err = _quad(outer, lo, hi, atol, rtol, "transmitter-tilt integral", **kw)
    return CapacityEstimate(max(val, 0.0), "angle_quadrature", pin, 1.0 - pin,
                            abs_error=err, warnings=scenario.warnings)


# --------------------------------------------------------------------------
# Gain-domain density
# --------------------------------------------------------------------------


def _tanhsinh(f, a, b, rtol, what, args=(), accept_rel=None, accept_abs=0.0):
    """Vectorised tanh-sinh quadrature; raises when an element misses both
    ``accept_rel`` (default ``100 * rtol``) and ``accept_abs`` after the last
    refinement level."""
    res = integrate.tanhsinh(f, a, b, args=args, rtol=rtol, atol=1e-300, maxlevel=12)
    accept = 100.0 * rtol if accept_rel is None else accept_rel
    err = np.asarray(res.error)
    bad = ~np.asarray(res.success) & (err > accept * np.abs(res.integral)) & (err > accept_abs)
    bad |= ~np.isfinite(res.integral)
    if np.any(bad):
        raise QuadratureError(what, float(np.asarray(res.integral)[bad].ravel()[0]),
                              float(np.asarray(res.error)[bad].ravel()[0]))
    return res.integral, res.error


class _GainDensity:
    """Change-of-variables densities of ``X = cos^m(phi_t)``, ``Y = cos(phi_r) | in FoV``
    and the normalised product ``U = X Y = h'/h_c``; all vectorised."""

    def __init__(self, scenario: LinkScenario, rtol: float = 1e-9):
        self.m = float(scenario.tx.lambertian_order)
        self.slope = scenario.slope_model
        self.phi_max = min(scenario.slope_model.support_deg[1] * DEG, math.pi / 2)
        self.fov = scenario.rx.fov_deg * DEG
        self.y_min = math.cos(self.fov)
        self.pin = scenario.p_in
        self.degenerate = scenario.rx_tilt.degenerate
        self.sigma = scenario.rx_tilt.sigma_deg * DEG
        self.rtol = rtol

    def f_x(self, x):
        x = np.asarray(x, dtype=float)
        ok = (x > 0.0) & (x < 1.0)
        xs = np.where(ok, x, 0.5)
        log_r = np.log(xs) / self.m
        r = np.exp(log_r)
        one_minus_r2 = -np.expm1(2.0 * log_r)
        phi = np.arctan2(np.sqrt(one_minus_r2), r)
        ok &= (phi <= self.phi_max) & (one_minus_r2 > 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            dens = self.slope.pdf_deg(phi / DEG) / DEG * r / xs / (self.m * np.sqrt(one_minus_r2))
        return np.where(ok, dens, 0.0)

    def f_y(self, y):
        y = np.asarray(y, dtype=float)
        ok = (y >= self.y_min) & (y < 1.0)
        ys = np.where(ok, y, 0.5)
        phi = np.arccos(ys)
        dens = math.sqrt(2.0 / math.pi) / self.sigma * np.exp(-0.5 * (phi / self.sigma) ** 2)
        return np.where(ok, dens / (self.pin * np.sqrt((1.0 - ys) * (1.0 + ys))), 0.0)

    @property
    def phi_r_max(self) -> float:
        """Largest receiver tilt carrying weight: the FoV, or 12 sigma if smaller."""
        return min(self.fov, 12.0 * self.sigma)

    def _convolve(self, x, u):
        # Integrand in x = phi_r / sigma: f_Y(y) dy = f_phi_r(phi_r) d phi_r, so
        # f_U(u) = int f_X(u / cos(phi_r)) f_phi_r(phi_r) / (P_in cos(phi_r)) d phi_r.
        c = np.cos(self.sigma * x)
        w = math.sqrt(2.0 / math.pi) * np.exp(-0.5 * x * x) / self.pin
        return self.f_x(u / c) * w / c

    def f_u(self, u):
        """Density of ``h'/h_c`` on (0, 1)."""
        u = np.asarray(u, dtype=float)
        if self.degenerate:
            return self.f_x(u)
        # Both ends hold no resolvable mass: the density vanishes as u -> 1, and
        # u < 1e-12 needs tilts beyond ~75 degrees where it is integrably singular.
        inside = (u > 1e-12) & (u < 1.0 - 1e-12)
        us = np.where(inside, u, 0.5)
        # Feasible tilts satisfy cos(phi_r) >= u.
        hi = np.minimum(self.phi_r_max, np.arccos(us)) / self.sigma
        val, _ = _tanhsinh(self._convolve, 0.0, hi, self.rtol, "gain-density convolution",
                           args=(us,), accept_rel=1e-5, accept_abs=1e-5)
        return np.where(inside, val, 0.0)


def conditional_gain_density(scenario: LinkScenario, h):
    """Density of the continuous gain ``h' = h_c cos^m(phi_t) cos(phi_r)`` given the
    beam is inside the FoV. Zero outside ``(0, h_c]``."""
    h_c = scenario.h_c
    arr = np.asarray(h, dtype=float)
    out = _GainDensity(scenario).f_u(arr / h_c) / h_c
    out = np.where((arr > 0) & (arr <= h_c), out, 0.0)
    return out if out.ndim else float(out)


def gain_density_h(scenario: LinkScenario, h):
    """Continuous part ``P_in f_h'(h)`` of the gain density; the remaining
    ``P_out`` sits in a point mass at zero."""
    return scenario.p_in * conditional_gain_density(scenario, h)


def ergodic_capacity_gain(scenario: LinkScenario, rtol: float = 1e-7) -> CapacityEstimate:
    """Ergodic capacity by integrating the capacity against the gain density.

    The integral runs over ``u = h/h_c``; it is split where the bound on the
    receiver tilt starts to bind, ``u = cos(min(FoV, 12 sigma))``.
    """
    dens = _GainDensity(scenario, rtol=rtol * 1e-2)
    h_c = scenario.h_c
    coeffs = scenario.noise
    pin = scenario.p_in

    def integrand(u):
        h = h_c * u
        gamma = coeffs.mu**2 * h * h / (coeffs.alpha * h + coeffs.beta)
        return 0.5 * np.log2(1.0 + SNR_FACTOR * gamma) * dens.f_u(u)

    kink = 1.0 if dens.degenerate else math.cos(dens.phi_r_max)
    cuts = [0.0] + ([kink] if 0.0 < kink < 1.0 else []) + [1.0]
    total, err = 0.0, 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        val, e = _tanhsinh(integrand, a, b, rtol, "gain-domain integral")
        total += float(val)
        err += float(e)
    return CapacityEstimate(max(pin * total, 0.0), "gain_density", pin, 1.0 - pin,
                            abs_error=pin * err, warnings=scenario.warnings)


# --------------------------------------------------------------------------
# Monte-Carlo
# --------------------------------------------------------------------------

DEFAULT_CHUNK = 1 << 16


def _mc_chunk(scenario: LinkScenario, h_c: float, coeffs: NoiseCoeffs, seq: np.random.SeedSequence, size: int):
    rng = np.random.Generator(np.random.PCG64(seq))
    phi_t = scenario.slope_model.sample_deg(rng, size)
    phi_r = scenario.rx_tilt.sample_deg(rng, size)
    h = channel.channel_gain(h_c, phi_t, phi_r, scenario.tx.lambertian_order, scenario.rx.fov_deg)
    cap = instantaneous_capacity(channel.snr(h, coeffs))
    mean = float(cap.mean())
    m2 = float(((cap - mean) ** 2).sum())
    inside = int(np.count_nonzero(phi_r <= scenario.rx.fov_deg))
    return size, mean, m2, inside


def monte_carlo_capacity(scenario: LinkScenario, n: int = 10**6, seed: int = 0,
                         chunk_size: int = DEFAULT_CHUNK, workers: int = 1) -> CapacityEstimate:
    """Sample-mean ergodic capacity over ``n`` independent tilt realisations.

    Chunk ``i`` draws from its own stream spawned from ``SeedSequence(seed)``;
    chunks are reduced in index order, so the result is bit-identical for any
    ``workers`` value.
    """
    if n < 1000:
        raise ValueError("Monte-Carlo needs at least 1000 samples")
    if chunk_size < 1:
        raise ValueError("chunk_size must be positive")
    h_c = scenario.h_c
    coeffs = scenario.noise
    n_chunks = -(-n // chunk_size)
    seqs = np.random.SeedSequence(seed).spawn(n_chunks)
    sizes = [chunk_size] * (n_chunks - 1) + [n - chunk_size * (n_chunks - 1)]

    def run(i):
        return _mc_chunk(scenario, h_c, coeffs, seqs[i], sizes[i])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(n_chunks)))
    else:
        parts = [run(i) for i in range(n_chunks)]

    # Pairwise (Chan) merge of running mean and sum of squared deviations.
    count, mean, m2, inside = 0, 0.0, 0.0, 0
    for nb, mb, m2b, ib in parts:
        tot = count + nb
        delta = mb - mean
        mean += delta * nb / tot
        m2 += m2b + delta * delta * count * nb / tot
        count = tot
        inside += ib
    var = m2 / (count - 1)
    frac = inside / count
    return CapacityEstimate(max(mean, 0.0), "monte_carlo", frac, 1.0 - frac,
                            std_error=math.sqrt(var / count), seed=int(seed), n_samples=int(n),
                            warnings=scenario.warnings)


# --------------------------------------------------------------------------
# Dispatch and sweeps
# --------------------------------------------------------------------------


def normalize_method(method: str) -> str:
    try:
        return _METHOD_ALIASES[method.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}") from None


def ergodic_capacity(scenario: LinkScenario, method: str = "angle_quadrature", *,
                     n: int = 10**6, seed: int = 0, workers: int = 1) -> CapacityEstimate:
    method = normalize_method(method)
    if method == "angle_quadrature":
        return ergodic_capacity_angle(scenario)
    if method == "gain_density":
        return ergodic_capacity_gain(scenario)
    return monte_carlo_capacity(scenario, n=n, seed=seed, workers=workers)


def normalize_axis(axis: str) -> str:
    try:
        return _AXIS_ALIASES[axis.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown sweep axis {axis!r}; expected one of {', '.join(SWEEP_AXES)}") from None


def vary(scenario: LinkScenario, axis: str, value: float) -> LinkScenario:
    """Copy of ``scenario`` with one sweep parameter set to ``value``."""
    axis = normalize_axis(axis)
    value = float(value)
    if axis == "Z":
        return scenario.replace(geometry=LinkGeometry.equal_split(value))
    if axis == "U":
        return scenario.replace(slope_model=scenario.slope_model.with_wind_speed(value))
    if axis == "FoV":
        return scenario.replace(rx=dataclasses.replace(scenario.rx, fov_deg=value))
    if axis == "sigma_phi_r":
        return scenario.replace(rx_tilt=RxTiltModel(value))
    if axis == "L_t":
        return scenario.replace(env=dataclasses.replace(scenario.env, radiance_w_m2_nm_sr=value))
    return scenario.replace(tx=dataclasses.replace(scenario.tx, lambertian_order=value))


@dataclass(frozen=True)
class SweepPoint:
    axis: str
    value: float
    estimate: CapacityEstimate | None
    error: str | None = None


def capacity_sweep(template: LinkScenario, axis: str, values, method: str = "angle_quadrature", *,
                   n: int = 10**6, seed: int = 0, workers: int = 1) -> list[SweepPoint]:
    """Evaluate the capacity at each value of one parameter.

    Monte-Carlo points all reuse the master ``seed`` (common random numbers),
    so any row can be re-run on its own. A failing point is recorded in
    ``SweepPoint.error`` and the sweep continues.
    """
    axis = normalize_axis(axis)
    values = [float(v) for v in values]
    if not values:
        raise ValueError("sweep needs at least one value")
    method = normalize_method(method)
    rows = []
    for v in values:
        try:
            est = ergodic_capacity(vary(template, axis, v), method, n=n, seed=seed, workers=workers)
            rows.append(SweepPoint(axis, v, est))
        except (ValueError, QuadratureError, RuntimeError) as exc:
            rows.append(SweepPoint(axis, v, None, f"{type(exc).__name__}: {exc}"))
    return rows
