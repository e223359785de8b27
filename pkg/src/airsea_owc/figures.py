"""Curve families of the three capacity-versus-range studies.

Each study is a list of ``(label, overrides)`` pairs. The overrides are
configuration keys (see :mod:`airsea_owc.config`) applied on top of a base
configuration, and every curve is swept over :data:`RANGES_M`.

``wind-fov``
    Slope model (MW, CM) x wind speed (6, 10, 14 m/s) x FoV (15, 30 deg).
``tilt-beam``
    Receiver tilt spread (10, 20 deg) x Lambertian order (20, 40) x FoV.
``radiance``
    Upwelling radiance (0.025, 0.25 W m^-2 nm^-1 sr^-1) x FoV.
"""
from __future__ import annotations

import itertools

import numpy as np

from .capacity import SweepPoint, capacity_sweep
from .config import resolve_config, scenario_from_config

RANGES_M = tuple(float(z) for z in np.arange(10.0, 101.0, 10.0))

_COMMON = {"sigma_phi_r": 10.0, "m": 20.0, "L_t": 0.025, "U": 10.0, "slope_model": "MW"}


def _label(over: dict) -> str:
    return " ".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}" for k, v in over.items())


def _curves(**axes) -> list[tuple[str, dict]]:
    keys = list(axes)
    out = []
    for combo in itertools.product(*axes.values()):
        over = dict(zip(keys, combo))
        out.append((_label(over), {**_COMMON, **over}))
    return out


FIGURES = {
    "wind-fov": _curves(slope_model=("MW", "CM"), U=(6.0, 10.0, 14.0), phi_FoV=(15.0, 30.0)),
    "tilt-beam": _curves(sigma_phi_r=(10.0, 20.0), m=(20.0, 40.0), phi_FoV=(15.0, 30.0)),
    "radiance": _curves(L_t=(0.025, 0.25), phi_FoV=(15.0, 30.0)),
}


def figure_sweeps(name: str, base: dict | None = None, ranges=RANGES_M, method: str = "angle_quadrature",
                  n: int = 10**6, seed: int = 0, workers: int = 1) -> list[tuple[str, list[SweepPoint]]]:
    """Range sweeps of every curve of one study, in a fixed order."""
    if name not in FIGURES:
        raise ValueError(f"unknown figure {name!r}; expected one of {', '.join(FIGURES)}")
    out = []
    for label, over in FIGURES[name]:
        cfg = resolve_config({**(base or {}), **over})
        template = scenario_from_config(cfg)
        out.append((label, capacity_sweep(template, "Z", ranges, method, n=n, seed=seed, workers=workers)))
    return out
