"""Scenario configuration files and provenance-stamped result tables.

A scenario file is a flat JSON object whose keys follow the usual link-budget
symbols. Values are SI except ``K_a_dB_per_km`` (dB/km), ``B_o`` and
``wavelength_nm`` (nm) and angles (degrees). Missing keys take the baseline
values in :data:`DEFAULTS`.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .capacity import LinkScenario
from .channel import Environment, LinkGeometry, RxModel, TxModel
from .empirical import read_empirical_csv
from .surface import EmpiricalSlopeModel, RxTiltModel, make_slope_model

DEFAULTS = {
    "Z": 20.0,
    "m": 20.0,
    "P_Tx": 20.0,
    "wavelength_nm": 470.0,
    "A_PD": 9e-6,
    "T_a": 0.98,
    "T_f": 1.0,
    "B_o": 20.0,
    "n_rf": 1.5,
    "phi_FoV": 30.0,
    "G": 1e6,
    "F": 1.1,
    "R_e": 9e4,
    "I_d": 1.10e-6,
    "R_L": 1e3,
    "B_e": 5e6,
    "K_w": 0.08,
    "K_a_dB_per_km": 0.19,
    "L_t": 0.025,
    "T": 300.0,
    "U": 10.0,
    "sigma_phi_r": 10.0,
    "slope_model": "MW",
    "mw_law": "linear",
}
# Optional keys without a default.
OPTIONAL = {"Z_w", "Z_a", "slope_pdf_csv"}
_STRING_KEYS = {"slope_model", "mw_law", "slope_pdf_csv"}


class ConfigError(ValueError):
    pass


def resolve_config(overrides: dict | None = None) -> dict:
    """Defaults merged with ``overrides``; unknown keys and bad types raise :class:`ConfigError`."""
    cfg = dict(DEFAULTS)
    for key, value in (overrides or {}).items():
        if key not in DEFAULTS and key not in OPTIONAL:
            raise ConfigError(f"unknown configuration key {key!r}")
        if key in _STRING_KEYS:
            if not isinstance(value, str):
                raise ConfigError(f"{key} must be a string")
        elif isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key} must be a number, got {value!r}")
        else:
            value = float(value)
        cfg[key] = value
    if ("Z_w" in cfg) != ("Z_a" in cfg):
        raise ConfigError("Z_w and Z_a must be given together")
    if "Z_w" in cfg:
        cfg["Z"] = cfg["Z_w"] + cfg["Z_a"]
    return cfg


def load_config(path) -> dict:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"configuration file {path} not found") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected a JSON object of key/value pairs")
    cfg = resolve_config(raw)
    if "slope_pdf_csv" in cfg:
        cfg["slope_pdf_csv"] = str((path.parent / cfg["slope_pdf_csv"]).resolve())
    return cfg


def config_hash(cfg: dict) -> str:
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def scenario_from_config(cfg: dict) -> LinkScenario:
    """Build a :class:`LinkScenario` from a resolved configuration."""
    try:
        if "Z_w" in cfg:
            geometry = LinkGeometry(cfg["Z_w"], cfg["Z_a"])
        else:
            geometry = LinkGeometry.equal_split(cfg["Z"])
        tx = TxModel(lambertian_order=cfg["m"], power_w=cfg["P_Tx"], wavelength_nm=cfg["wavelength_nm"])
        rx = RxModel(area_m2=cfg["A_PD"], atm_transmittance=cfg["T_a"], filter_transmittance=cfg["T_f"],
                     filter_bandwidth_nm=cfg["B_o"], refractive_index=cfg["n_rf"], fov_deg=cfg["phi_FoV"],
                     gain=cfg["G"], excess_noise=cfg["F"], responsivity_a_per_w=cfg["R_e"],
                     dark_current_a=cfg["I_d"], load_ohm=cfg["R_L"], bandwidth_hz=cfg["B_e"])
        env = Environment(k_water_per_m=cfg["K_w"], k_air_db_per_km=cfg["K_a_dB_per_km"],
                          radiance_w_m2_nm_sr=cfg["L_t"], temperature_k=cfg["T"])
        if cfg["slope_model"].strip().lower() == "empirical":
            if "slope_pdf_csv" not in cfg:
                raise ConfigError("slope_model 'empirical' needs slope_pdf_csv")
            slope = EmpiricalSlopeModel(read_empirical_csv(cfg["slope_pdf_csv"]), cfg["U"])
        else:
            slope = make_slope_model(cfg["slope_model"], cfg["U"], cfg["mw_law"])
        return LinkScenario(geometry, tx, rx, env, slope, RxTiltModel(cfg["sigma_phi_r"]))
    except ConfigError:
        raise
    except (ValueError, OSError) as exc:
        raise ConfigError(str(exc)) from exc


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


@dataclass
class ResultTable:
    """Rectangular table with a provenance header written as ``#`` comment lines."""

    columns: list[str]
    rows: list[list] = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def add(self, *cells):
        if len(cells) != len(self.columns):
            raise ValueError(f"row has {len(cells)} cells, table has {len(self.columns)} columns")
        self.rows.append(list(cells))

    def to_csv(self) -> str:
        prov = {"tool": f"airsea-owc {__version__}", **self.provenance}
        lines = [f"# {k}: {v}" for k, v in prov.items()]
        lines.append(",".join(self.columns))
        lines += [",".join(_cell(c) for c in row) for row in self.rows]
        return "\n".join(lines) + "\n"

    def write(self, path):
        """Write atomically: temporary file in the target directory, then rename."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(self.to_csv())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
