"""Scenario configuration: shipped defaults plus strict JSON overrides.

The config file is plain JSON with the same nesting as the defaults below.
Parsing is strict: unknown sections or keys are fatal, because silently
ignored physics parameters are the classic way sweeps go wrong.  Units are
annotated in the key names where dimensional (_h henry, _f farad,
_kelvin); the engine block is in natural units (hbar = k_B = 1,
frequencies and temperatures on a common energy scale).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .circuit import CircuitParams
from .core import EngineConfig
from .errors import ConfigError
from .metrology import DERIVATIVE_MODES, OBSERVABLES

__all__ = ["ScenarioConfig", "DEFAULTS", "load_config"]

DEFAULTS: dict = {
    "engine": {
        # frequencies and temperatures normalized to omega2
        "omega1": 0.1,
        "omega2": 1.0,
        "t_hot": 2.0,
        "t_cold": 0.01,
    },
    "sweep": {
        "zeta_panels": [2.0, 3.0, 3.4, 4.0],
        "phi_points": 2000,
    },
    "metrology": {
        # "chain" reproduces the published headline numbers; "paper"
        # evaluates the printed coth^2 derivative literally
        "derivative_mode": "chain",
        "observable": "energy",
        "zeta_bracket": [0.5, 8.0],
    },
    "oracle": {
        "n_max": 120,
        "algebra_n_max": 30,
        "beta_omega": [0.25, 0.5, 1.0],
        "zeta_grid": [0.4, 0.8, 1.2],
        "phi_grid": [0.3, 0.9, 2.0],
        "leak_tol": 1e-8,
        "thermal_leak_tol": 1e-10,
        "convergence_n": 60,
    },
    "circuit": {
        "inductance_h": 60e-12,
        "capacitance_f": 0.4e-12,
        "josephson_scale_j_per_f": 1e-9,
        "amp_a": 1.0,
        "amp_b": 0.78,
        "rapidity": 20.0,
        "rapidity_absolute": False,
        "n_cell": 100,
        "mode_index": 1,
        "t_hot_kelvin": 2.0,
        "t_cold_kelvin": 0.01,
        "t_f_points": 512,
    },
}


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated run configuration for the command-line surface."""

    engine: EngineConfig
    zeta_panels: tuple[float, ...]
    phi_points: int
    derivative_mode: str
    observable: str
    zeta_bracket: tuple[float, float]
    oracle: dict = field(repr=False)
    circuit: CircuitParams = field(repr=False)
    circuit_t_f_points: int = 512


def _merge_strict(defaults: dict, override: dict, path: str = "") -> dict:
    merged = dict(defaults)
    for key, value in override.items():
        where = f"{path}.{key}" if path else key
        if key not in defaults:
            raise ConfigError(f"unknown config key: {where}")
        if isinstance(defaults[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"{where} must be a table of settings")
            merged[key] = _merge_strict(defaults[key], value, where)
        else:
            merged[key] = value
    return merged


def _build(raw: dict) -> ScenarioConfig:
    try:
        engine = EngineConfig(**raw["engine"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"engine block invalid: {exc}") from exc
    met = raw["metrology"]
    if met["derivative_mode"] not in DERIVATIVE_MODES:
        raise ConfigError(
            f"metrology.derivative_mode must be one of {DERIVATIVE_MODES}, "
            f"got {met['derivative_mode']!r}"
        )
    if met["observable"] not in OBSERVABLES:
        raise ConfigError(
            f"metrology.observable must be one of {OBSERVABLES}, got {met['observable']!r}"
        )
    bracket = tuple(float(x) for x in met["zeta_bracket"])
    if len(bracket) != 2 or not bracket[0] < bracket[1]:
        raise ConfigError(f"metrology.zeta_bracket must be [lo, hi] with lo < hi, got {bracket}")
    sweep = raw["sweep"]
    if int(sweep["phi_points"]) < 8:
        raise ConfigError("sweep.phi_points must be at least 8")
    circ = dict(raw["circuit"])
    t_f_points = int(circ.pop("t_f_points"))
    try:
        params = CircuitParams(
            inductance=circ["inductance_h"],
            capacitance=circ["capacitance_f"],
            josephson_scale=circ["josephson_scale_j_per_f"],
            amp_a=circ["amp_a"],
            amp_b=circ["amp_b"],
            rapidity=circ["rapidity"],
            rapidity_absolute=bool(circ["rapidity_absolute"]),
            n_cell=int(circ["n_cell"]),
            mode_index=int(circ["mode_index"]),
            t_hot_kelvin=circ["t_hot_kelvin"],
            t_cold_kelvin=circ["t_cold_kelvin"],
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"circuit block invalid: {exc}") from exc
    oracle = dict(raw["oracle"])
    if int(oracle["n_max"]) < 1 or int(oracle["algebra_n_max"]) < 2:
        raise ConfigError("oracle basis sizes must be positive")
    return ScenarioConfig(
        engine=engine,
        zeta_panels=tuple(float(z) for z in sweep["zeta_panels"]),
        phi_points=int(sweep["phi_points"]),
        derivative_mode=met["derivative_mode"],
        observable=met["observable"],
        zeta_bracket=(bracket[0], bracket[1]),
        oracle=oracle,
        circuit=params,
        circuit_t_f_points=t_f_points,
    )


def load_config(path: str | Path | None = None) -> ScenarioConfig:
    """Defaults, optionally overridden by a strict JSON file."""
    raw = DEFAULTS
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        try:
            override = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(override, dict):
            raise ConfigError("config file must contain a JSON object")
        raw = _merge_strict(DEFAULTS, override)
    return _build(raw)
