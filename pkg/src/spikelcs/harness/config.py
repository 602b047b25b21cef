"""Experiment configuration: flat ``key = value`` text files.

Grammar: one ``key = value`` pair per line, ``#`` starts a comment,
blank lines ignored, unknown keys are errors.  Environment variables
prefixed ``SPIKELCS_`` override file values (for CI).  Defaults follow
the coarse-grid benchmark parameterisation; choosing the mountain-car
environment switches the trial counts, population cap and engagement
timeout to that benchmark's published values unless set explicitly.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, fields

ENV_PREFIX = "SPIKELCS_"


class ConfigError(ValueError):
    """Invalid configuration text or values."""


def _in_range(lo, hi, lo_open=False):
    def check(v):
        return (v > lo if lo_open else v >= lo) and v <= hi
    return check


def _positive(v):
    return v > 0


# key -> (type, default, validator or allowed choices, range description)
_SPECS: dict[str, tuple] = {
    "environment": (str, "grid", ("grid", "mountain_car"), "grid | mountain_car"),
    "agent": (str, "lcs", ("lcs", "qlearn"), "lcs | qlearn"),
    "representation": (str, "snn", ("snn", "mlp"), "snn | mlp"),
    "mode": (str, "mdp", ("mdp", "tcs"), "mdp | tcs"),
    "explore_trials": (int, 10000, _positive, "> 0"),
    "exploit_trials": (int, 10000, _positive, "> 0"),
    "replicates": (int, 10, _positive, "> 0"),
    "master_seed": (int, 1, lambda v: v >= 0, ">= 0"),
    "sample_period": (int, 50, _positive, "> 0"),
    "trace": (bool, False, None, "true | false"),
    "dump_qtable": (bool, False, None, "true | false"),
    # environment constants
    "step_size": (float, 0.05, _in_range(0.0, 1.0, lo_open=True), "(0, 1]"),
    "noise": (float, 0.05, _in_range(0.0, 1.0), "[0, 1]"),
    "noise_model": (str, "multiplicative", ("multiplicative", "additive"),
                    "multiplicative | additive"),
    "goal_threshold": (float, 1.90, _in_range(0.0, 2.0), "[0, 2]"),
    "goal_reward": (float, 1000.0, _positive, "> 0"),
    "move_cap": (int, 0, lambda v: v >= 0, ">= 0 (0 = derive from step size)"),
    # learning-system constants
    "population_cap": (int, 20000, _positive, "> 0"),
    "beta": (float, 0.2, _in_range(0.0, 1.0, lo_open=True), "(0, 1]"),
    "epsilon0": (float, 0.005, _positive, "> 0"),
    "theta_ga": (float, 50.0, lambda v: v >= 0, ">= 0"),
    "theta_del": (float, 50.0, lambda v: v >= 0, ">= 0"),
    "x0": (float, 1.0, _positive, "> 0"),
    "eta": (float, 0.2, _in_range(0.0, 1.0, lo_open=True), "(0, 1]"),
    "gamma": (float, 0.95, _in_range(0.0, 1.0), "[0, 1]"),
    "alpha": (float, 0.1, _in_range(0.0, 1.0, lo_open=True), "(0, 1]"),
    "nu": (float, 5.0, _positive, "> 0"),
    "delta": (float, 0.1, _in_range(0.0, 1.0), "[0, 1]"),
    "cover_attempts": (int, 1000, _positive, "> 0"),
    "fitness_init": (float, 0.01, _in_range(0.0, 1.0, lo_open=True), "(0, 1]"),
    "ga_fitness_discount": (float, 0.1, _in_range(0.0, 1.0, lo_open=True), "(0, 1]"),
    "weight_law": (str, "redraw", ("redraw", "gaussian"), "redraw | gaussian"),
    "gaussian_sigma": (float, 0.1, _positive, "> 0"),
    # spiking constants
    "lif_a": (float, 0.3, _positive, "> 0"),
    "lif_b": (float, 0.05, _in_range(0.0, 1.0), "[0, 1]"),
    "lif_c": (float, 0.0, lambda v: v >= 0, ">= 0"),
    "lif_c_ini": (float, 0.5, _positive, "> 0"),
    "lif_threshold": (float, 1.0, _positive, "> 0"),
    "lif_window": (int, 5, _positive, "> 0"),
    # temporal-mode constants
    "tcs_phi": (float, 0.45, lambda v: v >= 0, ">= 0"),
    "tcs_rho": (float, 0.005, lambda v: v >= 0, ">= 0"),
    "tcs_timeout": (int, 0, lambda v: v >= 0, ">= 0 (0 = derive from step size)"),
    # baseline constants
    "q_learn_rate": (float, 0.2, _in_range(0.0, 1.0, lo_open=True), "(0, 1]"),
    "q_gamma": (float, 0.99, _in_range(0.0, 1.0), "[0, 1]"),
    # network seeding knobs
    "initial_hidden": (int, 1, _positive, "> 0"),
    "initial_connection_enabled": (float, 1.0, _in_range(0.0, 1.0, lo_open=True), "(0, 1]"),
    "mu_init_max": (float, 1.0, _in_range(0.0, 1.0, lo_open=True), "(0, 1]"),
    "psi_init_max": (float, 1.0, _in_range(0.0, 1.0, lo_open=True), "(0, 1]"),
    "omega_init_max": (float, 1.0, _in_range(0.0, 1.0, lo_open=True), "(0, 1]"),
    "tau_init_max": (float, 1.0, _in_range(0.0, 1.0, lo_open=True), "(0, 1]"),
}

# values swapped in for the mountain-car benchmark when not set explicitly
_MCAR_DEFAULTS = {
    "explore_trials": 2500,
    "exploit_trials": 2500,
    "population_cap": 1000,
    "move_cap": 1000,
}


@dataclass(frozen=True)
class ExperimentConfig:
    environment: str
    agent: str
    representation: str
    mode: str
    explore_trials: int
    exploit_trials: int
    replicates: int
    master_seed: int
    sample_period: int
    trace: bool
    dump_qtable: bool
    step_size: float
    noise: float
    noise_model: str
    goal_threshold: float
    goal_reward: float
    move_cap: int
    population_cap: int
    beta: float
    epsilon0: float
    theta_ga: float
    theta_del: float
    x0: float
    eta: float
    gamma: float
    alpha: float
    nu: float
    delta: float
    cover_attempts: int
    fitness_init: float
    ga_fitness_discount: float
    weight_law: str
    gaussian_sigma: float
    lif_a: float
    lif_b: float
    lif_c: float
    lif_c_ini: float
    lif_threshold: float
    lif_window: int
    tcs_phi: float
    tcs_rho: float
    tcs_timeout: int
    q_learn_rate: float
    q_gamma: float
    initial_hidden: int
    initial_connection_enabled: float
    mu_init_max: float
    psi_init_max: float
    omega_init_max: float
    tau_init_max: float

    @property
    def total_trials(self) -> int:
        return self.explore_trials + self.exploit_trials

    def resolved_timeout(self) -> int:
        if self.tcs_timeout > 0:
            return self.tcs_timeout
        if self.environment == "mountain_car":
            return 200
        return int(math.ceil(20 * 0.05 / self.step_size))

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _parse_value(key: str, raw: str):
    typ = _SPECS[key][0]
    raw = raw.strip()
    try:
        if typ is bool:
            low = raw.lower()
            if low in ("true", "1", "yes", "on"):
                return True
            if low in ("false", "0", "no", "off"):
                return False
            raise ValueError(raw)
        if typ is int:
            return int(raw)
        if typ is float:
            return float(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {typ.__name__}") from exc


def parse_config(text: str, apply_env: bool = True,
                 overrides: dict | None = None) -> ExperimentConfig:
    """Parse, apply overrides and environment variables, validate."""
    explicit: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _SPECS:
            raise ConfigError(f"line {lineno}: unknown config key: {key}")
        explicit[key] = _parse_value(key, raw)

    if overrides:
        for key, value in overrides.items():
            if key not in _SPECS:
                raise ConfigError(f"unknown config key: {key}")
            explicit[key] = value if not isinstance(value, str) \
                else _parse_value(key, value)

    if apply_env:
        for key in _SPECS:
            env_val = os.environ.get(ENV_PREFIX + key.upper())
            if env_val is not None:
                explicit[key] = _parse_value(key, env_val)

    values = {}
    env_defaults = _MCAR_DEFAULTS if explicit.get("environment") == "mountain_car" else {}
    for key, (typ, default, _check, _rng) in _SPECS.items():
        if key in explicit:
            values[key] = explicit[key]
        else:
            values[key] = env_defaults.get(key, default)

    errors = validate_values(values)
    if errors:
        raise ConfigError("; ".join(errors))
    return ExperimentConfig(**values)


def validate_values(values: dict) -> list[str]:
    errors = []
    for key, (typ, _default, check, range_text) in _SPECS.items():
        v = values[key]
        if isinstance(check, tuple):
            if v not in check:
                errors.append(f"{key}: value {v!r} outside {range_text}")
        elif check is not None and not check(v):
            errors.append(f"{key}: value {v!r} outside {range_text}")
    if values["lif_c_ini"] <= values["lif_c"]:
        errors.append("lif_c_ini: must exceed lif_c")
    return errors


def load_config(path: str, apply_env: bool = True,
                overrides: dict | None = None) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read(), apply_env=apply_env, overrides=overrides)
