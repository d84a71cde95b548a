"""Scenario files: schema, defaults, and aggregated validation.

A scenario is TOML (or JSON with the same layout)::

    name = "demo"
    command = "dispersion"
    seed = 7
    output_dir = "out"
    discrepancies_fatal = false

    [conventions]
    c = 1.0
    hbar_m = 1.0
    energy_sign = 1
    spatial_sign = 1

    [parameters]
    v = [0.0, 0.3, 0.6]

Parameters for a single command may be given flat (as above) or under a
table named after the command (``[parameters.dispersion]``); for
``command = "all"`` only the named tables are accepted.
"""
from __future__ import annotations

import copy
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .expression import Expression, ExpressionError
from .kinematics import VELOCITY_GUARD, Conventions

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised on 3.10
    import tomli as tomllib

COMMANDS = ("algebra", "dispersion", "dirac", "geodesic", "action", "maxwell", "evolve", "jitter")
ALL_COMMANDS = COMMANDS + ("all",)

TOP_LEVEL_KEYS = {"name", "command", "seed", "output_dir", "conventions", "parameters", "discrepancies_fatal"}
CONVENTION_KEYS = {"c", "hbar_m", "energy_sign", "spatial_sign", "velocity_guard"}


@dataclass(frozen=True)
class Param:
    kind: str  # float | int | bool | str | expr | float_list | int_list | velocity | velocity_list | choice
    default: object
    positive: bool = False
    choices: tuple = ()


PARAMETERS: dict[str, dict[str, Param]] = {
    "algebra": {},
    "dispersion": {
        "v": Param("velocity_list", [0.0, 0.1, 0.3, 0.6, 0.9]),
        "slope_v_min": Param("velocity", 1e-3),
        "slope_v_max": Param("velocity", 1e-1),
        "slope_points": Param("int", 25, positive=True),
    },
    "dirac": {
        "v_min": Param("velocity", 1e-3),
        "v_max": Param("velocity", 0.99),
        "points": Param("int", 50, positive=True),
        "beta_s": Param("choice", 1, choices=(1, -1)),
    },
    "geodesic": {
        "g_tt": Param("expr", "1 + 0.2*x"),
        "g_xx": Param("expr", "1"),
        "x0": Param("float", 5.0),
        "v0": Param("velocity", 0.0),
        "dtau": Param("float", 1e-3, positive=True),
        "steps": Param("int", 10000, positive=True),
        "flat_v0": Param("velocity", 0.6),
        "flat_tau": Param("float", 2.0, positive=True),
    },
    "action": {
        "X": Param("float", 0.6),
        "T": Param("float", 1.0, positive=True),
        "n_perturbations": Param("int", 100, positive=True),
        "g": Param("float", 0.1),
        "n_samples": Param("int", 201, positive=True),
        "n_modes": Param("int", 5, positive=True),
    },
    "maxwell": {
        "n": Param("int", 512, positive=True),
        "length": Param("float", 1.0, positive=True),
        "courant": Param("float", 0.5, positive=True),
        "width": Param("float", 0.03, positive=True),
        "steps": Param("int", 10000, positive=True),
        "refine": Param("int_list", [64, 128, 256]),
    },
    "evolve": {
        "n": Param("int", 1600, positive=True),
        "dx": Param("float", 0.05, positive=True),
        "dt": Param("float", 0.01, positive=True),
        "steps": Param("int", 1000, positive=True),
        "store_every": Param("int", 10, positive=True),
        "v_center": Param("velocity", 0.6),
        "width": Param("float", 2.0, positive=True),
        "x_center": Param("float", -20.0),
        "dirac_n": Param("int", 800, positive=True),
        "dirac_steps": Param("int", 1000, positive=True),
        "plane_mode": Param("int", 3),
        "plane_steps": Param("int", 100, positive=True),
    },
    "jitter": {
        "v": Param("velocity_list", [0.0, 0.3, 0.6, 0.9]),
        "electron": Param("bool", True),
    },
}


@dataclass
class Scenario:
    name: str = "default"
    command: str = "all"
    parameters: dict = field(default_factory=dict)  # command -> filled parameter dict
    conventions: Conventions = field(default_factory=Conventions)
    output_dir: Path | None = None
    seed: int = 0
    discrepancies_fatal: bool = False

    @property
    def commands(self) -> tuple:
        return COMMANDS if self.command == "all" else (self.command,)

    def params(self, command: str) -> dict:
        return self.parameters[command]

    def echo(self) -> dict:
        return {
            "name": self.name,
            "command": self.command,
            "seed": self.seed,
            "discrepancies_fatal": self.discrepancies_fatal,
            "conventions": self.conventions.to_dict(),
            "parameters": {k: self.parameters[k] for k in self.commands},
        }


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _check_value(path: str, p: Param, value, vmax: float, errors: list):
    """Type and range check; returns the normalized value (or None on error)."""
    kind = p.kind

    def velocity_ok(v, where):
        if not _is_number(v):
            errors.append(f"{where}: expected a number, got {v!r}")
            return False
        if not abs(v) < vmax:
            errors.append(f"{where}={v!r} violates the velocity guard |v| < c(1 - guard) = {vmax!r}")
            return False
        return True

    if kind == "velocity":
        return float(value) if velocity_ok(value, path) else None
    if kind == "velocity_list":
        if not isinstance(value, list) or not value:
            errors.append(f"{path}: expected a non-empty list of velocities")
            return None
        ok = [velocity_ok(v, f"{path}[{i}]") for i, v in enumerate(value)]
        return [float(v) for v in value] if all(ok) else None
    if kind in ("float", "int"):
        if not _is_number(value) or (kind == "int" and not isinstance(value, int)):
            errors.append(f"{path}: expected {'an integer' if kind == 'int' else 'a number'}, got {value!r}")
            return None
        if kind == "float" and not math.isfinite(value):
            errors.append(f"{path}: must be finite")
            return None
        if p.positive and not value > 0:
            errors.append(f"{path}={value!r} must be positive")
            return None
        return float(value) if kind == "float" else int(value)
    if kind == "int_list":
        if not isinstance(value, list) or not value or not all(isinstance(v, int) and not isinstance(v, bool) and v > 2 for v in value):
            errors.append(f"{path}: expected a non-empty list of integers > 2")
            return None
        return list(value)
    if kind == "bool":
        if not isinstance(value, bool):
            errors.append(f"{path}: expected true/false, got {value!r}")
            return None
        return value
    if kind == "choice":
        if value not in p.choices or isinstance(value, bool):
            errors.append(f"{path}={value!r} must be one of {list(p.choices)}")
            return None
        return value
    if kind == "expr":
        if not isinstance(value, (str, int, float)) or isinstance(value, bool):
            errors.append(f"{path}: expected an expression string")
            return None
        try:
            Expression(str(value))
        except ExpressionError as exc:
            errors.append(f"{path}: {exc}")
            return None
        return str(value)
    raise AssertionError(kind)


def _fill(command: str, raw: dict, where: str, vmax: float, errors: list) -> dict:
    schema = PARAMETERS[command]
    out = {}
    for key in raw:
        if key not in schema:
            errors.append(f"unknown key {where}.{key!r}")
    for key, p in schema.items():
        value = raw.get(key, copy.deepcopy(p.default))
        out[key] = _check_value(f"{where}.{key}", p, value, vmax, errors)
    return out


def _cross_checks(command: str, prm: dict, errors: list):
    if any(v is None for v in prm.values()):
        return  # already reported
    where = f"parameters.{command}"
    if command == "dispersion" and not 0 < prm["slope_v_min"] < prm["slope_v_max"]:
        errors.append(f"{where}: need 0 < slope_v_min < slope_v_max")
    if command == "dirac" and not 0 < prm["v_min"] < prm["v_max"]:
        errors.append(f"{where}: need 0 < v_min < v_max")
    if command == "action" and prm["n_samples"] < 3:
        errors.append(f"{where}.n_samples must be >= 3")
    if command == "maxwell":
        if prm["courant"] > 1:
            errors.append(f"{where}.courant={prm['courant']!r} exceeds 1 (Courant condition)")
        if prm["n"] < 3:
            errors.append(f"{where}.n must be >= 3")
    if command == "evolve":
        if prm["width"] < 4 * prm["dx"]:
            errors.append(f"{where}.width={prm['width']!r} is below 4*dx={4 * prm['dx']!r} (resolution guard)")
        if prm["dt"] > prm["dx"]:
            errors.append(f"{where}: dt/dx = {prm['dt'] / prm['dx']!r} exceeds 1 (Courant condition for the two-component run)")
        if prm["n"] < 3 or prm["dirac_n"] < 3:
            errors.append(f"{where}: grid sizes must be >= 3")


def _conventions(raw, overrides: dict | None, errors: list) -> Conventions:
    data = {}
    if raw is not None:
        if not isinstance(raw, dict):
            errors.append("conventions: expected a table")
        else:
            for k, v in raw.items():
                if k not in CONVENTION_KEYS:
                    errors.append(f"unknown key conventions.{k!r}")
                else:
                    data[k] = v
    data.update(overrides or {})
    for k in ("energy_sign", "spatial_sign"):
        if k in data and (data[k] not in (1, -1) or isinstance(data[k], bool)):
            errors.append(f"conventions.{k}={data[k]!r} must be +1 or -1")
            data.pop(k)
    for k in ("c", "hbar_m", "velocity_guard"):
        if k in data and not _is_number(data[k]):
            errors.append(f"conventions.{k}: expected a number, got {data[k]!r}")
            data.pop(k)
    try:
        return Conventions(**data)
    except ValueError as exc:
        errors.append(f"conventions: {exc}")
        return Conventions()


def parse_text(text: str, fmt: str = "toml") -> dict:
    try:
        if fmt == "json":
            data = json.loads(text)
        else:
            data = tomllib.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot parse scenario ({fmt}): {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("scenario must be a table/object at top level")
    return data


def validate(data, command: str | None = None, convention_overrides: dict | None = None) -> Scenario:
    """Build a Scenario from parsed data (or TOML text), collecting every error.

    ``command`` (from the command line) must agree with the file's
    ``command`` key when both are present.
    """
    if isinstance(data, str):
        data = parse_text(data, "json" if data.lstrip().startswith("{") else "toml")
    errors: list[str] = []
    for key in data:
        if key not in TOP_LEVEL_KEYS:
            errors.append(f"unknown key {key!r}")

    file_cmd = data.get("command")
    if file_cmd is not None and file_cmd not in ALL_COMMANDS:
        errors.append(f"command={file_cmd!r} must be one of {list(ALL_COMMANDS)}")
        file_cmd = None
    if command is not None and command not in ALL_COMMANDS:
        errors.append(f"command={command!r} must be one of {list(ALL_COMMANDS)}")
        command = None
    if command is not None and file_cmd is not None and command != file_cmd:
        errors.append(f"command mismatch: command line says {command!r}, scenario says {file_cmd!r}")
    cmd = command or file_cmd or "all"

    name = data.get("name", "default")
    if not isinstance(name, str) or not name:
        errors.append("name: expected a non-empty string")
        name = "default"
    seed = data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        errors.append(f"seed={seed!r} must be a non-negative integer")
        seed = 0
    fatal = data.get("discrepancies_fatal", False)
    if not isinstance(fatal, bool):
        errors.append("discrepancies_fatal: expected true/false")
        fatal = False
    out_dir = data.get("output_dir")
    if out_dir is not None and not isinstance(out_dir, str):
        errors.append("output_dir: expected a path string")
        out_dir = None

    conv = _conventions(data.get("conventions"), convention_overrides, errors)
    vmax = conv.v_max

    raw_params = data.get("parameters", {})
    if not isinstance(raw_params, dict):
        errors.append("parameters: expected a table")
        raw_params = {}
    sections = {c: {} for c in COMMANDS}
    flat = {}
    for key, value in raw_params.items():
        if key in COMMANDS and isinstance(value, dict):
            sections[key] = value
        else:
            flat[key] = value
    if flat:
        if cmd == "all":
            for key in flat:
                errors.append(f"unknown key parameters.{key!r} (use [parameters.<command>] tables with command='all')")
        else:
            overlap = set(flat) & set(sections[cmd])
            for key in sorted(overlap):
                errors.append(f"parameters.{key!r} given both flat and under parameters.{cmd}")
            sections[cmd] = {**sections[cmd], **flat}

    run_set = COMMANDS if cmd == "all" else (cmd,)
    params = {}
    for c in COMMANDS:
        if c not in run_set and sections[c]:
            errors.append(f"parameters.{c} given but command is {cmd!r}")
        filled = _fill(c, sections[c], f"parameters.{c}", vmax, errors)
        _cross_checks(c, filled, errors)
        params[c] = filled

    if errors:
        raise ConfigError(errors)
    return Scenario(
        name=name,
        command=cmd,
        parameters=params,
        conventions=conv,
        output_dir=None if out_dir is None else Path(out_dir),
        seed=seed,
        discrepancies_fatal=fatal,
    )


def load(path, command: str | None = None, convention_overrides: dict | None = None) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc}") from None
    fmt = "json" if path.suffix.lower() == ".json" else "toml"
    return validate(parse_text(text, fmt), command, convention_overrides)


def parse_convention_flag(text: str) -> dict:
    """``eps=+1,s=-1,c=2`` -> Conventions keyword overrides."""
    aliases = {
        "eps": "energy_sign",
        "energy_sign": "energy_sign",
        "s": "spatial_sign",
        "spatial_sign": "spatial_sign",
        "c": "c",
        "hbar": "hbar_m",
        "hbar_m": "hbar_m",
        "guard": "velocity_guard",
        "velocity_guard": "velocity_guard",
    }
    out, errors = {}, []
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in aliases:
            errors.append(f"--convention: cannot parse {item!r}")
            continue
        target = aliases[key]
        try:
            out[target] = int(value) if target in ("energy_sign", "spatial_sign") else float(value)
        except ValueError:
            errors.append(f"--convention: bad value for {key!r}: {value!r}")
    if errors:
        raise ConfigError(errors)
    return out


__all__ = [
    "ALL_COMMANDS",
    "COMMANDS",
    "PARAMETERS",
    "Scenario",
    "VELOCITY_GUARD",
    "load",
    "parse_convention_flag",
    "parse_text",
    "validate",
]
