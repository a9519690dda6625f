"""INI-style experiment configuration with strict key checking.

Each section belongs to one part of the pipeline. Model sections are either
``[model]`` or ``[model.<name>]`` (several are allowed, e.g. for ``compare``).
Unknown sections or keys raise `ConfigError` naming the offender, since a
silently ignored typo in ``gamma`` or ``a0`` would invalidate a run.

A run manifest (JSON written by the CLI) can be loaded in place of a config
file; its ``config`` block is the fully resolved configuration.
"""

from __future__ import annotations

import configparser
import json
from pathlib import Path

from .model import ModelError, WaveModel, validate_model
from .synth import GridConfig

__all__ = ["ConfigError", "SCHEMA", "load_config", "parse_config", "build_models", "build_grid", "get"]


class ConfigError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    return [float(x) for x in str(text).replace(",", " ").split()]


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    v = str(text).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _taper_mode(text) -> str:
    v = str(text).strip().lower()
    if v == "both":
        return "both"
    return "true" if _bool(v) else "false"


def _b0(text):
    v = str(text).strip()
    return "auto" if v.lower() == "auto" else float(v)


# section -> key -> (parser, default); default None means required when used
SCHEMA: dict[str, dict[str, tuple]] = {
    "model": {
        "c0": (float, 1.0),
        "a0": (float, 0.0),
        "b0": (_b0, "auto"),
        "gamma": (float, 1.0),
        "family": (str, "Custom"),
    },
    "grid": {
        "dr_target": (float, 0.02),
        "r_max_factor": (float, 10.0),
        "r_max": (float, 0.0),
        "k_factor": (float, 40.0),
        "nodes_per_period": (int, 8),
        "grading": (int, 14),
        "taper": (_taper_mode, "true"),
        "taper_fraction": (float, 0.1),
    },
    "dispersion": {
        "t": (float, 1.0),
        "k_min": (float, 0.0),
        "k_max": (float, 10.0),
        "n_k": (int, 201),
    },
    "synth": {
        "t": (float, 1.0),
        "gnuplot": (_bool, False),
    },
    "nonlocal": {
        "bump_width": (float, 1.0),
        "gammas": (_floats, [0.75]),
        "control_gamma": (float, 1.0),
        "r_max": (float, 40.0),
        "n": (int, 8192),
        "radii": (_floats, [2.0, 3.0, 5.0, 8.0, 10.0, 15.0, 20.0]),
    },
    "front_speed": {
        "t": (float, 1.0),
        "c_f": (_floats, [1.0, 2.0, 5.0, 10.0]),
        "quantity": (str, "green"),
    },
    "nonsmooth": {
        "target": (str, "symbol"),
        "gamma": (float, 0.75),
        "order": (int, 2),
        "h_list": (_floats, [1e-1, 1e-2, 1e-3, 1e-4]),
        "t": (float, 1.0),
    },
    "pw_probe": {
        "t": (_floats, [1.0]),
        "k1_min": (float, 0.0),
        "k1_max": (float, 0.0),
        "n_k1": (int, 64),
    },
}


def _section_kind(name: str) -> str:
    return "model" if name == "model" or name.startswith("model.") else name


def parse_config(raw: dict[str, dict]) -> dict[str, dict]:
    """Validate a ``{section: {key: value}}`` mapping and fill in defaults."""
    out: dict[str, dict] = {}
    for name, body in raw.items():
        kind = _section_kind(name)
        if kind not in SCHEMA:
            raise ConfigError(f"unknown section [{name}]")
        spec = SCHEMA[kind]
        resolved = {}
        for key, value in body.items():
            if key not in spec:
                raise ConfigError(f"unknown key '{key}' in section [{name}]")
            parser = spec[key][0]
            try:
                resolved[key] = parser(value) if not isinstance(value, list) else [float(v) for v in value]
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"invalid value for '{key}' in [{name}]: {value!r} ({exc})") from None
        for key, (_, default) in spec.items():
            resolved.setdefault(key, default)
        out[name] = resolved
    for kind in SCHEMA:
        if kind != "model" and kind not in out:
            out[kind] = {k: d for k, (_, d) in SCHEMA[kind].items()}
    return out


def load_config(path) -> dict[str, dict]:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    if path.suffix.lower() == ".json":
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from None
        if "config" not in data:
            raise ConfigError(f"{path}: manifest has no 'config' block")
        return parse_config(data["config"])
    parser = configparser.ConfigParser(interpolation=None, default_section="__none__")
    parser.optionxform = str
    try:
        parser.read_string(path.read_text())
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return parse_config({s: dict(parser[s]) for s in parser.sections()})


def get(cfg: dict, section: str, key: str):
    return cfg[section][key]


def build_models(cfg: dict) -> dict[str, WaveModel]:
    models = {}
    for name, body in cfg.items():
        if _section_kind(name) != "model":
            continue
        label = name.split(".", 1)[1] if "." in name else "model"
        try:
            models[label] = validate_model(body["c0"], body["a0"], body["b0"], body["gamma"], body["family"])
        except (ModelError, ValueError) as exc:
            raise ConfigError(f"[{name}]: {exc}") from None
    return models


def build_grid(cfg: dict, taper: bool | None = None, workers: int = 1) -> GridConfig:
    g = cfg["grid"]
    if taper is None:
        taper = g["taper"] != "false"
    return GridConfig(
        dr_target=g["dr_target"],
        r_max_factor=g["r_max_factor"],
        k_factor=g["k_factor"],
        nodes_per_period=g["nodes_per_period"],
        grading=g["grading"],
        taper=taper,
        taper_fraction=g["taper_fraction"],
        workers=workers,
    )
