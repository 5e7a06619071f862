"""Flat key = value run configuration with bracketed section headers.

Four sections are understood: [params], [sweep], [fit], [output]. Unknown
sections or keys are rejected outright so a typo cannot silently fall back
to a default. Command-line flags override file values.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from .errors import ValidationError

PARAM_KEYS = {
    "coordination_m": int,
    "spin_s": float,
    "exchange_j": float,
    "anisotropy_ba": float,
    "field_b": float,
    "temperature_t": float,
    "coupling_j0": float,
    "theta0": float,
}

SWEEP_KEYS = {
    "axis1_parameter": str,
    "axis1_start": float,
    "axis1_stop": float,
    "axis1_count": int,
    "axis1_spacing": str,
    "axis2_parameter": str,
    "axis2_start": float,
    "axis2_stop": float,
    "axis2_count": int,
    "axis2_spacing": str,
    "clamp_to_critical": bool,
    "figure": str,
}

FIT_KEYS = {
    "regime": str,
    "window_min": float,
    "window_max": float,
    "points": int,
}

OUTPUT_KEYS = {
    "path": str,
    "format": str,
    "emit_plot_script": bool,
}

_SECTIONS = {
    "params": PARAM_KEYS,
    "sweep": SWEEP_KEYS,
    "fit": FIT_KEYS,
    "output": OUTPUT_KEYS,
}

_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


@dataclass
class RunConfig:
    params: dict = field(default_factory=dict)
    sweep: dict = field(default_factory=dict)
    fit: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)


def _convert(section: str, key: str, raw: str, kind):
    raw = raw.strip()
    try:
        if kind is bool:
            lowered = raw.lower()
            if lowered in _TRUE:
                return True
            if lowered in _FALSE:
                return False
            raise ValueError(raw)
        return kind(raw)
    except ValueError:
        raise ValidationError(
            f"config [{section}] {key} = {raw!r} is not a valid {kind.__name__}"
        ) from None


def load_config(path: str) -> RunConfig:
    parser = configparser.ConfigParser(
        comment_prefixes=("#",), inline_comment_prefixes=("#",), strict=True
    )
    try:
        with open(path, "r", encoding="utf-8") as handle:
            parser.read_file(handle)
    except OSError:
        raise
    except (configparser.Error, UnicodeDecodeError) as exc:
        raise ValidationError(f"malformed config file {path}: {exc}") from None

    config = RunConfig()
    buckets = {
        "params": config.params,
        "sweep": config.sweep,
        "fit": config.fit,
        "output": config.output,
    }
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ValidationError(f"unknown config section [{section}]")
        known = _SECTIONS[section]
        for key, raw in parser.items(section):
            if key not in known:
                raise ValidationError(f"unknown key {key!r} in config section [{section}]")
            buckets[section][key] = _convert(section, key, raw, known[key])
    return config
