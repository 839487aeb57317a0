"""Strict JSON run configuration.

Full-line ``//`` and ``#`` comments are allowed.  Unknown keys are errors,
and every physical invariant is re-checked at parse time by building the
core-model objects.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .core import FieldConfig, ParticleParams


class ConfigError(ValueError):
    pass


_NUM = (int, float)

# section -> {key: (types, default)}; a default of ... marks a required key
SCHEMA: dict[str, dict[str, tuple]] = {
    "particle": {"M": (_NUM, ...), "alpha": (_NUM, ...)},
    "fields": {"k": (_NUM, ...), "B": (_NUM, ...), "hbar": (_NUM, 1.0)},
    "channels": {"tol": (_NUM, 0.0)},
    "spectrum": {
        "mode": (str, "auto"),
        "m": (int, 0),
        "nu_sq": (_NUM + (type(None),), None),
        "r_inner": (_NUM, 0.0),
        "r_outer": (_NUM, 1.0),
        "n_points": (int, 4000),
        "spacing": ((str, type(None)), None),
        "n_levels": ((int, type(None)), None),
    },
    "path": {
        "kind": (str, "circle"),
        "center": (list, [0.0, 0.0]),
        "radius": (_NUM, 1.0),
        "semi_axes": (list, [1.0, 1.0]),
        "side": (_NUM, 1.0),
        "vertices": ((list, type(None)), None),
        "n_vertices": (int, 64),
        "turns": (int, 1),
    },
    "classical": {
        "x0": (list, [1.0, 0.0]),
        "p0": (list, [0.0, 1.0]),
        "t_end": (_NUM, 100.0),
        "tol": (_NUM, 1e-10),
        "stride": (int, 1),
    },
    "sweep": {
        "alpha": ((list, dict, type(None)), None),
        "k": ((list, dict, type(None)), None),
        "B": ((list, dict, type(None)), None),
        "M": ((list, dict, type(None)), None),
        "phase": (bool, False),
    },
}
REQUIRED_SECTIONS = ("particle", "fields")
TOP_LEVEL = set(SCHEMA) | {"seed"}


@dataclass(frozen=True)
class RunConfig:
    particle: ParticleParams
    fields: FieldConfig
    seed: int
    sections: dict[str, dict[str, Any]]

    def section(self, name: str) -> dict[str, Any]:
        return self.sections[name]


def _strip_comments(text: str) -> str:
    return "\n".join(
        "" if line.lstrip().startswith(("//", "#")) else line for line in text.splitlines()
    )


def _check_type(where: str, value, types) -> None:
    # bool is an int subclass; never accept it for numeric fields
    if isinstance(value, bool) and bool not in (types if isinstance(types, tuple) else (types,)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    if not isinstance(value, types):
        raise ConfigError(f"{where}: unexpected type {type(value).__name__}")
    if isinstance(value, float) and not math.isfinite(value):
        raise ConfigError(f"{where}: must be finite")


def apply_override(raw: dict, assignment: str) -> None:
    """Apply ``section.key=value`` (value parsed as JSON, else as a string)."""
    if "=" not in assignment:
        raise ConfigError(f"override {assignment!r} is not of the form key=value")
    key, text = assignment.split("=", 1)
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        value = text
    parts = key.strip().split(".")
    node = raw
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(f"override {key!r} does not address a section")
    node[parts[-1]] = value


def parse_config(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - TOP_LEVEL
    if unknown:
        raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")
    for name in REQUIRED_SECTIONS:
        if name not in raw:
            raise ConfigError(f"missing required section {name!r}")
    sections: dict[str, dict[str, Any]] = {}
    for name, spec in SCHEMA.items():
        given = raw.get(name, {})
        if not isinstance(given, dict):
            raise ConfigError(f"section {name!r} must be an object")
        extra = set(given) - set(spec)
        if extra:
            raise ConfigError(f"unknown keys in {name!r}: {sorted(extra)}")
        out = {}
        for key, (types, default) in spec.items():
            if key in given:
                _check_type(f"{name}.{key}", given[key], types)
                out[key] = given[key]
            elif default is ...:
                raise ConfigError(f"missing required key {name}.{key}")
            else:
                out[key] = copy.deepcopy(default)
        sections[name] = out
    seed = raw.get("seed", 0)
    _check_type("seed", seed, int)
    try:
        particle = ParticleParams(float(sections["particle"]["M"]), float(sections["particle"]["alpha"]))
        f = sections["fields"]
        fields = FieldConfig.normalized(float(f["k"]), float(f["B"]), float(f["hbar"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(particle, fields, seed, sections)


def load_config(path: str | Path, overrides=()) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        raw = json.loads(_strip_comments(text))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    for item in overrides:
        apply_override(raw, item)
    return parse_config(raw)


def expand_range(name: str, spec, fallback: float) -> list[float]:
    """List of values from ``[v, ...]`` or ``{"start", "stop", "num"}``."""
    if spec is None:
        return [fallback]
    if isinstance(spec, list):
        if not spec:
            raise ConfigError(f"sweep.{name} is empty")
        for v in spec:
            _check_type(f"sweep.{name}", v, _NUM)
        return [float(v) for v in spec]
    if set(spec) != {"start", "stop", "num"}:
        raise ConfigError(f"sweep.{name} range needs exactly start, stop, num")
    num = spec["num"]
    _check_type(f"sweep.{name}.num", num, int)
    _check_type(f"sweep.{name}.start", spec["start"], _NUM)
    _check_type(f"sweep.{name}.stop", spec["stop"], _NUM)
    if num < 1:
        raise ConfigError(f"sweep.{name}.num must be >= 1")
    start, stop = float(spec["start"]), float(spec["stop"])
    if num == 1:
        return [start]
    return [start + (stop - start) * i / (num - 1) for i in range(num)]
