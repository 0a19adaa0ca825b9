"""Scenario files: INI-style ``key = value`` sections read with :mod:`configparser`.

Recognised sections are ``[model]``, ``[run]`` and one section per command.
Unknown sections or keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from . import models

COMMANDS = ("shortcut", "evolve", "scatter", "coherence", "frontier", "sweep", "verify")

MODEL_KEYS = {
    "single_qubit": {"model_id", "tau"},
    "two_qubit": {"model_id", "tau", "eps1", "eps2", "alpha", "beta_aniso", "gamma_aniso"},
}
RUN_KEYS = {"beta", "seed", "steps", "grid", "plot", "csv"}
COMMAND_KEYS = {
    "shortcut": {"points"},
    "evolve": {"taus", "with_tqd", "initial"},
    "scatter": {"samples", "boundary_points"},
    "coherence": {"samples"},
    "frontier": {"families", "n_points"},
    "sweep": {"param", "start", "stop", "count", "values"},
    "verify": {"tolerance", "refine"},
}


class ConfigError(ValueError):
    """Malformed scenario file; the message names the offending key or line."""


@dataclass
class Scenario:
    command: str
    model: models.Model
    beta: float = 1.0
    seed: int | None = None
    steps: int = 5000
    grid: int = 2001
    plot: bool = True
    csv_name: str | None = None
    options: dict[str, str] = field(default_factory=dict)
    source: Path | None = None

    @property
    def model_id(self) -> str:
        return self.model.model_id


def _number(section: str, key: str, raw: str, kind=float):
    try:
        return kind(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: cannot read {raw!r} as {kind.__name__}") from None


def _bool(section: str, key: str, raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "yes", "true", "on"):
        return True
    if lowered in ("0", "no", "false", "off"):
        return False
    raise ConfigError(f"[{section}] {key}: expected yes/no, got {raw!r}")


def _read(path: Path) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from None
    return parser


def _check_keys(section: str, present, allowed) -> None:
    for key in present:
        if key not in allowed:
            raise ConfigError(f"[{section}] unknown key {key!r}")


def _model(parser: configparser.ConfigParser) -> models.Model:
    if not parser.has_section("model"):
        raise ConfigError("missing [model] section")
    sec = parser["model"]
    model_id = sec.get("model_id", "").strip()
    if model_id not in MODEL_KEYS:
        raise ConfigError(f"[model] model_id: expected one of {sorted(MODEL_KEYS)}, got {model_id!r}")
    _check_keys("model", sec.keys(), MODEL_KEYS[model_id])
    values = {k: _number("model", k, v) for k, v in sec.items() if k != "model_id"}
    if "tau" in values and not values["tau"] > 0:
        raise ConfigError("[model] tau: must be positive")
    cls = models.SingleQubitModel if model_id == "single_qubit" else models.TwoQubitModel
    return cls(**values)


def load_scenario(path, command: str) -> Scenario:
    """Parse ``path`` for ``command``; raises :class:`ConfigError` on any problem."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    path = Path(path)
    parser = _read(path)
    for section in parser.sections():
        if section not in ("model", "run") + COMMANDS:
            raise ConfigError(f"unknown section [{section}]")
    scenario = Scenario(command=command, model=_model(parser), source=path)

    if parser.has_section("run"):
        run = parser["run"]
        _check_keys("run", run.keys(), RUN_KEYS)
        if "beta" in run:
            scenario.beta = _number("run", "beta", run["beta"])
            if not scenario.beta > 0:
                raise ConfigError("[run] beta: must be positive")
        if "seed" in run:
            scenario.seed = _number("run", "seed", run["seed"], int)
        if "steps" in run:
            scenario.steps = _number("run", "steps", run["steps"], int)
        if "grid" in run:
            scenario.grid = _number("run", "grid", run["grid"], int)
        if "plot" in run:
            scenario.plot = _bool("run", "plot", run["plot"])
        if "csv" in run:
            scenario.csv_name = run["csv"].strip()

    if parser.has_section(command):
        sec = parser[command]
        _check_keys(command, sec.keys(), COMMAND_KEYS[command])
        scenario.options = dict(sec.items())
    return scenario


def float_list(scenario: Scenario, key: str, default: str) -> list[float]:
    raw = scenario.options.get(key, default)
    return [_number(scenario.command, key, item.strip()) for item in raw.split(",") if item.strip()]


def option(scenario: Scenario, key: str, default, kind=str):
    raw = scenario.options.get(key)
    if raw is None:
        return default
    if kind is bool:
        return _bool(scenario.command, key, raw)
    if kind is str:
        return raw.strip()
    return _number(scenario.command, key, raw, kind)


def sample_counts(scenario: Scenario, default: str) -> list[tuple[str, int]]:
    """``samples = tag:count, tag:count`` pairs."""
    out = []
    for item in scenario.options.get("samples", default).split(","):
        item = item.strip()
        if not item:
            continue
        tag, sep, count = item.partition(":")
        if not sep:
            raise ConfigError(f"[{scenario.command}] samples: expected tag:count, got {item!r}")
        n = _number(scenario.command, "samples", count, int)
        if n < 1:
            raise ConfigError(f"[{scenario.command}] samples: count for {tag!r} must be >= 1")
        out.append((tag.strip(), n))
    return out
