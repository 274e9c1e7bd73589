"""Key-value configuration files.

One ``key = value`` pair per line, ``#`` starts a comment.  Power and energy
keys (``P``, ``sigma2``, ``E0``) accept a ``dB`` suffix, read relative to a
unit noise power: ``P = 30 dB`` is ``P = 1000``.  A sweep is written as
``sweep = dStSr: 0.6, 0.8, 1.0``.

The system keys P, sigma2, eta, E0, lambdaP, lambdaS and n are required;
everything else falls back to the baseline setup.
"""

from __future__ import annotations

import math
from dataclasses import replace
from pathlib import Path

import numpy as np

from .channel import ChannelRealization, Topology
from .experiments import ExperimentConfig, Sweep
from .rates import SystemParams


class ConfigError(ValueError):
    pass


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


# file key -> (target, field name, kind)
KEYS = {
    "P": ("params", "P", "power"),
    "sigma2": ("params", "sigma2", "power"),
    "eta": ("params", "eta", "float"),
    "E0": ("params", "E0", "power"),
    "lambdaP": ("params", "lambda_p", "float"),
    "lambdaS": ("params", "lambda_s", "float"),
    "n": ("params", "n", "int"),
    "dPtPr": ("topology", "d_pt_pr", "float"),
    "dPtSt": ("topology", "d_pt_st", "float"),
    "dStPr": ("topology", "d_st_pr", "float"),
    "dStSr": ("topology", "d_st_sr", "float"),
    "dPtSr": ("topology", "d_pt_sr", "float"),
    "phi": ("topology", "phi", "float"),
    "lossCoeff": ("topology", "loss_coeff", "float"),
    "realizations": ("experiment", "realizations", "int"),
    "seed": ("experiment", "base_seed", "int"),
    "gridStep": ("experiment", "grid_step", "float"),
    "coPoints": ("experiment", "co_points", "int"),
    "drawAntennas": ("experiment", "draw_antennas", "int"),
    "sweep": ("experiment", "sweep", "sweep"),
}
REQUIRED = ("P", "sigma2", "eta", "E0", "lambdaP", "lambdaS", "n")
FIELD_OF_KEY = {k: v[1] for k, v in KEYS.items()}


def _number(text: str, kind: str) -> float | int:
    if kind == "power":
        t = text.strip()
        if t.lower().endswith("db"):
            return db_to_linear(float(t[:-2]))
        return float(t)
    if kind == "int":
        return int(text)
    return float(text)


def _sweep(text: str) -> Sweep:
    name, sep, rest = text.partition(":")
    name = name.strip()
    if not sep or name not in KEYS or KEYS[name][0] not in ("params", "topology"):
        raise ValueError(f"expected '<parameter>: v1, v2, ...' with a known parameter, got {text!r}")
    kind = KEYS[name][2]
    values = tuple(_number(v, kind) for v in rest.split(",") if v.strip())
    return Sweep(FIELD_OF_KEY[name], values)


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    """Parse a configuration document into an :class:`ExperimentConfig`."""
    found: dict[str, tuple[int, object]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        if key not in KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in found:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        kind = KEYS[key][2]
        try:
            parsed = _sweep(value) if kind == "sweep" else _number(value, kind)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key!r}: {exc}") from None
        found[key] = (lineno, parsed)

    missing = [k for k in REQUIRED if k not in found]
    if missing:
        raise ConfigError(f"{source}: missing required key {missing[0]!r}")

    groups: dict[str, dict] = {"params": {}, "topology": {}, "experiment": {}}
    for key, (_, value) in found.items():
        target, field, _ = KEYS[key]
        groups[target][field] = value
    try:
        params = SystemParams(**groups["params"])
        topology = Topology(**groups["topology"])
        return ExperimentConfig(params=params, topology=topology, **groups["experiment"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{source}: {exc}") from None


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    return parse_config(text, str(path))


def with_overrides(config: ExperimentConfig, seed=None, trials=None, grid_step=None) -> ExperimentConfig:
    changes = {}
    if seed is not None:
        changes["base_seed"] = seed
    if trials is not None:
        changes["realizations"] = trials
    if grid_step is not None:
        changes["grid_step"] = grid_step
    try:
        return replace(config, **changes)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


CHANNEL_LINKS = ("hP", "hPS", "hS", "gP", "gS")


def parse_channel(text: str, source: str = "<channel>") -> ChannelRealization:
    """Read a channel file: ``name re im [re im ...]`` per link, five links."""
    links: dict[str, np.ndarray] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        name, nums = parts[0], parts[1:]
        if name not in CHANNEL_LINKS:
            raise ConfigError(f"{source}:{lineno}: unknown link {name!r}")
        if name in links:
            raise ConfigError(f"{source}:{lineno}: duplicate link {name!r}")
        if not nums or len(nums) % 2:
            raise ConfigError(f"{source}:{lineno}: expected pairs of 're im' values")
        try:
            vals = np.array([float(x) for x in nums])
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: {exc}") from None
        z = vals[0::2] + 1j * vals[1::2]
        if name in ("hP", "hPS") and len(z) != 1:
            raise ConfigError(f"{source}:{lineno}: {name} is a scalar link")
        links[name] = z
    missing = [k for k in CHANNEL_LINKS if k not in links]
    if missing:
        raise ConfigError(f"{source}: missing link {missing[0]!r}")
    try:
        return ChannelRealization(
            complex(links["hP"][0]), complex(links["hPS"][0]), links["hS"], links["gP"], links["gS"]
        )
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def format_channel(ch: ChannelRealization) -> str:
    def row(name, z):
        z = np.atleast_1d(z)
        return name + " " + " ".join(f"{v.real:.17g} {v.imag:.17g}" for v in z)

    return "\n".join(
        [row("hP", ch.h_p), row("hPS", ch.h_ps), row("hS", ch.h_s), row("gP", ch.g_p), row("gS", ch.g_s)]
    ) + "\n"
