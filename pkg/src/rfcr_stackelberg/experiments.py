"""Monte Carlo driver comparing the game, the non-cooperative mode and the centralized optimum.

Every trial derives its generator from ``(base_seed, trial_index)`` and
draws unit-variance fading once; path loss is applied afterwards.  So the
same trial index sees the same small-scale fading at every sweep value, and
antenna sweeps truncate one wide draw.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from .benchmark import DEFAULT_CO_POINTS, WelfareResult, centralized_optimum
from .channel import DegenerateChannelError, Topology, apply_path_loss, draw_fading, effective_gains
from .game import DEFAULT_STEP, Equilibrium, Mode, stackelberg_equilibrium
from .rates import SystemParams

log = logging.getLogger(__name__)

_TOPOLOGY_FIELDS = {f.name for f in fields(Topology)}
_PARAM_FIELDS = {f.name for f in fields(SystemParams)}


@dataclass(frozen=True)
class Sweep:
    name: str
    values: tuple

    def __post_init__(self):
        if self.name not in _TOPOLOGY_FIELDS | _PARAM_FIELDS:
            raise ValueError(f"cannot sweep unknown parameter {self.name!r}")
        if not self.values:
            raise ValueError("sweep needs at least one value")
        if list(self.values) != sorted(self.values):
            raise ValueError("sweep values must be sorted")


@dataclass(frozen=True)
class ExperimentConfig:
    params: SystemParams = SystemParams()
    topology: Topology = Topology()
    realizations: int = 10_000
    base_seed: int = 0
    grid_step: float = DEFAULT_STEP
    sweep: Sweep | None = None
    # antennas drawn per trial before truncating to params.n (pairs N=4 with N=6)
    draw_antennas: int | None = None
    co_points: int = DEFAULT_CO_POINTS

    def __post_init__(self):
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")
        if not 0 < self.grid_step <= 0.01:
            raise ValueError("grid_step must lie in (0, 0.01]")
        if self.co_points < 2:
            raise ValueError("co_points must be >= 2")
        if self.draw_antennas is not None and self.draw_antennas < self.params.n:
            raise ValueError("draw_antennas must be >= params.n")

    def at(self, name: str, value) -> "ExperimentConfig":
        """Copy with one topology or system parameter replaced."""
        if name in _TOPOLOGY_FIELDS:
            return replace(self, topology=replace(self.topology, **{name: float(value)}))
        if name in _PARAM_FIELDS:
            if name == "n":
                value = int(value)
            return replace(self, params=replace(self.params, **{name: value}))
        raise ValueError(f"unknown parameter {name!r}")


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    equilibrium: Equilibrium
    centralized: WelfareResult

    @property
    def nc_welfare(self) -> float:
        return self.equilibrium.u_p_nc + self.equilibrium.u_s_nc


@dataclass(frozen=True)
class SweepRow:
    value: float
    pu_game: float
    pu_nc: float
    su_game: float
    su_nc: float
    welfare_game: float
    welfare_nc: float
    welfare_central: float
    coop_frequency: float
    trials: int
    skipped: int


@dataclass(frozen=True)
class SweepResult:
    parameter: str
    rows: tuple[SweepRow, ...]

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])


def trial_rng(base_seed: int, trial_index: int) -> np.random.Generator:
    return np.random.default_rng([base_seed, trial_index])


def run_trial(config: ExperimentConfig, trial_index: int) -> TrialRecord | None:
    """Solve all three schemes on one channel draw; ``None`` if the draw is degenerate."""
    if not 0 <= trial_index < config.realizations:
        raise IndexError(f"trial {trial_index} outside [0, {config.realizations})")
    n = config.params.n
    fading = draw_fading(config.draw_antennas or n, trial_rng(config.base_seed, trial_index))
    try:
        gains = effective_gains(apply_path_loss(fading.truncate(n), config.topology))
    except DegenerateChannelError as exc:
        log.warning("skipping trial %d: %s", trial_index, exc)
        return None
    eq = stackelberg_equilibrium(config.params, gains, config.grid_step)
    central = centralized_optimum(config.params, gains, config.grid_step, config.co_points)
    return TrialRecord(trial_index, eq, central)


def aggregate(records, value: float = float("nan")) -> SweepRow:
    """Average a set of trial records; ``None`` entries count as skipped."""
    kept = [r for r in records if r is not None]
    skipped = len(records) - len(kept)
    if not kept:
        raise ValueError("no usable trials to aggregate")
    a = np.array(
        [
            (
                r.equilibrium.u_p,
                r.equilibrium.u_p_nc,
                r.equilibrium.u_s,
                r.equilibrium.u_s_nc,
                r.equilibrium.welfare,
                r.nc_welfare,
                r.centralized.welfare,
                r.equilibrium.mode is Mode.COOPERATIVE,
            )
            for r in kept
        ],
        dtype=float,
    )
    m = a.mean(axis=0)
    return SweepRow(float(value), *map(float, m), trials=len(kept), skipped=skipped)


def _run_block(args):
    config, start, stop = args
    return [run_trial(config, i) for i in range(start, stop)]


def run_trials(config: ExperimentConfig, workers: int = 1) -> list:
    """All trials of ``config`` in index order."""
    total = config.realizations
    if workers <= 1:
        return _run_block((config, 0, total))
    edges = np.linspace(0, total, workers + 1).astype(int)
    blocks = [(config, int(a), int(b)) for a, b in zip(edges[:-1], edges[1:])]
    with ProcessPoolExecutor(workers) as pool:
        return [r for part in pool.map(_run_block, blocks) for r in part]


def run_sweep(config: ExperimentConfig, workers: int = 1, on_records=None) -> SweepResult:
    """Average every scheme at each sweep value, reusing trial seeds across values.

    ``on_records(value, records)`` is called once per sweep value with the
    raw per-trial records, if given.
    """
    if config.sweep is None:
        records = run_trials(config, workers)
        if on_records:
            on_records(float("nan"), records)
        return SweepResult("", (aggregate(records),))
    sw = config.sweep
    base = config
    if sw.name == "n":
        wide = max(int(max(sw.values)), config.draw_antennas or 0)
        base = replace(config, draw_antennas=wide)
    rows = []
    for v in sw.values:
        cfg = base.at(sw.name, v)
        records = run_trials(cfg, workers)
        if on_records:
            on_records(v, records)
        row = aggregate(records, v)
        if row.skipped:
            log.warning("%s=%s: %d degenerate trials skipped", sw.name, v, row.skipped)
        rows.append(row)
    return SweepResult(sw.name, tuple(rows))
