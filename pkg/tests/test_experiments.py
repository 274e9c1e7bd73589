import numpy as np
import pytest

from rfcr_stackelberg import experiments
from rfcr_stackelberg.channel import DegenerateChannelError, apply_path_loss, draw_fading, effective_gains
from rfcr_stackelberg.experiments import (
    ExperimentConfig,
    Sweep,
    aggregate,
    run_sweep,
    run_trial,
    run_trials,
    trial_rng,
)
from rfcr_stackelberg.game import Mode, stackelberg_equilibrium
from rfcr_stackelberg.rates import SystemParams

SMALL = ExperimentConfig(realizations=12, base_seed=3, co_points=101)


def test_trial_is_deterministic():
    assert repr(run_trial(SMALL, 5)) == repr(run_trial(SMALL, 5))


def test_trial_index_bounds():
    with pytest.raises(IndexError):
        run_trial(SMALL, 12)


def test_trial_records_consistent():
    for rec in run_trials(SMALL):
        eq = rec.equilibrium
        assert eq.welfare <= rec.centralized.welfare + 1e-3
        assert rec.nc_welfare <= rec.centralized.welfare
        if eq.mode is Mode.COOPERATIVE:
            assert eq.u_p > eq.u_p_nc and eq.u_s > eq.u_s_nc


def test_aggregate_single_and_pair():
    r0, r1 = run_trial(SMALL, 0), run_trial(SMALL, 1)
    one = aggregate([r0], 1.0)
    assert one.pu_game == r0.equilibrium.u_p
    assert one.welfare_central == r0.centralized.welfare
    assert one.trials == 1 and one.skipped == 0
    two = aggregate([r0, r1])
    assert two.su_nc == pytest.approx((r0.equilibrium.u_s_nc + r1.equilibrium.u_s_nc) / 2)
    assert two.welfare_game == pytest.approx((r0.equilibrium.welfare + r1.equilibrium.welfare) / 2)


def test_aggregate_skips_and_empty():
    r0 = run_trial(SMALL, 0)
    row = aggregate([r0, None])
    assert row.trials == 1 and row.skipped == 1 and row.pu_game == r0.equilibrium.u_p
    with pytest.raises(ValueError):
        aggregate([None])
    with pytest.raises(ValueError):
        aggregate([])


def test_degenerate_trial_is_skipped(monkeypatch, caplog):
    real = experiments.effective_gains

    def flaky(ch, strict=True):
        if abs(ch.h_p) == abs(target.h_p):
            raise DegenerateChannelError("test")
        return real(ch, strict)

    target = apply_path_loss(draw_fading(6, trial_rng(3, 2)), SMALL.topology)
    monkeypatch.setattr(experiments, "effective_gains", flaky)
    records = run_trials(SMALL)
    assert records[2] is None
    assert sum(r is None for r in records) == 1
    assert "skipping trial 2" in caplog.text


def test_sweep_pairs_fading_across_distances():
    cfg = ExperimentConfig(realizations=1, base_seed=8, sweep=Sweep("d_st_sr", (0.6, 1.4)))
    fad = draw_fading(6, trial_rng(8, 0))
    g6 = effective_gains(apply_path_loss(fad, cfg.at("d_st_sr", 0.6).topology))
    g14 = effective_gains(apply_path_loss(fad, cfg.at("d_st_sr", 1.4).topology))
    # only the ST->SR link changes, by the path-loss ratio
    assert g6.hp2 == g14.hp2 and g6.hs2 == g14.hs2 and g6.zf_gain_p == g14.zf_gain_p
    assert g6.zf_gain_s / g14.zf_gain_s == pytest.approx((1.4 / 0.6) ** 3.5)


def test_antenna_sweep_truncates_one_draw(monkeypatch):
    cfg = ExperimentConfig(realizations=1, base_seed=2, sweep=Sweep("n", (4, 6)), co_points=51)
    seen = []
    real = experiments.stackelberg_equilibrium

    def spy(params, gains, step):
        seen.append((params.n, gains))
        return real(params, gains, step)

    monkeypatch.setattr(experiments, "stackelberg_equilibrium", spy)
    run_sweep(cfg)
    wide = draw_fading(6, trial_rng(2, 0))
    assert seen[0] == (4, effective_gains(apply_path_loss(wide.truncate(4), cfg.topology)))
    assert seen[1] == (6, effective_gains(apply_path_loss(wide, cfg.topology)))


def test_sweep_game_dominates_noncoop_means():
    cfg = ExperimentConfig(realizations=30, base_seed=1, co_points=101, sweep=Sweep("d_st_sr", (0.6, 1.0, 1.4)))
    res = run_sweep(cfg)
    assert res.parameter == "d_st_sr"
    assert [r.value for r in res.rows] == [0.6, 1.0, 1.4]
    for r in res.rows:
        assert r.pu_game >= r.pu_nc and r.su_game >= r.su_nc
        assert r.welfare_central >= r.welfare_game - 1e-3
        assert 0 <= r.coop_frequency <= 1
        assert r.trials == 30


def test_sweep_callback_receives_records():
    cfg = ExperimentConfig(realizations=3, co_points=51, sweep=Sweep("d_st_sr", (1.0, 1.2)))
    got = []
    run_sweep(cfg, on_records=lambda v, recs: got.append((v, len(recs))))
    assert got == [(1.0, 3), (1.2, 3)]


def test_parallel_matches_serial():
    cfg = ExperimentConfig(realizations=6, base_seed=4, co_points=51)
    # NaN fields survive pickling as distinct objects, so compare representations
    assert repr(run_trials(cfg, workers=2)) == repr(run_trials(cfg, workers=1))


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(realizations=0)
    with pytest.raises(ValueError):
        ExperimentConfig(params=SystemParams(n=6), draw_antennas=4)
    with pytest.raises(ValueError):
        Sweep("d_st_sr", (1.4, 0.6))
    with pytest.raises(ValueError):
        Sweep("nonsense", (1.0,))
    with pytest.raises(ValueError):
        Sweep("d_st_sr", ())


def test_both_modes_occur_at_defaults():
    cfg = ExperimentConfig()
    coop = 0
    for i in range(cfg.realizations):
        fad = draw_fading(cfg.params.n, trial_rng(cfg.base_seed, i))
        g = effective_gains(apply_path_loss(fad, cfg.topology))
        coop += stackelberg_equilibrium(cfg.params, g).mode is Mode.COOPERATIVE
    assert 0 < coop / cfg.realizations < 1
