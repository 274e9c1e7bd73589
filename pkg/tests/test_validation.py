import math

import numpy as np
import pytest

from rfcr_stackelberg import game, validation
from rfcr_stackelberg.validation import SUITES, random_instance, run_suites


@pytest.mark.parametrize(
    "name, kwargs",
    [
        ("follower", {"instances": 40}),
        ("leader", {"instances": 15}),
        ("identities", {"instances": 30}),
        ("zf", {"instances": 20}),
        ("dominance", {"realizations": 10}),
    ],
)
def test_small_suites_pass(name, kwargs):
    res = SUITES[name](**kwargs)
    assert res.passed, res.detail
    assert res.checked > 0


def test_random_instances_are_valid():
    rng = np.random.default_rng(0)
    for _ in range(50):
        params, gains = random_instance(rng)
        assert 2 <= params.n <= 8
        assert gains.zf_gain_s > 0


def test_follower_suite_catches_sign_flip(monkeypatch):
    real = game.follower_best_beta

    def flipped(mu, tau, params, gains):
        t = game.aux_terms(tau, params, gains)
        sol = real(mu, tau, params, gains)
        if sol.branch is game.Branch.SATURATED:
            return sol
        return game.FollowerSolution(min(1.0, 1.0 / t.X + t.Y / mu + 1.0), sol.branch, sol.valid)

    monkeypatch.setattr(game, "follower_best_beta", flipped)
    assert not validation.follower_suite(40).passed


def test_leader_suite_catches_wrong_root(monkeypatch):
    real = game.leader_price

    def off(tau, params, gains):
        sol = real(tau, params, gains)
        return game.LeaderSolution(sol.tau, sol.mu * 1.05, sol.valid)

    monkeypatch.setattr(game, "leader_price", off)
    assert not validation.leader_suite(15).passed


def test_identities_suite_catches_broken_branch(monkeypatch):
    real = game.leader_value_saturated
    monkeypatch.setattr(game, "leader_value_saturated", lambda *a: real(*a) * (1 + 1e-6))
    assert not validation.identities_suite(10).passed


def test_zf_suite_catches_missing_projection(monkeypatch):
    def plain(g_p, g_s, rtol=1e-12):
        return g_s / np.linalg.norm(g_s), g_p / np.linalg.norm(g_p)

    monkeypatch.setattr(validation, "zf_weights", plain)
    assert not validation.zf_suite(5).passed


def test_run_suites_filter_and_timing():
    res = run_suites(["zf", "identities"])
    assert [r.name for r in res] == ["zf", "identities"]
    assert all(r.seconds > 0 for r in res)
    dom = run_suites(["dominance"], dominance_realizations=3)[0]
    assert dom.checked == 3
    with pytest.raises(KeyError):
        run_suites(["zf", "bogus"])


def test_suite_result_fields_are_plain():
    res = validation.identities_suite(5)
    assert isinstance(res.passed, bool)
    assert math.isfinite(res.worst)
