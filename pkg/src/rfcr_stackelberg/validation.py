"""Oracle-equivalence and invariant suites run by ``rfcr-game validate``.

Each suite draws its own random instances from a fixed seed and returns a
:class:`SuiteResult`; nothing here raises on a failed check.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import benchmark, game
from .channel import EffectiveGains, draw_fading, zf_projectors, zf_weights
from .experiments import ExperimentConfig, run_trial
from .rates import SystemParams, rate_p_co, rate_s_co


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    worst: float
    detail: str = ""
    seconds: float = 0.0


def _loguniform(rng, lo, hi):
    return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))


def random_instance(rng: np.random.Generator) -> tuple[SystemParams, EffectiveGains]:
    """Parameters and gains spread over several decades around the baseline operating point."""
    params = SystemParams(
        P=_loguniform(rng, 1.0, 1e4),
        sigma2=_loguniform(rng, 0.1, 10.0),
        eta=float(rng.uniform(0.05, 0.95)),
        E0=_loguniform(rng, 1e-2, 1e2),
        lambda_p=_loguniform(rng, 1.0, 200.0),
        lambda_s=_loguniform(rng, 1.0, 200.0),
        n=int(rng.integers(2, 9)),
    )
    gains = EffectiveGains(
        hp2=_loguniform(rng, 1e-6, 1e-1),
        hps2=_loguniform(rng, 1e-6, 1e-1),
        hs2=_loguniform(rng, 1e-4, 1e-1),
        zf_gain_p=_loguniform(rng, 1e-5, 1e-1),
        zf_gain_s=_loguniform(rng, 1e-5, 1e-1),
    )
    return params, gains


def follower_suite(instances: int = 500, step: float = 1e-4, tol: float = 1e-6, seed: int = 1) -> SuiteResult:
    """Closed-form energy share versus a grid search over ``beta``."""
    rng = np.random.default_rng(seed)
    n = int(round(1.0 / step))
    betas = np.arange(1, n + 1) / n
    worst = -math.inf
    for _ in range(instances):
        params, gains = random_instance(rng)
        tau = float(rng.uniform(0.0, 0.99))
        t = game.aux_terms(tau, params, gains)
        mu = float(rng.uniform(t.price_floor, 10.0 * t.price_cap))
        if mu <= t.price_floor:
            continue
        beta = game.follower_best_beta(mu, tau, params, gains).beta
        if not 0.0 < beta <= 1.0:
            return SuiteResult("follower", False, 0, math.inf, f"beta={beta} outside (0, 1] at mu={mu}")
        closed = game.utility_s_co(tau, mu, beta, params, gains)
        grid = np.max(game.utility_s_co(tau, mu, betas, params, gains))
        worst = max(worst, grid - closed)
    return SuiteResult("follower", bool(worst <= tol), instances, worst, f"max grid excess {worst:.3e} (tol {tol:g})")


def leader_suite(instances: int = 200, tol: float = 1e-6, seed: int = 2, max_draws: int = 100_000) -> SuiteResult:
    """Closed-form optimal price versus a price grid of step ``1e-4 * XY``."""
    rng = np.random.default_rng(seed)
    worst = -math.inf
    done = 0
    for _ in range(max_draws):
        if done == instances:
            break
        params, gains = random_instance(rng)
        tau = float(rng.uniform(0.0, 0.99))
        sol = game.leader_price(tau, params, gains)
        if not sol.valid:
            continue
        closed = game.leader_utility_given_beta(tau, sol.mu, params, gains)
        oracle = benchmark.brute_force_mu(tau, params, gains)
        best = game.leader_utility_given_beta(tau, oracle.mu, params, gains)
        worst = max(worst, best - closed)
        done += 1
    ok = bool(done == instances and worst <= tol)
    return SuiteResult("leader", ok, done, worst, f"max grid excess {worst:.3e} over {done} valid instances (tol {tol:g})")


def identities_suite(instances: int = 100, rtol: float = 1e-10, seed: int = 3) -> SuiteResult:
    """Payment cancellation and continuity of the leader utility at ``mu = XY``."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        params, gains = random_instance(rng)
        tau = float(rng.uniform(0.0, 0.99))
        beta = float(rng.uniform(1e-3, 1.0))
        mu = _loguniform(rng, 1e-3, 1e3)
        lhs = game.utility_p_co(tau, mu, beta, params, gains) + game.utility_s_co(tau, mu, beta, params, gains)
        rhs = params.lambda_p * rate_p_co(tau, beta, params, gains) + params.lambda_s * rate_s_co(tau, beta, params, gains)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
        cap = game.aux_terms(tau, params, gains).price_cap
        a = float(game.leader_value_interior(tau, cap, params, gains))
        b = float(game.leader_value_saturated(tau, cap, params, gains))
        worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    return SuiteResult("identities", bool(worst <= rtol), instances, worst, f"max relative defect {worst:.3e} (tol {rtol:g})")


def zf_suite(instances: int = 100, antennas=(2, 4, 6), seed: int = 4) -> SuiteResult:
    """Interference nulling, unit norm and projector structure of the ZF design."""
    rng = np.random.default_rng(seed)
    worst_null = worst_proj = 0.0
    for n in antennas:
        for _ in range(instances):
            ch = draw_fading(n, rng)
            w_p, w_s = zf_weights(ch.g_p, ch.g_s)
            worst_null = max(
                worst_null,
                abs(np.vdot(w_s, ch.g_p)) / np.linalg.norm(ch.g_p),
                abs(np.vdot(w_p, ch.g_s)) / np.linalg.norm(ch.g_s),
            )
            for z in zf_projectors(ch.g_p, ch.g_s):
                worst_proj = max(
                    worst_proj,
                    np.linalg.norm(z @ z - z),
                    np.linalg.norm(z - z.conj().T),
                )
            worst_proj = max(worst_proj, abs(np.linalg.norm(w_p) - 1.0), abs(np.linalg.norm(w_s) - 1.0))
    ok = bool(worst_null <= 1e-10 and worst_proj <= 1e-12)
    detail = f"nulling {worst_null:.2e} (tol 1e-10), projector/norm {worst_proj:.2e} (tol 1e-12)"
    return SuiteResult("zf", ok, instances * len(antennas), max(worst_null, worst_proj), detail)


def dominance_suite(realizations: int = 1000, seed: int = 5, config: ExperimentConfig | None = None, slack: float = 1e-3) -> SuiteResult:
    """Centralized welfare must dominate both the game and the non-cooperative mode."""
    cfg = config or ExperimentConfig()
    cfg = ExperimentConfig(
        params=cfg.params,
        topology=cfg.topology,
        realizations=realizations,
        base_seed=seed,
        grid_step=cfg.grid_step,
        co_points=cfg.co_points,
    )
    worst = -math.inf
    checked = 0
    for i in range(realizations):
        rec = run_trial(cfg, i)
        if rec is None:
            continue
        checked += 1
        c = rec.centralized.welfare
        worst = max(worst, rec.equilibrium.welfare - c - slack, rec.nc_welfare - c)
    return SuiteResult("dominance", bool(worst <= 0.0), checked, worst, f"worst violation {worst:.3e} (game slack {slack:g})")


SUITES = {
    "follower": follower_suite,
    "leader": leader_suite,
    "identities": identities_suite,
    "zf": zf_suite,
    "dominance": dominance_suite,
}


def run_suites(names=None, dominance_realizations: int | None = None, config: ExperimentConfig | None = None):
    """Run the named suites (all by default) and time each one."""
    names = list(names or SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    results = []
    for name in names:
        kwargs = {}
        if name == "dominance":
            kwargs["config"] = config
            if dominance_realizations is not None:
                kwargs["realizations"] = dominance_realizations
        t0 = time.perf_counter()
        res = SUITES[name](**kwargs)
        res.seconds = time.perf_counter() - t0
        results.append(res)
    return results
