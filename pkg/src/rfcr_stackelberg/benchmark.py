"""Centralized welfare benchmark and brute-force oracles for the closed forms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import EffectiveGains
from .game import (
    DEFAULT_STEP,
    LeaderSolution,
    Mode,
    _grid,
    _leader_value,
    aux_terms,
    utility_p_nc,
)
from .rates import SystemParams, _check, _energy, _rate_p_co, _rate_s_co, rate_s_nc

DEFAULT_CO_POINTS = 501


@dataclass(frozen=True)
class WelfareResult:
    welfare: float
    mode: Mode
    tau: float
    beta: float
    alpha: float


def social_welfare_co(tau, beta, params: SystemParams, gains: EffectiveGains):
    """Weighted sum of both cooperative rates; the energy payment cancels out."""
    tau = _check("tau", tau, 0.0, 1.0, hi_open=True)
    beta = _check("beta", beta, 0.0, 1.0, lo_open=True)
    w = _welfare_co(tau, beta, params, gains)
    return float(w) if np.ndim(w) == 0 else w


def _welfare_co(tau, beta, params, gains):
    return params.lambda_p * _rate_p_co(tau, beta, params, gains) + params.lambda_s * _rate_s_co(tau, beta, params, gains)


def _refine(tau, beta, h_tau, h_beta, params, gains, rounds=4, width=10):
    # zoom in around the incumbent; never returns a worse point
    best = float(_welfare_co(tau, beta, params, gains))
    for _ in range(rounds):
        taus = np.clip(tau + h_tau * np.linspace(-1.0, 1.0, 2 * width + 1), 0.0, 1.0 - 1e-9)
        betas = np.clip(beta + h_beta * np.linspace(-1.0, 1.0, 2 * width + 1), 1e-9, 1.0)
        w = _welfare_co(taus[:, None], betas[None, :], params, gains)
        i, j = np.unravel_index(int(np.argmax(w)), w.shape)
        if w[i, j] > best:
            best, tau, beta = float(w[i, j]), float(taus[i]), float(betas[j])
        h_tau /= width
        h_beta /= width
    return best, tau, beta


def centralized_optimum(
    params: SystemParams,
    gains: EffectiveGains,
    step: float = DEFAULT_STEP,
    co_points: int = DEFAULT_CO_POINTS,
    refine: bool = True,
) -> WelfareResult:
    """Maximize social welfare over both modes by exhaustive search.

    The cooperative mode is scanned on a ``co_points`` x ``co_points`` grid
    over ``tau`` in [0, 1) and ``beta`` in (0, 1], then optionally refined
    locally around the best cell.  The non-cooperative mode uses the same
    ``alpha`` grid as the game.  Exact ties favour the non-cooperative mode.
    """
    alphas = _grid(step)
    w_nc = utility_p_nc(params, gains) + params.lambda_s * rate_s_nc(alphas, params, gains)
    k = int(np.argmax(w_nc))
    nc = WelfareResult(float(w_nc[k]), Mode.NON_COOPERATIVE, math.nan, math.nan, float(alphas[k]))

    taus = np.arange(co_points) / co_points
    betas = np.arange(1, co_points + 1) / co_points
    w = _welfare_co(taus[:, None], betas[None, :], params, gains)
    i, j = np.unravel_index(int(np.argmax(w)), w.shape)
    best, tau, beta = float(w[i, j]), float(taus[i]), float(betas[j])
    if refine:
        best, tau, beta = _refine(tau, beta, 1.0 / co_points, 1.0 / co_points, params, gains)
    if best > nc.welfare:
        return WelfareResult(best, Mode.COOPERATIVE, tau, beta, math.nan)
    return nc


def brute_force_beta(mu: float, tau: float, params: SystemParams, gains: EffectiveGains, step: float = 1e-4) -> float:
    """Grid argmax of the SU's cooperative utility over ``beta`` in {step, 2 step, ..., 1}."""
    if not 0 < step <= 1e-3:
        raise ValueError("step must lie in (0, 1e-3]")
    n = int(round(1.0 / step))
    betas = np.arange(1, n + 1) / n
    u = params.lambda_s * _rate_s_co(tau, betas, params, gains) + mu * betas * _energy(tau, params, gains)
    return float(betas[int(np.argmax(u))])


def brute_force_mu(tau: float, params: SystemParams, gains: EffectiveGains, step: float | None = None) -> LeaderSolution:
    """Grid argmax of the leader's utility over prices in ``(XY/(X+1) + step, 10 XY]``.

    The follower answers with its closed-form best response.  ``step``
    defaults to ``1e-4 * XY``.  The result is flagged invalid when the
    argmax sits on the lowest grid price, i.e. the supremum lies on the
    open boundary where the SU stops cooperating.
    """
    t = aux_terms(tau, params, gains)
    if not (t.X > 0 and math.isfinite(t.Y)):
        return LeaderSolution(float(tau), math.nan, False)
    if step is None:
        step = 1e-4 * t.price_cap
    if not 0 < step <= 1e-3 * t.price_cap * (1 + 1e-12):
        raise ValueError("step must lie in (0, 1e-3 * XY]")
    lo, hi = t.price_floor + step, 10.0 * t.price_cap
    if lo > hi:
        return LeaderSolution(float(tau), math.nan, False)
    mus = lo + step * np.arange(int(math.floor((hi - lo) / step)) + 1)
    u = _leader_value(tau, mus, params, gains)
    k = int(np.nanargmax(u))
    return LeaderSolution(float(tau), float(mus[k]), k > 0)


def brute_force_leader_objective(tau: float, params: SystemParams, gains: EffectiveGains, step: float | None = None) -> float:
    """Best leader utility found by :func:`brute_force_mu` (NaN if invalid)."""
    sol = brute_force_mu(tau, params, gains, step)
    return float(_leader_value(tau, sol.mu, params, gains)) if sol.valid else math.nan
