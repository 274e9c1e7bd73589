"""Stackelberg game between the PU (leader) and the energy-harvesting SU (follower).

Non-cooperative mode: the SU picks its harvesting time ``alpha`` alone.
Cooperative mode: the PU announces a harvesting time ``tau`` and an energy
price ``mu``; the SU answers with the share ``beta`` of its energy that it
sells for relaying.  The leader keeps cooperation only if it strictly helps
both sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .channel import EffectiveGains
from .rates import (
    SystemParams,
    _energy,
    _rate_p_co,
    _rate_s_co,
    harvested_energy,
    rate_p_co,
    rate_p_nc,
    rate_s_co,
    rate_s_nc,
)

LN2 = math.log(2.0)
DEFAULT_STEP = 1e-3


class Mode(str, Enum):
    NON_COOPERATIVE = "non-cooperative"
    COOPERATIVE = "cooperative"


class Branch(str, Enum):
    INTERIOR = "interior"
    SATURATED = "saturated"


class FollowerRejects(ValueError):
    """The announced price is too low for the SU to sell any energy."""


@dataclass(frozen=True)
class AuxTerms:
    """Shorthand quantities of the closed-form solutions (scalars or arrays)."""

    X: float
    Y: float
    A: float
    B: float
    C: float
    D: float

    @property
    def price_floor(self):
        """Prices at or below ``XY/(X+1)`` make the SU refuse to cooperate."""
        return self.X * self.Y / (self.X + 1.0)

    @property
    def price_cap(self):
        """Above ``XY`` the SU already sells all its energy."""
        return self.X * self.Y


@dataclass(frozen=True)
class FollowerSolution:
    """SU best response. When ``valid`` is false ``beta`` holds the (non-positive) unconstrained value."""

    beta: float
    branch: Branch
    valid: bool


@dataclass(frozen=True)
class LeaderSolution:
    tau: float
    mu: float
    valid: bool


@dataclass(frozen=True)
class Equilibrium:
    mode: Mode
    alpha_star: float
    leader: LeaderSolution
    follower: FollowerSolution | None
    u_p: float
    u_s: float
    r_p: float
    r_s: float
    # candidate utilities of both modes, kept for the selection audit
    u_p_nc: float
    u_s_nc: float
    u_p_co: float = math.nan
    u_s_co: float = math.nan

    @property
    def welfare(self) -> float:
        return self.u_p + self.u_s


def _grid(step: float, include_one: bool = True) -> np.ndarray:
    if not 0 < step <= 0.01:
        raise ValueError(f"grid step must lie in (0, 0.01], got {step}")
    n = int(round(1.0 / step))
    g = np.linspace(0.0, 1.0, n + 1)
    return g if include_one else g[:-1]


# -- non-cooperative mode ---------------------------------------------------

def utility_p_nc(params: SystemParams, gains: EffectiveGains) -> float:
    return params.lambda_p * rate_p_nc(params, gains)


def utility_s_nc(alpha, params: SystemParams, gains: EffectiveGains):
    return params.lambda_s * rate_s_nc(alpha, params, gains)


def solve_alpha(params: SystemParams, gains: EffectiveGains, step: float = DEFAULT_STEP):
    """Exhaustive search for the SU's harvesting time; returns ``(alpha, utility)``.

    Ties go to the smallest ``alpha``.
    """
    alphas = _grid(step)
    u = params.lambda_s * rate_s_nc(alphas, params, gains)
    k = int(np.argmax(u))
    return float(alphas[k]), float(u[k])


# -- cooperative mode ---------------------------------------------------------

def utility_p_co(tau, mu, beta, params: SystemParams, gains: EffectiveGains):
    return params.lambda_p * rate_p_co(tau, beta, params, gains) - mu * beta * harvested_energy(tau, params, gains)


def utility_s_co(tau, mu, beta, params: SystemParams, gains: EffectiveGains):
    return params.lambda_s * rate_s_co(tau, beta, params, gains) + mu * beta * harvested_energy(tau, params, gains)


def aux_terms(tau, params: SystemParams, gains: EffectiveGains) -> AuxTerms:
    tau = np.asarray(tau, dtype=float)
    s2 = params.sigma2
    e = _energy(tau, params, gains)
    rest = 1.0 - tau
    with np.errstate(divide="ignore", invalid="ignore"):
        x = 2.0 * e * gains.zf_gain_s / (rest * s2)
        y = params.lambda_s * rest / (2.0 * e * LN2)
    a = 1.0 + params.P * gains.hp2 / s2
    b = 2.0 * params.P * gains.hs2 * e * gains.zf_gain_p
    c = params.P * gains.hs2 * rest * s2 + rest * s2 * s2
    d = 2.0 * e * gains.zf_gain_p * s2
    vals = [x, y, a + 0.0 * tau, b, c, d]
    if tau.ndim == 0:
        vals = [float(v) for v in vals]
    return AuxTerms(*vals)


def follower_best_beta(mu: float, tau: float, params: SystemParams, gains: EffectiveGains) -> FollowerSolution:
    """Closed-form energy share maximizing the SU's cooperative utility."""
    t = aux_terms(tau, params, gains)
    if mu > t.price_cap:
        return FollowerSolution(1.0, Branch.SATURATED, True)
    # 1 - (Y/mu - 1/X); at mu == XY this may round a hair above 1
    beta = min(1.0, 1.0 / t.X - t.Y / mu + 1.0)
    return FollowerSolution(beta, Branch.INTERIOR, bool(mu > t.price_floor))


def leader_value_interior(tau, mu, params, gains):
    """Leader utility when the SU answers with its interior share ``1/X - Y/mu + 1``."""
    tau = np.asarray(tau, dtype=float)
    t = aux_terms(tau, params, gains)
    e = _energy(tau, params, gains)
    lp = params.lambda_p
    with np.errstate(divide="ignore", invalid="ignore"):
        k = 1.0 / t.X + 1.0
        relay = (mu * t.B * k - t.B * t.Y) / (mu * t.C + mu * t.D * k - t.D * t.Y)
        return (
            lp * tau * np.log2(t.A)
            + lp * 0.5 * (1.0 - tau) * np.log2(t.A + relay)
            - mu * k * e
            + t.Y * e
        )


def leader_value_saturated(tau, mu, params, gains):
    """Leader utility when the SU sells all of its energy."""
    tau = np.asarray(tau, dtype=float)
    t = aux_terms(tau, params, gains)
    e = _energy(tau, params, gains)
    lp = params.lambda_p
    return lp * tau * np.log2(t.A) - mu * e + lp * 0.5 * (1.0 - tau) * np.log2(t.A + t.B / (t.C + t.D))


def _leader_value(tau, mu, params, gains):
    """Leader utility with the follower's best response substituted (vectorized).

    NaN wherever the follower rejects the price.
    """
    mu = np.asarray(mu, dtype=float)
    t = aux_terms(tau, params, gains)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(
            mu <= t.price_cap,
            leader_value_interior(tau, mu, params, gains),
            leader_value_saturated(tau, mu, params, gains),
        )
    return np.where(mu > t.price_floor, out, np.nan)


def leader_utility_given_beta(tau: float, mu: float, params: SystemParams, gains: EffectiveGains) -> float:
    """PU utility at price ``mu`` once the SU best-responds."""
    t = aux_terms(tau, params, gains)
    if not mu > t.price_floor:
        raise FollowerRejects(f"price {mu} <= {t.price_floor}: the SU sells no energy")
    return float(_leader_value(tau, mu, params, gains))


def _closed_form_price(tau, params, gains):
    """Unclamped stationary price of the interior branch and radicand validity.

    Returns ``(mu_star, ok)`` where ``ok`` is false if the radicand is
    negative or the shorthand terms are undefined.
    """
    tau = np.asarray(tau, dtype=float)
    t = aux_terms(tau, params, gains)
    e = _energy(tau, params, gains)
    with np.errstate(divide="ignore", invalid="ignore"):
        k = 1.0 / t.X + 1.0
        m = t.C + t.D * k
        denom = 2.0 * t.A * m * m + 2.0 * t.B * k * m
        radicand = (t.B * t.C * t.Y) ** 2 + (
            2.0 * params.lambda_p * (1.0 - tau) * t.B * t.C * t.Y / (k * e * LN2)
        ) * (t.A * m * m + t.B * k * m)
        mu = (
            2.0 * t.A * t.D * t.Y * m
            + t.B * t.Y * (t.C + 2.0 * t.D * k)
            + np.sqrt(np.where(radicand >= 0, radicand, 0.0))
        ) / denom
    ok = (radicand >= 0) & (t.X > 0) & np.isfinite(t.Y) & np.isfinite(mu)
    return mu, ok


def _leader_price_arrays(tau, params, gains):
    t = aux_terms(tau, params, gains)
    mu_star, ok = _closed_form_price(tau, params, gains)
    valid = ok & (mu_star > t.price_floor)
    return np.where(mu_star > t.price_cap, t.price_cap, mu_star), valid


def leader_price(tau: float, params: SystemParams, gains: EffectiveGains) -> LeaderSolution:
    """Optimal price for a fixed harvesting time: the stationary point, capped at ``XY``.

    Invalid when the stationary point does not exceed the follower's
    acceptance floor ``XY/(X+1)``.
    """
    mu, valid = _leader_price_arrays(float(tau), params, gains)
    return LeaderSolution(float(tau), float(mu), bool(valid))


def leader_tau(params: SystemParams, gains: EffectiveGains, step: float = DEFAULT_STEP) -> LeaderSolution:
    """Exhaustive search over ``tau`` in ``[0, 1 - step]`` using the optimal price at each point."""
    taus = _grid(step, include_one=False)
    mu, valid = _leader_price_arrays(taus, params, gains)
    if not np.any(valid):
        return LeaderSolution(math.nan, math.nan, False)
    value = np.where(valid, _leader_value(taus, np.where(valid, mu, np.inf), params, gains), -np.inf)
    k = int(np.argmax(value))
    return LeaderSolution(float(taus[k]), float(mu[k]), True)


def stackelberg_equilibrium(params: SystemParams, gains: EffectiveGains, step: float = DEFAULT_STEP) -> Equilibrium:
    """Solve both modes and apply the leader's strict-improvement rule."""
    alpha, u_s_nc = solve_alpha(params, gains, step)
    u_p_nc = utility_p_nc(params, gains)
    leader = leader_tau(params, gains, step)
    nc = Equilibrium(
        mode=Mode.NON_COOPERATIVE,
        alpha_star=alpha,
        leader=leader,
        follower=None,
        u_p=u_p_nc,
        u_s=u_s_nc,
        r_p=rate_p_nc(params, gains),
        r_s=rate_s_nc(alpha, params, gains),
        u_p_nc=u_p_nc,
        u_s_nc=u_s_nc,
    )
    if not leader.valid:
        return nc
    follower = follower_best_beta(leader.mu, leader.tau, params, gains)
    tau, mu, beta = leader.tau, leader.mu, follower.beta
    u_p_co = float(utility_p_co(tau, mu, beta, params, gains))
    u_s_co = float(utility_s_co(tau, mu, beta, params, gains))
    if u_p_co > u_p_nc and u_s_co > u_s_nc:
        return Equilibrium(
            mode=Mode.COOPERATIVE,
            alpha_star=alpha,
            leader=leader,
            follower=follower,
            u_p=u_p_co,
            u_s=u_s_co,
            r_p=float(_rate_p_co(tau, beta, params, gains)),
            r_s=float(_rate_s_co(tau, beta, params, gains)),
            u_p_nc=u_p_nc,
            u_s_nc=u_s_nc,
            u_p_co=u_p_co,
            u_s_co=u_s_co,
        )
    return replace(nc, follower=follower, u_p_co=u_p_co, u_s_co=u_s_co)
