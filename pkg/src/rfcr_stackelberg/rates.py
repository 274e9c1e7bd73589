"""Achievable rates and harvested energy for both operation modes.

All quantities are linear (no dB) with the block duration normalized to 1.
The time/energy-split arguments (``alpha``, ``tau``, ``beta``) may be scalars
or numpy arrays; results broadcast accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import EffectiveGains


@dataclass(frozen=True)
class SystemParams:
    """Link-budget and utility parameters. Defaults are the baseline setup.

    P and E0 are given relative to the noise power (30 dB -> 1000, 10 dB -> 10).
    """

    P: float = 1000.0
    sigma2: float = 1.0
    eta: float = 0.5
    E0: float = 10.0
    lambda_p: float = 100.0
    lambda_s: float = 100.0
    n: int = 6

    def __post_init__(self):
        if not self.P > 0:
            raise ValueError("P must be positive")
        if not self.sigma2 > 0:
            raise ValueError("sigma2 must be positive")
        if not 0 < self.eta < 1:
            raise ValueError("eta must lie in (0, 1)")
        if not self.E0 >= 0:
            raise ValueError("E0 must be non-negative")
        if not (self.lambda_p > 0 and self.lambda_s > 0):
            raise ValueError("rate weights must be positive")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError("n must be an integer >= 2")


def _check(name, x, lo, hi, lo_open=False, hi_open=False):
    x = np.asarray(x, dtype=float)
    bad = (x <= lo if lo_open else x < lo) | (x >= hi if hi_open else x > hi) | np.isnan(x)
    if np.any(bad):
        lb = "(" if lo_open else "["
        rb = ")" if hi_open else "]"
        raise ValueError(f"{name} must lie in {lb}{lo}, {hi}{rb}")
    return x


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def harvested_energy(tau, params: SystemParams, gains: EffectiveGains):
    """Energy available at the ST after harvesting for a fraction ``tau`` of the block."""
    tau = _check("tau", tau, 0.0, 1.0, hi_open=True)
    return _out(_energy(tau, params, gains))


def _energy(t, params, gains):
    return t * params.eta * (params.P * gains.hs2 + params.sigma2) + params.E0


def st_transmit_power(energy, duration):
    """Average power when ``energy`` is spent over ``duration`` of the block."""
    return energy / duration


def rate_p_nc(params: SystemParams, gains: EffectiveGains) -> float:
    return float(np.log2(1.0 + params.P * gains.hp2 / params.sigma2))


def sinr_nc(alpha, params: SystemParams, gains: EffectiveGains):
    """SINR at the SR when the ST harvests for ``alpha`` and then transmits with ZF."""
    alpha = _check("alpha", alpha, 0.0, 1.0, hi_open=True)
    return _out(_sinr_nc(alpha, params, gains))


def _sinr_nc(a, params, gains):
    interference = params.P * gains.hps2 + params.sigma2
    return _energy(a, params, gains) * gains.zf_gain_s / ((1.0 - a) * interference)


def rate_s_nc(alpha, params: SystemParams, gains: EffectiveGains):
    """SU rate in the non-cooperative mode; exactly 0 at ``alpha == 1``."""
    alpha = _check("alpha", alpha, 0.0, 1.0)
    a = np.where(alpha < 1.0, alpha, 0.0)
    r = (1.0 - a) * np.log2(1.0 + _sinr_nc(a, params, gains))
    return _out(np.where(alpha < 1.0, r, 0.0))


def rate_p_co(tau, beta, params: SystemParams, gains: EffectiveGains):
    """PU rate with the ST acting as amplify-and-forward relay.

    Direct transmission during the harvesting phase, then a two-hop
    exchange where the ST spends the fraction ``beta`` of its energy on the
    relayed signal.
    """
    tau = _check("tau", tau, 0.0, 1.0, hi_open=True)
    beta = _check("beta", beta, 0.0, 1.0, lo_open=True)
    return _out(_rate_p_co(tau, beta, params, gains))


def _rate_p_co(t, b, params, gains):
    s2 = params.sigma2
    snr_direct = params.P * gains.hp2 / s2
    p_hs = params.P * gains.hs2
    p_relay = st_transmit_power(2.0 * b * _energy(t, params, gains), 1.0 - t)
    relay = p_hs * p_relay * gains.zf_gain_p / (p_hs * s2 + p_relay * gains.zf_gain_p * s2 + s2 * s2)
    return t * np.log2(1.0 + snr_direct) + 0.5 * (1.0 - t) * np.log2(1.0 + snr_direct + relay)


def rate_s_co(tau, beta, params: SystemParams, gains: EffectiveGains):
    """SU rate in the cooperative mode using the leftover ``1 - beta`` of its energy."""
    tau = _check("tau", tau, 0.0, 1.0, hi_open=True)
    beta = _check("beta", beta, 0.0, 1.0, lo_open=True)
    return _out(_rate_s_co(tau, beta, params, gains))


def _rate_s_co(t, b, params, gains):
    p_own = st_transmit_power(2.0 * (1.0 - b) * _energy(t, params, gains), 1.0 - t)
    return 0.5 * (1.0 - t) * np.log2(1.0 + p_own * gains.zf_gain_s / params.sigma2)
