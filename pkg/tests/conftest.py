from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from rfcr_stackelberg.channel import ChannelRealization, EffectiveGains
from rfcr_stackelberg.rates import SystemParams

DATA = Path(__file__).parent / "data"
ROOT = Path(__file__).parent.parent


@pytest.fixture
def ct1_channel():
    return ChannelRealization(
        h_p=1 + 0j,
        h_ps=1 + 0j,
        h_s=np.array([1, 1], dtype=complex),
        g_p=np.array([1, 0], dtype=complex),
        g_s=np.array([0, 1], dtype=complex),
    )


@pytest.fixture
def ct1_gains():
    return EffectiveGains(hp2=1.0, hps2=1.0, hs2=2.0, zf_gain_p=1.0, zf_gain_s=1.0)


@pytest.fixture
def ct1_params():
    return SystemParams(P=10.0, sigma2=1.0, eta=0.5, E0=1.0, lambda_p=1.0, lambda_s=1.0, n=2)


def _logf(lo, hi):
    return st.floats(np.log(lo), np.log(hi)).map(lambda x: float(np.exp(x)))


params_st = st.builds(
    SystemParams,
    P=_logf(1.0, 1e4),
    sigma2=_logf(0.1, 10.0),
    eta=st.floats(0.05, 0.95),
    E0=_logf(1e-2, 1e2),
    lambda_p=_logf(1.0, 200.0),
    lambda_s=_logf(1.0, 200.0),
    n=st.integers(2, 8),
)

gains_st = st.builds(
    EffectiveGains,
    hp2=_logf(1e-6, 1e-1),
    hps2=_logf(1e-6, 1e-1),
    hs2=_logf(1e-4, 1e-1),
    zf_gain_p=_logf(1e-5, 1e-1),
    zf_gain_s=_logf(1e-5, 1e-1),
)
