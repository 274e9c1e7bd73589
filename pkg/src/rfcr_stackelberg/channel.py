"""Channel generation and zero-forcing reduction to scalar gains.

A realization holds the five links of the network: PT->PR (``h_p``), PT->SR
(``h_ps``), PT->ST (``h_s``, N antennas), ST->PR (``g_p``) and ST->SR
(``g_s``).  Everything downstream only needs the five real numbers collected
in :class:`EffectiveGains`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np


class DegenerateChannelError(ValueError):
    """Raised when a channel vector vanishes or g_p is parallel to g_s."""


@dataclass(frozen=True)
class Topology:
    """Node distances in meters plus the path-loss law ``loss_coeff * d**-phi``."""

    d_pt_pr: float = 2.0
    d_pt_st: float = 1.0
    d_st_pr: float = 1.0
    d_st_sr: float = 1.0
    d_pt_sr: float = 1.0
    phi: float = 3.5
    loss_coeff: float = 1e-3

    def __post_init__(self):
        for name in ("d_pt_pr", "d_pt_st", "d_st_pr", "d_st_sr", "d_pt_sr", "phi", "loss_coeff"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")

    def with_distance(self, name: str, value: float) -> "Topology":
        return replace(self, **{name: value})


@dataclass(frozen=True)
class ChannelRealization:
    h_p: complex
    h_ps: complex
    h_s: np.ndarray
    g_p: np.ndarray
    g_s: np.ndarray

    def __post_init__(self):
        n = np.shape(self.h_s)
        if np.ndim(self.h_s) != 1 or n != np.shape(self.g_p) or n != np.shape(self.g_s):
            raise ValueError("h_s, g_p and g_s must be vectors of identical length")
        if n[0] < 2:
            raise ValueError(f"need at least 2 ST antennas, got {n[0]}")

    @property
    def n(self) -> int:
        return len(self.h_s)

    def truncate(self, n: int) -> "ChannelRealization":
        """Keep the first ``n`` ST antennas."""
        return ChannelRealization(self.h_p, self.h_ps, self.h_s[:n], self.g_p[:n], self.g_s[:n])


@dataclass(frozen=True)
class EffectiveGains:
    """The scalar channel quantities that fix every rate and utility.

    ``hs2`` is the squared norm of the PT->ST vector, i.e. the gain after
    maximum ratio combining at the ST.
    """

    hp2: float
    hps2: float
    hs2: float
    zf_gain_p: float
    zf_gain_s: float

    def __post_init__(self):
        for name in ("hp2", "hps2", "hs2", "zf_gain_p", "zf_gain_s"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")


def path_loss(d, phi, loss_coeff=1e-3):
    """Large-scale power gain ``loss_coeff * d**(-phi)``."""
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    out = loss_coeff * d ** (-phi)
    return float(out) if out.ndim == 0 else out


def _cn(rng, size=None):
    # unit-variance circularly symmetric complex Gaussian
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2.0)


def draw_fading(n: int, rng: np.random.Generator) -> ChannelRealization:
    """Unit-variance Rayleigh fading for all five links, no path loss applied.

    Draw order is fixed (h_p, h_ps, h_s, g_p, g_s) so a realization drawn at
    a larger ``n`` and truncated shares its scalar links and leading antennas
    with the same seed drawn at any smaller ``n``.
    """
    if n < 2:
        raise ValueError(f"zero forcing needs n >= 2 antennas, got {n}")
    h_p = complex(_cn(rng))
    h_ps = complex(_cn(rng))
    h_s = _cn(rng, n)
    g_p = _cn(rng, n)
    g_s = _cn(rng, n)
    return ChannelRealization(h_p, h_ps, h_s, g_p, g_s)


def apply_path_loss(fading: ChannelRealization, topology: Topology) -> ChannelRealization:
    """Scale each link of a unit-variance draw by the square root of its path loss."""
    t = topology

    def amp(d):
        return np.sqrt(path_loss(d, t.phi, t.loss_coeff))

    return ChannelRealization(
        h_p=fading.h_p * amp(t.d_pt_pr),
        h_ps=fading.h_ps * amp(t.d_pt_sr),
        h_s=fading.h_s * amp(t.d_pt_st),
        g_p=fading.g_p * amp(t.d_st_pr),
        g_s=fading.g_s * amp(t.d_st_sr),
    )


def sample_channel(topology: Topology, n: int, rng: np.random.Generator) -> ChannelRealization:
    """Rayleigh block-fading realization with ``E|entry|^2`` equal to the link's path loss."""
    return apply_path_loss(draw_fading(n, rng), topology)


def _projector_onto_complement(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    nrm2 = np.vdot(v, v).real
    if nrm2 == 0:
        raise DegenerateChannelError("zero-norm channel vector")
    return np.eye(len(v), dtype=complex) - np.outer(v, v.conj()) / nrm2


def zf_projectors(g_p, g_s):
    """Return ``(Z_p, Z_s)``: projectors onto the complements of ``g_s`` and ``g_p``.

    ``Z_p`` is applied to the PR-bound signal so it never reaches the SR, and
    ``Z_s`` to the SR-bound signal so it never reaches the PR.
    """
    if len(g_p) != len(g_s):
        raise ValueError("g_p and g_s must have the same length")
    return _projector_onto_complement(g_s), _projector_onto_complement(g_p)


def zf_weights(g_p, g_s, rtol=1e-12):
    """Unit-norm zero-forcing transmit weights ``(w_p, w_s)``."""
    z_p, z_s = zf_projectors(g_p, g_s)
    u_p = z_p @ np.asarray(g_p, dtype=complex)
    u_s = z_s @ np.asarray(g_s, dtype=complex)
    n_p, n_s = np.linalg.norm(u_p), np.linalg.norm(u_s)
    if n_p <= rtol * np.linalg.norm(g_p) or n_s <= rtol * np.linalg.norm(g_s):
        raise DegenerateChannelError("g_p is parallel to g_s; zero forcing leaves no signal")
    return u_p / n_p, u_s / n_s


def effective_gains(ch: ChannelRealization, strict: bool = True) -> EffectiveGains:
    """Collect the scalar gains of ``ch``.

    With ``strict`` a (numerically) parallel g_p/g_s pair raises
    :class:`DegenerateChannelError`; otherwise the zero-forcing gains are
    returned as computed, typically 0.
    """
    z_p, z_s = zf_projectors(ch.g_p, ch.g_s)
    zf_p = float(np.linalg.norm(z_p @ ch.g_p) ** 2)
    zf_s = float(np.linalg.norm(z_s @ ch.g_s) ** 2)
    if strict:
        tol = 1e-24
        if zf_p <= tol * np.vdot(ch.g_p, ch.g_p).real or zf_s <= tol * np.vdot(ch.g_s, ch.g_s).real:
            raise DegenerateChannelError("g_p is parallel to g_s; zero forcing leaves no signal")
    return EffectiveGains(
        hp2=float(abs(ch.h_p) ** 2),
        hps2=float(abs(ch.h_ps) ** 2),
        hs2=float(np.linalg.norm(ch.h_s) ** 2),
        zf_gain_p=zf_p,
        zf_gain_s=zf_s,
    )
