"""Rician channel generation, CSI perturbation and effective channel gains."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

import numpy as np

from .config import DomainError, Geometry, SystemConfig

if TYPE_CHECKING:  # pragma: no cover
    from .an_beamforming import AnBeamformer
    from .beamforming import RisConfig


@dataclass(frozen=True)
class ChannelSet:
    """One realization of all path-loss-weighted channel matrices.

    ``var_*`` hold the per-entry scattered-component variance of the
    generating distribution (path-loss scaled 1/(K+1)), needed to model
    estimation error of a known relative magnitude.
    """

    h_rs: np.ndarray                   # (Nr, Ns) BS -> RIS
    h_ru1: np.ndarray                  # (Nr,) RIS -> U1
    h_ru2: np.ndarray                  # (Nr,) RIS -> U2
    h_re: tuple[np.ndarray, ...]       # M vectors (Nr,), RIS -> eavesdroppers
    var_rs: float
    var_u1: float
    var_u2: float
    var_re: tuple[float, ...]

    def __post_init__(self) -> None:
        nr, _ = self.h_rs.shape
        if self.h_ru1.shape != (nr,) or self.h_ru2.shape != (nr,):
            raise DomainError("user channel length must match RIS size")
        for v in self.h_re:
            if v.shape != (nr,):
                raise DomainError("eavesdropper channel length must match RIS size")
        arrays = (self.h_rs, self.h_ru1, self.h_ru2, *self.h_re)
        if not all(np.isfinite(a).all() for a in arrays):
            raise DomainError("channel entries must be finite")


@dataclass(frozen=True)
class EffectiveGains:
    """End-to-end power gains through the RIS for one beamformer choice."""

    h1: float
    h2: float
    he1: tuple[float, ...]     # per-eavesdropper signal gain
    he2: tuple[float, ...]     # per-eavesdropper noise-beam gain (0 if no AN)
    strongest: Optional[int]   # argmax of he1, ties to the lowest index

    @property
    def he1_max(self) -> float:
        return self.he1[self.strongest] if self.strongest is not None else 0.0

    @property
    def he2_at_strongest(self) -> float:
        return self.he2[self.strongest] if self.strongest is not None else 0.0


def _rician_entries(cfg: SystemConfig, shape, d: float, rng: np.random.Generator) -> np.ndarray:
    k = cfg.k_factor
    los_mag = np.sqrt(k / (k + 1.0))
    if cfg.los_phase == "random":
        los = los_mag * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, shape))
    else:
        los = np.full(shape, los_mag, dtype=complex)
    sd = np.sqrt(1.0 / (2.0 * (k + 1.0)))
    scatter = rng.normal(0.0, sd, shape) + 1j * rng.normal(0.0, sd, shape)
    return (los + scatter) * d ** (-cfg.eta / 2.0)


def sample_channels(cfg: SystemConfig, geo: Geometry, rng: np.random.Generator) -> ChannelSet:
    """Draw one realization of every link in the network.

    Entries are i.i.d. Rician with factor K; each link is amplitude-scaled by
    d^(-eta/2) so received power follows d^(-eta).
    """
    if len(geo.eavesdroppers) != cfg.m:
        raise DomainError(
            f"geometry has {len(geo.eavesdroppers)} eavesdroppers, config expects {cfg.m}"
        )
    scat = 1.0 / (cfg.k_factor + 1.0)

    def w(d: float) -> float:
        return d ** (-cfg.eta)

    h_rs = _rician_entries(cfg, (cfg.nr, cfg.ns), geo.d_bs_ris, rng)
    h_ru1 = _rician_entries(cfg, (cfg.nr,), geo.d_ris_u1, rng)
    h_ru2 = _rician_entries(cfg, (cfg.nr,), geo.d_ris_u2, rng)
    h_re = tuple(_rician_entries(cfg, (cfg.nr,), d, rng) for d in geo.d_ris_eavs)
    return ChannelSet(
        h_rs=h_rs,
        h_ru1=h_ru1,
        h_ru2=h_ru2,
        h_re=h_re,
        var_rs=scat * w(geo.d_bs_ris),
        var_u1=scat * w(geo.d_ris_u1),
        var_u2=scat * w(geo.d_ris_u2),
        var_re=tuple(scat * w(d) for d in geo.d_ris_eavs),
    )


def perturb_csi(ch: ChannelSet, t: float, rng: np.random.Generator) -> ChannelSet:
    """Additive estimation-error model: every entry gains CN(0, t^2 * var)."""
    if t < 0:
        raise DomainError("error ratio t must be >= 0")
    if t == 0:
        return ch

    def noisy(a: np.ndarray, var: float) -> np.ndarray:
        sd = t * np.sqrt(var / 2.0)
        return a + rng.normal(0.0, sd, a.shape) + 1j * rng.normal(0.0, sd, a.shape)

    return ChannelSet(
        h_rs=noisy(ch.h_rs, ch.var_rs),
        h_ru1=noisy(ch.h_ru1, ch.var_u1),
        h_ru2=noisy(ch.h_ru2, ch.var_u2),
        h_re=tuple(noisy(v, var) for v, var in zip(ch.h_re, ch.var_re)),
        var_rs=ch.var_rs,
        var_u1=ch.var_u1,
        var_u2=ch.var_u2,
        var_re=ch.var_re,
    )


def effective_gains(
    ch: ChannelSet,
    ris: "RisConfig",
    an: Optional["AnBeamformer"] = None,
) -> EffectiveGains:
    """Squared end-to-end gains |h^H Phi H w|^2 for users and eavesdroppers."""
    nr, ns = ch.h_rs.shape
    if ris.phases.shape != (nr,) or ris.w.shape != (ns,):
        raise DomainError("beamformer dimensions do not match channels")
    shifts = np.exp(1j * ris.phases)
    hw = ch.h_rs @ ris.w                      # (Nr,)

    def gain(h: np.ndarray) -> float:
        return float(np.abs(np.vdot(h, shifts * hw)) ** 2)

    h1 = gain(ch.h_ru1)
    h2 = gain(ch.h_ru2)
    he1 = tuple(gain(v) for v in ch.h_re)

    if an is not None and an.nv > 0:
        if an.t.shape[0] != ns:
            raise DomainError("noise beamformer row count must equal Ns")
        ht = ch.h_rs @ an.t                   # (Nr, Nv)
        he2 = tuple(
            float(np.linalg.norm((np.conj(v) * shifts) @ ht) ** 2) for v in ch.h_re
        )
    else:
        he2 = tuple(0.0 for _ in ch.h_re)

    strongest = int(np.argmax(he1)) if he1 else None
    return EffectiveGains(h1=h1, h2=h2, he1=he1, he2=he2, strongest=strongest)
