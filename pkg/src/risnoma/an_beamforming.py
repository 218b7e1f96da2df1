"""Null-space artificial-noise beamformers via Gram-Schmidt constructions.

Both constructions steer the jamming signal so that the two legitimate
users receive none of it: every column t of the noise beamformer satisfies
the bilinear condition c_j^T t = 0, where c_j = (h_RUj^H Phi H_RS)^T.
Since c^T t equals the Hermitian product (c*)^H t, working in the orthogonal
complement of span{c1*, c2*} makes the condition exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .beamforming import RisConfig
from .channels import ChannelSet
from .config import DomainError, SystemConfig

_RANK_RTOL = 1e-10


@dataclass(frozen=True)
class AnBeamformer:
    """Noise beamforming matrix with unit-norm columns."""

    t: np.ndarray       # (Ns, Nv)
    mode: str           # none | blind | csi_case1 | csi_case2

    @property
    def nv(self) -> int:
        return self.t.shape[1]


def user_row_vectors(ch: ChannelSet, ris: RisConfig) -> tuple[np.ndarray, np.ndarray]:
    """c_j = (h_RUj^H Phi H_RS)^T for the two users."""
    c1 = (np.conj(ch.h_ru1) * ris.shifts) @ ch.h_rs
    c2 = (np.conj(ch.h_ru2) * ris.shifts) @ ch.h_rs
    return c1, c2


def eav_row_vectors(ch: ChannelSet, ris: RisConfig) -> list[np.ndarray]:
    """d_i = (h_REi^H Phi H_RS)^T for every external eavesdropper."""
    return [(np.conj(v) * ris.shifts) @ ch.h_rs for v in ch.h_re]


def _orthonormal_basis(vectors: list[np.ndarray]) -> np.ndarray:
    """Modified Gram-Schmidt basis of the span, dropping dependent vectors."""
    basis: list[np.ndarray] = []
    for v in vectors:
        u = v.astype(complex).copy()
        scale = np.linalg.norm(u)
        for b in basis:
            u -= np.vdot(b, u) * b
        # second pass for numerical orthogonality
        for b in basis:
            u -= np.vdot(b, u) * b
        n = np.linalg.norm(u)
        if scale > 0 and n > _RANK_RTOL * scale:
            basis.append(u / n)
    return np.column_stack(basis) if basis else np.zeros((len(vectors[0]), 0), dtype=complex)


def _complement_residual(u_basis: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Component of v Hermitian-orthogonal to the columns of u_basis."""
    r = v - u_basis @ (np.conj(u_basis.T) @ v)
    return r - u_basis @ (np.conj(u_basis.T) @ r)


def _blind_columns(
    u_basis: np.ndarray, nv: int, ns: int, rng: np.random.Generator
) -> list[np.ndarray]:
    """nv orthonormal vectors in the complement of the columns of u_basis."""
    cols: list[np.ndarray] = []
    attempts = 0
    while len(cols) < nv:
        if attempts > 100 * nv:
            raise DomainError("failed to draw independent noise directions")
        attempts += 1
        p = rng.normal(size=ns) + 1j * rng.normal(size=ns)
        u = _complement_residual(u_basis, p)
        for c in cols:
            u -= np.vdot(c, u) * c
        n = np.linalg.norm(u)
        if n > _RANK_RTOL * np.linalg.norm(p):
            cols.append(u / n)
    return cols


def algorithm2_blind(
    ch: ChannelSet, ris: RisConfig, cfg: SystemConfig, rng: np.random.Generator
) -> AnBeamformer:
    """Noise directions chosen blindly: any orthonormal basis of the users'
    null space (Nv = Ns - 2 columns), built from random seed vectors."""
    ns = cfg.ns
    if ns < 2:
        raise DomainError("need at least 2 transmit antennas")
    if ns == 2:
        return AnBeamformer(t=np.zeros((ns, 0), dtype=complex), mode="none")
    c1, c2 = user_row_vectors(ch, ris)
    u_basis = _orthonormal_basis([np.conj(c1), np.conj(c2)])
    cols = _blind_columns(u_basis, ns - 2, ns, rng)
    return AnBeamformer(t=np.column_stack(cols), mode="blind")


def algorithm3_csi(
    ch: ChannelSet, ris: RisConfig, cfg: SystemConfig, rng: np.random.Generator
) -> AnBeamformer:
    """Noise directions matched to the eavesdroppers' channels.

    With at most Ns - 2 eavesdroppers each direction maximizes its own
    eavesdropper's received noise power inside the users' null space; with
    more eavesdroppers, the strongest (by |d^T w|^2) rank-contributing
    channels are selected first and the same construction is applied.
    """
    ns, m = cfg.ns, cfg.m
    if m < 1:
        raise DomainError("no eavesdropper channels available")
    if ns < 3:
        raise DomainError("need at least 3 transmit antennas for noise beams")
    c1, c2 = user_row_vectors(ch, ris)
    d_all = eav_row_vectors(ch, ris)
    u_basis = _orthonormal_basis([np.conj(c1), np.conj(c2)])

    if m <= ns - 2:
        selected = d_all
        mode = "csi_case1"
    else:
        nv = ns - 2
        order = sorted(
            range(m), key=lambda i: (-float(np.abs(d_all[i] @ ris.w) ** 2), i)
        )
        span = _orthonormal_basis([c1, c2])
        selected = []
        for i in order:
            if len(selected) == nv:
                break
            d = d_all[i]
            resid = _complement_residual(span, d)
            if np.linalg.norm(resid) > _RANK_RTOL * np.linalg.norm(d):
                selected.append(d)
                span = np.column_stack([span, resid / np.linalg.norm(resid)])
        mode = "csi_case2"

    cols = []
    for d in selected:
        omega = _complement_residual(np.conj(u_basis), d)
        n = np.linalg.norm(omega)
        if n > _RANK_RTOL * np.linalg.norm(d):
            cols.append(np.conj(omega) / n)
        else:
            # eavesdropper channel lies in the users' span: blind fallback
            cols.append(_blind_columns(u_basis, 1, ns, rng)[0])
    if mode == "csi_case2" and len(cols) < ns - 2:
        cols.extend(_blind_columns(u_basis, ns - 2 - len(cols), ns, rng))
    return AnBeamformer(t=np.column_stack(cols), mode=mode)


def an_leakage(
    ch: ChannelSet,
    ris: RisConfig,
    an: AnBeamformer,
    psi: float,
    cfg: SystemConfig,
) -> tuple[tuple[float, float], tuple[float, ...]]:
    """Received noise power at the users (should vanish) and eavesdroppers."""
    if an.nv == 0:
        if psi < 1.0:
            raise DomainError("noise power allocated but no noise directions")
        return (0.0, 0.0), tuple(0.0 for _ in ch.h_re)
    power = (1.0 - psi) * cfg.p / an.nv
    ht = ch.h_rs @ an.t

    def leak(v: np.ndarray) -> float:
        return float(power * np.linalg.norm((np.conj(v) * ris.shifts) @ ht) ** 2)

    return (leak(ch.h_ru1), leak(ch.h_ru2)), tuple(leak(v) for v in ch.h_re)
