"""RIS phase / transmit-beamformer optimization and the no-beamforming baseline."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .channels import ChannelSet
from .config import DomainError, SystemConfig

if os.environ.get("RISNOMA_PURE_PYTHON") == "1":
    from . import _alg1_py as _kernel
else:
    try:
        from . import _alg1_cy as _kernel  # type: ignore[attr-defined]
    except ImportError:
        from . import _alg1_py as _kernel

KERNEL_BACKEND: str = _kernel.BACKEND


@dataclass(frozen=True)
class RisConfig:
    """Unit-modulus RIS phase shifts plus a unit-norm transmit beamformer."""

    phases: np.ndarray   # (Nr,), each in [0, 2*pi)
    w: np.ndarray        # (Ns,), complex, ||w|| = 1

    def __post_init__(self) -> None:
        if abs(np.linalg.norm(self.w) - 1.0) > 1e-12:
            raise DomainError("beamformer must have unit norm")

    @property
    def shifts(self) -> np.ndarray:
        """Diagonal of the phase-shift matrix."""
        return np.exp(1j * self.phases)


@dataclass(frozen=True)
class IterationTrace:
    """Objective values recorded over the alternating iteration."""

    h2_values: tuple[float, ...]
    iterations: int
    converged: bool


def algorithm1(
    ch: ChannelSet,
    cfg: SystemConfig,
    target: int = 2,
    phases0: np.ndarray | None = None,
) -> tuple[RisConfig, IterationTrace]:
    """Alternating maximization of the target user's integrated gain.

    Each pass aligns every RIS phase against the current beam (phase i is set
    to cancel the polar angles of the target channel and of H w), then resets
    the beamformer to the matched filter of the aligned effective channel.
    Stops when the objective moves by less than ``cfg.epsilon``.
    """
    if target == 1:
        h = ch.h_ru1
    elif target == 2:
        h = ch.h_ru2
    else:
        raise DomainError("target user must be 1 or 2")
    try:
        phases, w, trace, converged = _kernel.alternating_iteration(
            h, ch.h_rs, cfg.epsilon, cfg.max_iters, phases0
        )
    except ZeroDivisionError as exc:
        raise DomainError("degenerate all-zero channel") from exc
    ris = RisConfig(phases=phases, w=w)
    return ris, IterationTrace(
        h2_values=tuple(trace), iterations=len(trace) - 1, converged=converged
    )


def baseline_no_bf(cfg: SystemConfig) -> RisConfig:
    """Identity phase shifts with an equal-gain beamformer."""
    return RisConfig(
        phases=np.zeros(cfg.nr),
        w=np.ones(cfg.ns, dtype=complex) / np.sqrt(cfg.ns),
    )


def reduced_phase_objective(
    ch: ChannelSet, ris: RisConfig, i: int, target: int = 2
) -> tuple[float, float, float]:
    """Single-phase reduction of the gain objective.

    With everything but phase ``i`` fixed, the objective collapses to
    ``q_offset + tau * cos(mu + phi_i)``; returns ``(q_offset, tau, mu)``.
    """
    h = ch.h_ru2 if target == 2 else ch.h_ru1
    hw = ch.h_rs @ ris.w
    terms = np.conj(h) * ris.shifts * hw
    q1 = np.conj(h[i]) * hw[i]            # coefficient of e^{j phi_i}
    q2 = terms.sum() - terms[i]
    cross = q1 * np.conj(q2)
    tau = 2.0 * abs(cross)
    mu = float(np.angle(cross)) if tau > 0 else 0.0
    return float(abs(q1) ** 2 + abs(q2) ** 2), float(tau), mu
