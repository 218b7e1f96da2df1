"""SNR/secrecy-rate formulas, the scheme registry and Monte Carlo estimators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .an_beamforming import AnBeamformer, algorithm2_blind, algorithm3_csi
from .beamforming import IterationTrace, RisConfig, algorithm1, baseline_no_bf
from .channels import ChannelSet, EffectiveGains, effective_gains
from .config import DomainError, Geometry, SystemConfig
from .power_allocation import PowerSplit, solve_internal, solve_no_csi, solve_with_csi

FIXED_ALPHA = 0.05  # fixed-power-allocation baselines
FIXED_PSI = 0.5

SCHEME_IDS = (
    "proposed_internal",
    "scheme2",
    "proposed_no_csi",
    "scheme3",
    "proposed_csi",
    "scheme4",
    "scheme5",
    "scheme6",
    "baseline_alg4",
)

_AN_SCHEMES = {"proposed_no_csi", "scheme3", "proposed_csi", "scheme4", "scheme6"}
_CSI_SCHEMES = {"proposed_csi", "scheme6"}


@dataclass(frozen=True)
class SnrSet:
    g1_x1: float
    g2_x1: float
    g1_x2: float
    g2_x2: float
    ge_x2: tuple[float, ...]


@dataclass(frozen=True)
class ScenarioResult:
    secrecy_rate: float
    outage: bool
    snrs: SnrSet
    split: PowerSplit
    iterations: int
    h1: float
    h2: float


def snrs(gains: EffectiveGains, split: PowerSplit, nv: int, cfg: SystemConfig) -> SnrSet:
    """Per-signal SNRs at both users and every eavesdropper."""
    p, n0 = cfg.p, cfg.n0
    alpha, psi = split.alpha, split.psi
    sp = alpha * psi * p
    g1_x1 = gains.h1 * (1.0 - alpha) * psi * p / (gains.h1 * sp + n0)
    g2_x1 = gains.h2 * (1.0 - alpha) * psi * p / (gains.h2 * sp + n0)
    g1_x2 = gains.h1 * sp / n0
    g2_x2 = gains.h2 * sp / n0
    ge = []
    for he1_i, he2_i in zip(gains.he1, gains.he2):
        an_power = (1.0 - psi) * p / nv * he2_i if nv > 0 and psi < 1.0 else 0.0
        ge.append(he1_i * sp / (an_power + n0))
    return SnrSet(g1_x1=g1_x1, g2_x1=g2_x1, g1_x2=g1_x2, g2_x2=g2_x2, ge_x2=tuple(ge))


def secrecy_rate_internal(s: SnrSet) -> float:
    """Rate margin of the far user over the untrusted near user."""
    return max(0.0, math.log2(1.0 + s.g2_x2) - math.log2(1.0 + s.g1_x2))


def secrecy_rate_external(s: SnrSet) -> float:
    """Rate margin over the best of the near user and all eavesdroppers."""
    worst = max((s.g1_x2, *s.ge_x2))
    return max(0.0, math.log2(1.0 + s.g2_x2) - math.log2(1.0 + worst))


def _check_scheme(scheme: str, cfg: SystemConfig) -> None:
    if scheme not in SCHEME_IDS:
        raise DomainError(f"unknown scheme '{scheme}'")
    if scheme in _AN_SCHEMES and cfg.ns < 3:
        raise DomainError(f"scheme '{scheme}' needs Ns >= 3 for noise beams")
    if scheme in (_CSI_SCHEMES | {"scheme4"}) and cfg.m < 1:
        raise DomainError(f"scheme '{scheme}' needs at least one eavesdropper")


def _zero_snrs(m: int) -> SnrSet:
    return SnrSet(0.0, 0.0, 0.0, 0.0, tuple(0.0 for _ in range(m)))


def run_scheme(
    scheme: str,
    ch: ChannelSet,
    cfg: SystemConfig,
    rng: np.random.Generator,
    psi: float = FIXED_PSI,
) -> ScenarioResult:
    """Compose beamforming, noise design and power allocation for one trial.

    ``psi`` is the prescribed signal/noise split for the no-CSI schemes; it is
    ignored wherever psi is optimized or fixed by the scheme definition.
    """
    _check_scheme(scheme, cfg)

    if scheme == "baseline_alg4":
        ris = baseline_no_bf(cfg)
        iters = 0
    else:
        ris, trace = algorithm1(ch, cfg, target=2)
        iters = trace.iterations

    an: Optional[AnBeamformer] = None
    if scheme in ("proposed_no_csi", "scheme3", "scheme4"):
        an = algorithm2_blind(ch, ris, cfg, rng)
    elif scheme in ("proposed_csi", "scheme6"):
        an = algorithm3_csi(ch, ris, cfg, rng)

    gains = effective_gains(ch, ris, an)
    nv = an.nv if an is not None else 0

    if scheme in ("proposed_internal", "scheme5", "baseline_alg4"):
        split = solve_internal(gains.h1, gains.h2, cfg)
    elif scheme == "scheme2":
        split = PowerSplit(alpha=FIXED_ALPHA, psi=1.0, feasible=True, binding_case="internal")
    elif scheme == "proposed_no_csi":
        split = solve_no_csi(gains.h1, gains.h2, psi, cfg)
    elif scheme == "scheme3":
        split = PowerSplit(alpha=FIXED_ALPHA, psi=psi, feasible=True, binding_case="no_csi")
    elif scheme == "scheme6":
        split = PowerSplit(alpha=FIXED_ALPHA, psi=FIXED_PSI, feasible=True, binding_case="no_csi")
    else:  # proposed_csi, scheme4
        split = solve_with_csi(
            gains.h1, gains.h2, gains.he1_max, gains.he2_at_strongest, max(nv, 1), cfg
        )

    if not split.feasible:
        return ScenarioResult(
            secrecy_rate=0.0,
            outage=True,
            snrs=_zero_snrs(cfg.m),
            split=split,
            iterations=iters,
            h1=gains.h1,
            h2=gains.h2,
        )

    s = snrs(gains, split, nv, cfg)
    rate = secrecy_rate_external(s)
    outage = gains.h1 >= gains.h2 or rate <= 0.0
    return ScenarioResult(
        secrecy_rate=rate,
        outage=outage,
        snrs=s,
        split=split,
        iterations=iters,
        h1=gains.h1,
        h2=gains.h2,
    )


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent substream for one Monte Carlo trial."""
    return np.random.default_rng([seed, trial])


GeometrySource = Callable[[np.random.Generator], Geometry]


def _resolve_geo(geo, rng: np.random.Generator) -> Geometry:
    return geo(rng) if callable(geo) else geo


def estimate_sop(
    scheme: str,
    cfg: SystemConfig,
    geo,
    trials: int,
    seed: int,
    psi: float = FIXED_PSI,
    channel_source: Optional[Callable[[np.random.Generator], ChannelSet]] = None,
) -> float:
    """Fraction of trials where the near user's gain meets or beats the far
    user's after beamforming.

    ``geo`` is a Geometry or a geometry sampler; ``channel_source`` replaces
    the default channel sampling when given.  A trial whose channels are too
    degenerate to beamform counts as an outage.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    _check_scheme(scheme, cfg)
    from .channels import sample_channels

    outages = np.empty(trials, dtype=bool)
    for i in range(trials):
        rng = trial_rng(seed, i)
        if channel_source is not None:
            ch = channel_source(rng)
        else:
            ch = sample_channels(cfg, _resolve_geo(geo, rng), rng)
        try:
            if scheme == "baseline_alg4":
                ris = baseline_no_bf(cfg)
            else:
                ris, _ = algorithm1(ch, cfg, target=2)
            gains = effective_gains(ch, ris)
            outages[i] = gains.h1 >= gains.h2
        except DomainError:
            # channels too degenerate to beamform for the far user
            outages[i] = True
    return float(np.sum(outages)) / trials


def average_secrecy_rate(
    scheme: str,
    cfg: SystemConfig,
    geo,
    trials: int,
    seed: int,
    psi: float = FIXED_PSI,
    channel_source: Optional[Callable[[np.random.Generator], ChannelSet]] = None,
) -> tuple[float, int]:
    """Mean per-trial secrecy rate (outage/infeasible trials count as zero)
    and the number of such zero-rate trials."""
    if trials < 1:
        raise DomainError("trials must be >= 1")
    _check_scheme(scheme, cfg)
    from .channels import sample_channels

    rates = np.empty(trials)
    bad = 0
    for i in range(trials):
        rng = trial_rng(seed, i)
        if channel_source is not None:
            ch = channel_source(rng)
        else:
            ch = sample_channels(cfg, _resolve_geo(geo, rng), rng)
        try:
            res = run_scheme(scheme, ch, cfg, rng, psi=psi)
        except DomainError:
            rates[i] = 0.0
            bad += 1
            continue
        rates[i] = res.secrecy_rate
        bad += int(res.outage)
    return float(np.sum(rates) / trials), bad
