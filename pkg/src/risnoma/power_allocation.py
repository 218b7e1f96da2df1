"""Closed-form power-sharing solvers for every eavesdropping scenario.

``solve_internal`` and ``solve_no_csi`` implement the one-dimensional
closed forms; ``solve_with_csi`` carries the full feasibility-region case
analysis over the (psi, alpha) plane, with the corner/stationary points
exposed through :func:`region_points` so they can be verified directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import DomainError, SystemConfig

_SLACK = 1e-9  # relative slack when testing boundary membership


@dataclass(frozen=True)
class PowerSplit:
    """Signal power fraction for x2 (alpha) and signal-vs-noise split (psi)."""

    alpha: float
    psi: float
    feasible: bool
    binding_case: str  # internal | no_csi | case_I | case_II | case_III | infeasible


@dataclass(frozen=True)
class RegionPoints:
    """Corner and stationary points of the feasible (psi, alpha) region."""

    a: tuple[float, float]
    b: tuple[float, float]
    c: tuple[float, float]
    d: tuple[float, float]
    g: Optional[tuple[float, float]]
    o_bound: float


def boundary_alpha_max(psi: float, h1: float, cfg: SystemConfig) -> float:
    """Upper alpha limit keeping the near user's rate above threshold."""
    p, n0, g1 = cfg.p, cfg.n0, cfg.gamma1_th
    return (h1 * psi * p - n0 * g1) / (h1 * psi * p * (1.0 + g1))


def boundary_alpha_min(psi: float, h2: float, cfg: SystemConfig) -> float:
    """Lower alpha limit keeping the far user's rate above threshold."""
    return cfg.n0 * cfg.gamma2_th / (h2 * psi * cfg.p)


def f_r(
    psi: float,
    alpha: float,
    h1: float,
    h2: float,
    he1: float,
    he2: float,
    nv: int,
    cfg: SystemConfig,
) -> float:
    """Secrecy objective; zero outside the rate-feasible region."""
    p, n0 = cfg.p, cfg.n0
    if not (0.0 < psi <= 1.0 + _SLACK) or not (0.0 < alpha < 1.0):
        return 0.0
    psi = min(psi, 1.0)
    g1_x1 = h1 * (1.0 - alpha) * psi * p / (h1 * alpha * psi * p + n0)
    g2_x2 = h2 * alpha * psi * p / n0
    if g1_x1 < cfg.gamma1_th * (1.0 - _SLACK) or g2_x2 < cfg.gamma2_th * (1.0 - _SLACK):
        return 0.0
    g1_x2 = h1 * alpha * psi * p / n0
    if nv > 0 and psi < 1.0:
        ge_x2 = he1 * alpha * psi * p / ((1.0 - psi) * p / nv * he2 + n0)
    else:
        ge_x2 = he1 * alpha * psi * p / n0
    worst = max(g1_x2, ge_x2)
    return math.log2(1.0 + g2_x2) - math.log2(1.0 + worst)


def solve_internal(h1: float, h2: float, cfg: SystemConfig) -> PowerSplit:
    """Optimal alpha when the near user is the only eavesdropper."""
    return _solve_prescribed(h1, h2, 1.0, cfg, "internal")


def solve_no_csi(h1: float, h2: float, psi: float, cfg: SystemConfig) -> PowerSplit:
    """Optimal alpha at a prescribed signal/noise split."""
    if not 0.0 < psi <= 1.0:
        raise DomainError("psi must lie in (0, 1]")
    return _solve_prescribed(h1, h2, psi, cfg, "no_csi")


def _solve_prescribed(
    h1: float, h2: float, psi: float, cfg: SystemConfig, case: str
) -> PowerSplit:
    if h1 <= 0 or h2 <= 0:
        raise DomainError("channel gains must be positive")
    p, n0, g1, g2 = cfg.p, cfg.n0, cfg.gamma1_th, cfg.gamma2_th
    p_min = (g1 + 1.0) * n0 * g2 / (h2 * psi) + g1 * n0 / (h1 * psi)
    if p < p_min:
        return PowerSplit(alpha=float("nan"), psi=psi, feasible=False, binding_case="infeasible")
    alpha = boundary_alpha_max(psi, h1, cfg)
    return PowerSplit(alpha=alpha, psi=psi, feasible=True, binding_case=case)


def _g_stationary(
    h1: float, h2: float, he1: float, he2: float, nv: int, cfg: SystemConfig
) -> Optional[tuple[float, float]]:
    """Stationary maximum of the external-eavesdropper objective along the
    near-user rate boundary; None when the boundary restriction is monotone."""
    p, n0, g1 = cfg.p, cfg.n0, cfg.gamma1_th
    # d/dpsi of (1 + h2 u / N0) / (1 + hE1 u / B) with
    # u = (h1 psi P - N0 g1) / (h1 (1 + g1)), B = (1 - psi) P hE2 / Nv + N0
    # reduces to a quadratic in psi.
    a2 = p**3 * h1**2 * h2 * he2 * (-nv * he1 + g1 * he2 + he2)
    a1 = (
        -2.0
        * p**2
        * h1
        * h2
        * he2
        * (n0 * nv * g1 * h1 - n0 * nv * g1 * he1 + n0 * nv * h1 + p * g1 * h1 * he2 + p * h1 * he2)
    )
    a0 = p * (
        n0**2 * nv**2 * g1 * h1**2 * h2
        - n0**2 * nv**2 * g1 * h1**2 * he1
        + n0**2 * nv**2 * h1**2 * h2
        - n0**2 * nv**2 * h1**2 * he1
        + n0**2 * nv * g1**2 * h1 * he1 * he2
        - n0**2 * nv * g1**2 * h2 * he1 * he2
        + n0**2 * nv * g1 * h1 * he1 * he2
        + 2.0 * n0 * nv * p * g1 * h1**2 * h2 * he2
        - n0 * nv * p * g1 * h1**2 * he1 * he2
        + 2.0 * n0 * nv * p * h1**2 * h2 * he2
        - n0 * nv * p * h1**2 * he1 * he2
        + p**2 * g1 * h1**2 * h2 * he2**2
        + p**2 * h1**2 * h2 * he2**2
    )
    roots = np.roots([a2, a1, a0]) if a2 != 0.0 else (np.array([-a0 / a1]) if a1 != 0.0 else np.array([]))
    psi_lo = n0 * g1 / (h1 * p)  # boundary alpha turns positive here
    best = None
    for r in roots:
        if abs(r.imag) > 1e-9 * max(1.0, abs(r.real)):
            continue
        x = float(r.real)
        if x <= psi_lo:
            continue
        val = f_r(x, boundary_alpha_max(x, h1, cfg), h1, h2, he1, he2, nv, cfg)
        # keep only local maxima of the boundary restriction
        eps = 1e-7 * max(x, 1.0)
        lo = f_r(x - eps, boundary_alpha_max(x - eps, h1, cfg), h1, h2, he1, he2, nv, cfg)
        hi = f_r(x + eps, boundary_alpha_max(x + eps, h1, cfg), h1, h2, he1, he2, nv, cfg)
        if val + 1e-15 >= lo and val + 1e-15 >= hi:
            if best is None or val > best[1]:
                best = (x, val)
    if best is None:
        return None
    gx = best[0]
    # cross-check against a derivative-free local refinement; the numeric
    # value wins if the closed form drifted.
    ref = _golden_max(
        lambda s: f_r(s, boundary_alpha_max(s, h1, cfg), h1, h2, he1, he2, nv, cfg),
        max(psi_lo * (1 + 1e-12), gx * 0.9),
        min(1.5, gx * 1.1),
    )
    if abs(ref - gx) > 1e-6 * max(1.0, gx):
        gx = ref
    return gx, boundary_alpha_max(gx, h1, cfg)


def _golden_max(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def region_points(
    h1: float, h2: float, he1: float, he2: float, nv: int, cfg: SystemConfig
) -> RegionPoints:
    """Closed-form corner points of the feasible region and the psi level at
    which the internal and external eavesdroppers' SNRs coincide."""
    if h1 <= 0 or h2 <= 0 or he1 < 0:
        raise DomainError("channel gains must be positive")
    if he2 <= 0 or nv < 1:
        raise DomainError("no noise power reaches the eavesdropper")
    p, n0, g1, g2 = cfg.p, cfg.n0, cfg.gamma1_th, cfg.gamma2_th
    o_bound = ((h1 - he1) * nv * n0 + p * h1 * he2) / (p * h1 * he2)
    a = (o_bound, boundary_alpha_max(o_bound, h1, cfg)) if o_bound > 0 else (o_bound, float("nan"))
    b = (1.0, n0 * g2 / (h2 * p))
    c = (1.0, (p * h1 - n0 * g1) / (h1 * p * (1.0 + g1)))
    dx = (g2 * (1.0 + g1) * h1 + h2 * g1) * n0 / (h1 * h2 * p)
    dy = g2 * h1 / (g2 * (1.0 + g1) * h1 + h2 * g1)
    g = _g_stationary(h1, h2, he1, he2, nv, cfg)
    return RegionPoints(a=a, b=b, c=c, d=(dx, dy), g=g, o_bound=o_bound)


def solve_with_csi(
    h1: float, h2: float, he1: float, he2: float, nv: int, cfg: SystemConfig
) -> PowerSplit:
    """Joint (psi, alpha) optimum against internal plus external eavesdropping.

    The region splits on where the external eavesdropper overtakes the near
    user; each sub-case reduces to comparing the objective at a handful of
    closed-form candidate points.
    """
    if h1 <= 0 or h2 <= 0 or he1 < 0 or he2 < 0:
        raise DomainError("channel gains must be positive")
    if nv < 1 or he2 == 0.0:
        # no noise reaches the eavesdropper: internal case at full signal power
        split = solve_internal(h1, h2, cfg)
        if not split.feasible:
            return split
        return PowerSplit(alpha=split.alpha, psi=1.0, feasible=True, binding_case="case_I")

    p, n0, g1, g2 = cfg.p, cfg.n0, cfg.gamma1_th, cfg.gamma2_th
    if p < (g2 * (1.0 + g1) * h1 + h2 * g1) * n0 / (h1 * h2):
        return PowerSplit(alpha=float("nan"), psi=1.0, feasible=False, binding_case="infeasible")

    pts = region_points(h1, h2, he1, he2, nv, cfg)
    o = pts.o_bound
    dx = pts.d[0]

    if o >= 1.0:
        case = "case_I"
        candidates = [pts.c]
    elif o <= dx:
        case = "case_II"
        candidates = [pts.d, pts.c]
        if pts.g is not None and dx - _SLACK <= pts.g[0] <= 1.0 + _SLACK:
            candidates.append(pts.g)
    else:
        case = "case_III"
        candidates = [pts.a, pts.c]
        if pts.g is not None and o - _SLACK <= pts.g[0] <= 1.0 + _SLACK:
            candidates.append(pts.g)

    best = max(
        candidates,
        key=lambda pt: f_r(min(pt[0], 1.0), pt[1], h1, h2, he1, he2, nv, cfg),
    )
    return PowerSplit(
        alpha=float(best[1]), psi=float(min(best[0], 1.0)), feasible=True, binding_case=case
    )
