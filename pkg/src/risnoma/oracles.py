"""Brute-force reference solvers.

Everything here is deliberately independent of the closed-form/iterative
paths it is used to check: exhaustive grids, random search and golden-section
refinement only.
"""

from __future__ import annotations

import math

import numpy as np

from .config import SystemConfig


def phase_grid_best_gain(
    h: np.ndarray, h_mat: np.ndarray, steps: int = 720
) -> float:
    """Best achievable gain |h^H Phi H w|^2 by exhaustive phase search.

    Uses the matched-filter beamformer per phase choice, so the value is
    max over phases of ||h^H Phi H||^2.  A common phase shift leaves the
    objective unchanged, so the first phase is pinned to zero; practical up
    to 3 reflecting elements.
    """
    nr = len(h)
    if nr > 3:
        raise ValueError("exhaustive grid is limited to Nr <= 3")
    rows = np.conj(h)[:, None] * h_mat          # (Nr, Ns)
    if nr == 1:
        return float(np.linalg.norm(rows[0]) ** 2)
    grid = np.exp(1j * 2.0 * np.pi * np.arange(steps) / steps)
    if nr == 2:
        combo = rows[0][None, :] + grid[:, None] * rows[1][None, :]
        return float(np.max(np.sum(np.abs(combo) ** 2, axis=1)))
    best = 0.0
    for g1 in grid:
        combo = (rows[0] + g1 * rows[1])[None, :] + grid[:, None] * rows[2][None, :]
        best = max(best, float(np.max(np.sum(np.abs(combo) ** 2, axis=1))))
    return best


def restart_best_gain(
    h: np.ndarray,
    h_mat: np.ndarray,
    cfg: SystemConfig,
    rng: np.random.Generator,
    restarts: int = 200,
) -> float:
    """Multi-start reference for sizes the exhaustive grid cannot reach."""
    from .beamforming import algorithm1
    from .channels import ChannelSet

    ch = ChannelSet(
        h_rs=h_mat,
        h_ru1=h,
        h_ru2=h,
        h_re=(),
        var_rs=1.0,
        var_u1=1.0,
        var_u2=1.0,
        var_re=(),
    )
    best = 0.0
    for i in range(restarts):
        phases0 = None if i == 0 else rng.uniform(0.0, 2.0 * np.pi, len(h))
        _, trace = algorithm1(ch, cfg, target=2, phases0=phases0)
        best = max(best, trace.h2_values[-1])
    return best


def grid_alpha_best(
    h1: float, h2: float, psi: float, cfg: SystemConfig, points: int = 2_000_000
) -> float | None:
    """Feasible alpha maximizing the internal-eavesdropper objective, found
    by a dense 1-D grid; None when no grid point is feasible."""
    p, n0 = cfg.p, cfg.n0
    alpha = np.linspace(0.0, 1.0, points + 1)[1:-1]
    g1_x1 = h1 * (1.0 - alpha) * psi * p / (h1 * alpha * psi * p + n0)
    g2_x2 = h2 * alpha * psi * p / n0
    ok = (g1_x1 >= cfg.gamma1_th) & (g2_x2 >= cfg.gamma2_th)
    if not ok.any():
        return None
    objective = (h2 * alpha * psi * p + n0) / (h1 * alpha * psi * p + n0)
    objective = np.where(ok, objective, -np.inf)
    return float(alpha[int(np.argmax(objective))])


def grid_psi_alpha_best(
    h1: float,
    h2: float,
    he1: float,
    he2: float,
    nv: int,
    cfg: SystemConfig,
    points: int = 1000,
) -> tuple[float, float, float]:
    """Maximum of the external-eavesdropping secrecy objective on a dense
    (psi, alpha) grid with feasibility masking; returns (f, psi, alpha)."""
    p, n0 = cfg.p, cfg.n0
    psi = np.linspace(0.0, 1.0, points + 1)[1:]          # (0, 1]
    alpha = np.linspace(0.0, 1.0, points + 2)[1:-1]      # (0, 1)
    pg, ag = np.meshgrid(psi, alpha, indexing="ij")
    sp = pg * p
    g1_x1 = h1 * (1.0 - ag) * sp / (h1 * ag * sp + n0)
    g2_x2 = h2 * ag * sp / n0
    ok = (g1_x1 >= cfg.gamma1_th) & (g2_x2 >= cfg.gamma2_th)
    g1_x2 = h1 * ag * sp / n0
    ge_x2 = he1 * ag * sp / ((1.0 - pg) * p / nv * he2 + n0)
    val = np.log2(1.0 + g2_x2) - np.log2(1.0 + np.maximum(g1_x2, ge_x2))
    val = np.where(ok, val, -np.inf)
    idx = np.unravel_index(int(np.argmax(val)), val.shape)
    return float(val[idx]), float(pg[idx]), float(ag[idx])


def random_nullspace_best(
    d: np.ndarray,
    c1: np.ndarray,
    c2: np.ndarray,
    rng: np.random.Generator,
    samples: int = 10_000,
) -> float:
    """max |d^T t| over random unit t constrained by c1^T t = c2^T t = 0."""
    ns = len(d)
    basis = []
    for c in (np.conj(c1), np.conj(c2)):
        u = c.astype(complex)
        for b in basis:
            u = u - np.vdot(b, u) * b
        n = np.linalg.norm(u)
        if n > 1e-12 * np.linalg.norm(c):
            basis.append(u / n)
    u_mat = np.column_stack(basis)
    p = rng.normal(size=(samples, ns)) + 1j * rng.normal(size=(samples, ns))
    p = p - (p @ np.conj(u_mat)) @ u_mat.T
    norms = np.linalg.norm(p, axis=1, keepdims=True)
    t = p / norms
    return float(np.max(np.abs(t @ d)))


def golden_section_max(f, lo: float, hi: float, tol: float = 1e-10) -> float:
    """Argmax of a unimodal scalar function on [lo, hi]."""
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
