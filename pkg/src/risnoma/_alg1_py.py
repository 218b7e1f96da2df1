"""Pure-numpy implementation of the alternating phase/beamformer iteration.

Functionally identical to the compiled kernel in ``_alg1_cy``; selected at
import time by :mod:`risnoma.beamforming` when the extension is unavailable
or ``RISNOMA_PURE_PYTHON=1``.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def alternating_iteration(
    h: np.ndarray,
    h_mat: np.ndarray,
    eps: float,
    max_iters: int,
    phases0: np.ndarray | None = None,
):
    """Alternately align RIS phases and re-match the transmit beamformer.

    ``h`` is the target user's RIS-side channel (length Nr), ``h_mat`` the
    BS->RIS matrix (Nr x Ns).  Returns ``(phases, w, trace, converged)`` where
    ``trace`` holds the objective value after every beamformer update.
    """
    hc = np.conj(h)                       # row of h^H
    beta = np.angle(hc)
    phi = -beta if phases0 is None else np.asarray(phases0, dtype=float).copy()

    trace = []
    prev = 0.0
    converged = False
    w = None
    for _ in range(max_iters):
        q = (hc * np.exp(1j * phi)) @ h_mat
        qn = np.linalg.norm(q)
        if qn == 0.0:
            raise ZeroDivisionError("all-zero effective channel")
        w = np.conj(q) / qn
        h2 = float(qn * qn)               # == |q w|^2 for the matched w
        trace.append(h2)
        if abs(h2 - prev) < eps:
            converged = True
            break
        prev = h2
        theta = np.angle(h_mat @ w)
        phi = -beta - theta

    phi = np.mod(phi, 2.0 * np.pi)
    return phi, w, np.asarray(trace), converged
