# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel for the alternating phase/beamformer iteration.

Same contract as ``_alg1_py.alternating_iteration``; this version avoids
temporary arrays inside the loop, which dominates Monte Carlo runtime.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan2, cos, sin, sqrt, fabs, fmod, M_PI

BACKEND = "cython"


def alternating_iteration(h, h_mat, double eps, int max_iters, phases0=None):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] hc = np.conj(np.ascontiguousarray(h, dtype=np.complex128))
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] H = np.ascontiguousarray(h_mat, dtype=np.complex128)
    cdef int nr = H.shape[0]
    cdef int ns = H.shape[1]

    cdef cnp.ndarray[cnp.float64_t, ndim=1] beta = np.angle(hc)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] phi
    if phases0 is None:
        phi = -beta
    else:
        phi = np.asarray(phases0, dtype=np.float64).copy()

    cdef cnp.ndarray[cnp.complex128_t, ndim=1] row = np.empty(nr, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] q = np.empty(ns, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] w = np.empty(ns, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] hw = np.empty(nr, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] trace = np.empty(max_iters, dtype=np.float64)

    cdef double prev = 0.0
    cdef double h2 = 0.0
    cdef double qn2, qn
    cdef bint converged = False
    cdef int it, i, j, n_vals = 0
    cdef double complex acc, s

    for it in range(max_iters):
        # row_i = conj(h)_i * e^{j phi_i}; q = row @ H
        for i in range(nr):
            row[i] = hc[i] * (cos(phi[i]) + 1j * sin(phi[i]))
        qn2 = 0.0
        for j in range(ns):
            acc = 0.0
            for i in range(nr):
                acc = acc + row[i] * H[i, j]
            q[j] = acc
            qn2 += acc.real * acc.real + acc.imag * acc.imag
        if qn2 == 0.0:
            raise ZeroDivisionError("all-zero effective channel")
        qn = sqrt(qn2)
        for j in range(ns):
            w[j] = (q[j].real - 1j * q[j].imag) / qn
        h2 = qn2
        trace[n_vals] = h2
        n_vals += 1
        if fabs(h2 - prev) < eps:
            converged = True
            break
        prev = h2
        for i in range(nr):
            acc = 0.0
            for j in range(ns):
                acc = acc + H[i, j] * w[j]
            hw[i] = acc
            phi[i] = -beta[i] - atan2(acc.imag, acc.real)

    for i in range(nr):
        phi[i] = fmod(phi[i], 2.0 * M_PI)
        if phi[i] < 0.0:
            phi[i] += 2.0 * M_PI
    return phi, w, trace[:n_vals].copy(), converged
