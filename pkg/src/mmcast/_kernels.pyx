# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled max-min beam kernel. Must stay arithmetic-identical to _kernels_py."""
import numpy as np
from libc.math cimport fabs, fmod, pow, log2


def beam_min_rates(const double[::1] base_dbm, const double[::1] dir_deg,
                   const double[::1] boresight, const double[::1] theta3,
                   const double[::1] half_ml, const double[::1] g0,
                   const double[::1] gsl, double noise_dbm, double eta_w_hz):
    cdef Py_ssize_t nb = boresight.shape[0]
    cdef Py_ssize_t nt = base_dbm.shape[0]
    cdef Py_ssize_t b, t
    cdef double worst, p, off, x, g
    out = np.empty(nb, dtype=np.float64)
    cdef double[::1] rates = out
    for b in range(nb):
        worst = 1e308
        for t in range(nt):
            off = fabs(fmod(dir_deg[t] - boresight[b], 360.0))
            if off > 180.0:
                off = 360.0 - off
            if off < half_ml[b]:
                x = 2.0 * off / theta3[b]
                g = g0[b] - 3.01 * x * x
            else:
                g = gsl[b]
            p = base_dbm[t] + g
            if p < worst:
                worst = p
        rates[b] = eta_w_hz * log2(1.0 + pow(10.0, (worst - noise_dbm) / 10.0))
    return out
