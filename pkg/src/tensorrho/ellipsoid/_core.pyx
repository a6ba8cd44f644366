# cython: language_level=3
"""Compiled binary128 ellipsoid loop (see ellipsoid_core.c)."""

from libc.stdlib cimport malloc, free
from libc.string cimport memset

import numpy as np

cdef extern from "ellipsoid_core.h":
    int ELL_STR
    ctypedef struct ell_input:
        int n
        int nbranch
        const int *offsets
        const double *exps
        const char *const *logw
        const char *R
        const char *tmax
        const char *tbar
        const char *R2
        const char *eps_oracle
        const char *eps_gap
        long max_iter
        int grad_bits
    ctypedef struct ell_output:
        int status
        long iterations
        long cases[4]
        int regularized
        char upper[64]
        char lower[64]
        char *x_best
        double *trace_upper
        double *trace_lower
        double *trace_logdet
        long trace_cap
    int ell_minimize(const ell_input *inp, ell_output *out) nogil

PRECISION_BITS = 113


def run(int n, offsets, exps, logw, str R, str tmax, str tbar, str R2,
        str eps_oracle, str eps_gap, long max_iter, int grad_bits, bint trace=False):
    """Run the loop; reals are decimal strings in and out."""
    cdef int nbranch = len(offsets) - 1
    cdef int[::1] off = np.ascontiguousarray(offsets, dtype=np.intc)
    cdef double[::1] ex = np.ascontiguousarray(np.asarray(exps, dtype=float).ravel())
    cdef int M = len(logw)
    if off[nbranch] != M or ex.shape[0] != M * n:
        raise ValueError("inconsistent branch layout")

    enc_logw = [s.encode() for s in logw]
    enc = [s.encode() for s in (R, tmax, tbar, R2, eps_oracle, eps_gap)]
    cdef const char **lw = <const char **>malloc(sizeof(char *) * max(M, 1))
    cdef char *xbuf = <char *>malloc(ELL_STR * max(n, 1))
    cdef ell_input inp
    cdef ell_output out
    cdef long cap = max_iter if trace else 0
    tu = np.zeros(cap)
    tl = np.zeros(cap)
    td = np.zeros(cap)
    cdef double[::1] tu_v = tu
    cdef double[::1] tl_v = tl
    cdef double[::1] td_v = td
    try:
        for k in range(M):
            lw[k] = enc_logw[k]
        inp.n = n
        inp.nbranch = nbranch
        inp.offsets = &off[0]
        inp.exps = &ex[0]
        inp.logw = lw
        inp.R = enc[0]
        inp.tmax = enc[1]
        inp.tbar = enc[2]
        inp.R2 = enc[3]
        inp.eps_oracle = enc[4]
        inp.eps_gap = enc[5]
        inp.max_iter = max_iter
        inp.grad_bits = grad_bits
        memset(&out, 0, sizeof(ell_output))
        out.x_best = xbuf
        out.trace_cap = cap
        if cap:
            out.trace_upper = &tu_v[0]
            out.trace_lower = &tl_v[0]
            out.trace_logdet = &td_v[0]
        with nogil:
            ell_minimize(&inp, &out)
        x = [xbuf[i * ELL_STR:(i + 1) * ELL_STR].split(b"\0", 1)[0].decode() for i in range(n)]
        result = {
            "status": out.status,
            "iterations": out.iterations,
            "cases": tuple(out.cases[i] for i in range(4)),
            "regularized": bool(out.regularized),
            "upper": out.upper.decode(),
            "lower": out.lower.decode(),
            "x_best": x,
        }
        if trace:
            it = out.iterations
            result["trace_upper"] = tu[:it].copy()
            result["trace_lower"] = tl[:it].copy()
            result["trace_logdet"] = td[:it].copy()
        return result
    finally:
        free(lw)
        free(xbuf)
