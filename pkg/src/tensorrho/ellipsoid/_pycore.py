"""Pure-Python (mpmath) twin of the compiled ellipsoid loop.

Same arguments, same results layout as ``_core.run``; the working precision
is a parameter instead of fixed binary128.
"""

from __future__ import annotations

import mpmath
import numpy as np
from mpmath import mpf

PRECISION_BITS = 128


def branch_value(exps, logw, lo: int, hi: int, y):
    """Return ``(value, softmax weights)`` of one branch at ``y``."""
    terms = []
    for k in range(lo, hi):
        t = logw[k]
        for a, yi in zip(exps[k], y):
            if a:
                t += a * yi
        terms.append(t)
    m = max(terms)
    e = [mpmath.exp(t - m) for t in terms]
    s = mpmath.fsum(e)
    return m + mpmath.log(s), [v / s for v in e]


def central_cut(center, P, c):
    """One central-cut update keeping ``{z : c.z <= c.center}``; returns (center, P)."""
    N = len(center)
    Pc = [mpmath.fsum(P[i][j] * c[j] for j in range(N)) for i in range(N)]
    cPc = mpmath.fsum(ci * v for ci, v in zip(c, Pc))
    if not cPc > 0:
        raise ArithmeticError("shape matrix lost positive definiteness")
    root = mpmath.sqrt(cPc)
    g = [v / root for v in Pc]
    expand = mpf(N * N) / (N * N - 1)
    shrink = mpf(2) / (N + 1)
    new_center = [ci - gi / (N + 1) for ci, gi in zip(center, g)]
    newP = [[None] * N for _ in range(N)]
    for i in range(N):
        for j in range(i + 1):
            v = expand * (P[i][j] - shrink * g[i] * g[j])
            newP[i][j] = newP[j][i] = v
    return new_center, newP


def cholesky_logdet(P):
    """log det of P via Cholesky, or None if P is not numerically positive definite."""
    N = len(P)
    L = [[mpf(0)] * N for _ in range(N)]
    acc = mpf(0)
    for i in range(N):
        for j in range(i + 1):
            s = P[i][j] - mpmath.fsum(L[i][k] * L[j][k] for k in range(j))
            if i == j:
                if not s > 0:
                    return None
                L[i][i] = mpmath.sqrt(s)
                acc += mpmath.log(s)
            else:
                L[i][j] = s / L[j][j]
    return acc


def run(n, offsets, exps, logw, R, tmax, tbar, R2, eps_oracle, eps_gap,
        max_iter, grad_bits, trace=False, prec=PRECISION_BITS):
    with mpmath.workprec(prec):
        return _run(n, list(offsets), np.asarray(exps, dtype=float).reshape(-1, n).tolist(),
                    logw, R, tmax, tbar, R2, eps_oracle, eps_gap, max_iter, grad_bits, trace)


def _run(n, offsets, exps, logw, R, tmax, tbar, R2, eps_oracle, eps_gap,
         max_iter, grad_bits, trace):
    N = n + 1
    exps = [[int(a) for a in row] for row in exps]
    logw = [mpf(s) for s in logw]
    R, tmax, tbar, R2 = mpf(R), mpf(tmax), mpf(tbar), mpf(R2)
    eps_o, eps_g = mpf(eps_oracle), mpf(eps_gap)
    nbranch = len(offsets) - 1

    center = [mpf(0)] * n + [tbar]
    P = [[R2 * R2 if i == j else mpf(0) for j in range(N)] for i in range(N)]
    xbest = [mpf(0)] * n
    upper, lower, ceiling = mpmath.inf, -mpmath.inf, tmax
    status, regularized = 1, False
    cases = [0, 0, 0, 0]
    tu, tl, td = [], [], []

    it = 0
    while it < max_iter:
        y, s = center[:n], center[n]
        imax = max(range(n), key=lambda i: (abs(y[i]), -i))
        c = [mpf(0)] * N
        if abs(y[imax]) >= R:
            c[imax] = mpf(1) if y[imax] > 0 else mpf(-1)
            cases[0] += 1
        elif s >= tmax:
            c[n] = mpf(1)
            cases[1] += 1
        else:
            fy, kbest, wbest = None, 0, None
            for j in range(nbranch):
                v, w = branch_value(exps, logw, offsets[j], offsets[j + 1], y)
                if fy is None or v > fy:
                    fy, kbest, wbest = v, j, w
            if fy < upper:
                upper = fy
                xbest = list(y)
            if s >= fy - eps_o:
                c[n] = mpf(1)
                if s < upper:  # t <= s can only lose the optimum when s < upper
                    ceiling = min(ceiling, s)
                cases[2] += 1
            else:
                lo = offsets[kbest]
                for i in range(n):
                    g = mpmath.fsum(wk * exps[lo + k][i] for k, wk in enumerate(wbest))
                    c[i] = mpmath.ldexp(mpmath.nint(mpmath.ldexp(g, grad_bits)), -grad_bits)
                c[n] = mpf(-1)
                cases[3] += 1
        try:
            center, P = central_cut(center, P, c)
        except ArithmeticError:
            status = 2
            break
        logdet = cholesky_logdet(P)
        if logdet is None:
            if regularized:
                status = 2
                break
            tr = mpmath.fsum(P[i][i] for i in range(N))
            for i in range(N):
                P[i][i] += mpmath.ldexp(tr, -60)
            regularized = True
            logdet = cholesky_logdet(P)
            if logdet is None:
                status = 2
                break
        lb = min(center[n] - mpmath.sqrt(P[n][n]), ceiling)
        lower = max(lower, lb)
        if trace:
            tu.append(float(upper))
            tl.append(float(lower))
            td.append(float(logdet))
        it += 1
        if upper - lower <= eps_g:
            status = 0
            break

    def fmt(v):
        return mpmath.nstr(v, max(40, mpmath.mp.dps + 3), strip_zeros=False, min_fixed=1, max_fixed=0)

    out = {
        "status": status,
        "iterations": it,
        "cases": tuple(cases),
        "regularized": regularized,
        "upper": fmt(upper),
        "lower": fmt(lower),
        "x_best": [fmt(v) for v in xbest],
    }
    if trace:
        out["trace_upper"] = np.array(tu)
        out["trace_lower"] = np.array(tl)
        out["trace_logdet"] = np.array(td)
    return out
