"""Weak separation oracle for the epigraph body ``K(f)``.

``K(f)`` is the set of ``(x, t)`` with ``|x|_inf <= R``, ``f(x) <= t <= t_max``.
A query either lands within ``eps`` of the body or is separated from it by
a halfspace whose normal has Euclidean norm at least one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import mpmath

from .._rational import as_fraction
from ..coercivity import BoundBundle
from ..errors import InputError
from ..exponent_core import as_integerized
from . import _pycore
from .backend import default_precision


@dataclass(frozen=True)
class NearFeasible:
    point: Tuple[Fraction, ...]


@dataclass(frozen=True)
class Halfspace:
    """``c.w <= c.query + slack`` for every ``w`` in the body."""

    normal: Tuple[Fraction, ...]
    slack: Fraction
    case: str


def grad_bits_for(n: int, R, eps) -> int:
    """Grid exponent for rounding branch gradients.

    Rounding every coordinate to ``2**-bits`` keeps the l1 error below
    ``eps / (2 R)``; 64 bits suffice unless ``n R / eps`` is huge.
    """
    need = math.log2(max(n, 1)) + math.log2(max(float(R), 1.0)) - math.log2(float(eps))
    return max(64, math.ceil(need) + 4)


def flat_layout(base):
    """Branch offsets, integer exponent rows and weights in loop order."""
    offsets, rows, weights = [0], [], []
    for b in base.branches:
        for a, w in zip(b.exponents, b.weights):
            rows.append([int(c) for c in a])
            weights.append(int(w))
        offsets.append(len(rows))
    return offsets, rows, weights


def _evaluate(rows, logw, offsets, y):
    best = None
    for j in range(len(offsets) - 1):
        v, w = _pycore.branch_value(rows, logw, offsets[j], offsets[j + 1], y)
        if best is None or v > best[0]:
            best = (v, j, w)
    return best


def weak_separation(f, bundle: BoundBundle, z, eps, precision: int | None = None):
    """Separate the query ``z = (y, s)`` from ``K(f)`` or certify it is near.

    Parameters
    ----------
    f : IntegerizedProblem or MaxLogSumExp
        Integer instance (rational data is integerized first).
    bundle : BoundBundle
        Bounds of ``f``; supplies ``R`` and ``t_max``.
    z : sequence
        Rational query of length ``n + 1``.
    eps : rational
        Oracle precision.

    Returns
    -------
    NearFeasible or Halfspace
        Case (a) gives ``sgn(y_i) e_i`` at the largest coordinate, case (b1)
        gives ``e_{n+1}``, case (b3) gives ``(e, -1)`` with ``e`` a dyadic
        rounding of the lowest-index active branch gradient.
    """
    prob = as_integerized(f)
    base = prob.base
    n = base.n
    eps = as_fraction(eps)
    if eps <= 0:
        raise InputError("eps must be positive")
    z = [as_fraction(v) for v in z]
    if len(z) != n + 1:
        raise InputError(f"query must have length {n + 1}")
    y, s = z[:n], z[n]
    R, t_max = bundle.R, bundle.t_max

    if n:
        i = max(range(n), key=lambda k: (abs(y[k]), -k))
        if abs(y[i]) >= R:
            normal = [Fraction(0)] * (n + 1)
            normal[i] = Fraction(1 if y[i] > 0 else -1)
            return Halfspace(tuple(normal), eps, "a")
    if s >= t_max:
        return Halfspace((Fraction(0),) * n + (Fraction(1),), eps, "b1")

    offsets, rows, weights = flat_layout(base)
    prec = default_precision() if precision is None else precision
    with mpmath.workprec(prec + 16):
        logw = [mpmath.log(w) for w in weights]
        ym = [mpmath.mpf(q.numerator) / q.denominator for q in y]
        fy, k, w = _evaluate(rows, logw, offsets, ym)
        if mpmath.mpf(s.numerator) / s.denominator >= fy - mpmath.mpf(eps.numerator) / eps.denominator:
            return NearFeasible(tuple(z))
        bits = grad_bits_for(n, R, eps)
        lo = offsets[k]
        e = []
        for col in range(n):
            g = mpmath.fsum(wk * rows[lo + r][col] for r, wk in enumerate(w))
            e.append(Fraction(int(mpmath.nint(mpmath.ldexp(g, bits))), 1 << bits))
    return Halfspace(tuple(e) + (Fraction(-1),), eps, "b3")


__all__ = ["Halfspace", "NearFeasible", "flat_layout", "grad_bits_for", "weak_separation"]
