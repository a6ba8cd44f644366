"""Coercivity certificates and the a-priori bounds that frame the ellipsoid run."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from ._rational import (
    DEFAULT_BITS,
    ceil_log,
    ceil_sqrt_int,
    floor_log,
    log_bracket,
    sqrt_upper,
)
from .errors import CoercivityError, InputError
from .exponent_core import IntegerizedProblem, MaxLogSumExp, as_integerized
from .lp import OPTIMAL, RationalLP, lp_solve


def _nu_lp(exponents, n: int, i: int, sign: int) -> Tuple[Fraction, tuple]:
    # variables (x_1..x_n, t): min t  s.t.  a.x - t <= 0,  x_i = sign, |x_j| <= 1
    objective = [0] * n + [1]
    constraints = [(list(a) + [-1], "<=", 0) for a in exponents]
    bounds = [(-1, 1)] * n + [(None, None)]
    bounds[i] = (sign, sign)
    res = lp_solve(RationalLP(objective, constraints, bounds))
    if res.status != OPTIMAL:  # bounded and feasible by construction
        raise AssertionError(f"nu LP returned {res.status}")
    return res.value, res.point[:n]


def nu_with_point(f) -> Tuple[Fraction, tuple]:
    """Linear growth rate ``min_{|x|_inf=1} max_a a.x`` and a point attaining it."""
    base = f.base if isinstance(f, IntegerizedProblem) else f
    exps = base.exponent_union()
    best = None
    for i in range(base.n):
        for sign in (1, -1):
            val, x = _nu_lp(exps, base.n, i, sign)
            if best is None or val < best[0]:
                best = (val, x)
    return best


def compute_nu(f) -> Fraction:
    """Exact value of the growth rate via ``2n`` small LPs."""
    return nu_with_point(f)[0]


def is_coercive(f) -> Tuple[bool, Optional[tuple]]:
    """``(True, None)`` if coercive, else ``(False, x0)`` with ``a.x0 <= 0`` for all a."""
    nu, x = nu_with_point(f)
    if nu > 0:
        return True, None
    return False, x


def _sorted_norms(base: MaxLogSumExp):
    return sorted((sum(c * c for c in a) for a in base.exponent_union()), reverse=True)


def hadamard_product(f) -> int:
    """``prod (|b_i|^2 + 1)`` over the n largest-norm distinct integer exponents."""
    base = f.base if isinstance(f, IntegerizedProblem) else f
    norms = _sorted_norms(base)[: base.n]
    prod = Fraction(1)
    for s in norms:
        prod *= s + 1
    if prod.denominator != 1:
        raise InputError("Hadamard bound needs integral exponents; integerize first")
    return prod.numerator


def hadamard_nu_bound(f, bits: int = DEFAULT_BITS) -> Fraction:
    """Rational lower bound ``1/omega`` of the growth rate (omega rounded up)."""
    return 1 / sqrt_upper(hadamard_product(f), bits)


@dataclass(frozen=True)
class BoundBundle:
    """Bounds used by the ellipsoid run over ``K(f)``.

    ``trivial`` flags the degenerate case ``f(0) = t_min`` in which the
    minimum is ``log(trivial_weight)`` and no search is needed.
    """

    nu: Fraction
    nu_hadamard: Fraction
    t_min: Fraction
    f0_upper: Fraction
    a_f: Fraction
    R: Fraction
    t_max: Fraction
    t_bar: Fraction
    R2: Fraction
    n: int
    ceil_f0: int
    floor_t_min: int
    trivial: bool = False
    trivial_weight: Optional[int] = None

    def t_bar_center(self):
        return (0,) * self.n + (self.t_bar,)


def bound_bundle(f, bits: int = DEFAULT_BITS) -> BoundBundle:
    """Compute the bound bundle of an integer instance.

    Raises :class:`CoercivityError` (with the recession witness) when the
    objective is not coercive and the instance is not a constant.
    """
    prob = as_integerized(f)
    base = prob.base
    if not base.is_integral:
        raise InputError("bound_bundle expects integral data")
    n = base.n
    weights = [int(w) for b in base.branches for w in b.weights]
    wmin = min(weights)
    sums = [int(sum(b.weights)) for b in base.branches]
    smax = max(sums)

    t_min = log_bracket(wmin, bits)[0]
    floor_t_min = floor_log(wmin, bits)
    ceil_f0 = ceil_log(smax, bits)
    f0_upper = min(log_bracket(smax, bits)[1], Fraction(ceil_f0))
    a_f = base.a_max

    nu, witness = nu_with_point(prob)
    nu_h = hadamard_nu_bound(prob, bits)
    trivial = smax == wmin
    if nu <= 0:
        all_zero = all(c == 0 for a in base.exponent_union() for c in a)
        if not (trivial and all_zero):
            raise CoercivityError(
                f"objective is not coercive (growth rate {nu})", witness=witness
            )
    if trivial:
        zero = Fraction(0)
        return BoundBundle(
            nu, nu_h, t_min, f0_upper, a_f, zero, Fraction(ceil_f0), Fraction(ceil_f0), zero,
            n, ceil_f0, floor_t_min, trivial=True, trivial_weight=wmin,
        )
    H = ceil_sqrt_int(hadamard_product(prob))
    R = Fraction((ceil_f0 - floor_t_min) * H)
    t_max = ceil_f0 + (a_f + 1) * R
    t_bar = ceil_f0 + (a_f + 1) * R / 2
    R2 = ceil_sqrt_int(n + 1) * ((a_f + 1) * R + ceil_f0 - floor_t_min)
    return BoundBundle(
        nu, nu_h, t_min, f0_upper, a_f, R, t_max, t_bar, Fraction(R2),
        n, ceil_f0, floor_t_min,
    )


def minimizer_box(f) -> Fraction:
    """Radius bound ``(f(0) - t_min) / nu`` on the minimizers, from the exact LP nu."""
    prob = as_integerized(f)
    b = bound_bundle(prob)
    if b.trivial:
        return Fraction(0)
    return (b.f0_upper - b.t_min) / b.nu


__all__ = [
    "BoundBundle",
    "bound_bundle",
    "compute_nu",
    "hadamard_nu_bound",
    "hadamard_product",
    "is_coercive",
    "minimizer_box",
    "nu_with_point",
]
