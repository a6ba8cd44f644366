"""Central-cut ellipsoid minimization of the altitude over ``K(f)``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

import mpmath

from .._rational import as_fraction, fraction_to_decimal, log_bracket
from ..coercivity import BoundBundle, bound_bundle
from ..errors import InputError, PrecisionError, UnsupportedError
from ..exponent_core import as_integerized
from . import _pycore
from .backend import select_backend
from .oracle import flat_layout, grad_bits_for

_MAX_EXACT_DOUBLE = 2**53


@dataclass(frozen=True)
class Ellipsoid:
    """``{z : (z - center)^T shape^{-1} (z - center) <= 1}`` in mpmath numbers."""

    center: tuple
    shape: tuple

    @classmethod
    def ball(cls, center, radius) -> "Ellipsoid":
        N = len(center)
        r2 = mpmath.mpf(radius) ** 2
        shape = tuple(tuple(r2 if i == j else mpmath.mpf(0) for j in range(N)) for i in range(N))
        return cls(tuple(mpmath.mpf(c) for c in center), shape)

    def cut(self, normal) -> "Ellipsoid":
        """Smallest ellipsoid containing the half ``{normal.(z - center) <= 0}``."""
        c = [mpmath.mpf(v.numerator) / v.denominator if isinstance(v, Fraction) else mpmath.mpf(v)
             for v in normal]
        center, P = _pycore.central_cut(list(self.center), [list(r) for r in self.shape], c)
        return Ellipsoid(tuple(center), tuple(tuple(r) for r in P))

    def logdet(self):
        v = _pycore.cholesky_logdet([list(r) for r in self.shape])
        if v is None:
            raise PrecisionError("shape matrix is not numerically positive definite")
        return v

    def contains(self, z) -> bool:
        P = mpmath.matrix([list(r) for r in self.shape])
        d = mpmath.matrix([mpmath.mpf(a) - b for a, b in zip(z, self.center)])
        return (d.T * mpmath.lu_solve(P, d))[0] <= 1


@dataclass(frozen=True)
class AltitudeResult:
    """Outcome of one ellipsoid run on an integer instance.

    The certified bracket ``lower <= f_min <= upper`` has width at most
    ``eps`` and ``t_star`` is its midpoint.  Unpacks as
    ``(t_star, x_star, iterations)``.
    """

    t_star: Fraction
    x_star: Tuple[Fraction, ...]
    iterations: int
    lower: Fraction
    upper: Fraction
    eps: Fraction
    backend: str
    precision: int
    cases: Tuple[int, ...] = (0, 0, 0, 0)
    regularized: bool = False
    iteration_cap: int = 0
    trace: Optional[dict] = field(default=None, compare=False, repr=False)

    def __iter__(self):
        return iter((self.t_star, self.x_star, self.iterations))


def iteration_cap(bundle: BoundBundle, eps) -> int:
    """``2(n+1)(n+2) ln(R2 (a_f+2) / (eps min(R/2, 1)))`` plus a safety margin."""
    n, eps = bundle.n, float(eps)
    ratio = float(bundle.R2) * (float(bundle.a_f) + 2) / (eps * min(float(bundle.R) / 2, 1.0))
    base = 2 * (n + 1) * (n + 2) * math.log(max(ratio, math.e))
    return int(math.ceil(base * 1.5)) + 20 * (n + 1) * (n + 2) + 100


def _trivial_result(bundle: BoundBundle, eps: Fraction) -> AltitudeResult:
    bits = max(64, int(math.ceil(-math.log2(float(eps)))) + 8)
    lo, hi = log_bracket(bundle.trivial_weight, bits)
    return AltitudeResult((lo + hi) / 2, (Fraction(0),) * bundle.n, 0, lo, hi, eps,
                          "closed-form", bits)


def _to_fraction(text: str) -> Optional[Fraction]:
    t = text.strip().lower()
    if "inf" in t or "nan" in t:
        return None
    return Fraction(t)


def minimize_altitude(f, bundle: BoundBundle | None = None, eps=Fraction(1, 10**6), *,
                      precision: int | None = None, backend: str = "auto",
                      trace: bool = False, max_iter: int | None = None) -> AltitudeResult:
    """Minimize ``t`` over ``K(f)`` for an integer instance.

    Parameters
    ----------
    f : IntegerizedProblem or MaxLogSumExp
        Rational data is integerized first; the result refers to the
        integer problem (the offset ``-log d2`` is not applied).
    bundle : BoundBundle, optional
        Precomputed bounds; computed when omitted.
    eps : rational
        Target accuracy of ``t_star``.  The oracle runs at ``eps/2``.
    precision : int, optional
        Working bits; defaults to binary128 (or ``PRECISION_BITS``).
    backend : {"auto", "compiled", "python"}
    trace : bool
        Record per-iteration upper bound, lower bound and ``log det``.

    Raises
    ------
    PrecisionError
        The iteration cap was hit or the shape matrix broke down.
    """
    prob = as_integerized(f)
    base = prob.base
    eps = as_fraction(eps)
    if eps <= 0:
        raise InputError("eps must be positive")
    if bundle is None:
        bundle = bound_bundle(prob)
    if bundle.trivial:
        return _trivial_result(bundle, eps)

    n = base.n
    offsets, rows, weights = flat_layout(base)
    if any(abs(c) >= _MAX_EXACT_DOUBLE for r in rows for c in r):
        raise UnsupportedError("integer exponents beyond 2**53 are not supported")
    name, run, prec = select_backend(precision, backend)
    digits = max(40, int(prec * 0.30103) + 6)
    with mpmath.workprec(prec + 32):
        logw = [mpmath.nstr(mpmath.log(w), digits, strip_zeros=False) for w in weights]

    def dec(q):
        return fraction_to_decimal(Fraction(q), digits)

    cap = iteration_cap(bundle, eps) if max_iter is None else int(max_iter)
    out = run(
        n, offsets, [c for r in rows for c in r], logw,
        dec(bundle.R), dec(bundle.t_max), dec(bundle.t_bar), dec(bundle.R2),
        dec(eps / 2), dec(eps), cap, grad_bits_for(n, bundle.R, eps / 2), trace,
    )
    status = out["status"]
    if status != 0:
        what = "iteration cap reached" if status == 1 else "shape matrix broke down"
        raise PrecisionError(
            f"ellipsoid run did not certify eps={eps} ({what} after {out['iterations']} "
            f"iterations, {prec}-bit arithmetic); retry with a higher --precision"
        )
    upper, lower = _to_fraction(out["upper"]), _to_fraction(out["lower"])
    x_star = tuple(_to_fraction(v) for v in out["x_best"])
    tr = None
    if trace:
        tr = {k: out[k] for k in ("trace_upper", "trace_lower", "trace_logdet")}
    return AltitudeResult(
        (lower + upper) / 2, x_star, out["iterations"], lower, upper, eps, name, prec,
        tuple(out["cases"]), bool(out["regularized"]), cap, tr,
    )


@dataclass(frozen=True)
class MinimizationResult:
    """``eps``-approximate minimum of a rational instance.

    ``lower <= f_min <= upper`` and ``f(minimizer) <= value + 2 eps``.
    """

    value: Fraction
    lower: Fraction
    upper: Fraction
    minimizer: Tuple[Fraction, ...]
    eps: Fraction
    altitude: AltitudeResult


def glp_minimize(f, eps=Fraction(1, 10**6), **kw) -> MinimizationResult:
    """Minimize a rational max-of-log-sum-exp instance within ``eps``.

    Integerizes, runs :func:`minimize_altitude` and maps the value and the
    minimizer back.  Raises :class:`~tensorrho.errors.CoercivityError` when
    the infimum is not attained.
    """
    prob = as_integerized(f)
    eps = as_fraction(eps)
    bits = max(64, int(math.ceil(-math.log2(float(eps)))) + 16)
    off_lo, off_hi = prob.offset_bracket(bits)
    res = minimize_altitude(prob, eps=eps, **kw)
    x = tuple(prob.from_base(res.x_star))
    return MinimizationResult(
        res.t_star + (off_lo + off_hi) / 2, res.lower + off_lo, res.upper + off_hi, x, eps, res,
    )


__all__ = [
    "AltitudeResult",
    "Ellipsoid",
    "MinimizationResult",
    "glp_minimize",
    "iteration_cap",
    "minimize_altitude",
]
