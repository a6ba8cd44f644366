"""Max of log-Laplace transforms of finite positive measures.

A branch is ``x -> log sum_a w_a exp(a.x)`` over a finite exponent set; the
objective is the pointwise maximum of finitely many branches.  Data is kept
exactly (Fractions); evaluation is float64 with max-shift stabilization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._rational import DEFAULT_BITS, as_fraction, lcm_all, log_bracket
from .errors import InputError

DEFAULT_ACTIVE_TOL = 2.0**-40


def _log_fraction(q: Fraction) -> float:
    return math.log(q.numerator) - math.log(q.denominator)


class PosExponentSum:
    """One branch: exponent vectors in Q^n with positive rational weights.

    Duplicate exponents are merged by adding their weights.
    """

    __slots__ = ("exponents", "weights", "n", "_A", "_logw")

    def __init__(self, exponents, weights, n: int | None = None):
        exponents = [tuple(as_fraction(c) for c in a) for a in exponents]
        weights = [as_fraction(w) for w in weights]
        if not exponents:
            raise InputError("a branch needs at least one exponent")
        if len(exponents) != len(weights):
            raise InputError("exponents and weights differ in length")
        if n is None:
            n = len(exponents[0])
        if n < 1:
            raise InputError("ambient dimension must be at least 1")
        merged: dict = {}
        for a, w in zip(exponents, weights):
            if len(a) != n:
                raise InputError(f"exponent {a} has length {len(a)}, expected {n}")
            if w <= 0:
                raise InputError(f"weight {w} is not positive")
            merged[a] = merged.get(a, Fraction(0)) + w
        self.exponents = tuple(merged)
        self.weights = tuple(merged.values())
        self.n = n
        self._A = np.array([[float(c) for c in a] for a in self.exponents], dtype=float)
        self._logw = np.array([_log_fraction(w) for w in self.weights], dtype=float)

    def __len__(self):
        return len(self.exponents)

    def __repr__(self):
        return f"PosExponentSum(n={self.n}, m={len(self)})"

    def __eq__(self, other):
        if not isinstance(other, PosExponentSum):
            return NotImplemented
        return dict(zip(self.exponents, self.weights)) == dict(
            zip(other.exponents, other.weights)
        )

    def __hash__(self):
        return hash(frozenset(zip(self.exponents, self.weights)))

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for a in self.exponents for c in a) and all(
            w.denominator == 1 for w in self.weights
        )


def _check_x(x, n: int) -> np.ndarray:
    x = np.asarray([float(v) for v in x], dtype=float)
    if x.shape != (n,):
        raise InputError(f"point has length {x.shape[0] if x.ndim else 0}, expected {n}")
    return x


def _branch_terms(b: PosExponentSum, x: np.ndarray) -> np.ndarray:
    return b._logw + b._A @ x


def eval_branch(b: PosExponentSum, x) -> float:
    """``log sum_a w_a exp(a.x)`` with the largest exponent shifted out."""
    x = _check_x(x, b.n)
    terms = _branch_terms(b, x)
    m = terms.max()
    return float(m + math.log(np.exp(terms - m).sum()))


def softmax_weights(b: PosExponentSum, x) -> np.ndarray:
    x = _check_x(x, b.n)
    terms = _branch_terms(b, x)
    p = np.exp(terms - terms.max())
    return p / p.sum()


def grad_branch(b: PosExponentSum, x) -> np.ndarray:
    """Softmax-weighted mean of the exponents; lies in their convex hull."""
    return softmax_weights(b, x) @ b._A


@dataclass(frozen=True)
class MaxLogSumExp:
    """``f(x) = max_j branch_j(x)`` with cached normalization metadata.

    ``t_min`` is a rational lower bound of the smallest log weight and
    ``a_max`` the exact largest l1 norm of an exponent.
    """

    branches: tuple
    n: int = field(init=False)
    t_min: Fraction = field(init=False)
    a_max: Fraction = field(init=False)

    def __post_init__(self):
        branches = tuple(self.branches)
        if not branches:
            raise InputError("need at least one branch")
        n = branches[0].n
        if any(b.n != n for b in branches):
            raise InputError("branches disagree on the dimension")
        object.__setattr__(self, "branches", branches)
        object.__setattr__(self, "n", n)
        wmin = min(w for b in branches for w in b.weights)
        object.__setattr__(self, "t_min", log_bracket(wmin, DEFAULT_BITS)[0])
        object.__setattr__(
            self,
            "a_max",
            max(sum(abs(c) for c in a) for b in branches for a in b.exponents),
        )

    @classmethod
    def from_data(cls, branches: Sequence[tuple], n: int | None = None) -> "MaxLogSumExp":
        """Build from ``[(exponents, weights), ...]``."""
        return cls(tuple(PosExponentSum(e, w, n) for e, w in branches))

    @property
    def N(self) -> int:
        return len(self.branches)

    def exponent_union(self) -> list:
        seen: dict = {}
        for b in self.branches:
            for a in b.exponents:
                seen.setdefault(a, None)
        return list(seen)

    @property
    def is_integral(self) -> bool:
        return all(b.is_integral for b in self.branches)

    def __call__(self, x) -> float:
        return eval_f(self, x)[0]


def branch_values(f: MaxLogSumExp, x) -> np.ndarray:
    x = _check_x(x, f.n)
    out = np.empty(f.N)
    for j, b in enumerate(f.branches):
        terms = _branch_terms(b, x)
        m = terms.max()
        out[j] = m + math.log(np.exp(terms - m).sum())
    return out


def eval_f(f: MaxLogSumExp, x, active_tol: float = DEFAULT_ACTIVE_TOL):
    """Return ``(value, active)`` where ``active`` lists the (0-based) branches
    within ``active_tol * max(1, |value|)`` of the maximum."""
    vals = branch_values(f, x)
    value = float(vals.max())
    tol = active_tol * max(1.0, abs(value))
    active = tuple(int(j) for j in np.flatnonzero(vals >= value - tol))
    return value, active


def eval_f_batch(f: MaxLogSumExp, X: np.ndarray) -> np.ndarray:
    """Vectorized objective over the rows of ``X``."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    best = np.full(X.shape[0], -np.inf)
    for b in f.branches:
        terms = X @ b._A.T + b._logw
        m = terms.max(axis=1)
        val = m + np.log(np.exp(terms - m[:, None]).sum(axis=1))
        np.maximum(best, val, out=best)
    return best


@dataclass(frozen=True)
class IntegerizedProblem:
    """Integer rescaling of a rational instance.

    ``original(x) = -log(d2) + base(x / d1)``, so minimizers map by ``x = d1 * y``.
    """

    base: MaxLogSumExp
    d1: int
    d2: int

    def offset_bracket(self, bits: int = DEFAULT_BITS):
        """Rational bracket of the additive offset ``-log d2``."""
        lo, hi = log_bracket(self.d2, bits)
        return -hi, -lo

    def offset(self, prec: int = 113):
        import mpmath

        with mpmath.workprec(prec):
            return -mpmath.log(self.d2)

    def to_base(self, x):
        return [as_fraction(v) / self.d1 for v in x]

    def from_base(self, y):
        return [as_fraction(v) * self.d1 for v in y]

    @property
    def n(self) -> int:
        return self.base.n


def integerize(f: MaxLogSumExp) -> IntegerizedProblem:
    """Clear denominators: exponents scale by their lcm, weights by theirs."""
    d1 = lcm_all(c.denominator for b in f.branches for a in b.exponents for c in a)
    d2 = lcm_all(w.denominator for b in f.branches for w in b.weights)
    branches = tuple(
        PosExponentSum(
            [tuple(c * d1 for c in a) for a in b.exponents],
            [w * d2 for w in b.weights],
            f.n,
        )
        for b in f.branches
    )
    return IntegerizedProblem(MaxLogSumExp(branches), d1, d2)


def as_integerized(f) -> IntegerizedProblem:
    if isinstance(f, IntegerizedProblem):
        return f
    if isinstance(f, MaxLogSumExp):
        return integerize(f)
    raise InputError(f"expected MaxLogSumExp or IntegerizedProblem, got {type(f).__name__}")
