"""Independent oracles: brute-force optimizers, matrix power iteration and
the entropic occupation-measure identity.

Everything here is float64 and deliberately naive; it exists to check the
solver, not to compete with it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, NamedTuple, Tuple

import numpy as np

from ._perron import perron_power
from ._rational import as_fraction
from .coercivity import minimizer_box
from .errors import InputError, UnsupportedError
from .exponent_core import MaxLogSumExp, as_integerized, eval_f_batch
from .tensor_reduction import MonomialMap, NonnegForm


class GridResult(NamedTuple):
    value: float
    point: np.ndarray


# ------------------------------------------------------------------ grid oracles


def grid_error(f: MaxLogSumExp, step) -> float:
    """Worst gap between the box minimum and the grid minimum: ``|a|_1max * step / 2``."""
    return float(f.a_max) * float(step) / 2


def default_grid_radius(f: MaxLogSumExp) -> float:
    """Box radius guaranteed to contain every minimizer (from the exact growth rate)."""
    prob = as_integerized(f)
    return float(minimizer_box(prob)) * prob.d1


def grid_minimize_f(f: MaxLogSumExp, R=None, step=Fraction(1, 128), chunk: int = 1 << 20):
    """Exhaustive minimum of ``f`` on the grid ``step * Z^n`` inside ``|x|_inf <= R``.

    ``R`` defaults to :func:`default_grid_radius`.  The radius is rounded up
    to a multiple of ``step`` so the grid covers the whole box.
    """
    n = f.n
    if n > 3:
        raise UnsupportedError("grid oracle is limited to n <= 3")
    step = float(step)
    R = default_grid_radius(f) if R is None else float(R)
    k = max(0, math.ceil(R / step - 1e-12))
    if (2 * k + 1) ** n > 5 * 10**8:
        raise UnsupportedError(f"grid with {(2 * k + 1) ** n} points is too large")
    if n == 0:
        v = float(eval_f_batch(f, np.zeros((1, 0)))[0])
        return GridResult(v, np.zeros(0))
    axis = np.arange(-k, k + 1) * step
    total = axis.size**n
    best_v, best_x = math.inf, None
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk))
        X = np.empty((idx.size, n))
        rem = idx
        for j in range(n - 1, -1, -1):
            X[:, j] = axis[rem % axis.size]
            rem = rem // axis.size
        vals = eval_f_batch(f, X)
        j = int(np.argmin(vals))
        if vals[j] < best_v:
            best_v, best_x = float(vals[j]), X[j].copy()
    return GridResult(best_v, best_x)


def _simplex_grid(m: int, steps: int) -> np.ndarray:
    pts = []

    def rec(prefix, left):
        if len(prefix) == m - 1:
            pts.append(prefix + [left])
            return
        for k in range(left + 1):
            rec(prefix + [k], left - k)

    rec([], steps)
    return np.array(pts, dtype=float) / steps


def _form_grad(g: NonnegForm, z: np.ndarray) -> np.ndarray:
    grad = np.zeros_like(z)
    for a, w in g.monomials:
        a = np.array([float(v) for v in a])
        for i in np.flatnonzero(a):
            e = a.copy()
            e[i] -= 1
            grad[i] += float(w) * a[i] * np.prod(z ** e)
    return grad


def _project(z: np.ndarray, p: float) -> np.ndarray:
    z = np.clip(z, 0.0, None)
    s = float(np.sum(z**p)) ** (1 / p)
    return z / s if s > 0 else z


def grid_maximize_form(g: NonnegForm, p=None, step=Fraction(1, 64), polish_steps: int = 200):
    """Maximum of ``g`` over the nonnegative part of the unit ``p``-sphere.

    The sphere is parametrized by ``y = z^p`` on the simplex; the best grid
    point is refined by ascent along the tangent projection of the gradient whose step starts
    at ``1e-2`` and grows on success and halves on failure.
    """
    m = g.n_plus_1
    if m > 3:
        raise UnsupportedError("form grid oracle is limited to n + 1 <= 3")
    p = float(g.degree if p is None else as_fraction(p))
    steps = max(1, round(1 / float(step)))
    Y = _simplex_grid(m, steps)
    Z = Y ** (1 / p)
    vals = g.evaluate_float(Z)
    j = int(np.argmax(vals))
    z, best = Z[j].copy(), float(vals[j])
    eta = 1e-2
    for k in range(polish_steps):
        grad = _form_grad(g, z)
        normal = z ** (p - 1)  # gradient of |z|_p^p up to the factor p
        grad = grad - (grad @ normal) / (normal @ normal) * normal
        scale = float(np.linalg.norm(grad)) or 1.0
        cand = _project(z + eta * grad / scale, p)
        v = float(g.evaluate_float(cand)[0])
        if v > best:
            z, best = cand, v
            eta *= 1.5
        else:
            eta *= 0.5
    return GridResult(best, z)


def power_iteration_matrix(A, tol: float = 1e-12):
    """Perron root and positive vector (sum one) of an irreducible nonnegative matrix."""
    return perron_power(A, tol=tol)


# -------------------------------------------------------------- occupation measures

Tail = Tuple[int, ...]


def _multiplicity(tail: Tail) -> int:
    """Number of ordered index tuples with this sorted tail."""
    out = math.factorial(len(tail))
    for j in set(tail):
        out //= math.factorial(tail.count(j))
    return out


def _tail_of(a) -> Tail:
    tail = []
    for j, v in enumerate(a):
        tail.extend([j] * int(v))
    return tuple(tail)


def coefficient_tensor(F: MonomialMap) -> Dict[Tuple[int, Tail], float]:
    """Partially symmetric tensor of ``F`` keyed by ``(i, sorted tail)``.

    Each value is the entry at any one ordered tail, so that ``F_i(z)`` is
    the sum over ordered tails ``f_{i,tail} z_tail``; hence the entry is
    ``F_{i,a} a! / (d-1)!``.
    """
    if F.quasi:
        raise UnsupportedError("the tensor correspondence needs integral exponents")
    out = {}
    for i, ci in enumerate(F.coords):
        for a, w in ci:
            tail = _tail_of(a)
            out[(i, tail)] = float(w) / _multiplicity(tail)
    return out


@dataclass(frozen=True)
class OccupationMeasure:
    """Nonnegative tensor on ``[n+1]^d``, partially symmetric in the last ``d-1`` slots.

    Stored as ``{(i, sorted tail): value at one ordered tail}``.
    """

    d: int
    n_plus_1: int
    entries: Dict[Tuple[int, Tail], float]

    def weighted(self):
        for (i, tail), v in self.entries.items():
            yield i, tail, v, _multiplicity(tail)

    def mass(self) -> float:
        return math.fsum(v * m for _, _, v, m in self.weighted())

    def first_marginal(self) -> np.ndarray:
        out = np.zeros(self.n_plus_1)
        for i, _, v, m in self.weighted():
            out[i] += v * m
        return out

    def second_marginal(self) -> np.ndarray:
        """``sum mu_{i1, j, i3..id}`` over all but the second slot."""
        out = np.zeros(self.n_plus_1)
        for _, tail, v, m in self.weighted():
            for j in set(tail):
                out[j] += v * m * tail.count(j) / len(tail)
        return out

    def balance_residual(self) -> float:
        """``max_j |first - second marginal|``; zero for an occupation measure."""
        return float(np.max(np.abs(self.first_marginal() - self.second_marginal())))

    def to_dense(self) -> np.ndarray:
        from itertools import permutations

        T = np.zeros((self.n_plus_1,) * self.d)
        for (i, tail), v in self.entries.items():
            for perm in set(permutations(tail)):
                T[(i,) + perm] = v
        return T

    def scaled(self, c: float) -> "OccupationMeasure":
        return OccupationMeasure(self.d, self.n_plus_1, {k: v * c for k, v in self.entries.items()})


def mixture(mu: OccupationMeasure, nu: OccupationMeasure, lam: float) -> OccupationMeasure:
    """``lam mu + (1 - lam) nu`` rescaled to mass one."""
    keys = set(mu.entries) | set(nu.entries)
    out = {k: lam * mu.entries.get(k, 0.0) + (1 - lam) * nu.entries.get(k, 0.0) for k in keys}
    mix = OccupationMeasure(mu.d, mu.n_plus_1, out)
    return mix.scaled(1 / mix.mass())


def _check_positive(F: MonomialMap, u) -> np.ndarray:
    u = np.asarray([float(v) for v in u])
    if u.shape != (F.n_plus_1,) or not (u > 0).all():
        raise InputError("need a strictly positive vector of length n + 1")
    return u


def _jacobian(F: MonomialMap, u: np.ndarray) -> np.ndarray:
    J = np.zeros((F.n_plus_1, F.n_plus_1))
    for i, ci in enumerate(F.coords):
        for a, w in ci:
            a = np.array([float(v) for v in a])
            for j in np.flatnonzero(a):
                e = a.copy()
                e[j] -= 1
                J[i, j] += float(w) * a[j] * np.prod(u**e)
    return J


def occupation_from_eigenpair(F: MonomialMap, rho, u) -> OccupationMeasure:
    """Occupation measure ``w_i u_i^-(d-2) f_{i,tail} u_tail / rho`` of an eigenpair.

    ``w`` is the left Perron vector of ``diag(u)^-(d-2) DF(u)`` with ``w.u = 1``.
    """
    if F.quasi:
        raise UnsupportedError("occupation measures need integral exponents")
    u = _check_positive(F, u)
    rho = float(rho)
    d = int(F.degree)
    A = np.diag(u ** -(d - 2)) @ _jacobian(F, u)
    _, w = perron_power(A.T, tol=1e-15)
    w = w / float(w @ u)
    f = coefficient_tensor(F)
    entries = {}
    for (i, tail), fv in f.items():
        entries[(i, tail)] = w[i] * u[i] ** -(d - 2) * fv * float(np.prod(u[list(tail)])) / rho
    return OccupationMeasure(d, F.n_plus_1, entries)


def feasible_occupation_measure(F: MonomialMap, v) -> OccupationMeasure:
    """An occupation measure supported in ``supp F`` built from any ``v > 0``.

    Transition weights ``q_{i,tail} = f_{i,tail} v_tail / F_i(v)`` define a
    chain on ``[n+1]`` whose stationary law ``pi`` gives ``mu = pi_i q_{i,tail}``.
    """
    if F.quasi:
        raise UnsupportedError("occupation measures need integral exponents")
    v = _check_positive(F, v)
    d = int(F.degree)
    f = coefficient_tensor(F)
    Fv = np.zeros(F.n_plus_1)
    for (i, tail), fv in f.items():
        Fv[i] += _multiplicity(tail) * fv * float(np.prod(v[list(tail)]))
    q = {(i, tail): fv * float(np.prod(v[list(tail)])) / Fv[i] for (i, tail), fv in f.items()}
    M = np.zeros((F.n_plus_1, F.n_plus_1))
    for (i, tail), qv in q.items():
        m = _multiplicity(tail)
        for j in set(tail):
            M[i, j] += qv * m * tail.count(j) / (d - 1)
    _, pi = perron_power(M.T, tol=1e-15)
    pi = pi / pi.sum()
    return OccupationMeasure(d, F.n_plus_1, {k: pi[k[0]] * qv for k, qv in q.items()})


def entropic_value(F: MonomialMap, mu: OccupationMeasure) -> float:
    """``sum mu log(row_i f / mu)`` over ordered index tuples, with ``0 log(./0) = 0``."""
    f = coefficient_tensor(F)
    row = mu.first_marginal()
    terms = []
    for i, tail, v, m in mu.weighted():
        if v == 0:
            continue
        if v < 0:
            raise InputError("occupation measure has a negative entry")
        fv = f.get((i, tail))
        if fv is None:
            raise InputError(f"measure charges ({i}, {tail}) outside the support of F")
        terms.append(m * v * math.log(row[i] * fv / v))
    return math.fsum(terms)


__all__ = [
    "GridResult",
    "OccupationMeasure",
    "coefficient_tensor",
    "default_grid_radius",
    "entropic_value",
    "feasible_occupation_measure",
    "grid_error",
    "grid_maximize_form",
    "grid_minimize_f",
    "mixture",
    "occupation_from_eigenpair",
    "power_iteration_matrix",
]
