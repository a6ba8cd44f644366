"""Small exact linear programs over the rationals (two-phase simplex, Bland's rule)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ._rational import as_fraction
from .errors import InputError

OPTIMAL, UNBOUNDED, INFEASIBLE = "optimal", "unbounded", "infeasible"
_RELATIONS = ("<=", "=", ">=")


@dataclass(frozen=True)
class RationalLP:
    """``min objective.v`` subject to ``row.v REL rhs`` and per-variable bounds.

    A bound of ``None`` means unbounded on that side.  Default bounds are
    ``(0, None)`` for every variable.
    """

    objective: tuple
    constraints: tuple = ()
    bounds: Optional[tuple] = None

    def __post_init__(self):
        obj = tuple(as_fraction(c) for c in self.objective)
        nv = len(obj)
        cons = []
        for item in self.constraints:
            try:
                row, rel, rhs = item
            except (TypeError, ValueError) as exc:
                raise InputError(f"constraint {item!r} is not (row, relation, rhs)") from exc
            row = tuple(as_fraction(c) for c in row)
            if len(row) != nv:
                raise InputError(f"constraint row has {len(row)} entries, expected {nv}")
            if rel not in _RELATIONS:
                raise InputError(f"unknown relation {rel!r}")
            cons.append((row, rel, as_fraction(rhs)))
        if self.bounds is None:
            bounds = tuple((Fraction(0), None) for _ in range(nv))
        else:
            if len(self.bounds) != nv:
                raise InputError("bounds length does not match the objective")
            bounds = tuple(
                (None if lo is None else as_fraction(lo), None if hi is None else as_fraction(hi))
                for lo, hi in self.bounds
            )
        for lo, hi in bounds:
            if lo is not None and hi is not None and lo > hi:
                raise InputError(f"empty bound [{lo}, {hi}]")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "constraints", tuple(cons))
        object.__setattr__(self, "bounds", bounds)

    @property
    def num_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Optional[Fraction]
    point: Optional[Tuple[Fraction, ...]]


def _pivot(T: List[List[Fraction]], basis: List[int], r: int, c: int) -> None:
    prow = T[r]
    inv = 1 / prow[c]
    if inv != 1:
        T[r] = prow = [v * inv for v in prow]
    for i, row in enumerate(T):
        if i != r:
            f = row[c]
            if f:
                T[i] = [a - f * b if b else a for a, b in zip(row, prow)]
    basis[r] = c


def _simplex(T, basis, cost: Sequence[Fraction], allowed: int) -> str:
    """Minimize ``cost`` over columns ``< allowed``; Bland's rule throughout."""
    m = len(T)
    while True:
        # reduced costs: c_j - c_B B^-1 A_j
        entering = None
        for j in range(allowed):
            if j in basis:
                continue
            red = cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(m) if cost[basis[i]])
            if red < 0:
                entering = j
                break
        if entering is None:
            return OPTIMAL
        leave = None
        best = None
        for i in range(m):
            a = T[i][entering]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return UNBOUNDED
        _pivot(T, basis, leave, entering)


def lp_solve(p: RationalLP) -> LPResult:
    """Exact optimum of a small rational LP."""
    if not isinstance(p, RationalLP):
        raise InputError("lp_solve expects a RationalLP")
    nv = p.num_vars
    # v_k = shift_k + sum(coef * column) over nonnegative columns
    shift: List[Fraction] = []
    cols: List[List[Tuple[int, Fraction]]] = []
    ncol = 0
    extra_rows = []
    for lo, hi in p.bounds:
        if lo is not None:
            shift.append(lo)
            cols.append([(ncol, Fraction(1))])
            if hi is not None:
                extra_rows.append((ncol, hi - lo))
            ncol += 1
        elif hi is not None:
            shift.append(hi)
            cols.append([(ncol, Fraction(-1))])
            ncol += 1
        else:
            shift.append(Fraction(0))
            cols.append([(ncol, Fraction(1)), (ncol + 1, Fraction(-1))])
            ncol += 2

    rows = []
    for row, rel, rhs in p.constraints:
        new = [Fraction(0)] * ncol
        for k, a in enumerate(row):
            for c, s in cols[k]:
                new[c] += a * s
        rows.append((new, rel, rhs - sum(a * s for a, s in zip(row, shift))))
    for c, ub in extra_rows:
        new = [Fraction(0)] * ncol
        new[c] = Fraction(1)
        rows.append((new, "<=", ub))

    cost = [Fraction(0)] * ncol
    for k, a in enumerate(p.objective):
        for c, s in cols[k]:
            cost[c] += a * s
    base_value = sum(a * s for a, s in zip(p.objective, shift))

    # normalize rhs >= 0, then add slack/surplus and artificial columns
    norm = []
    for new, rel, rhs in rows:
        if rhs < 0:
            new = [-v for v in new]
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        norm.append((new, rel, rhs))
    nslack = sum(1 for _, rel, _ in norm if rel != "=")
    nart = sum(1 for _, rel, _ in norm if rel != "<=")
    width = ncol + nslack + nart
    T: List[List[Fraction]] = []
    basis: List[int] = []
    si, ai = ncol, ncol + nslack
    for new, rel, rhs in norm:
        row = new + [Fraction(0)] * (nslack + nart) + [rhs]
        if rel == "<=":
            row[si] = Fraction(1)
            basis.append(si)
            si += 1
        else:
            if rel == ">=":
                row[si] = Fraction(-1)
                si += 1
            row[ai] = Fraction(1)
            basis.append(ai)
            ai += 1
        T.append(row)

    if nart:
        phase1 = [Fraction(0)] * (ncol + nslack) + [Fraction(1)] * nart
        _simplex(T, basis, phase1, width)
        infeas = sum(T[i][-1] for i in range(len(T)) if basis[i] >= ncol + nslack)
        if infeas > 0:
            return LPResult(INFEASIBLE, None, None)
        # drive zero-level artificials out of the basis, dropping redundant rows
        i = 0
        while i < len(T):
            if basis[i] >= ncol + nslack:
                j = next((j for j in range(ncol + nslack) if T[i][j] != 0), None)
                if j is None:
                    del T[i]
                    del basis[i]
                    continue
                _pivot(T, basis, i, j)
            i += 1
        T = [row[: ncol + nslack] + [row[-1]] for row in T]

    full_cost = cost + [Fraction(0)] * nslack
    status = _simplex(T, basis, full_cost, ncol + nslack)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, None, None)
    colval = [Fraction(0)] * (ncol + nslack)
    for i, b in enumerate(basis):
        colval[b] = T[i][-1]
    point = tuple(shift[k] + sum(colval[c] * s for c, s in cols[k]) for k in range(nv))
    value = sum(c * v for c, v in zip(p.objective, point))
    assert value == base_value + sum(c * v for c, v in zip(cost, colval[:ncol]))
    return LPResult(OPTIMAL, value, point)
