"""Nonnegative homogeneous maps, forms and hypergraphs, and their spectral radii.

The Perron eigenvalue of a weakly irreducible map ``F`` is found by
minimizing ``f(x) = max_i log(F_i(e^(x,0)) / e^((d-1) x_i))`` with the
ellipsoid solver; the eigenvector is ``exp((x*, 0))``.  Forms go through
``F = grad(g)/d`` on each connected component, and ``mu_p`` for
``p >= d+1`` through a lifting by one extra variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

import mpmath
import numpy as np

from ._perron import perron_power, strong_components
from ._rational import as_fraction, exp_bracket, mpf_to_fraction
from .errors import CoercivityError, InputError, ReducibilityError, UnsupportedError
from .exponent_core import MaxLogSumExp, PosExponentSum
from .ellipsoid import default_precision, glp_minimize

Exponent = Tuple[Fraction, ...]


def _mp(q):
    q = as_fraction(q)
    return mpmath.mpf(q.numerator) / q.denominator


def _merge(terms, n: int, total: Fraction, what: str):
    merged = {}
    for a, c in terms:
        a = tuple(as_fraction(v) for v in a)
        c = as_fraction(c)
        if len(a) != n:
            raise InputError(f"{what}: exponent {a} has length {len(a)}, expected {n}")
        if any(v < 0 for v in a):
            raise InputError(f"{what}: negative exponent in {a}")
        if sum(a) != total:
            raise InputError(f"{what}: exponent {a} has degree {sum(a)}, expected {total}")
        if c <= 0:
            raise InputError(f"{what}: coefficients must be positive, got {c}")
        merged[a] = merged.get(a, Fraction(0)) + c
    return tuple(sorted(merged.items()))


@dataclass(frozen=True)
class MonomialMap:
    """``F_i(z) = sum_a F_{i,a} z^a`` with every exponent of degree ``d - 1``.

    ``coords[i]`` is a tuple of ``(exponent, coefficient)`` pairs with
    exponents in Q_+^(n+1).  Duplicate exponents are merged.
    """

    coords: tuple
    degree_minus_1: Fraction = None
    n_plus_1: int = None

    def __post_init__(self):
        coords = [list(c) for c in self.coords]
        m = len(coords) if self.n_plus_1 is None else int(self.n_plus_1)
        if m < 1 or len(coords) != m:
            raise InputError(f"map needs {m} coordinate lists, got {len(coords)}")
        if any(not c for c in coords):
            raise InputError("every coordinate of the map needs at least one monomial")
        deg = self.degree_minus_1
        if deg is None:
            deg = sum(as_fraction(v) for v in coords[0][0][0])
        deg = as_fraction(deg)
        if deg <= 0:
            raise InputError("degree d - 1 must be positive")
        merged = tuple(_merge(c, m, deg, f"coordinate {i + 1}") for i, c in enumerate(coords))
        object.__setattr__(self, "coords", merged)
        object.__setattr__(self, "degree_minus_1", deg)
        object.__setattr__(self, "n_plus_1", m)

    @classmethod
    def from_matrix(cls, A) -> "MonomialMap":
        """Linear map ``z -> A z`` (zero rows are rejected)."""
        rows = [[as_fraction(v) for v in r] for r in A]
        m = len(rows)
        unit = [tuple(Fraction(int(i == j)) for i in range(m)) for j in range(m)]
        return cls(tuple([(unit[j], v) for j, v in enumerate(r) if v != 0] for r in rows),
                   Fraction(1), m)

    @property
    def degree(self) -> Fraction:
        return self.degree_minus_1 + 1

    @property
    def quasi(self) -> bool:
        return any(v.denominator != 1 for c in self.coords for a, _ in c for v in a) or (
            self.degree_minus_1.denominator != 1
        )

    @property
    def is_linear(self) -> bool:
        return self.degree_minus_1 == 1 and not self.quasi

    def scaled(self, c) -> "MonomialMap":
        c = as_fraction(c)
        return MonomialMap(tuple([(a, w * c) for a, w in ci] for ci in self.coords),
                           self.degree_minus_1, self.n_plus_1)

    def matrix(self) -> np.ndarray:
        """Coefficient matrix of a linear map."""
        if not self.is_linear:
            raise UnsupportedError("only degree-one integral maps have a matrix")
        A = np.zeros((self.n_plus_1, self.n_plus_1))
        for i, ci in enumerate(self.coords):
            for a, w in ci:
                A[i, a.index(1)] += float(w)
        return A

    def evaluate(self, z, prec: int | None = None):
        """``F(z)`` in mpmath arithmetic."""
        with mpmath.workprec(prec or default_precision() + 16):
            z = [mpmath.mpf(v) if not isinstance(v, Fraction) else _mp(v) for v in z]
            return [mpmath.fsum(_mp(w) * _monomial(z, a) for a, w in ci) for ci in self.coords]


def _monomial(z, a):
    out = mpmath.mpf(1)
    for zi, ai in zip(z, a):
        if ai:
            out *= zi ** (int(ai) if ai.denominator == 1 else _mp(ai))
    return out


@dataclass(frozen=True)
class NonnegForm:
    """``g(z) = sum_a g_a z^a`` with positive coefficients and ``|a|_1 = d``.

    Quasi-homogeneous exponents must have every coordinate in ``{0} u [1, d]``.
    """

    monomials: tuple
    degree: Fraction = None
    n_plus_1: int = None

    def __post_init__(self):
        mons = list(self.monomials)
        if not mons:
            raise InputError("the form is identically zero")
        m = len(mons[0][0]) if self.n_plus_1 is None else int(self.n_plus_1)
        deg = self.degree
        if deg is None:
            deg = sum(as_fraction(v) for v in mons[0][0])
        deg = as_fraction(deg)
        if deg < 1:
            raise InputError("form degree must be at least 1")
        merged = _merge(mons, m, deg, "form")
        for a, _ in merged:
            if any(0 < v < 1 for v in a):
                raise InputError(f"exponent {a} has a coordinate in (0, 1)")
        object.__setattr__(self, "monomials", merged)
        object.__setattr__(self, "degree", deg)
        object.__setattr__(self, "n_plus_1", m)

    @property
    def quasi(self) -> bool:
        return self.degree.denominator != 1 or any(
            v.denominator != 1 for a, _ in self.monomials for v in a
        )

    def evaluate(self, z, prec: int | None = None):
        with mpmath.workprec(prec or default_precision() + 16):
            z = [mpmath.mpf(v) if not isinstance(v, Fraction) else _mp(v) for v in z]
            return mpmath.fsum(_mp(w) * _monomial(z, a) for a, w in self.monomials)

    def evaluate_float(self, Z) -> np.ndarray:
        """Vectorized float64 evaluation on rows of ``Z``."""
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        out = np.zeros(Z.shape[0])
        for a, w in self.monomials:
            term = np.full(Z.shape[0], float(w))
            for i, ai in enumerate(a):
                if ai:
                    term *= Z[:, i] ** float(ai)
            out += term
        return out

    def variables(self) -> tuple:
        """Indices of variables that occur in some monomial."""
        return tuple(i for i in range(self.n_plus_1) if any(a[i] for a, _ in self.monomials))


@dataclass(frozen=True)
class UniformHypergraph:
    """Weighted ``d``-uniform hypergraph on vertices ``0 .. n_vertices - 1``."""

    n_vertices: int
    d: int
    edges: tuple

    def __post_init__(self):
        seen = {}
        for e, w in self.edges:
            e = tuple(sorted(int(v) for v in e))
            w = as_fraction(w)
            if len(set(e)) != len(e) or len(e) != self.d:
                raise InputError(f"edge {e} must have {self.d} distinct vertices")
            if e[0] < 0 or e[-1] >= self.n_vertices:
                raise InputError(f"edge {e} has a vertex outside 0..{self.n_vertices - 1}")
            if w <= 0:
                raise InputError("edge weights must be positive")
            if e in seen:
                raise InputError(f"duplicate edge {e}")
            seen[e] = w
        if not 1 <= self.d <= self.n_vertices:
            raise InputError("uniformity must lie in 1..n_vertices")
        object.__setattr__(self, "edges", tuple(sorted(seen.items())))

    @classmethod
    def complete(cls, m: int, d: int) -> "UniformHypergraph":
        from itertools import combinations

        return cls(m, d, tuple((e, 1) for e in combinations(range(m), d)))

    def form(self) -> NonnegForm:
        """``d! sum_E w_E prod_{i in E} z_i``."""
        if not self.edges:
            raise InputError("hypergraph has no edges")
        fact = math.factorial(self.d)
        mons = []
        for e, w in self.edges:
            a = [0] * self.n_vertices
            for v in e:
                a[v] = 1
            mons.append((tuple(a), fact * w))
        return NonnegForm(tuple(mons), Fraction(self.d), self.n_vertices)


@dataclass(frozen=True)
class SpectralResult:
    """Certified spectral radius with its eigenvector.

    ``lower <= rho <= upper`` is the certified bracket and ``rho`` its
    midpoint; ``eps`` is the achieved half-width.  ``certificate`` holds the
    Collatz-Wielandt values at ``eigvec``.
    """

    rho: Fraction
    lower: Fraction
    upper: Fraction
    eigvec: np.ndarray = field(compare=False)
    eps: Fraction
    certificate: Tuple[Fraction, Fraction]
    requested_eps: Fraction
    method: str
    iterations: int = 0
    quasi: bool = False
    norm: str = "d"
    components: tuple = ()
    dropped: tuple = ()
    eigvec_hp: tuple = field(default=(), compare=False, repr=False)

    def __float__(self):
        return float(self.rho)


# --------------------------------------------------------------------- digraph


def dependency_digraph(F: MonomialMap) -> np.ndarray:
    """Boolean adjacency: ``i -> j`` iff ``z_j`` occurs in some monomial of ``F_i``."""
    m = F.n_plus_1
    adj = np.zeros((m, m), dtype=bool)
    for i, ci in enumerate(F.coords):
        for a, _ in ci:
            for j, v in enumerate(a):
                if v > 0:
                    adj[i, j] = True
    return adj


def is_weakly_irreducible(F: MonomialMap) -> bool:
    return len(strong_components(dependency_digraph(F))) == 1


def _require_irreducible(F: MonomialMap):
    comps = strong_components(dependency_digraph(F))
    if len(comps) > 1:
        raise ReducibilityError(
            f"map is not weakly irreducible ({len(comps)} strong components)", components=comps
        )


# ------------------------------------------------------------------- reduction


def reduce_to_f(F: MonomialMap) -> MaxLogSumExp:
    """Reduced objective in ``n`` variables whose minimum is ``log rho(F)``.

    Branch ``i`` has exponents ``c - (d-1) e_i`` where ``c`` is ``a`` with the
    last coordinate dropped, and weights ``F_{i,a}``.
    """
    if F.n_plus_1 < 2:
        raise InputError("reduction needs at least two coordinates")
    if F.degree_minus_1 < 1:
        raise UnsupportedError(f"degree d - 1 = {F.degree_minus_1} is below one")
    _require_irreducible(F)
    n, k = F.n_plus_1 - 1, F.degree_minus_1
    branches = []
    for i, ci in enumerate(F.coords):
        exps = []
        for a, _ in ci:
            c = list(a[:n])
            if i < n:
                c[i] -= k
            exps.append(tuple(c))
        branches.append(PosExponentSum(exps, [w for _, w in ci], n))
    return MaxLogSumExp(tuple(branches))


def cw_bounds(F: MonomialMap, z, prec: int | None = None) -> Tuple[Fraction, Fraction]:
    """Collatz-Wielandt values ``min_i, max_i F_i(z) / z_i^(d-1)`` at ``z > 0``."""
    if len(z) != F.n_plus_1:
        raise InputError(f"vector must have length {F.n_plus_1}")
    prec = prec or default_precision() + 16
    with mpmath.workprec(prec):
        zz = [mpmath.mpf(v) if not isinstance(v, Fraction) else _mp(v) for v in z]
        if any(not v > 0 for v in zz):
            raise InputError("Collatz-Wielandt bounds need a strictly positive vector")
        Fz = F.evaluate(zz, prec)
        k = _mp(F.degree_minus_1)
        ratios = [v / zi**k for v, zi in zip(Fz, zz)]
        return mpf_to_fraction(min(ratios)), mpf_to_fraction(max(ratios))


def _normalize(u, d, norm: str):
    if norm == "inf":
        s = max(u)
    elif norm == "d":
        d = _mp(d)
        s = mpmath.fsum(v**d for v in u) ** (1 / d)
    else:
        raise InputError(f"unknown normalization {norm!r}")
    return [v / s for v in u]


def _branch_data(f: MaxLogSumExp):
    return [([[ _mp(c) for c in a] for a in b.exponents], [mpmath.log(_mp(w)) for w in b.weights])
            for b in f.branches]


def _branch_grad(rows, logw, x):
    terms = [lw + mpmath.fsum(c * xi for c, xi in zip(a, x)) for a, lw in zip(rows, logw)]
    m = max(terms)
    e = [mpmath.exp(t - m) for t in terms]
    s = mpmath.fsum(e)
    val = m + mpmath.log(s)
    grad = [mpmath.fsum(ek * a[j] for ek, a in zip(e, rows)) / s for j in range(len(x))]
    return val, grad


def _newton_polish(f: MaxLogSumExp, x0, prec: int, steps: int = 40):
    """Solve ``f_i(x) = t`` for all branches from ``x0``; returns the best iterate."""
    data = _branch_data(f)
    n = f.n
    x = [mpmath.mpf(v) for v in x0]

    def residual(x):
        vals = [_branch_grad(r, lw, x) for r, lw in data]
        t = mpmath.fsum(v for v, _ in vals) / len(vals)
        return vals, max(v for v, _ in vals) - min(v for v, _ in vals), t

    vals, spread, t = residual(x)
    best = (spread, list(x))
    target = mpmath.ldexp(1, -(prec - 24))
    for _ in range(steps):
        if spread <= target:
            break
        J = mpmath.matrix(n + 1, n + 1)
        r = mpmath.matrix(n + 1, 1)
        for i, (v, g) in enumerate(vals):
            for j in range(n):
                J[i, j] = g[j]
            J[i, n] = -1
            r[i] = v - t
        try:
            step = mpmath.lu_solve(J, r)
        except ZeroDivisionError:
            break
        x = [xi - step[j] for j, xi in enumerate(x)]
        t = t - step[n]
        vals, spread, _ = residual(x)
        if not mpmath.isfinite(spread):
            break
        if spread < best[0]:
            best = (spread, list(x))
        elif spread > 4 * best[0]:
            break
    return best[1]


def _closed_form_scalar(F: MonomialMap, eps, norm) -> SpectralResult:
    rho = sum(w for _, w in F.coords[0])
    return SpectralResult(rho, rho, rho, np.ones(1), Fraction(0), (rho, rho), eps,
                          "closed-form", quasi=F.quasi, norm=norm, eigvec_hp=(mpmath.mpf(1),))


def _log_eps(eps: Fraction, scale: Fraction) -> Fraction:
    # |exp(+-e') - 1| <= eps * max(1, scale) / scale-ish: keeps relative and absolute error <= eps
    return eps / ((1 + eps) * max(Fraction(1), scale))


def spectral_radius(F: MonomialMap, eps=Fraction(1, 10**6), *, norm: str = "d",
                    precision: int | None = None, backend: str = "auto",
                    polish: bool = True) -> SpectralResult:
    """Spectral radius of a weakly irreducible nonnegative (quasi-)homogeneous map.

    Parameters
    ----------
    F : MonomialMap
    eps : rational
        Accuracy; the bracket half-width is at most ``eps`` both relative to
        ``rho`` and in absolute terms when ``rho >= 1``.
    norm : {"d", "inf"}
        Eigenvector normalization ``|u|_d = 1`` or ``|u|_inf = 1``.
    polish : bool
        Refine the recovered eigenvector by Newton's method on the balance
        equations; kept only when it tightens the Collatz-Wielandt gap.

    Raises
    ------
    ReducibilityError
        If ``F`` is not weakly irreducible.
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise InputError("eps must be positive")
    _require_irreducible(F)
    if F.n_plus_1 == 1:
        return _closed_form_scalar(F, eps, norm)
    f = reduce_to_f(F)
    scale = max(sum(w for _, w in ci) for ci in F.coords)
    prec = (precision or default_precision()) + 16
    method = "ellipsoid"
    try:
        res = glp_minimize(f, _log_eps(eps, scale), precision=precision, backend=backend)
    except CoercivityError:
        if not F.is_linear:
            raise
        return _matrix_fallback(F, eps, norm, prec)
    iterations = res.altitude.iterations
    with mpmath.workprec(prec):
        x = [_mp(v) for v in res.minimizer]
        if polish:
            xp = _newton_polish(f, x, prec)
            u0 = [mpmath.exp(v) for v in x] + [mpmath.mpf(1)]
            u1 = [mpmath.exp(v) for v in xp] + [mpmath.mpf(1)]
            c0, c1 = cw_bounds(F, u0, prec), cw_bounds(F, u1, prec)
            if c1[1] - c1[0] < c0[1] - c0[0]:
                x, method = xp, "ellipsoid+newton"
        u = _normalize([mpmath.exp(v) for v in x] + [mpmath.mpf(1)], F.degree, norm)
        cert = cw_bounds(F, u, prec)
        bits = max(64, int(-math.log2(float(eps))) + 40)
        lo = max(exp_bracket(res.lower, bits)[0], cert[0])
        hi = min(exp_bracket(res.upper, bits)[1], cert[1])
        if lo > hi:  # only possible through rounding in the last bits
            lo, hi = min(lo, hi), max(lo, hi)
        return SpectralResult(
            (lo + hi) / 2, lo, hi, np.array([float(v) for v in u]), (hi - lo) / 2, cert, eps,
            method, iterations, F.quasi, norm, eigvec_hp=tuple(u),
        )


def _matrix_fallback(F: MonomialMap, eps: Fraction, norm: str, prec: int) -> SpectralResult:
    tol = float(eps) * 1e-3
    _, x = perron_power(F.matrix(), tol=tol)
    with mpmath.workprec(prec):
        u = _normalize([mpmath.mpf(float(v)) for v in x], F.degree, norm)
        cert = cw_bounds(F, u, prec)
    lo, hi = cert
    return SpectralResult((lo + hi) / 2, lo, hi, np.array([float(v) for v in u]), (hi - lo) / 2,
                          cert, eps, "power-iteration", quasi=False, norm=norm,
                          eigvec_hp=tuple(u))


# ----------------------------------------------------------------------- forms


def grad_map(g: NonnegForm) -> MonomialMap:
    """``F = grad(g) / d``: ``F_i`` has terms ``(a_i g_a / d) z^(a - e_i)``."""
    d = g.degree
    coords = []
    for i in range(g.n_plus_1):
        ci = []
        for a, w in g.monomials:
            if a[i] > 0:
                b = list(a)
                b[i] -= 1
                ci.append((tuple(b), a[i] * w / d))
        if not ci:
            raise InputError(f"variable {i + 1} occurs in no monomial; restrict the form first")
        coords.append(ci)
    return MonomialMap(tuple(coords), d - 1, g.n_plus_1)


@dataclass(frozen=True)
class FormComponent:
    """A connected block of variables and the form restricted to it."""

    variables: Tuple[int, ...]
    form: NonnegForm


def connected_components(g: NonnegForm) -> list:
    """Split ``g`` by the graph joining variables that share a monomial.

    Variables that occur in no monomial are left out.  ``mu_d(g)`` is the
    maximum of the component values.
    """
    present = g.variables()
    parent = {v: v for v in present}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, _ in g.monomials:
        supp = [i for i, v in enumerate(a) if v]
        for v in supp[1:]:
            ra, rb = find(supp[0]), find(v)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for v in present:
        groups.setdefault(find(v), []).append(v)
    out = []
    for vars_ in sorted(groups.values()):
        idx = set(vars_)
        mons = [(tuple(a[i] for i in vars_), w) for a, w in g.monomials
                if any(a[i] for i in idx)]
        out.append(FormComponent(tuple(vars_), NonnegForm(tuple(mons), g.degree, len(vars_))))
    return out


def mu_d(g: NonnegForm, eps=Fraction(1, 10**6), *, norm: str = "d",
         precision: int | None = None, backend: str = "auto") -> SpectralResult:
    """``max_{|z|_d <= 1} g(z)`` as the largest component spectral radius of ``grad(g)/d``.

    The maximizer is returned as ``eigvec`` in all ``n + 1`` coordinates,
    zero outside the winning component.
    """
    if g.degree < 2:
        raise UnsupportedError("mu_d needs degree at least 2")
    eps = as_fraction(eps)
    comps = connected_components(g)
    dropped = tuple(i for i in range(g.n_plus_1) if i not in g.variables())
    results = []
    for comp in comps:
        F = grad_map(comp.form)
        results.append((comp, spectral_radius(F, eps, norm=norm, precision=precision,
                                              backend=backend)))
    best_comp, best = max(results, key=lambda cr: cr[1].rho)
    lower = max(r.lower for _, r in results)
    upper = max(r.upper for _, r in results)
    summary = tuple((c.variables, r.rho) for c, r in results)
    u = np.zeros(g.n_plus_1)
    hp = [mpmath.mpf(0)] * g.n_plus_1
    for k, v in enumerate(best_comp.variables):
        u[v] = best.eigvec[k]
        hp[v] = best.eigvec_hp[k]
    return SpectralResult(
        (lower + upper) / 2, lower, upper, u, (upper - lower) / 2, best.certificate, eps,
        best.method, best.iterations, g.quasi, norm, summary, dropped, tuple(hp),
    )


# --------------------------------------------------------------------- lifting


def _iroot(x: int, k: int) -> Optional[int]:
    """Exact integer ``k``-th root of ``x >= 0`` or None."""
    if x < 2:
        return x
    r = int(round(x ** (1.0 / k))) if x.bit_length() < 1000 else 1 << (x.bit_length() // k)
    for _ in range(200):
        nr = ((k - 1) * r + x // r ** (k - 1)) // k
        if abs(nr - r) <= 1:
            break
        r = nr
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**k == x:
            return c
    return None


def alpha_dp_exact(d, p) -> Optional[Fraction]:
    """``alpha_{d,p}`` as an exact rational when it is one (integral ``d``, ``p``)."""
    d, p = as_fraction(d), as_fraction(p)
    if d.denominator != 1 or p.denominator != 1:
        return None
    d, p = int(d), int(p)
    power = (1 - Fraction(d, p)) ** (p - d) * Fraction(d, p) ** d  # alpha ** p
    num, den = _iroot(power.numerator, p), _iroot(power.denominator, p)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _alpha_objective(t, d, p):
    return t ** (p - d) * (1 - t**p) ** (d / p)


def alpha_dp(d, p, prec: int = 128):
    """``alpha_{d,p} = max_{0<=t<=1} t^(p-d) (1 - t^p)^(d/p)`` in ``prec``-bit arithmetic.

    The closed form at ``t* = (1 - d/p)^(1/p)`` is cross-checked against a
    golden-section search; a mismatch above ``1e-20`` raises ArithmeticError.
    """
    d, p = as_fraction(d), as_fraction(p)
    if not p > d > 0:
        raise UnsupportedError("alpha_{d,p} needs p > d > 0")
    with mpmath.workprec(prec):
        dm, pm = _mp(d), _mp(p)
        tstar = (1 - dm / pm) ** (1 / pm)
        closed = tstar ** (pm - dm) * (dm / pm) ** (dm / pm)
        inv = (mpmath.sqrt(5) - 1) / 2
        a, b = mpmath.mpf(0), mpmath.mpf(1)
        c, e = b - inv * (b - a), a + inv * (b - a)
        fc, fe = _alpha_objective(c, dm, pm), _alpha_objective(e, dm, pm)
        stop = mpmath.ldexp(1, -(prec // 2 + 8))
        while b - a > stop:
            if fc > fe:
                b, e, fe = e, c, fc
                c = b - inv * (b - a)
                fc = _alpha_objective(c, dm, pm)
            else:
                a, c, fc = c, e, fe
                e = a + inv * (b - a)
                fe = _alpha_objective(e, dm, pm)
        searched = max(fc, fe)
        if abs(searched - closed) > mpmath.mpf("1e-20"):
            raise ArithmeticError(
                f"alpha_{{{d},{p}}}: closed form {closed} disagrees with search {searched}"
            )
        return closed


@dataclass(frozen=True)
class LiftedResult:
    """``mu_p(g)`` from the lifted form ``z_{n+2}^(p-d) g(z)``."""

    value: Fraction
    lower: Fraction
    upper: Fraction
    alpha: object
    alpha_exact: Optional[Fraction]
    maximizer: np.ndarray = field(compare=False)
    lifted: SpectralResult = field(compare=False, repr=False)

    def __float__(self):
        return float(self.value)


def lift_form(g: NonnegForm, p) -> NonnegForm:
    """``z_{n+2}^(p-d) g(z)``, a quasi-form of degree ``p`` in one more variable."""
    p = as_fraction(p)
    k = p - g.degree
    return NonnegForm(tuple((a + (k,), w) for a, w in g.monomials), p, g.n_plus_1 + 1)


def mu_p_lifted(g: NonnegForm, p, eps=Fraction(1, 10**6), *, precision: int | None = None,
                backend: str = "auto") -> LiftedResult:
    """``mu_p(g) = max_{|z|_p <= 1} g(z)`` for rational ``p >= d + 1``.

    Computes ``mu_p`` of the lifted form through :func:`mu_d` and divides by
    ``alpha_{d,p}``.
    """
    p, eps = as_fraction(p), as_fraction(eps)
    d = g.degree
    if p < d + 1:
        raise UnsupportedError(f"lifting needs p >= d + 1 = {d + 1}, got p = {p}")
    alpha = alpha_dp(d, p)
    exact = alpha_dp_exact(d, p)
    with mpmath.workprec(128):
        a_lo = mpf_to_fraction(alpha * (1 - mpmath.ldexp(1, -100)))
        a_hi = mpf_to_fraction(alpha * (1 + mpmath.ldexp(1, -100)))
    if exact is not None:
        a_lo = a_hi = exact
    grid = Fraction(math.floor(a_lo * 2**40), 2**40)
    res = mu_d(lift_form(g, p), eps * grid, precision=precision, backend=backend)
    lo, hi = res.lower / a_hi, res.upper / a_lo
    z = np.asarray(res.eigvec[:-1], dtype=float)
    norm = float(np.sum(z ** float(p))) ** (1 / float(p))
    z = z / norm if norm > 0 else z
    return LiftedResult((lo + hi) / 2, lo, hi, alpha, exact, z, res)


# ------------------------------------------------------------------ hypergraphs


def hypergraph_rho(H: UniformHypergraph, eps=Fraction(1, 10**6), **kw) -> SpectralResult:
    """Spectral radius ``mu_d(d! sum_E w_E prod_{i in E} z_i)`` of a hypergraph."""
    return mu_d(H.form(), eps, **kw)


def clique_upper_bound(H: UniformHypergraph, eps=Fraction(1, 10**6), **kw) -> int:
    """Largest ``w`` with ``prod_{i=1}^{d-1} (w - i) <= rho + eps``; bounds the clique number."""
    if any(w != 1 for _, w in H.edges):
        raise InputError("clique bound needs unit edge weights")
    if H.d < 2:
        raise UnsupportedError("clique bound needs uniformity at least 2")
    eps = as_fraction(eps)
    cap = hypergraph_rho(H, eps, **kw).upper + eps

    def falling(w):
        out = 1
        for i in range(1, H.d):
            out *= w - i
        return out

    w = H.d - 1
    while falling(w + 1) <= cap:
        w += 1
    return w


__all__ = [
    "FormComponent",
    "LiftedResult",
    "MonomialMap",
    "NonnegForm",
    "SpectralResult",
    "UniformHypergraph",
    "alpha_dp",
    "alpha_dp_exact",
    "clique_upper_bound",
    "connected_components",
    "cw_bounds",
    "dependency_digraph",
    "grad_map",
    "hypergraph_rho",
    "is_weakly_irreducible",
    "lift_form",
    "mu_d",
    "mu_p_lifted",
    "reduce_to_f",
    "spectral_radius",
]
