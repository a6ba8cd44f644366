import math
import subprocess
import sys
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tensorrho import (
    Halfspace,
    MaxLogSumExp,
    NearFeasible,
    PrecisionError,
    bound_bundle,
    compiled_available,
    compute_nu,
    eval_f,
    glp_minimize,
    integerize,
    minimize_altitude,
    weak_separation,
)
from tensorrho.ellipsoid import Ellipsoid
from tensorrho.ellipsoid.backend import default_precision, select_backend
from tensorrho.errors import InputError
from tensorrho.verify import grid_error, grid_minimize_f

EPS = Fraction(1, 10**6)
needs_compiled = pytest.mark.skipif(not compiled_available(), reason="extension not built")


def glp(*branches, n=None):
    return MaxLogSumExp.from_data(list(branches), n)


def mid_instance():
    return glp(([(1, 0), (0, 1), (-1, -1)], [2, 3, 5]), ([(2, -1), (-1, 2), (-1, -1)], [1, 1, 7]))


# -- oracle


def test_oracle_ceiling(two_exponent):
    p = integerize(two_exponent)
    b = bound_bundle(p)
    out = weak_separation(p, b, [0, b.t_max + 1], Fraction(1, 10))
    assert isinstance(out, Halfspace)
    assert out.normal == (0, 1) and out.case == "b1"


def test_oracle_on_graph(two_exponent):
    p = integerize(two_exponent)
    b = bound_bundle(p)
    f0 = Fraction(693147180559945, 10**15)  # log 2 to 15 digits
    assert isinstance(weak_separation(p, b, [0, f0], Fraction(1, 10)), NearFeasible)
    assert isinstance(weak_separation(p, b, [0, b.f0_upper], Fraction(1, 10**9)), NearFeasible)


def test_oracle_below_graph(two_exponent):
    p = integerize(two_exponent)
    b = bound_bundle(p)
    out = weak_separation(p, b, [0, Fraction(-3, 10)], Fraction(1, 10))
    assert isinstance(out, Halfspace) and out.case == "b3"
    assert out.normal == (0, -1)


def test_oracle_box(two_exponent):
    p = integerize(two_exponent)
    b = bound_bundle(p)
    out = weak_separation(p, b, [-b.R, 0], Fraction(1, 10))
    assert out.case == "a" and out.normal == (-1, 0)


def test_oracle_bad_args(two_exponent):
    p = integerize(two_exponent)
    b = bound_bundle(p)
    with pytest.raises(InputError):
        weak_separation(p, b, [0], Fraction(1, 10))
    with pytest.raises(InputError):
        weak_separation(p, b, [0, 0], 0)


def _sample_body(f, b, rng, k):
    n, R = f.n, float(b.R)
    out = []
    while len(out) < k:
        x = rng.uniform(-R, R, size=n)
        t = eval_f(f, x)[0] + abs(rng.normal()) * 0.1
        if t <= float(b.t_max):
            out.append(np.append(x, t))
    return out


@pytest.mark.parametrize("seed", range(4))
def test_oracle_soundness(seed):
    p = integerize(mid_instance())
    b = bound_bundle(p)
    rng = np.random.default_rng(seed)
    eps = Fraction(1, 100)
    body = _sample_body(p.base, b, rng, 100)
    R = float(b.R)
    for _ in range(25):
        z = [Fraction(float(v)) for v in rng.uniform(-1.2 * R, 1.2 * R, size=2)]
        z.append(Fraction(float(rng.uniform(-5, float(b.t_max) + 2))))
        out = weak_separation(p, b, z, eps)
        if isinstance(out, NearFeasible):
            continue
        c = np.array([float(v) for v in out.normal])
        assert np.linalg.norm(c) >= 1
        cz = float(c @ np.array([float(v) for v in z]))
        for w in body:
            assert c @ w <= cz + float(eps) + 1e-9


# -- minimization


def test_log2(two_exponent):
    r = minimize_altitude(integerize(two_exponent), eps=EPS)
    assert abs(float(r.t_star) - math.log(2)) <= float(EPS)
    assert r.lower <= Fraction(math.log(2)) <= r.upper
    assert r.upper - r.lower <= EPS
    assert abs(r.x_star[0]) < 1e-2


def test_flat_bottom(flat_bottom):
    r = glp_minimize(flat_bottom, EPS)
    assert -EPS <= r.value <= EPS
    assert abs(float(r.minimizer[0])) <= math.log(3) + 1e-3
    assert eval_f(flat_bottom, [float(r.minimizer[0])])[0] <= float(r.value + 2 * EPS)


def test_constant_exits_early():
    r = minimize_altitude(integerize(glp(([(0,)], [3]))), eps=EPS)
    assert r.iterations == 0 and r.backend == "closed-form"
    assert abs(float(r.t_star) - math.log(3)) <= float(EPS)


def test_rational_offset_applied():
    f = glp(([(Fraction(1, 2),), (Fraction(-1, 2),)], [Fraction(1, 4), Fraction(1, 4)]))
    r = glp_minimize(f, EPS)
    assert abs(float(r.value) - math.log(0.5)) <= float(EPS)
    assert r.lower <= r.value <= r.upper


def test_minimizer_quality():
    f = mid_instance()
    r = glp_minimize(f, EPS)
    x = [float(v) for v in r.minimizer]
    assert eval_f(f, x)[0] <= float(r.value + 2 * EPS)


@st.composite
def coercive_glp(draw):
    n = draw(st.integers(1, 2))
    vec = st.tuples(*[st.integers(-4, 4)] * n)
    branches = []
    for _ in range(draw(st.integers(1, 2))):
        A = draw(st.lists(vec, min_size=1, max_size=4, unique=True))
        w = draw(st.lists(st.integers(1, 9), min_size=len(A), max_size=len(A)))
        branches.append((A, w))
    f = MaxLogSumExp.from_data(branches, n)
    if compute_nu(f) <= 0:
        # a branch on the cross-polytope vertices makes any instance coercive
        unit = [tuple(s if i == j else 0 for i in range(n)) for j in range(n) for s in (1, -1)]
        branches.append((unit, [1] * len(unit)))
        f = MaxLogSumExp.from_data(branches, n)
    return f


@settings(max_examples=10)
@given(coercive_glp())
def test_grid_sandwich(f):
    eps = Fraction(1, 10**4)
    step = Fraction(1, 128)
    r = glp_minimize(f, eps)
    g = grid_minimize_f(f, step=step)
    t = float(r.value)
    assert g.value - float(eps) - grid_error(f, step) - 1e-12 <= t <= g.value + float(eps) + 1e-12


def test_trace_monotone_and_volume():
    p = integerize(mid_instance())
    b = bound_bundle(p)
    r = minimize_altitude(p, b, EPS, trace=True)
    up = r.trace["trace_upper"]
    assert np.all(np.diff(up) <= 0)
    logdet = np.concatenate([[2 * 3 * math.log(float(b.R2))], r.trace["trace_logdet"]])
    n = 2
    # log det = 2 log vol; each central cut shrinks volume by exp(-1/(2(n+2)))
    assert np.all(np.diff(logdet) <= -0.9 * 2 / (2 * (n + 2)))


def test_ellipsoid_cut_shrinks():
    E = Ellipsoid.ball([0, 0, 3], 10)
    det0 = E.logdet()
    E2 = E.cut([Fraction(1, 3), Fraction(-2, 5), -1])
    assert E2.logdet() - det0 <= -0.9 * 2 / (2 * 4)
    assert E2.contains([-1, 1, 5]) and not E2.contains([9.5, 0, 3])


@needs_compiled
def test_backends_agree():
    p = integerize(mid_instance())
    b = bound_bundle(p)
    rc = minimize_altitude(p, b, EPS, backend="compiled")
    rp = minimize_altitude(p, b, EPS, backend="python")
    assert rc.iterations == rp.iterations
    assert abs(rc.t_star - rp.t_star) <= Fraction(1, 10**20)


def test_cap_raises_precision_error(two_exponent):
    with pytest.raises(PrecisionError, match="precision"):
        minimize_altitude(integerize(two_exponent), eps=EPS, max_iter=3)


def test_high_precision_fallback(two_exponent):
    r = minimize_altitude(integerize(two_exponent), eps=Fraction(1, 10**12), precision=160)
    assert r.backend == "python" and r.precision == 160
    with mpmath.workprec(200):
        assert abs(mpmath.mpf(r.t_star.numerator) / r.t_star.denominator - mpmath.log(2)) <= 1e-12


def test_precision_env(monkeypatch):
    monkeypatch.setenv("PRECISION_BITS", "150")
    assert default_precision() == 150
    assert select_backend()[0] == "python"
    monkeypatch.setenv("PRECISION_BITS", "abc")
    with pytest.raises(InputError):
        default_precision()
    monkeypatch.delenv("PRECISION_BITS")
    assert default_precision() == 113


def test_fallback_when_extension_missing(monkeypatch, two_exponent):
    from tensorrho.ellipsoid import backend

    monkeypatch.setattr(backend, "_compiled", None)
    assert not backend.compiled_available()
    name, _, prec = select_backend()
    assert (name, prec) == ("python", 113)
    with pytest.raises(InputError):
        select_backend(backend="compiled")
    r = minimize_altitude(integerize(two_exponent), eps=EPS)
    assert r.backend == "python" and abs(float(r.t_star) - math.log(2)) <= float(EPS)


def test_no_extension_import():
    # a fresh interpreter that cannot see the compiled module still works
    code = (
        "import sys, importlib.abc\n"
        "class Block(importlib.abc.MetaPathFinder):\n"
        "    def find_spec(self, name, path, target=None):\n"
        "        if name == 'tensorrho.ellipsoid._core':\n"
        "            raise ImportError('blocked')\n"
        "sys.meta_path.insert(0, Block())\n"
        "from tensorrho import MaxLogSumExp, glp_minimize, compiled_available\n"
        "f = MaxLogSumExp.from_data([([(1,), (-1,)], [1, 1])])\n"
        "r = glp_minimize(f, '1/1000')\n"
        "print(compiled_available(), r.altitude.backend, float(r.value))\n"
    )
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    avail, name, value = out.stdout.split()
    assert avail == "False" and name == "python"
    assert abs(float(value) - math.log(2)) <= 1e-3
