import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from tensorrho import (
    InputError,
    MonomialMap,
    NonnegForm,
    ReducibilityError,
    UniformHypergraph,
    UnsupportedError,
    alpha_dp,
    alpha_dp_exact,
    clique_upper_bound,
    connected_components,
    cw_bounds,
    dependency_digraph,
    grad_map,
    hypergraph_rho,
    is_weakly_irreducible,
    mu_d,
    mu_p_lifted,
    reduce_to_f,
    spectral_radius,
)
from tensorrho.exponent_core import eval_f
from tensorrho.verify import grid_maximize_form, power_iteration_matrix

EPS = Fraction(1, 10**6)
F = Fraction


def cyclic(m, k):
    return MonomialMap(tuple([(tuple(k if j == (i + 1) % m else 0 for j in range(m)), 1)]
                             for i in range(m)))


def diagonal(m, k):
    return MonomialMap(tuple([(tuple(k if j == i else 0 for j in range(m)), 1)] for i in range(m)))


def form(*mons, dim=None):
    return NonnegForm(tuple(mons), None, dim)


def random_irreducible(rng, m):
    A = rng.integers(0, 11, size=(m, m)) * (rng.random((m, m)) < 0.5)
    for i in range(m):  # a Hamiltonian cycle guarantees strong connectivity
        A[i, (i + 1) % m] = max(A[i, (i + 1) % m], 1)
    return [[int(v) for v in r] for r in A]


# -- digraph


def test_digraph_examples():
    assert np.array_equal(dependency_digraph(cyclic(3, 2)), np.roll(np.eye(3, dtype=bool), 1, axis=1))
    assert np.array_equal(dependency_digraph(diagonal(3, 2)), np.eye(3, dtype=bool))
    G = dependency_digraph(grad_map(form(((1, 1), 1))))
    assert np.array_equal(G, [[False, True], [True, False]])


def test_irreducibility_examples():
    assert is_weakly_irreducible(cyclic(4, 2))
    assert not is_weakly_irreducible(diagonal(2, 2))
    block = MonomialMap.from_matrix([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 2], [0, 0, 3, 0]])
    assert not is_weakly_irreducible(block)


def test_reducible_raises():
    with pytest.raises(ReducibilityError) as exc:
        spectral_radius(diagonal(2, 2))
    assert len(exc.value.components) == 2


# -- reduction


def test_reduce_cyclic():
    f = reduce_to_f(cyclic(2, 2))
    assert sorted(a for b in f.branches for a in b.exponents) == [(-2,), (2,)]
    assert eval_f(f, [0.0])[0] == 0.0


def test_reduce_f0_is_log_F1():
    A = [[1, 2, 0], [0, 3, 4], [5, 0, 1]]
    f = reduce_to_f(MonomialMap.from_matrix(A))
    assert eval_f(f, [0.0, 0.0])[0] == pytest.approx(math.log(max(map(sum, A))), abs=1e-14)


def test_reduce_rejects_small_degree():
    with pytest.raises(UnsupportedError):
        reduce_to_f(MonomialMap(([((F(1, 2), 0), 1)], [((F(1, 2), 0), 1)])))
    with pytest.raises(InputError):
        reduce_to_f(MonomialMap(([((2,), 1)],)))


def test_cyclic_rho():
    r = spectral_radius(cyclic(2, 2), EPS)
    assert abs(r.rho - 1) <= EPS
    assert r.lower <= 1 <= r.upper
    lo, hi = r.certificate
    assert hi - lo <= 3 * EPS * hi


def test_scaled_swap_map():
    Fm = MonomialMap(([((0, 2), 4)], [((2, 0), 4)]))
    r = spectral_radius(Fm, EPS)
    assert abs(r.rho - 4) <= 4 * EPS
    assert np.allclose(r.eigvec, 2 ** (-1 / 3), atol=1e-9)  # |u|_3 = 1
    r_inf = spectral_radius(Fm, EPS, norm="inf")
    assert np.allclose(r_inf.eigvec, 1.0, atol=1e-9)


def test_scalar_closed_form():
    r = spectral_radius(MonomialMap(([((3,), F(7, 2))],)), EPS)
    assert r.rho == F(7, 2) and r.method == "closed-form"


@pytest.mark.parametrize("m", [2, 3, 5, 8, 10])
def test_matrix_matches_power(m):
    rng = np.random.default_rng(m)
    A = random_irreducible(rng, m)
    r = spectral_radius(MonomialMap.from_matrix(A), EPS)
    rho_p, _ = power_iteration_matrix(np.array(A, dtype=float))
    assert abs(float(r.rho) - rho_p) <= float(EPS) * rho_p
    lo, hi = r.certificate
    assert hi - lo <= 3 * EPS * r.rho


def test_periodic_matrix():
    r = spectral_radius(MonomialMap.from_matrix([[0, 1], [1, 0]]), EPS)
    assert abs(r.rho - 1) <= EPS


@pytest.mark.parametrize("c", [F(2), F(1, 3)])
def test_scaling_equivariance(c):
    base = MonomialMap(([((1, 1, 0), 1), ((0, 0, 2), 2)], [((2, 0, 0), 1), ((0, 1, 1), 3)],
                        [((1, 0, 1), 2)]))
    r = spectral_radius(base, EPS)
    rc = spectral_radius(base.scaled(c), EPS)
    assert abs(rc.rho - c * r.rho) <= 2 * EPS * max(1, c * r.rho)


def test_cw_sandwich_cubic():
    Fm = MonomialMap(([((1, 1, 0), 1), ((0, 0, 2), 2)], [((2, 0, 0), 1), ((0, 1, 1), 3)],
                      [((1, 0, 1), 2)]))
    r = spectral_radius(Fm, EPS)
    lo, hi = r.certificate
    assert lo - r.eps <= r.rho <= hi + r.eps
    assert hi - lo <= 3 * EPS * hi
    lo1, hi1 = cw_bounds(Fm, [1, 1, 1])
    assert (lo1, hi1) == (2, 4)
    assert lo1 <= r.rho <= hi1


def test_cw_examples():
    assert cw_bounds(cyclic(3, 2), [1, 1, 1]) == (1, 1)
    with pytest.raises(InputError):
        cw_bounds(cyclic(3, 2), [1, 0, 1])


def test_quasi_map():
    Fm = MonomialMap(([((F(1, 2), F(1, 2)), 1)], [((F(1, 2), F(1, 2)), 2)]))
    r = spectral_radius(Fm, EPS)
    assert r.quasi
    # F_i(u)/u_i: u = (1, t): 1*sqrt t = rho, 2 sqrt t / t = rho -> t = 2, rho = sqrt 2
    assert abs(float(r.rho) - math.sqrt(2)) <= float(EPS) * 2


# -- forms


def test_grad_map_examples():
    assert grad_map(form(((2,), 1))).coords == ((((1,), 1),),)
    G = grad_map(form(((1, 1), 2)))
    assert G.coords == ((((0, 1), 1),), (((1, 0), 1),))
    G = grad_map(form(((2, 1), 1)))
    assert G.coords == ((((1, 1), F(2, 3)),), (((2, 0), F(1, 3)),))
    with pytest.raises(InputError):
        grad_map(form(((2, 0), 1)))


def test_components():
    assert len(connected_components(form(((3, 0), 1), ((0, 3), 1)))) == 2
    assert len(connected_components(form(((1, 1, 0, 0), 1), ((0, 0, 1, 1), 1)))) == 2
    assert len(connected_components(form(((1, 1, 0), 1), ((0, 1, 1), 1)))) == 1
    with pytest.raises(InputError):
        form(((2, 0), 0))


def test_mu_d_split_cubes():
    r = mu_d(form(((3, 0), 1), ((0, 3), 1)), EPS)
    assert abs(r.rho - 1) <= EPS
    assert len(r.components) == 2


def test_mu_d_power():
    r = mu_d(form(((0, 3, 0), 1), dim=3), EPS)
    assert abs(r.rho - 1) <= EPS
    assert r.dropped == (0, 2)
    assert r.eigvec[0] == 0 and r.eigvec[2] == 0


def test_mu_d_triangle():
    r = hypergraph_rho(UniformHypergraph.complete(3, 2), EPS)
    assert abs(r.rho - 2) <= EPS
    r3 = hypergraph_rho(UniformHypergraph.complete(3, 3), EPS)
    assert abs(r3.rho - 2) <= EPS


@pytest.mark.parametrize("d,m", [(2, 3), (2, 5), (3, 3), (3, 4), (3, 5), (4, 5)])
def test_complete_hypergraphs(d, m):
    r = hypergraph_rho(UniformHypergraph.complete(m, d), EPS)
    exact = math.prod(m - i for i in range(1, d))
    assert abs(r.rho - exact) <= EPS
    assert clique_upper_bound(UniformHypergraph.complete(m, d), EPS) == m


def test_hypergraph_examples():
    r = hypergraph_rho(UniformHypergraph(2, 2, (((0, 1), 1),)), EPS)
    assert abs(r.rho - 1) <= EPS
    two = UniformHypergraph(7, 3, tuple((e, 1) for e in [(0, 1, 2), (3, 4, 5), (3, 4, 6), (3, 5, 6), (4, 5, 6)]))
    r = hypergraph_rho(two, EPS)
    assert abs(r.rho - 6) <= EPS and len(r.components) == 2
    with pytest.raises(InputError):
        UniformHypergraph(3, 2, ()).form()
    with pytest.raises(InputError):
        UniformHypergraph(3, 2, (((0, 1), 1), ((1, 0), 1)))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_single_edge_clique(d):
    H = UniformHypergraph(d, d, ((tuple(range(d)), 1),))
    assert abs(hypergraph_rho(H, EPS).rho - math.factorial(d - 1)) <= EPS
    assert clique_upper_bound(H, EPS) == d


def test_clique_bound_needs_unit_weights():
    with pytest.raises(InputError):
        clique_upper_bound(UniformHypergraph(2, 2, (((0, 1), 2),)))


def test_euler_identity():
    g = form(((2, 1, 0), 1), ((0, 1, 2), 3), ((1, 1, 1), 2))
    r = mu_d(g, EPS)
    u = r.eigvec_hp
    G = grad_map(g)
    with mpmath.workprec(160):
        lhs = mpmath.fsum(ui * Gi for ui, Gi in zip(u, G.evaluate(u, 160)))
        rhs = g.evaluate(u, 160)
        assert abs(lhs - rhs) <= 1e-9 * abs(rhs)
        assert abs(rhs - mpmath.mpf(r.rho.numerator) / r.rho.denominator) <= 2 * float(EPS)


@pytest.mark.parametrize("seed", range(4))
def test_mu_d_matches_grid(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 4))
    m = int(rng.integers(2, 4))
    mons = []
    for _ in range(4):
        a = rng.multinomial(d, [1 / m] * m)
        mons.append((tuple(int(v) for v in a), int(rng.integers(1, 6))))
    g = NonnegForm(tuple(mons), d, m)
    r = mu_d(g, EPS)
    val, _ = grid_maximize_form(g)
    assert abs(float(r.rho) - val) <= 1e-4


# -- lifting


def test_alpha_24():
    assert alpha_dp_exact(2, 4) == F(1, 2)
    with mpmath.workprec(128):
        assert abs(alpha_dp(2, 4) - mpmath.mpf(1) / 2) < mpmath.mpf(10) ** -35
    assert alpha_dp_exact(F(5, 2), 4) is None
    assert alpha_dp_exact(2, 5) is None  # not a rational


def test_alpha_matches_search():
    with mpmath.workprec(128):
        a = alpha_dp(3, F(9, 2))
        t = mpmath.findroot(lambda t: mpmath.diff(lambda s: s ** 1.5 * (1 - s ** 4.5) ** (3 / 4.5), t), 0.8)
        assert abs(a - t ** 1.5 * (1 - t ** 4.5) ** (mpmath.mpf(2) / 3)) < 1e-20


def test_mu4_square():
    r = mu_p_lifted(form(((2,), 1)), 4, EPS)
    assert abs(r.value - 1) <= F(1, 10**5)
    assert r.alpha_exact == F(1, 2)


def test_lift_rejects_small_p():
    with pytest.raises(UnsupportedError):
        mu_p_lifted(form(((2, 0), 1), ((1, 1), 1)), F(5, 2))


def test_mu_p_two_variables():
    # max z1 z2 on |z|_4 = 1 is attained at z1 = z2 = 2^(-1/4): value 2^(-1/2)
    r = mu_p_lifted(form(((1, 1), 1)), 4, EPS)
    assert abs(float(r.value) - 2 ** -0.5) <= 1e-6
    val, _ = grid_maximize_form(form(((1, 1), 1)), 4)
    assert abs(float(r.value) - val) <= 1e-6


def test_norm_comparison_small():
    g = form(((4, 0), 1), ((2, 2), 3), ((1, 3), 2))
    mu2, _ = grid_maximize_form(g, 2)
    mu4 = float(mu_d(g, EPS).rho)
    assert mu2 <= mu4 + 1e-6
    assert mu4 <= 2 ** 2 * mu2 + 1e-6
