import warnings

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from knotfloer.errors import GammaNotInHandle
from knotfloer.fibered import (
    ExteriorBasis,
    Gamma,
    RegimeWarning,
    borromean_hfk,
    build_x,
    d_gamma,
    d_gamma_prime,
    dehn_twist_regime,
    hf_dehn_twist,
    hf_sigma_times_s1,
    macdonald_oracle,
    matmul,
    module_homology,
    x_rank_formula,
)


def sympy_macdonald(g, d):
    q, t = sympy.symbols("q t")
    f = (1 + t * q) ** (2 * g) / ((1 - q) * (1 - t**2 * q))
    coeff = sympy.series(f, q, 0, d + 1).removeO().coeff(q, d)
    poly = sympy.Poly(sympy.expand(coeff), t)
    return {m[0]: int(c) for m, c in zip(poly.monoms(), poly.coeffs()) if c}


@pytest.mark.parametrize("g,d,rank", [(1, 0, 1), (2, 1, 6), (3, 1, 8), (2, 2, 17)])
def test_x_ranks(g, d, rank):
    assert build_x(g, d).rank == rank == x_rank_formula(g, d)


@pytest.mark.parametrize("g", range(0, 4))
@pytest.mark.parametrize("d", range(0, 4))
def test_x_rank_matches_betti_total(g, d):
    assert build_x(g, d).rank == sum(macdonald_oracle(g, d).values())


@pytest.mark.parametrize("g,d", [(1, 0), (1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (1, 3)])
def test_macdonald_against_series(g, d):
    assert macdonald_oracle(g, d) == sympy_macdonald(g, d)


def test_macdonald_tables():
    assert macdonald_oracle(2, 1) == {0: 1, 1: 4, 2: 1}
    assert macdonald_oracle(1, 2) == {0: 1, 1: 2, 2: 2, 3: 2, 4: 1}
    assert sum(macdonald_oracle(2, 2).values()) == 17


def gammas(g):
    return st.lists(st.integers(-2, 2), min_size=2 * g, max_size=2 * g).map(lambda v: Gamma(tuple(v)))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3).flatmap(lambda g: st.tuples(st.just(g), st.integers(0, 2), gammas(g))))
def test_d_squares_to_zero(args):
    g, d, gamma = args
    x = build_x(g, d)
    assert matmul(d_gamma(x, gamma), d_gamma(x, gamma)) == {}


def test_mixed_gamma_on_genus_two():
    x = build_x(2, 2)
    gamma = Gamma.basis(2, "a1") + Gamma.basis(2, "b2")
    m = d_gamma(x, gamma)
    assert m and matmul(m, m) == {}
    deg = x.degrees()
    assert all(deg[r] == deg[c] - 1 for r, c in m)


@pytest.mark.parametrize("name", ["a1", "b1"])
@pytest.mark.parametrize("g,d", [(1, 1), (2, 1), (2, 2), (3, 1)])
def test_d_prime_squares_to_zero(name, g, d):
    x = build_x(g, d)
    m = d_gamma_prime(x, Gamma.basis(g, name))
    assert matmul(m, m) == {}


def test_d_prime_genus_one_degree_zero_is_zero():
    x = build_x(1, 0)
    assert d_gamma_prime(x, Gamma.basis(1, "a1")) == {}
    assert module_homology(x, {}).total_rank == 1


def test_d_prime_needs_first_handle():
    x = build_x(2, 1)
    with pytest.raises(GammaNotInHandle):
        d_gamma_prime(x, Gamma.basis(2, "a2"))
    with pytest.raises(GammaNotInHandle):
        d_gamma_prime(x, Gamma.basis(2, "a1") + Gamma.basis(2, "b1"))


def test_pairing_and_dual():
    a1, b1 = Gamma.basis(2, "a1"), Gamma.basis(2, "b1")
    assert a1.dot(b1) == 1 and b1.dot(a1) == -1 and a1.dot(a1) == 0
    assert a1.poincare_dual() == (0, 1, 0, 0)
    with pytest.raises(ValueError):
        Gamma.basis(1, "a2")
    assert str(ExteriorBasis(2, (3, 0))) == "a1^b2"
    with pytest.raises(ValueError):
        ExteriorBasis(1, (0, 0))


@pytest.mark.parametrize("g,k,rank", [(3, 1, 8), (2, 1, 1), (3, 3, 0), (4, 1, 47)])
def test_sigma_times_circle(g, k, rank):
    h = hf_sigma_times_s1(g, k)
    assert h.total_rank == rank
    assert all(key[0] == k for key in h.free_ranks)


@pytest.mark.parametrize("g,k,rank", [(3, 1, 6), (4, 2, 8), (3, 2, 1), (2, 1, 1), (5, 4, 1)])
def test_dehn_twist_ranks(g, k, rank):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        assert hf_dehn_twist(g, k).total_rank == rank


def test_dehn_twist_regime_warning():
    assert dehn_twist_regime(4, 2)
    assert dehn_twist_regime(3, 1)
    assert not dehn_twist_regime(5, 1)
    with pytest.warns(RegimeWarning):
        hf_dehn_twist(5, 1)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        hf_dehn_twist(4, 2)


def test_k_zero_rejected():
    with pytest.raises(ValueError):
        hf_sigma_times_s1(2, 0)


def test_borromean():
    assert borromean_hfk(1).free_ranks == {(1, 1): 1, (0, 0): 2, (-1, -1): 1}
    assert borromean_hfk(2).total_rank == 16
    assert borromean_hfk(0).free_ranks == {(0, 0): 1}


@pytest.mark.parametrize("g", [1, 2, 3])
@pytest.mark.parametrize("d", [0, 1, 2, 3])
def test_d_squared_exhaustive(g, d):
    x = build_x(g, d)
    basis = [Gamma.basis(g, f"{c}{i}") for i in range(1, g + 1) for c in "ab"]
    classes = basis + [u + v for n, u in enumerate(basis) for v in basis[n + 1:]]
    for gamma in classes:
        m = d_gamma(x, gamma)
        assert matmul(m, m) == {}, gamma


@pytest.mark.parametrize("g,k", [(2, 1), (3, 1), (4, 1), (4, 2), (5, 2), (5, 3)])
def test_twist_bounded_by_product(g, k):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        assert hf_dehn_twist(g, k).total_rank <= hf_sigma_times_s1(g, k).total_rank
