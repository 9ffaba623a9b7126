import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import cholesky, solve_triangular, toeplitz

from opuczeros import weights as W
from opuczeros.errors import MomentDegeneracyError
from opuczeros.opuc import (
    OpucBasis,
    build_basis,
    eval_all,
    evaluate,
    evaluate_rows,
    inner_products,
    verblunsky,
)
from opuczeros.weights import MomentSequence

from conftest import FAMILIES

S = 1 / math.sqrt(0.75)


def gram_schmidt_oracle(c):
    """Orthonormal coefficient rows from the Cholesky factor of the Toeplitz Gram matrix."""
    L = cholesky(toeplitz(c), lower=True)
    return solve_triangular(L, np.eye(len(c)), lower=True)


def moments(c):
    return MomentSequence(np.asarray(c, dtype=float), 0, 0.0)


def test_uniform_basis_is_monomials():
    b = build_basis(W.compute_moments(W.uniform(), 3))
    np.testing.assert_array_equal(b.coeffs, np.eye(4))
    np.testing.assert_array_equal(b.kappa, [1, 1, 1, 1])
    assert verblunsky(b) == [0.0, 0.0, 0.0]


def test_bernstein_degree_one():
    b = build_basis(W.compute_moments(W.bernstein_szego(0.5), 1))
    np.testing.assert_allclose(b.row(1), [-0.5 * S, S], rtol=1e-14)
    assert b.kappa[1] == pytest.approx(1.1547005383792515, rel=1e-14)


def test_degenerate_moments():
    with pytest.raises(MomentDegeneracyError) as exc:
        build_basis(moments([1.0, 1.0]))
    assert exc.value.step == 1


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_matches_gram_schmidt_oracle(name, make_basis):
    b = make_basis(name, 12)
    A = gram_schmidt_oracle(b.moments.c)
    np.testing.assert_allclose(b.coeffs, A, atol=1e-11)
    # the oracle fixes the sign convention alpha_j = -Phi_{j+1}(0)
    alpha = -A[1:, 0] / np.diag(A)[1:]
    np.testing.assert_allclose(b.alpha, alpha, atol=1e-11)


def test_verblunsky_bernstein_sign_locked():
    b = build_basis(W.compute_moments(W.bernstein_szego(0.5), 8))
    a = verblunsky(b)
    assert a[0] == pytest.approx(0.5, abs=1e-14)
    assert max(abs(x) for x in a[1:]) < 1e-14


def test_verblunsky_degree_zero():
    assert verblunsky(build_basis(W.compute_moments(W.uniform(), 0))) == []


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_orthonormality(name, make_basis):
    spec, _ = FAMILIES[name]
    b = make_basis(name, 20)
    # table weights are piecewise linear; fine quadrature needed for 1e-8
    G = inner_products(b, spec, nodes=2**18 if name == "table" else 4096)
    assert np.max(np.abs(G - np.eye(21))) < 1e-8


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_invariants(name, make_basis):
    b = make_basis(name, 20)
    assert np.all(b.kappa > 0)
    np.testing.assert_array_equal(b.kappa, np.diag(b.coeffs))
    assert np.all(np.abs(b.alpha) < 1)
    assert b.coeffs.dtype == np.float64
    assert np.all(np.triu(b.coeffs, 1) == 0)


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_szego_recurrence(name, make_basis):
    b = make_basis(name, 20)
    rng = np.random.default_rng(5)
    z = 1.5 * np.sqrt(rng.uniform(size=50)) * np.exp(2j * np.pi * rng.uniform(size=50))
    for j in range(20):
        phi, _, ps, _ = evaluate(b, j, z)
        nxt, _, _, _ = evaluate(b, j + 1, z)
        a = b.alpha[j]
        lhs = nxt * math.sqrt(1 - a * a)
        rhs = z * phi - a * ps
        assert np.max(np.abs(lhs - rhs) / np.maximum(np.abs(lhs), 1e-300)) < 1e-9


def test_eval_all_examples(uniform_basis):
    p = eval_all(uniform_basis, 2, 0.5)
    assert (p.phi, p.dphi, p.phistar, p.dphistar) == (0.25, 1.0, 1.0, 0.0)
    b = build_basis(W.compute_moments(W.bernstein_szego(0.5), 1))
    p = eval_all(b, 1, 0.0)
    assert p.phi == pytest.approx(-0.5773502691896258, rel=1e-14)
    assert p.phistar == pytest.approx(S, rel=1e-14)


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_eval_degree_zero(name, make_basis):
    b = make_basis(name, 3)
    p = eval_all(b, 0, 0.3 + 2j)
    assert p.phi == b.kappa[0] and p.phistar == b.kappa[0]
    assert p.dphi == 0 and p.dphistar == 0


@settings(max_examples=50, deadline=None)
@given(
    x=st.floats(-3, 3), y=st.floats(-3, 3),
    j=st.integers(0, 12), name=st.sampled_from(sorted(FAMILIES)),
)
def test_phistar_is_reflected_conjugate(x, y, j, name, make_basis):
    z = complex(x, y)
    if abs(z) < 1e-3:
        return
    b = make_basis(name, 12)
    p = eval_all(b, j, z)
    q = eval_all(b, j, 1 / z.conjugate())
    want = z**j * q.phi.conjugate()
    assert abs(p.phistar - want) <= 1e-9 * max(1.0, abs(want))


@settings(max_examples=30, deadline=None)
@given(x=st.floats(-3, 3), j=st.integers(0, 12))
def test_real_points_give_real_values(x, j, bs_basis):
    p = eval_all(bs_basis, j, x)
    assert p.phi.imag == 0 and p.dphi.imag == 0


def test_derivative_matches_finite_difference(bs_basis):
    z = 0.7 + 0.4j
    h = 1e-6
    for j in (1, 5, 20):
        fd = (eval_all(bs_basis, j, z + h).phi - eval_all(bs_basis, j, z - h).phi) / (2 * h)
        assert abs(fd - eval_all(bs_basis, j, z).dphi) < 1e-6 * max(1, abs(fd))


def test_evaluate_rows_matches_single_rows(bs_basis):
    z = np.array([0.2 + 0.1j, -1.7, 3j])
    p, dp = evaluate_rows(bs_basis, 10, z)
    for j in range(11):
        phi, dphi, _, _ = evaluate(bs_basis, j, z)
        np.testing.assert_allclose(p[j], phi, rtol=1e-13)
        np.testing.assert_allclose(dp[j], dphi, rtol=1e-13)


def test_leading_coefficient_limit():
    spec = W.bernstein_szego(0.5)
    b = build_basis(W.compute_moments(spec, 30))
    target = W.geometric_mean(spec) ** -0.5
    np.testing.assert_allclose(b.kappa[1:], target, rtol=1e-13)


def test_interior_limit_phistar_to_inverse_szego(bs_basis):
    spec = W.bernstein_szego(0.5)
    rng = np.random.default_rng(9)
    z = 0.8 * np.sqrt(rng.uniform(size=20)) * np.exp(2j * np.pi * rng.uniform(size=20))
    _, _, ps, _ = evaluate(bs_basis, 40, z)
    assert np.max(np.abs(ps - 1 / W.szego_function(spec, z))) < 1e-6


def test_trig_poly_interior_limit(make_basis):
    # 2 + cos t is smooth and positive, so the convergence is geometric
    spec = FAMILIES["trig_poly"][0]
    b = make_basis("trig_poly", 40)
    z = np.array([0.0, 0.5, -0.3 + 0.6j, 0.8j])
    _, _, ps, _ = evaluate(b, 40, z)
    assert np.max(np.abs(ps - 1 / W.szego_function(spec, z))) < 1e-6


def test_json_round_trip(bs_basis):
    b2 = OpucBasis.loads(bs_basis.dumps())
    np.testing.assert_array_equal(b2.coeffs, bs_basis.coeffs)
    np.testing.assert_array_equal(b2.kappa, bs_basis.kappa)
    np.testing.assert_array_equal(b2.alpha, bs_basis.alpha)
    assert set(bs_basis.to_dict()) == {"N", "kappa", "alpha", "coeffs"}


def test_json_rejects_bad_rows():
    d = {"N": 1, "kappa": [1.0, 1.0], "alpha": [0.0], "coeffs": [[1.0], [0.0, 1.0, 2.0]]}
    with pytest.raises(ValueError):
        OpucBasis.from_dict(d)


def test_row_bounds(uniform_basis):
    with pytest.raises(IndexError):
        uniform_basis.row(uniform_basis.N + 1)
