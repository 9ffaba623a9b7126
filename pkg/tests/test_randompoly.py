import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linear_sum_assignment

from opuczeros.errors import DegeneratePolynomialError, RootFindingError
from opuczeros.randompoly import (
    aberth_batch,
    backward_error,
    find_roots,
    monte_carlo_expected_zeros,
    sample_coefficients,
    to_monomial,
)
from opuczeros.regions import Annulus, Disk, integrate_intensity

from conftest import FAMILIES

S = 1 / math.sqrt(0.75)


def match_distance(a, b):
    """Largest distance under the best one-to-one matching of two root sets."""
    cost = np.abs(np.asarray(a)[:, None] - np.asarray(b)[None, :])
    i, j = linear_sum_assignment(cost)
    return cost[i, j].max()


def test_sampling_deterministic_and_separated():
    a = sample_coefficients(1, 0, 2).eta
    b = sample_coefficients(1, 0, 2).eta
    c = sample_coefficients(1, 1, 2).eta
    d = sample_coefficients(2, 0, 2).eta
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c) and not np.array_equal(a, d)
    assert len(a) == 3 and np.all(np.isfinite(a))


def test_sampling_prefix_stable():
    # index j is a fixed counter position, so longer draws extend shorter ones
    np.testing.assert_array_equal(sample_coefficients(5, 3, 2).eta,
                                  sample_coefficients(5, 3, 7).eta[:3])


def test_sampling_statistics():
    # one eta_0 per trial key, as the Monte Carlo driver draws them
    n = 10**5
    eta = np.array([sample_coefficients(123, t, 0).eta[0] for t in range(n)])
    for part in (eta.real, eta.imag):
        assert abs(part.mean()) < 4 / math.sqrt(n)
        assert part.var() == pytest.approx(1.0, rel=0.05)
    assert abs(np.corrcoef(eta.real, eta.imag)[0, 1]) < 4 / math.sqrt(n)


def test_to_monomial_examples(uniform_basis, bs_basis):
    np.testing.assert_array_equal(to_monomial(uniform_basis, [1, 2j]), [1, 2j])
    np.testing.assert_allclose(to_monomial(bs_basis, [0, 1]), [-0.5 * S, S], rtol=1e-14)
    np.testing.assert_array_equal(to_monomial(bs_basis, np.zeros(4)), np.zeros(4))


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_to_monomial_matches_sum(name, make_basis):
    b = make_basis(name, 12)
    eta = sample_coefficients(4, 0, 12)
    c = to_monomial(b, eta)
    rng = np.random.default_rng(0)
    z = 2 * rng.uniform(-1, 1, 20) + 2j * rng.uniform(-1, 1, 20)
    direct = sum(eta.eta[j] * np.polyval(b.row(j)[::-1], z) for j in range(13))
    np.testing.assert_allclose(np.polyval(c[::-1], z), direct, rtol=1e-10)


def test_find_roots_examples():
    r = find_roots([-1, 0, 1])
    assert match_distance(r, [1, -1]) < 1e-12
    assert abs(find_roots([-0.37 + 0.2j, 1])[0] - (0.37 - 0.2j)) < 1e-14
    assert len(find_roots([3.0])) == 0


def test_find_roots_degree_reduction():
    r = find_roots([2, -3, 1, 1e-20])
    assert match_distance(r, [1, 2]) < 1e-12


def test_find_roots_degenerate():
    with pytest.raises(DegeneratePolynomialError):
        find_roots([0, 0, 0])


def test_find_roots_known_roots():
    roots = np.array([0.3, -2.0 + 1j, 0.01j, 5.0, -0.7 - 0.7j, 1.0])
    coeffs = np.poly(roots)[::-1]
    assert match_distance(find_roots(coeffs), roots) < 1e-10


def test_find_roots_iteration_cap():
    with pytest.raises(RootFindingError) as exc:
        aberth_batch(np.array([[1, 2, 3, 4, 5, 6, 7, 8.0]]), max_iter=1)
    assert exc.value.residual > 1e-8


def test_random_degree_ten(bs_basis):
    for t in range(50):
        c = to_monomial(bs_basis, sample_coefficients(99, t, 10))
        r = find_roots(c)
        assert len(r) == 10
        assert backward_error(c, r).max() < 1e-8


@settings(max_examples=40, deadline=None)
@given(trial=st.integers(0, 10**6), scale_re=st.floats(-5, 5), scale_im=st.floats(-5, 5))
def test_scale_invariance(trial, scale_re, scale_im, bs_basis):
    s = complex(scale_re, scale_im)
    if abs(s) < 1e-3:
        return
    c = to_monomial(bs_basis, sample_coefficients(17, trial, 8))
    r1 = find_roots(c)
    r2 = find_roots(s * c)
    assert match_distance(r1, r2) <= 1e-10 * max(1.0, np.abs(r1).max())


def test_mc_unit_disk(uniform_basis):
    rep = monte_carlo_expected_zeros(uniform_basis, 1, Disk(0, 1), 20000, 7, reference=0.5)
    assert abs(rep.mean - 0.5) <= 3 * rep.stderr
    assert rep.counts.min() >= 0 and rep.counts.max() <= 1
    assert rep.stderr == pytest.approx(np.std(rep.counts, ddof=1) / math.sqrt(20000))
    assert rep.degree_reductions == 0


def test_mc_huge_disk(uniform_basis):
    rep = monte_carlo_expected_zeros(uniform_basis, 1, Disk(0, 1e6), 2000, 3)
    assert abs(rep.mean - 1) <= 3 * rep.stderr + 1e-12


def test_mc_deterministic(bs_basis):
    a = monte_carlo_expected_zeros(bs_basis, 4, Disk(0, 0.9), 100, 11)
    b = monte_carlo_expected_zeros(bs_basis, 4, Disk(0, 0.9), 100, 11)
    assert a.to_dict() == b.to_dict()
    np.testing.assert_array_equal(a.counts, b.counts)


def test_mc_report_fields(uniform_basis):
    rep = monte_carlo_expected_zeros(uniform_basis, 3, Annulus(0, 0.5, 2), 200, 1, reference=1.0)
    d = rep.to_dict()
    for key in ("n", "trials", "seed", "region", "mean", "stderr", "quadrature_ref",
                "z_score", "counts_histogram"):
        assert key in d
    assert sum(d["counts_histogram"]) == 200 and len(d["counts_histogram"]) == 4
    assert d["z_score"] == pytest.approx((rep.mean - 1.0) / rep.stderr)


def test_mc_argument_checks(uniform_basis):
    with pytest.raises(ValueError):
        monte_carlo_expected_zeros(uniform_basis, 1, Disk(0, 1), 50, 0)
    with pytest.raises(ValueError):
        monte_carlo_expected_zeros(uniform_basis, 0, Disk(0, 1), 100, 0)


@pytest.mark.parametrize("name", ["uniform", "bernstein_szego", "trig_poly"])
@pytest.mark.parametrize("n", [2, 5])
def test_mc_agrees_with_quadrature(name, n, make_basis):
    b = make_basis(name, 6)
    for k, region in enumerate([Disk(0, 0.8), Annulus(0, 1.2, 2)]):
        ref = integrate_intensity(b, n, region, tol=1e-4).value
        rep = monte_carlo_expected_zeros(b, n, region, 20000, 1000 + 10 * n + k, reference=ref)
        assert abs(rep.z_score) <= 3.5, (rep.mean, ref, rep.stderr)
        assert rep.max_backward_error <= 1e-8
