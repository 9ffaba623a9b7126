import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opuczeros.errors import NearCircleError
from opuczeros.kernels import (
    kernel_arrays_cd,
    kernel_arrays_direct,
    kernel_cd,
    kernel_direct,
)

from conftest import FAMILIES, random_points


def triple(t):
    return t.k, t.k01, t.k11


def test_direct_examples(uniform_basis, bs_basis):
    assert triple(kernel_direct(uniform_basis, 1, 0.5)) == (1.25, 0.5, 1.0)
    assert kernel_direct(uniform_basis, 3, 2.0).k == 85.0
    for b in (uniform_basis, bs_basis):
        t = kernel_direct(b, 0, 0.3 - 1.2j)
        assert t.k == pytest.approx(b.kappa[0] ** 2, rel=1e-15)
        assert t.k01 == 0 and t.k11 == 0


def test_cd_example(uniform_basis):
    t = kernel_cd(uniform_basis, 1, 0.5)
    assert t.k == pytest.approx(1.25, rel=1e-15)
    assert t.k01 == pytest.approx(0.5, rel=1e-15)
    assert t.k11 == pytest.approx(1.0, rel=1e-15)
    assert t.method == "christoffel_darboux"


def test_cd_refuses_near_circle(uniform_basis):
    with pytest.raises(NearCircleError):
        kernel_cd(uniform_basis, 1, 0.999999999)


def test_cd_bernstein_point(bs_basis):
    a = triple(kernel_direct(bs_basis, 5, 0.3 + 0.4j))
    b = triple(kernel_cd(bs_basis, 5, 0.3 + 0.4j))
    for x, y in zip(a, b):
        assert abs(x - y) <= 1e-10 * abs(x)


@pytest.mark.parametrize("name", sorted(FAMILIES))
@pytest.mark.parametrize("n", [1, 5, 20])
def test_cd_matches_direct(name, n, make_basis):
    b = make_basis(name, 21)
    z = random_points(np.random.default_rng(100 + n), 200)
    for d, c in zip(kernel_arrays_direct(b, n, z), kernel_arrays_cd(b, n, z)):
        assert np.all(np.abs(d - c) <= 1e-9 * np.abs(d) + 1e-12)


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_conjugation_symmetry(name, make_basis):
    b = make_basis(name, 10)
    z = random_points(np.random.default_rng(1), 40)
    k, k01, k11 = kernel_arrays_direct(b, 9, z)
    kc, k01c, k11c = kernel_arrays_direct(b, 9, z.conj())
    np.testing.assert_allclose(kc, k, rtol=1e-13)
    np.testing.assert_allclose(k11c, k11, rtol=1e-13)
    np.testing.assert_allclose(k01c, k01.conj(), rtol=1e-13)


@settings(max_examples=40, deadline=None)
@given(x=st.floats(-4, 4), y=st.floats(-4, 4), name=st.sampled_from(sorted(FAMILIES)))
def test_monotone_in_n_and_cauchy_schwarz(x, y, name, make_basis):
    b = make_basis(name, 20)
    z = complex(x, y)
    prev = 0.0
    for n in range(21):
        k, k01, k11 = (np.asarray(v).item() for v in kernel_arrays_direct(b, n, z))
        assert k >= prev
        prev = k
        assert k > 0 and k11 >= 0
        assert k11 * k - abs(k01) ** 2 >= -1e-12 * k11 * k


def test_direct_valid_on_circle(uniform_basis):
    z = np.exp(1j * np.linspace(0, 2 * np.pi, 9))
    k, _, k11 = kernel_arrays_direct(uniform_basis, 4, z)
    np.testing.assert_allclose(k, 5.0, rtol=1e-14)
    np.testing.assert_allclose(k11, 1 + 4 + 9 + 16, rtol=1e-14)


def test_cd_needs_degree_n_plus_one(uniform_basis):
    with pytest.raises(IndexError):
        kernel_cd(uniform_basis, uniform_basis.N, 0.5)
