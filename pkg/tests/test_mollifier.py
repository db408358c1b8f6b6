import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wpflow import functions as fn
from wpflow import mollifier as mo
from wpflow.errors import InvalidInputError, OutOfDomainError


@pytest.fixture(scope="module")
def kernels4():
    phi, psi = mo.make_phi(), mo.make_psi()
    al, be = mo.derive_alpha_beta(phi, psi)
    return phi, psi, al, be


def test_moments(kernels4):
    phi, psi, al, be = kernels4
    assert phi.moments[0] == pytest.approx(1.0, abs=1e-12)
    assert phi.moments[1] == pytest.approx(0.0, abs=1e-14)
    assert psi.moments[0] == pytest.approx(0.0, abs=1e-14)
    assert psi.moments[1] == pytest.approx(1.0, abs=1e-12)
    assert abs(al.moments[0]) < 1e-12
    assert abs(be.moments[0] - 1) < 1e-12


def test_parities(kernels4):
    phi, psi, _, _ = kernels4
    r = np.linspace(-0.99, 0.99, 41)
    np.testing.assert_allclose(phi(r), phi(-r), atol=1e-15)
    np.testing.assert_allclose(psi(r), -psi(-r), atol=1e-15)
    assert np.all(phi(np.array([-1.0, 1.0, 1.5])) == 0)


def test_alpha_beta_closed_forms(kernels4):
    phi, psi, al, be = kernels4
    r = np.linspace(-0.9, 0.9, 19)
    a = 0.5 * ((phi(r) - r * psi(r)) - 1j * (psi(r) + r * phi(r)))
    b = 0.5 * ((phi(r) + r * psi(r)) - 1j * (psi(r) - r * phi(r)))
    np.testing.assert_allclose(al(r), a, atol=1e-15)
    np.testing.assert_allclose(be(r), b, atol=1e-15)


def test_derive_rejects_swapped(kernels4):
    phi, psi, _, _ = kernels4
    with pytest.raises(InvalidInputError):
        mo.derive_alpha_beta(psi, phi)


@given(st.floats(-2, 2), st.floats(0.05, 1.0))
def test_linear_reproduction(x, y):
    phi, psi = mo.make_phi(), mo.make_psi()
    lin = fn.builtin("linear", {"X": 8.0, "n": 513})
    assert mo.convolve_scaled(phi, y, lin, x) == pytest.approx(x, abs=1e-12)
    assert mo.convolve_scaled(psi, y, lin, x) == pytest.approx(-y, abs=1e-12)


def test_alpha_beta_on_constants(kernels4):
    _, _, al, be = kernels4
    one = fn.builtin("constant", {"c": 1.0, "X": 8.0, "n": 513})
    xs = np.linspace(-1, 1, 5)
    a, b = mo.convolve_many([al, be], 0.3, one, xs)
    np.testing.assert_allclose(a, 0, atol=1e-13)
    np.testing.assert_allclose(b, 1, atol=1e-13)


def test_second_order_convergence(kernels4, gauss):
    phi = kernels4[0]
    e = [abs(mo.convolve_scaled(phi, y, gauss, 0.3) - math.exp(-0.09)) for y in (0.2, 0.1, 0.05)]
    assert e[0] / e[1] == pytest.approx(4, rel=0.1)
    assert e[1] / e[2] == pytest.approx(4, rel=0.1)


def test_backends_agree(kernels4, gauss, impl):
    xs = np.linspace(-3, 3, 31)
    a = mo.convolve_many(list(kernels4), 0.4, gauss, xs, impl=impl)
    b = mo.convolve_many(list(kernels4), 0.4, gauss, xs, impl="python")
    for p, q in zip(a, b):
        np.testing.assert_allclose(p, q, rtol=1e-12, atol=1e-14)


@given(st.floats(-3, 3), st.floats(-3, 3))
def test_convolution_linear(s, t):
    phi = mo.make_phi(256)
    u, v = fn.builtin("gauss_bump", {"X": 8.0, "n": 257}), fn.builtin("triangle", {"X": 8.0, "n": 257})
    w = u.with_values(s * u.values + t * v.values, slopes=s * u.slopes + t * v.slopes)
    xs = np.linspace(-1, 1, 7)
    lhs, = mo.convolve_many([phi], 0.5, w, xs)
    a, = mo.convolve_many([phi], 0.5, u, xs)
    b, = mo.convolve_many([phi], 0.5, v, xs)
    np.testing.assert_allclose(lhs, s * a + t * b, atol=1e-12)


def test_out_of_window(kernels4):
    u = fn.builtin("gauss_bump", {"X": 2.0, "n": 65})
    with pytest.raises(OutOfDomainError):
        mo.convolve_scaled(kernels4[0], 0.5, u.with_values(u.values, tail="none"), 1.8)
    with pytest.raises(InvalidInputError):
        mo.convolve_scaled(kernels4[0], 0.0, u, 0.0)


def test_weights_validation(kernels4):
    with pytest.raises(InvalidInputError):
        kernels4[0].weights(4)


def test_comparability_small_bmo():
    u = fn.builtin("gauss_bump", {"amp": 0.1})
    assert fn.bmo_norm(u).value <= 0.1
    r = mo.comparability_ratios(u, np.linspace(-4, 4, 16), np.geomspace(2 ** -6, 2, 8))
    assert 2 / 3 <= r.min() and r.max() <= 1.5


def test_mean_deviation_constant_stable():
    xs, ys = np.linspace(-4, 4, 16), np.geomspace(2 ** -6, 2, 4)
    cs = [mo.mean_deviation_constant(fn.builtin("gauss_bump", {"amp": e}), xs, ys) for e in (0.05, 0.1)]
    assert cs[0] == pytest.approx(cs[1], rel=1e-9)
