import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wpflow import functions as fn
from wpflow import wpmap as wp
from wpflow.errors import InvalidInputError

amps = st.floats(-1.5, 1.5)


@pytest.fixture(scope="module")
def u():
    return fn.builtin("gauss_bump", {"amp": 0.5})


@pytest.fixture(scope="module")
def v():
    return fn.builtin("sine_window")


@given(amps, st.floats(-2, 2))
def test_psi_fixes_endpoints(a, c):
    h = wp.psi(fn.builtin("gauss_bump", {"amp": a, "center": c}))
    np.testing.assert_allclose(h(np.array([0.0, 1.0])), [0, 1], atol=1e-12)
    assert np.all(h.dys > 0)


@given(st.floats(-20, 20))
def test_psi_quotient_invariance(c):
    u = fn.builtin("gauss_bump", {"amp": 0.5})
    shifted = u.with_values(u.values + c, slopes=u.slopes)
    np.testing.assert_allclose(wp.psi(shifted).ys, wp.psi(u).ys, atol=1e-10)


def test_psi_of_zero_is_identity():
    h = wp.psi(fn.builtin("zero"))
    np.testing.assert_allclose(h.ys, h.xs, atol=1e-13)


def test_psi_of_linear():
    # u = x: (e^x - 1) / (e - 1)
    lin = fn.builtin("linear", {"X": 4.0, "n": 513})
    h = wp.psi(lin)
    np.testing.assert_allclose(h.ys, np.expm1(h.xs) / (math.e - 1), rtol=1e-9, atol=1e-12)


def test_dpsi_richardson(u, v):
    H = wp.psi(u)
    dv = wp.d_psi(u, v).representative.values
    errs = []
    for eps in (1e-2, 5e-3):
        ue = u.with_values(u.values + eps * v.values, slopes=u.slopes + eps * v.slopes)
        errs.append(np.max(np.abs(wp.psi(ue).ys - H.ys - eps * dv)))
    assert 1.9 <= math.log2(errs[0] / errs[1]) <= 2.1


@given(st.floats(-3, 3), st.floats(-3, 3))
def test_dpsi_linear(s, t):
    u = fn.builtin("gauss_bump", {"amp": 0.5})
    v, w = fn.builtin("sine_window"), fn.builtin("triangle")
    comb = v.with_values(s * v.values + t * w.values, slopes=s * v.slopes + t * w.slopes)
    lhs = wp.d_psi(u, comb).representative.values
    rhs = s * wp.d_psi(u, v).representative.values + t * wp.d_psi(u, w).representative.values
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_dpsi_kills_constants(u):
    one = fn.builtin("constant", {"c": 1.0})
    np.testing.assert_allclose(wp.d_psi(u, one).representative.values, 0, atol=1e-13)


def test_dpsi_vanishes_at_endpoints(u, v):
    r = wp.d_psi(u, v).representative
    np.testing.assert_allclose(r(np.array([0.0, 1.0])), 0, atol=1e-13)


def test_roundtrips(u, v):
    w = wp.d_psi(u, fn.builtin("triangle")).representative
    back = wp.d_psi(u, wp.d_psi_inv(u, w)).representative
    np.testing.assert_allclose(back.values, w.values, atol=1e-6)
    c = wp.d_psi_inv(u, wp.d_psi(u, v)).representative.values
    np.testing.assert_allclose(c, wp.SobolevClass(v).canonical().representative.values, atol=1e-6)


def test_inverse_requires_vanishing(u):
    with pytest.raises(InvalidInputError):
        wp.d_psi_inv(u, fn.builtin("gauss_bump"))
    with pytest.raises(InvalidInputError):
        wp.TangentVectorWP(fn.builtin("gauss_bump"))


def test_grid_mismatch(u):
    with pytest.raises(InvalidInputError):
        wp.d_psi(u, fn.builtin("gauss_bump", {"n": 1025}))


def test_canonical_mean_zero(v):
    c = wp.SobolevClass(v).canonical()
    r = c.representative
    assert c.mean_zero and abs(r.integral()) < 1e-12


def test_intertwining():
    h0 = wp.psi(fn.builtin("gauss_bump"))
    assert wp.translations(h0, fn.builtin("sine_window"))["sup"] <= 1e-4
    assert wp.translations(h0, fn.builtin("gauss_bump"))["sup"] <= 1e-6


def test_interpolation_family(u):
    h = wp.psi(u)
    np.testing.assert_allclose(wp.interpolation_family(h, 0.0).ys, h.xs, atol=1e-12)
    np.testing.assert_allclose(wp.interpolation_family(h, 1.0).ys, h.ys, atol=1e-12)
    half = wp.interpolation_family(h, 0.5)
    np.testing.assert_allclose(half.log_derivative().values, 0.5 * h.log_derivative().values, atol=1e-12)
    with pytest.raises(InvalidInputError):
        wp.interpolation_family(h, 1.5)


def test_pullback_identity_and_affine():
    fam = [fn.builtin("gauss_bump", {"width": 3.0})]
    x = fam[0].grid
    assert wp.pullback_probe(fn.IncreasingMap.identity(x), fam)["ratios"][0] == pytest.approx(1, abs=1e-12)
    aff = fn.IncreasingMap(x, 2 * x + 0.3, np.full_like(x, 2.0))
    assert wp.pullback_probe(aff, fam)["ratios"][0] == pytest.approx(1, abs=1e-3)
