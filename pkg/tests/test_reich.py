import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from wpflow import functions as fn
from wpflow import reich as rc
from wpflow import semmes as se
from wpflow.errors import InvalidInputError, ResolutionError

# golden: A[1/(1+t^2)](i/2) = 5/12 by residues at t = z and t = i
A_RATIONAL_HALF_I = 5.0 / 12.0


@pytest.fixture(scope="module")
def rational():
    return rc.BoundaryFunction.builtin("rational")


@pytest.fixture(scope="module")
def gauss16():
    return rc.BoundaryFunction.builtin("gauss_bump")


def _residue_A_rational(z):
    rz = 1 / (z * z + 1) ** 2
    ri = 1 / (4 * (1j - z) ** 2) + 1 / (4j * (1j - z))
    return (z * z + 1) / (1j * math.pi) * 2j * math.pi * (rz + ri)


def test_reich_A_golden(rational):
    z = 0.5j
    assert abs(_residue_A_rational(z) - A_RATIONAL_HALF_I) < 1e-14
    got = rc.reich_A(rational, z)
    # window [-16, 16] truncation costs ~4.5e-8 here
    assert abs(got - A_RATIONAL_HALF_I) < 1e-7


def test_reich_A_against_truncated_mpmath(rational, impl):
    mp.mp.dps = 25
    z = mp.mpc(0.3, 0.5)
    ref = mp.quad(lambda t: (z ** 2 + 1) / (1j * mp.pi) / ((t - z) * (t ** 2 + 1) ** 2), [-16, -1, 0, 0.3, 1, 16])
    assert abs(rc.reich_A(rational, 0.3 + 0.5j, impl=impl) - complex(ref)) < 1e-10


@pytest.mark.parametrize("z", [0.5j, 0.2 + 1j, -1 + 0.3j])
def test_reich_A3_closed_form(rational, z):
    # (A f)''' of 1/(1+t^2) is 6 / (i (z + i)^4), closing in the lower half plane
    ref = 6 / (1j * (z + 1j) ** 4)
    # dropping |t| > 16 changes the integral by at most (6/pi) 2 int_16^inf t^-6 (1 + |z|/16)^4
    trunc = 6 / math.pi * 2 / (5 * 16 ** 5) * (1 + abs(z) / 16) ** 4
    assert abs(rc.reich_A3(rational, z) - ref) < 1.05 * trunc


def test_A3_is_third_derivative_of_A(gauss16):
    z, h = 0.3 + 0.7j, 1e-2
    A = rc.reich_A(gauss16, z + h * np.array([2, 1, -1, -2]))
    fd3 = (A[0] - 2 * A[1] + 2 * A[2] - A[3]) / (2 * h ** 3)
    assert abs(fd3 - rc.reich_A3(gauss16, z)) < 1e-3


def test_A_boundary_values(gauss16):
    # Re A(x + i eps) -> f(x) at first order in eps
    x = np.array([-0.5, 0.3, 1.2])
    err = [np.max(np.abs(rc.reich_A(gauss16, x + 1j * e).real - np.exp(-x ** 2))) for e in (0.04, 0.02, 0.01)]
    assert err[2] < 0.02
    assert err[0] / err[1] == pytest.approx(2, rel=0.1)
    assert err[1] / err[2] == pytest.approx(2, rel=0.1)


@given(st.floats(-3, 3), st.floats(-2, 2), st.floats(-4, 4), st.floats(0.25, 4))
def test_H_reproduces_affine(a, b, x, y):
    f = fn.LineFunction.from_callable(lambda t: a + b * t, X=4.0, n=129, tail="affine")
    z = complex(x, y)
    assert abs(rc.reich_H_at(f, z) - (a + b * z)) < 1e-9 * (1 + abs(a) + abs(b) * abs(z))
    assert abs(rc.reich_A3(f, z)) < 1e-9 * (1 + abs(a) + abs(b))


def test_backends_agree(gauss16, impl):
    z = np.array([0.1 + 0.05j, 2 + 1j])
    np.testing.assert_allclose(rc.reich_H_at(gauss16, z, impl=impl), rc.reich_H_at(gauss16, z, impl="python"),
                               rtol=1e-9, atol=1e-12)


def test_dbar_identity_small_grid():
    f = rc.BoundaryFunction.builtin("gauss_bump", X=16.0, n=4097)
    g = se.HalfPlaneGrid(X=4.0, nx=129, y_min=2.0 ** -5, Y=2.0, ny=48)
    r = rc.check_dbar_identity(f, g)
    assert r["sup"] <= max(1e-3, 20 * g.hx ** 2)


def test_resolution_error():
    f = rc.BoundaryFunction.builtin("gauss_bump", X=16.0, n=1025)
    with pytest.raises(ResolutionError):
        rc.reich_A(f, 0.01j)
    with pytest.raises(InvalidInputError):
        rc.reich_A(f, 0.3 - 0.2j)


def test_boundary_validation():
    u = fn.builtin("gauss_bump")
    with pytest.raises(InvalidInputError):
        rc.BoundaryFunction(u.with_values(u.values, decay_exponent=2.0))
    with pytest.raises(InvalidInputError):
        rc.BoundaryFunction(u.with_values(u.values, tail="none"))
    assert rc.BoundaryFunction(u).growth_constant == pytest.approx(1.0)


def test_chain_small_grid():
    f = rc.BoundaryFunction.builtin("gauss_bump", X=16.0, n=4097)
    g = se.HalfPlaneGrid(X=4.0, nx=129, y_min=2.0 ** -5, Y=2.0, ny=48)
    assert rc.chain_check(f, g)["pass"]


def test_psi_k_validation():
    with pytest.raises(InvalidInputError):
        rc.psi_k(1)


def test_dirichlet_closed_forms_coarse():
    # iint |z+i|^-4 = pi/4 and iint |z+i|^-6 y^2 4 = pi/8 over the half plane
    lhs, rhs = rc.dirichlet_equiv(2)
    assert lhs == pytest.approx(math.pi / 4, rel=0.03)
    assert rhs == pytest.approx(math.pi / 8, rel=0.03)


def test_dirichlet_oracles_mpmath():
    # independent one-dimensional reductions: int_0^inf dy int_R dx |x + i(y+1)|^{-2k}
    mp.mp.dps = 20
    lhs = mp.quad(lambda y: mp.pi / (2 * (y + 1) ** 3), [0, mp.inf])
    rhs = mp.quad(lambda y: 4 * y ** 2 * 3 * mp.pi / (8 * (y + 1) ** 5), [0, mp.inf])
    assert float(lhs) == pytest.approx(math.pi / 4, rel=1e-12)
    assert float(rhs) == pytest.approx(math.pi / 8, rel=1e-12)


def test_reproducing_formula():
    d, r = rc.reproducing_check(2, 2j)
    assert abs(r - d) <= 0.01 * abs(d)


def test_cayley_transfer():
    g = fn.tangential_field(fn.builtin("normalized_sin"))
    assert rc.cayley_transfer_check(g)["sup"] < 1e-6
    with pytest.raises(InvalidInputError):
        rc.cayley_transfer_check(fn.builtin("cos"))
