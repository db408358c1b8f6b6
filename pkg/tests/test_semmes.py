import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wpflow import functions as fn
from wpflow import semmes as se
from wpflow.errors import DegeneracyError, InvalidInputError, OutOfDomainError

SMALL = se.HalfPlaneGrid(X=4.0, nx=129, y_min=2.0 ** -6, Y=2.0, ny=48)


def z_of(grid):
    return grid.xs[None, :] + 1j * grid.ys[:, None]


@given(st.floats(0.5, 8), st.integers(5, 60), st.floats(1e-3, 0.5), st.floats(1.0, 8.0), st.integers(5, 60))
def test_grid_weights_sum_to_area(X, nx, y_min, Y, ny):
    g = se.HalfPlaneGrid(X=X, nx=nx, y_min=y_min, Y=Y, ny=ny)
    assert g.weights.sum() == pytest.approx(g.area(), rel=1e-12)


def test_grid_validation():
    with pytest.raises(InvalidInputError):
        se.HalfPlaneGrid(y_min=2.0, Y=1.0)


def test_rho_is_identity_for_zero(impl):
    rho = se.rho_extension(fn.builtin("zero"), SMALL, impl=impl).values
    np.testing.assert_allclose(rho, z_of(SMALL), atol=1e-12)


@given(st.floats(-3, 3))
def test_rho_ignores_constants(c):
    rho = se.rho_extension(fn.builtin("constant", {"c": c}), SMALL).values
    np.testing.assert_allclose(rho, z_of(SMALL), atol=1e-10)


def test_rho_backends_agree(impl):
    u = fn.builtin("gauss_bump", {"amp": 0.3})
    a = se.rho_extension(u, SMALL, impl=impl).values
    b = se.rho_extension(u, SMALL, impl="python").values
    np.testing.assert_allclose(a, b, atol=1e-12)


@given(st.floats(-1.5, 1.5))
def test_gamma_fixes_0_1_and_increases(amp):
    h = se.gamma_u(fn.builtin("gauss_bump", {"amp": amp}))
    np.testing.assert_allclose(h(np.array([0.0, 1.0])), [0.0, 1.0], atol=1e-13)
    assert np.all(np.diff(h.ys) > 0)


def test_kernel_wirtinger_matches_finite_difference():
    g = se.HalfPlaneGrid()
    u = fn.builtin("gauss_bump", {"amp": 0.1})
    k = se.wirtinger(u, g, "kernels")
    d = se.wirtinger(u, g, "finite_difference")
    gate = max(1e-4, 10 * g.hx ** 2)
    for a, b in zip(k, d):
        assert np.max(np.abs(a.values - b.values)[1:-1, 1:-1]) <= gate


def test_dbar_vanishes_for_zero_and_d_is_one():
    dbar, d = se.wirtinger(fn.builtin("zero"), SMALL)
    np.testing.assert_allclose(dbar.values, 0, atol=1e-12)
    np.testing.assert_allclose(d.values, 1, atol=1e-12)


def test_energy_scales_quadratically():
    e = [se.wp_energy(se.beltrami(fn.builtin("gauss_bump", {"amp": a}), SMALL)).value for a in (0.05, 0.1)]
    assert math.log2(e[1] / e[0]) == pytest.approx(2.0, abs=0.05)


def test_mu_bounded_and_linear_in_eps():
    s = [se.wp_energy(se.beltrami(fn.builtin("gauss_bump", {"amp": a}), SMALL)).sup_mu for a in (0.05, 0.1)]
    assert max(s) < 1
    assert s[1] / s[0] == pytest.approx(2.0, rel=0.02)


def test_mu_modulus_one_rejected():
    with pytest.raises(DegeneracyError):
        se.ComplexGridField(np.ones((SMALL.ny, SMALL.nx), dtype=complex), "mu", SMALL)


def test_field_tag_and_shape_checked():
    with pytest.raises(InvalidInputError):
        se.ComplexGridField(np.zeros((SMALL.ny, SMALL.nx), dtype=complex), "sigma", SMALL)
    with pytest.raises(InvalidInputError):
        se.ComplexGridField(np.zeros((3, 3), dtype=complex), "rho", SMALL)


def test_regime_warning():
    with pytest.warns(se.SemmesRegimeWarning):
        se.regime_check(fn.builtin("gauss_bump", {"amp": 2.0}))


def test_window_too_small():
    u = fn.builtin("gauss_bump", {"X": 4.0, "n": 257})
    with pytest.raises(OutOfDomainError):
        se.rho_extension(u, se.HalfPlaneGrid(X=4.0, nx=33, Y=2.0, ny=8))


def test_exp_overflow():
    with pytest.raises(Exception):
        se.exp_line(fn.builtin("gauss_bump", {"amp": 800.0}))


@pytest.mark.parametrize("name", ["gauss_bump", "sine_window"])
def test_fubini_identity(name):
    lhs, rhs = se.fubini_check(fn.builtin(name))
    assert lhs == pytest.approx(rhs, rel=1e-2)


def test_local_oscillation_linear():
    # u(x) = x locally: int_{-y}^{y} t^2 dt = 2 y^3 / 3
    u = fn.LineFunction.from_callable(lambda x: x, X=4.0, n=257, tail="affine")
    g = se.local_oscillation(u, np.array([0.0, 0.5]), 0.3)
    np.testing.assert_allclose(g, 2 * 0.3 ** 3 / 3, rtol=1e-12)


def test_pointwise_constant_stable():
    cs = []
    for a in (0.05, 0.1):
        u = fn.builtin("gauss_bump", {"amp": a})
        cs.append(se.pointwise_bound_constant(u, se.beltrami(u, SMALL)))
    assert cs[0] == pytest.approx(cs[1], rel=0.05)


def test_field_writers(tmp_path):
    f = se.rho_extension(fn.builtin("zero"), se.HalfPlaneGrid(X=2.0, nx=5, y_min=0.1, Y=1.0, ny=4))
    f.to_csv(tmp_path / "rho.csv")
    f.to_matrix(tmp_path / "rho.dat", "im")
    assert (tmp_path / "rho.csv").read_text().startswith("x,y,re,im")
    np.testing.assert_allclose(np.loadtxt(tmp_path / "rho.dat")[:, 0], f.grid.ys, rtol=1e-12)
