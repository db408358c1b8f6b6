import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from wpflow import _pykernels, kernels
from wpflow.errors import InvalidInputError

needs_c = pytest.mark.skipif(not kernels.compiled_available(), reason="compiled kernels not built")


def _herm_data(n=65, seed=0):
    rng = np.random.default_rng(seed)
    return rng.normal(size=n), rng.normal(size=n)


def test_backend_selection(monkeypatch):
    monkeypatch.setenv("WPFLOW_PURE", "1")
    assert kernels.backend() is _pykernels
    monkeypatch.delenv("WPFLOW_PURE")
    assert kernels.backend_name("python") == "python"
    with pytest.raises(InvalidInputError):
        kernels.backend("fortran")


def test_ordered_map_keeps_order(monkeypatch):
    monkeypatch.setenv("WPFLOW_WORKERS", "3")
    assert kernels.ordered_map(lambda k: k * k, range(20)) == [k * k for k in range(20)]


@needs_c
def test_shift_sums_backends_agree():
    re, im = _herm_data(200)
    for periodic in (True, False):
        a = kernels.shift_sums(re + 1j * im, periodic, impl="python")
        b = kernels.shift_sums(re + 1j * im, periodic, impl="c")
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)


def test_shift_sums_definition():
    re, im = _herm_data(17)
    S = kernels.shift_sums(re + 1j * im, False, impl="python")
    for k in (1, 5, 16):
        assert S[k] == pytest.approx(np.sum((re[k:] - re[:-k]) ** 2 + (im[k:] - im[:-k]) ** 2))


@pytest.mark.parametrize("impl", ["python", "c"])
def test_hermite_reproduces_cubics(impl):
    if impl == "c" and not kernels.compiled_available():
        pytest.skip("no compiled kernels")
    x = np.linspace(-1, 2, 31)
    p = lambda t: 1 - 2 * t + 0.5 * t ** 2 - 0.3 * t ** 3
    dp = lambda t: -2 + t - 0.9 * t ** 2
    q = np.linspace(-1, 2, 97)
    v = kernels.hermite_eval(p(x), dp(x), x[0], x[1] - x[0], q, impl=impl)
    np.testing.assert_allclose(v, p(q), atol=1e-13)


@needs_c
@pytest.mark.parametrize("kind", [kernels.KIND_A, kernels.KIND_A3, kernels.KIND_H, kernels.KIND_CAUCHY])
@pytest.mark.parametrize("y", [0.05, 0.5, 3.0])
def test_line_integral_backends_agree(kind, y):
    x = np.linspace(-4, 4, 257)
    v, s = np.exp(-x ** 2), -2 * x * np.exp(-x ** 2)
    xs = np.linspace(-3, 3, 13)
    a = kernels.line_integral(v, s, x[0], x[1] - x[0], xs, y, kind, impl="python")
    b = kernels.line_integral(v, s, x[0], x[1] - x[0], xs, y, kind, impl="c")
    np.testing.assert_allclose(a, b, rtol=1e-8, atol=1e-10)


def _mp_line(f, kernel, a, b):
    mp.mp.dps = 25
    return complex(mp.quad(lambda t: f(t) * kernel(t), mp.linspace(a, b, 17)))


@pytest.mark.parametrize("z", [0.3 + 0.2j, -1.1 + 0.05j, 0.0 + 2.0j])
def test_a3_against_mpmath(z):
    # window integral of a cubic on [-1, 1]: the Hermite interpolant is exact
    x = np.linspace(-1, 1, 65)
    f = lambda t: 1 + t - t ** 3
    df = lambda t: 1 - 3 * t ** 2
    got = kernels.line_integral(f(x), df(x), -1.0, x[1] - x[0], [z.real], z.imag, kernels.KIND_A3)[0]
    zz = mp.mpc(z.real, z.imag)
    ref = 6 / (1j * mp.pi) * mp.quad(lambda t: (1 + t - t ** 3) / (t - zz) ** 4, mp.linspace(-1, 1, 33))
    assert abs(got - complex(ref)) <= 1e-8 * max(1.0, abs(complex(ref)))


def test_cauchy_against_mpmath():
    x = np.linspace(-1, 1, 65)
    z = 0.2 + 0.01j
    got = kernels.line_integral(x ** 2, 2 * x, -1.0, x[1] - x[0], [z.real], z.imag, kernels.KIND_CAUCHY)[0]
    zz = mp.mpc(z.real, z.imag)
    ref = mp.quad(lambda t: t ** 2 / (t - zz), [-1, 0.2, 1]) / (2j * mp.pi)
    assert abs(got - complex(ref)) < 1e-10


@given(st.floats(-3, 3), st.floats(0.01, 5))
def test_affine_tails_match_quadrature(x, y):
    # f = 1 + 0.5 t everywhere; window [-2, 2] plus closed-form tails equals the analytic H value
    g = np.linspace(-2, 2, 33)
    vals, slopes = 1 + 0.5 * g, np.full_like(g, 0.5)
    tails = (1.0, 0.5, 1.0, 0.5)
    h = kernels.line_integral(vals, slopes, -2.0, g[1] - g[0], [x], y, kernels.KIND_H, tails)[0]
    assert abs(h - (1 + 0.5 * complex(x, y))) < 1e-9


def test_cauchy_rejects_affine_tails():
    g = np.linspace(-1, 1, 9)
    with pytest.raises(InvalidInputError):
        kernels.line_integral(g, np.ones_like(g), -1.0, 0.25, [0.0], 1.0, kernels.KIND_CAUCHY, (0, 1, 0, 1))


def test_partial_fractions_reassemble():
    z = 0.4 + 0.9j
    for kind in (kernels.KIND_A, kernels.KIND_A3, kernels.KIND_H):
        pref, terms = kernels.partial_fractions(kind, z)
        t = 1.7
        got = pref * sum(c / (t - p) ** k for p, k, c in terms)
        if kind == kernels.KIND_A:
            ref = (z * z + 1) / (1j * math.pi) / ((t - z) * (t * t + 1))
        elif kind == kernels.KIND_A3:
            ref = 6 / (1j * math.pi) / (t - z) ** 4
        else:
            zc = z.conjugate()
            ref = (z - zc) ** 3 / (2j * math.pi) / ((t - z) * (t - zc) ** 3)
        assert abs(got - ref) < 1e-13
