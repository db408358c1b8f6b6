import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wpflow import functions as fn
from wpflow.errors import InvalidInputError, SpecParseError

M = 256


def trig_poly(coeffs, M=M):
    c = np.asarray(coeffs, dtype=complex)
    full = np.concatenate((np.conj(c[::-1]), [0.0], c))
    return fn.CircleFunction.from_coeffs(full, M=M)


coeff_lists = st.lists(st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False),
                       min_size=1, max_size=6)


# ---------------------------------------------------------------- circle


def test_h12_circle_cos():
    u = fn.builtin("cos", {"M": 1024})
    assert fn.h12_circle(u).value == pytest.approx(0.5, abs=1e-13)
    assert fn.h12_circle(u).norm == pytest.approx(math.sqrt(0.5))


def test_h12_circle_gagliardo_cos():
    u = fn.builtin("cos", {"M": 1024})
    assert fn.h12_circle(u, "gagliardo").value == pytest.approx(0.5, rel=1e-3)


@given(coeff_lists)
def test_circle_fourier_matches_gagliardo(c):
    u = trig_poly(c)
    f = fn.h12_circle(u).value
    g = fn.h12_circle(u, "gagliardo").value
    assert g == pytest.approx(f, rel=1e-3, abs=1e-12)


@given(coeff_lists, st.floats(-3, 3), st.floats(0, 2 * math.pi))
def test_circle_seminorm_ignores_constants_and_rotations(c, k, shift):
    u = trig_poly(c)
    base = fn.h12_circle(u).value
    th = u.thetas
    moved = fn.CircleFunction.from_callable(lambda t: u(t + shift) + k, M=M)
    assert fn.h12_circle(moved).value == pytest.approx(base, rel=1e-9, abs=1e-12)


@given(coeff_lists, st.floats(-4, 4))
def test_circle_seminorm_is_quadratic(c, t):
    u = trig_poly(c)
    scaled = fn.CircleFunction(t * u.samples)
    assert fn.h12_circle(scaled).value == pytest.approx(t * t * fn.h12_circle(u).value, rel=1e-10, abs=1e-14)


def test_h32_sin_plus_cos():
    u = fn.CircleFunction.from_callable(lambda t: np.sin(t) + np.cos(t), M=512)
    assert fn.h32_norm(u).value == pytest.approx(1.0, abs=1e-12)


def test_h12_circle_rejects_bad_method():
    with pytest.raises(InvalidInputError):
        fn.h12_circle(fn.builtin("cos"), "monte-carlo")


def test_circle_nonfinite_rejected():
    s = np.ones(16)
    s[3] = np.nan
    with pytest.raises(InvalidInputError):
        fn.CircleFunction(s)


# ---------------------------------------------------------------- line


def test_gauss_closed_form(gauss):
    # |u|^2_{H^1/2} = int |xi| |u^(xi)|^2 with u^ = F e^{-x^2} gives 1/(2 pi)
    assert fn.h12_line(gauss).value == pytest.approx(1 / (2 * math.pi), rel=1e-3)


@pytest.mark.parametrize("lam", [0.5, 2.0])
def test_line_dilation_invariance(gauss, lam):
    d = fn.LineFunction.from_callable(lambda x: np.exp(-(lam * x) ** 2), X=16.0, n=2049)
    assert fn.h12_line(d).value == pytest.approx(fn.h12_line(gauss).value, rel=1e-2)


@given(st.floats(-3, 3))
def test_line_translation_invariance(s):
    u = fn.builtin("gauss_bump", {"center": s})
    assert fn.h12_line(u).value == pytest.approx(1 / (2 * math.pi), rel=2e-3)


def test_line_constant_has_zero_seminorm():
    assert fn.h12_line(fn.builtin("constant", {"c": 2.0})).value == pytest.approx(0.0, abs=1e-14)


def test_line_backends_agree(impl, gauss):
    assert fn.h12_line(gauss, impl=impl).value == pytest.approx(fn.h12_line(gauss, impl="python").value, rel=1e-12)


def test_line_rejects_mismatched_tails():
    u = fn.LineFunction.from_callable(lambda x: np.tanh(x), X=4.0, n=129, tail="affine")
    with pytest.raises(InvalidInputError):
        fn.h12_line(u)


def test_line_integral_exact_for_cubics():
    u = fn.LineFunction.from_callable(lambda x: x ** 3 - x, X=2.0, n=41, tail="none", deriv=lambda x: 3 * x ** 2 - 1)
    assert u.integral(0.0, 1.5) == pytest.approx(1.5 ** 4 / 4 - 1.5 ** 2 / 2, abs=1e-13)


@given(st.floats(-1.9, 1.9))
def test_line_evaluation_hermite_exact(x):
    u = fn.LineFunction.from_callable(lambda t: 2 - t ** 2 + 0.1 * t ** 3, X=2.0, n=33, tail="none",
                                      deriv=lambda t: -2 * t + 0.3 * t ** 2)
    assert u(np.array([x]))[0] == pytest.approx(2 - x ** 2 + 0.1 * x ** 3, abs=1e-13)


def test_increasing_map_inverse_roundtrip():
    xs = np.linspace(-2, 2, 101)
    h = fn.IncreasingMap(xs, xs + 0.3 * np.sin(xs), 1 + 0.3 * np.cos(xs))
    q = np.linspace(-3, 3, 57)
    np.testing.assert_allclose(h.inverse(h(q)), q, atol=1e-6)


def test_increasing_map_rejects_decreasing():
    xs = np.linspace(0, 1, 5)
    with pytest.raises(Exception):
        fn.IncreasingMap(xs, -xs, -np.ones(5))


# ---------------------------------------------------------------- BMO / John-Nirenberg


def test_bmo_triangle_hand_value():
    # sup over the sampled intervals is attained on [-2, 0]: 9/32
    tri = fn.builtin("triangle", {"X": 2.0, "n": 129})
    assert fn.bmo_norm(tri, 6).value == pytest.approx(9 / 32, abs=1e-12)


def test_bmo_dyadic_bounded_by_bruteforce():
    tri = fn.builtin("triangle", {"X": 2.0, "n": 129})
    d, b = fn.bmo_norm(tri, 6).value, fn.bmo_bruteforce(tri)
    assert b / 2 <= d <= b + 1e-12


@given(st.floats(-5, 5).filter(lambda t: abs(t) > 1e-3))
def test_bmo_absolute_homogeneity(t):
    u = fn.builtin("sine_window")
    base = fn.bmo_norm(u, 8).value
    assert fn.bmo_norm(u.with_values(t * u.values), 8).value == pytest.approx(abs(t) * base, rel=1e-12)


def test_bmo_monotone_in_depth():
    u = fn.builtin("sine_window")
    seq = [fn.bmo_norm(u, d).value for d in range(1, 11)]
    assert all(b >= a for a, b in zip(seq, seq[1:]))


def test_mean_oscillation_linear():
    # |x - 1/2| averaged over [0, 1]
    assert fn.mean_oscillation(np.linspace(0, 1, 11), 0.1) == pytest.approx(0.25, abs=1e-12)


@pytest.mark.parametrize("p, expect", [(1, 0.25), (2, 1 / 12)])
def test_jn_moment_closed_forms(p, expect):
    lin = fn.LineFunction.from_callable(lambda x: x, X=2.0, n=129, tail="affine")
    assert fn.jn_moment(lin, (0.0, 1.0), p) == pytest.approx(expect, abs=1e-8)


def test_jn_exp_scales_linearly():
    vals = [fn.jn_moment(fn.builtin("gauss_bump", {"amp": e}), (-1, 1), variant="exp") / e for e in (0.05, 0.1)]
    assert vals[0] == pytest.approx(vals[1], rel=0.1)


# ---------------------------------------------------------------- Cayley


@given(st.floats(-50, 50))
def test_cayley_on_circle(x):
    assert abs(fn.cayley(complex(x, 0))) == pytest.approx(1.0)
    th = fn.cayley_angle(np.array([x]))
    assert fn.cayley_inverse_angle(th)[0] == pytest.approx(x, rel=1e-9, abs=1e-9)


@given(st.floats(-3, 3), st.floats(0.01, 3))
def test_cayley_maps_half_plane_to_disk(x, y):
    assert abs(fn.cayley(complex(x, y))) < 1


def test_tangential_field_roundtrip():
    a = fn.builtin("normalized_sin")
    g = fn.tangential_field(a)
    np.testing.assert_allclose(fn.angular_speed(g).samples, a.samples, atol=1e-14)
    with pytest.raises(InvalidInputError):
        fn.angular_speed(fn.CircleFunction(np.ones(64, dtype=complex)))


def test_cayley_pull_rotation_field():
    th = 2 * np.pi * np.arange(256) / 256
    rot = fn.CircleFunction(1j * np.exp(1j * th), is_real=False)
    line = fn.cayley_pull(rot, "vectorfield", X=8.0, n=257)
    np.testing.assert_allclose(line.values, (1 + line.grid ** 2) / 2, rtol=1e-12)


# ---------------------------------------------------------------- parsing


def test_parse_builtin_and_fourier():
    u = fn.parse_function('{"type": "fourier", "coeffs": [0.5, 0, 0.5]}')
    assert fn.h12_circle(u).value == pytest.approx(0.5)
    v = fn.parse_function({"type": "builtin", "name": "gauss_bump", "params": {"amp": 2.0}})
    assert v(np.array([0.0]))[0] == pytest.approx(2.0)


def test_parse_error_has_position():
    with pytest.raises(SpecParseError) as info:
        fn.parse_function('{"type": "fourier",\n "coeffs": [1, 2,]}')
    assert info.value.line == 2


@pytest.mark.parametrize("bad", ['{"type": "fourier", "coeffs": [1, 2]}', '{"type": "what"}',
                                 '{"type": "samples", "xs": [0, 1, 1, 2], "ys": [0, 0, 0, 0]}', '[1, 2]'])
def test_parse_rejects(bad):
    with pytest.raises(SpecParseError):
        fn.parse_function(bad)


def test_unknown_builtin():
    with pytest.raises(InvalidInputError):
        fn.builtin("no_such_function")
