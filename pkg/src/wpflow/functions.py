"""Circle and line function representations and the seminorm engines.

Conventions
-----------
* Seminorm reports carry the *squared* seminorm in ``value``; ``norm`` is its
  square root.
* The circle H^1/2 seminorm is ``sum_n |n| |c_n|^2``; the Gagliardo form
  ``(1/4 pi^2) iint |u(a)-u(b)|^2 / |e^{ia}-e^{ib}|^2`` gives the same number
  and is available as an independent mode.
* On the line the Gagliardo form is ``(1/4 pi^2) iint |u(x)-u(y)|^2/(x-y)^2``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from . import kernels
from .errors import (InvalidInputError, MonotonicityError, OutOfDomainError,
                     SpecParseError)

TWO_PI = 2.0 * math.pi


def _finite(arr, what):
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{what} contains non-finite values")


def smooth_step(s):
    """C-infinity step: 0 for s <= 0, 1 for s >= 1."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inner = (s > 0) & (s < 1)
    out[s >= 1] = 1.0
    si = s[inner]
    a = np.exp(-1.0 / si)
    b = np.exp(-1.0 / (1.0 - si))
    out[inner] = a / (a + b)
    return out


def plateau(x, half_width, taper):
    """Smooth window equal to 1 on |x| <= half_width - taper, 0 for |x| >= half_width."""
    x = np.asarray(x, dtype=float)
    if taper <= 0:
        return (np.abs(x) <= half_width).astype(float)
    return smooth_step((half_width - np.abs(x)) / taper)


# --------------------------------------------------------------------------
# circle


class CircleFunction:
    """Periodic function sampled at M uniform angles 2 pi j / M.

    Fourier coefficients ``c_n = (1/M) sum_j u_j e^{-i n theta_j}`` are kept for
    ``|n| <= N = M//2 - 1`` (the Nyquist mode is dropped).
    """

    def __init__(self, samples, is_real=None):
        s = np.asarray(samples)
        if s.ndim != 1 or s.size < 4:
            raise InvalidInputError("circle samples must be a 1-D array with at least 4 entries")
        _finite(s, "circle samples")
        if is_real is None:
            is_real = not np.iscomplexobj(s) or bool(np.all(s.imag == 0))
        self.is_real = bool(is_real)
        self.samples = s.real.astype(float) if self.is_real else s.astype(complex)
        self.samples.setflags(write=False)
        self.M = s.size
        self.N = self.M // 2 - 1
        full = np.fft.fft(self.samples) / self.M
        n = self.modes
        self.coeffs = full[n % self.M]
        if self.is_real:
            # exact conjugate symmetry
            half = self.coeffs[self.N:]
            self.coeffs = np.concatenate((np.conj(half[:0:-1]), half))
        self.coeffs.setflags(write=False)

    @property
    def modes(self):
        return np.arange(-self.N, self.N + 1)

    @property
    def thetas(self):
        return TWO_PI * np.arange(self.M) / self.M

    @classmethod
    def from_coeffs(cls, coeffs, M=1024, is_real=None):
        """Build from coefficients listed for n = -K..K."""
        c = np.asarray(coeffs, dtype=complex)
        if c.ndim != 1 or c.size % 2 != 1:
            raise InvalidInputError("Fourier coefficient list must have odd length (n = -K..K)")
        _finite(c, "Fourier coefficients")
        K = c.size // 2
        if K > M // 2 - 1:
            raise InvalidInputError(f"{K} modes do not fit in {M} samples")
        n = np.arange(-K, K + 1)
        th = TWO_PI * np.arange(M) / M
        vals = np.exp(1j * np.outer(th, n)) @ c
        if is_real is None:
            is_real = np.allclose(c, np.conj(c[::-1]), rtol=0, atol=1e-14 * max(1.0, np.abs(c).max()))
        return cls(vals.real if is_real else vals, is_real=is_real)

    @classmethod
    def from_callable(cls, fn, M=1024):
        th = TWO_PI * np.arange(M) / M
        return cls(np.asarray(fn(th)))

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        vals = np.exp(1j * theta[..., None] * self.modes) @ self.coeffs
        return vals.real if self.is_real else vals

    def derivative(self):
        d = 1j * self.modes * self.coeffs
        full = np.zeros(self.M, dtype=complex)
        full[self.modes % self.M] = d
        vals = np.fft.ifft(full) * self.M
        return CircleFunction(vals.real if self.is_real else vals, is_real=self.is_real)

    def centered(self):
        return CircleFunction(self.samples - self.coeffs[self.N], is_real=self.is_real)

    def __repr__(self):
        return f"CircleFunction(M={self.M}, is_real={self.is_real})"


# --------------------------------------------------------------------------
# line


class LineFunction:
    """Function on a uniform grid ``x0 + k dx`` (k < n), with a tail model.

    Parameters
    ----------
    x0, dx : float
        First abscissa and grid step.
    values : array
        Real or complex samples.
    decay_exponent : float
        Declared growth exponent alpha, f(t) = O(|t|^alpha).
    tail : {'zero', 'affine', 'none'}
        Behaviour outside the grid: zero, linear extrapolation from the end
        slopes, or undefined (evaluation outside raises).
    slopes : array, optional
        Derivative samples; defaults to the not-a-knot cubic spline slopes.
    """

    TAILS = ("zero", "affine", "none")

    def __init__(self, x0, dx, values, decay_exponent=0.0, tail="zero", slopes=None, taper=0.0):
        v = np.asarray(values)
        if v.ndim != 1 or v.size < 4:
            raise InvalidInputError("line samples must be a 1-D array with at least 4 entries")
        if not dx > 0:
            raise InvalidInputError("grid must be strictly increasing")
        if tail not in self.TAILS:
            raise InvalidInputError(f"tail must be one of {self.TAILS}")
        _finite(v, "line values")
        self.x0 = float(x0)
        self.dx = float(dx)
        self.values = v.astype(complex) if np.iscomplexobj(v) else v.astype(float)
        self.values.setflags(write=False)
        self.decay_exponent = float(decay_exponent)
        self.tail = tail
        self.taper = float(taper)
        if slopes is None:
            slopes = CubicSpline(self.grid, self.values)(self.grid, 1)
        self.slopes = np.asarray(slopes, dtype=self.values.dtype)
        self.slopes.setflags(write=False)

    # basic geometry
    @property
    def n(self):
        return self.values.size

    @property
    def grid(self):
        return self.x0 + self.dx * np.arange(self.values.size)

    @property
    def a(self):
        return self.x0

    @property
    def b(self):
        return self.x0 + self.dx * (self.n - 1)

    @property
    def is_complex(self):
        return np.iscomplexobj(self.values)

    @classmethod
    def from_callable(cls, fn, X=16.0, n=2049, tail="zero", taper=0.0, decay_exponent=0.0, deriv=None):
        """Sample ``fn`` on [-X, X]; ``taper`` > 0 multiplies by a smooth window."""
        xs = np.linspace(-X, X, n)
        vals = np.asarray(fn(xs))
        slopes = None if deriv is None else np.asarray(deriv(xs))
        if taper > 0:
            w = plateau(xs, X, taper)
            if slopes is not None:
                raise InvalidInputError("explicit derivative cannot be combined with a taper")
            vals = vals * w
        return cls(-X, 2.0 * X / (n - 1), vals, decay_exponent=decay_exponent, tail=tail,
                   slopes=slopes, taper=taper)

    def with_values(self, values, tail=None, slopes=None, decay_exponent=None):
        return LineFunction(self.x0, self.dx, values,
                            decay_exponent=self.decay_exponent if decay_exponent is None else decay_exponent,
                            tail=self.tail if tail is None else tail, slopes=slopes, taper=self.taper)

    def tail_coeffs(self):
        """Affine coefficients (alpha_l, beta_l, alpha_r, beta_r) of the tails."""
        if self.tail != "affine":
            return (0.0, 0.0, 0.0, 0.0)
        vl, sl = self.values[0], self.slopes[0]
        vr, sr = self.values[-1], self.slopes[-1]
        return (vl - sl * self.a, sl, vr - sr * self.b, sr)

    def _eval_real(self, vals, slopes, x):
        return kernels.hermite_eval(vals, slopes, self.x0, self.dx, x)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.a) & (x <= self.b)
        if self.is_complex:
            out = np.zeros(x.shape, dtype=complex)
            xi = x[inside]
            out[inside] = (self._eval_real(self.values.real, self.slopes.real, xi)
                           + 1j * self._eval_real(self.values.imag, self.slopes.imag, xi))
        else:
            out = np.zeros(x.shape)
            out[inside] = self._eval_real(self.values, self.slopes, x[inside])
        if not np.all(inside):
            if self.tail == "none":
                raise OutOfDomainError(f"evaluation outside [{self.a}, {self.b}]")
            if self.tail == "affine":
                al, bl, ar, br = self.tail_coeffs()
                left = x < self.a
                right = x > self.b
                out[left] = al + bl * x[left]
                out[right] = ar + br * x[right]
        return out

    def derivative(self):
        spl = CubicSpline(self.grid, self.slopes)
        tail = "zero" if self.tail == "zero" else ("affine" if self.tail == "affine" else "none")
        if tail == "affine":
            # derivative of an affine tail is constant: keep it with zero slope
            return LineFunction(self.x0, self.dx, self.slopes, decay_exponent=max(self.decay_exponent - 1, 0),
                                tail="affine", slopes=np.concatenate(([0.0], spl(self.grid[1:-1], 1), [0.0])))
        return LineFunction(self.x0, self.dx, self.slopes, decay_exponent=self.decay_exponent - 1,
                            tail=tail, slopes=spl(self.grid, 1))

    def restrict(self, lo, hi):
        """Sub-grid function on the nodes inside [lo, hi] (tail 'none')."""
        g = self.grid
        idx = np.nonzero((g >= lo - 1e-12 * self.dx) & (g <= hi + 1e-12 * self.dx))[0]
        if idx.size < 4:
            raise InvalidInputError("restriction interval holds fewer than 4 grid nodes")
        return LineFunction(g[idx[0]], self.dx, self.values[idx], decay_exponent=self.decay_exponent,
                            tail="none", slopes=self.slopes[idx])

    def integral(self, lo=None, hi=None):
        """Integral of the Hermite interpolant over grid-aligned [lo, hi]."""
        f = self if lo is None and hi is None else self.restrict(
            self.a if lo is None else lo, self.b if hi is None else hi)
        v, s, h = f.values, f.slopes, f.dx
        # exact for the cubic Hermite interpolant
        return float(np.sum(h * (v[:-1] + v[1:]) / 2 + h * h * (s[:-1] - s[1:]) / 12).real) if not f.is_complex \
            else complex(np.sum(h * (v[:-1] + v[1:]) / 2 + h * h * (s[:-1] - s[1:]) / 12))

    def centered(self, lo=0.0, hi=1.0):
        """Representative shifted so its mean over [lo, hi] vanishes."""
        mean = self.integral(lo, hi) / (hi - lo)
        return self.with_values(self.values - mean, slopes=self.slopes)

    def __repr__(self):
        return f"LineFunction([{self.a}, {self.b}], n={self.n}, tail={self.tail!r})"


# --------------------------------------------------------------------------
# increasing maps


class IncreasingMap:
    """Strictly increasing sampled map of the line (or lifted circle map).

    ``xs``, ``ys`` are paired samples and ``dys`` the derivative samples.
    Evaluation uses the cubic Hermite interpolant through (xs, ys, dys);
    outside the sampled range the map continues linearly.
    """

    def __init__(self, xs, ys, dys, domain="line"):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        dys = np.asarray(dys, dtype=float)
        if domain not in ("line", "circle"):
            raise InvalidInputError("domain must be 'line' or 'circle'")
        if not (xs.shape == ys.shape == dys.shape) or xs.ndim != 1 or xs.size < 2:
            raise InvalidInputError("xs, ys, dys must be 1-D arrays of equal length")
        for arr, what in ((xs, "xs"), (ys, "ys"), (dys, "dys")):
            _finite(arr, what)
        if np.any(np.diff(xs) <= 0):
            raise InvalidInputError("xs must be strictly increasing")
        if np.any(np.diff(ys) <= 0):
            raise MonotonicityError("map samples are not strictly increasing")
        if np.any(dys <= 0):
            raise MonotonicityError("derivative samples must be positive")
        self.xs, self.ys, self.dys, self.domain = xs, ys, dys, domain
        for arr in (xs, ys, dys):
            arr.setflags(write=False)
        self._fwd = CubicHermiteSpline(xs, ys, dys, extrapolate=False)
        self._inv = CubicHermiteSpline(ys, xs, 1.0 / dys, extrapolate=False)

    @classmethod
    def identity(cls, xs, domain="line"):
        xs = np.asarray(xs, dtype=float)
        return cls(xs, xs.copy(), np.ones_like(xs), domain=domain)

    @staticmethod
    def _lin(spl, xs, ys, dys, x):
        x = np.asarray(x, dtype=float)
        out = np.asarray(spl(x), dtype=float)
        lo, hi = x < xs[0], x > xs[-1]
        out = np.where(lo, ys[0] + dys[0] * (x - xs[0]), out)
        out = np.where(hi, ys[-1] + dys[-1] * (x - xs[-1]), out)
        return out

    def __call__(self, x):
        return self._lin(self._fwd, self.xs, self.ys, self.dys, x)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        d = np.asarray(self._fwd(x, 1), dtype=float)
        d = np.where(x < self.xs[0], self.dys[0], d)
        return np.where(x > self.xs[-1], self.dys[-1], d)

    def inverse(self, y):
        return self._lin(self._inv, self.ys, self.xs, 1.0 / self.dys, y)

    def log_derivative(self):
        """log h' as a LineFunction on the (uniform) sample grid."""
        dx = np.diff(self.xs)
        if not np.allclose(dx, dx[0], rtol=1e-9, atol=0):
            raise InvalidInputError("log_derivative needs uniform samples")
        return LineFunction(self.xs[0], dx[0], np.log(self.dys), tail="none")

    def __repr__(self):
        return f"IncreasingMap({self.domain}, n={self.xs.size})"


# --------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class SeminormReport:
    """Squared seminorm with its method tag and truncation metadata."""

    value: float
    method: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (self.value >= 0 or abs(self.value) < 1e-13):
            raise InvalidInputError(f"negative seminorm {self.value}")

    @property
    def norm(self):
        return math.sqrt(max(self.value, 0.0))

    def to_row(self):
        row = {"value": self.value, "norm": self.norm, "method": self.method}
        for k in sorted(self.metadata):
            row[k] = self.metadata[k]
        return row


# --------------------------------------------------------------------------
# seminorms


def h12_circle(u: CircleFunction, method="fourier") -> SeminormReport:
    """Squared H^1/2 seminorm on the circle.

    ``method='fourier'`` sums ``|n| |c_n|^2``; ``method='gagliardo'`` evaluates
    the double integral with the periodic trapezoid rule on the sample torus,
    using the limit ``|u'|^2`` on the diagonal.
    """
    if not isinstance(u, CircleFunction):
        raise InvalidInputError("h12_circle expects a CircleFunction")
    _finite(u.coeffs, "Fourier coefficients")
    if method == "fourier":
        val = math.fsum(np.abs(u.modes) * np.abs(u.coeffs) ** 2)
        return SeminormReport(val, "fourier", {"modes": int(u.N), "samples": int(u.M)})
    if method == "gagliardo":
        M = u.M
        S = kernels.shift_sums(u.samples, periodic=True)
        k = np.arange(1, M)
        off = np.sum(S[1:] / (4.0 * np.sin(math.pi * k / M) ** 2))
        du = u.derivative().samples
        diag = float(np.sum(np.abs(du) ** 2))
        h = TWO_PI / M
        val = h * h * (off + diag) / (4.0 * math.pi ** 2)
        return SeminormReport(float(val), "gagliardo",
                              {"samples": int(M), "diagonal": h * h * diag / (4 * math.pi ** 2)})
    raise InvalidInputError(f"unknown method {method!r}")


def h12_line(u: LineFunction, diag_cutoff=None, interval=None, impl=None) -> SeminormReport:
    """Squared Gagliardo H^1/2 seminorm on the line.

    The window double integral is a shift sum over grid differences. The
    band |s| < c (c snapped to a multiple of the step, default one step) is
    replaced by ``2 c int u'^2``. For tail 'zero' the pairs with one point
    outside the window are added in closed form. ``interval`` restricts the
    integral to interval x interval.
    """
    if interval is not None:
        u = u.restrict(*interval)
    h = u.dx
    half_width = 0.5 * (u.b - u.a)
    c = h if diag_cutoff is None else float(diag_cutoff)
    if not c > 0 or c >= half_width:
        raise InvalidInputError("diag_cutoff must be positive and below the domain half-width")
    m = max(1, int(round(c / h)))
    c = m * h
    if u.tail == "affine" and (np.any(u.tail_coeffs()[1::2]) and interval is None):
        raise InvalidInputError("seminorm of a function with linear growth diverges")
    S = kernels.shift_sums(u.values, periodic=False, impl=impl)
    k = np.arange(m, u.n)
    wk = np.ones(k.size)
    wk[0] = 0.5
    off = 2.0 * np.sum(wk * S[m:] / (k * k * 1.0))  # (h S[k]) h / (k h)^2
    du2 = u.derivative().with_values(np.abs(u.slopes) ** 2, tail="none")
    band = 2.0 * c * du2.integral()
    tail = 0.0
    if interval is None and u.tail in ("zero", "affine"):
        # pairs with exactly one point outside the window; the outside value
        # is the constant tail level (zero or the end value)
        al, _, ar, _ = u.tail_coeffs()
        if abs(al - ar) > 1e-12:
            raise InvalidInputError("distinct constant tails give an infinite seminorm")
        xs = u.grid[1:-1]
        v = u.values[1:-1]
        w = np.abs(v - al) ** 2 / (xs - u.a) + np.abs(v - ar) ** 2 / (u.b - xs)
        tail = 2.0 * h * float(np.sum(w))
    scale = 1.0 / (4.0 * math.pi ** 2)
    raw = off + band + tail
    meta = {"cutoff": c, "step": h, "window": [u.a, u.b], "band": band * scale,
            "off_band": off * scale, "tail": tail * scale}
    return SeminormReport(float(raw * scale), "gagliardo", meta)


def h32_norm(fld, **kw) -> SeminormReport:
    """Squared H^3/2 seminorm: the H^1/2 seminorm of the derivative."""
    if isinstance(fld, CircleFunction):
        rep = h12_circle(fld.derivative(), **kw)
    elif isinstance(fld, LineFunction):
        rep = h12_line(fld.derivative(), **kw)
    else:
        raise InvalidInputError("h32_norm expects a CircleFunction or LineFunction")
    return SeminormReport(rep.value, rep.method, dict(rep.metadata, order="3/2"))


# --------------------------------------------------------------------------
# BMO


def _pl_abs_integral(v, h):
    """Exact integral of |piecewise-linear interpolant| of samples v (spacing h)."""
    v0, v1 = v[:-1], v[1:]
    same = v0 * v1 >= 0
    a0, a1 = np.abs(v0), np.abs(v1)
    denom = np.where(same, 1.0, a0 + a1)
    return float(np.sum(np.where(same, h * (a0 + a1) / 2, h * (v0 * v0 + v1 * v1) / (2 * denom))))


def mean_oscillation(vals, h):
    """(1/|I|) int_I |u - u_I| for the piecewise-linear interpolant of ``vals``."""
    L = h * (vals.size - 1)
    mean = h * (np.sum(vals) - 0.5 * (vals[0] + vals[-1])) / L
    return _pl_abs_integral(vals - mean, h) / L


def _bmo_samples(u):
    if isinstance(u, LineFunction):
        if u.is_complex:
            raise InvalidInputError("bmo_norm expects real values")
        return np.asarray(u.values, dtype=float), u.dx, False
    if isinstance(u, CircleFunction):
        if not u.is_real:
            raise InvalidInputError("bmo_norm expects real values")
        s = np.asarray(u.samples, dtype=float)
        return np.concatenate((s, s, s[:1])), TWO_PI / u.M, True
    raise InvalidInputError("bmo_norm expects a LineFunction or CircleFunction")


def bmo_norm(u, max_depth=10) -> SeminormReport:
    """Dyadic-plus-half-translates approximation of the BMO norm.

    Intervals are the dyadic subintervals of the sampled window (the full
    circle in the periodic case) down to ``max_depth`` plus their translates
    by half their length; averages use the piecewise-linear interpolant.
    Depths whose intervals would hold fewer than two cells are skipped.
    """
    if int(max_depth) != max_depth or max_depth < 1:
        raise InvalidInputError("max_depth must be an integer >= 1")
    vals, h, periodic = _bmo_samples(u)
    cells = (vals.size - 1) // 2 if periodic else vals.size - 1
    best = 0.0
    used = 0
    for d in range(0, int(max_depth) + 1):
        if cells % (2 ** d):
            break
        width = cells // 2 ** d
        if width < 2:
            break
        used = d
        starts = list(range(0, cells, width))
        shifted = [s + width // 2 for s in starts] if width % 2 == 0 else []
        for s in starts + shifted:
            if not periodic and s + width > cells:
                continue
            best = max(best, mean_oscillation(vals[s:s + width + 1], h))
    return SeminormReport(best, "dyadic", {"max_depth": int(max_depth), "depth_used": used,
                                           "cells": int(cells)})


def bmo_bruteforce(u) -> float:
    """Exhaustive supremum over all intervals with grid endpoints (O(n^3))."""
    vals, h, periodic = _bmo_samples(u)
    cells = (vals.size - 1) // 2 if periodic else vals.size - 1
    best = 0.0
    for i in range(cells):
        for j in range(i + 1, (i + cells if periodic else cells) + 1):
            best = max(best, mean_oscillation(vals[i:j + 1], h))
    return best


def jn_moment(u, interval, p=1.0, variant="power", n=4097):
    """Mean of ``|u - u_I|^p`` (or of ``exp|u - u_I| - 1``) over ``interval``."""
    lo, hi = (float(interval[0]), float(interval[1]))
    if not hi > lo:
        raise InvalidInputError("degenerate interval")
    if p < 1:
        raise InvalidInputError("p must be >= 1")
    if isinstance(u, LineFunction):
        if lo < u.a - 1e-12 or hi > u.b + 1e-12:
            raise OutOfDomainError("interval outside the sampled window")
    elif not isinstance(u, CircleFunction) and not callable(u):
        raise InvalidInputError("jn_moment expects a function")
    xs = np.linspace(lo, hi, n if n % 2 else n + 1)
    v = np.asarray(u(xs), dtype=float)
    L = hi - lo
    mean = simpson(v, x=xs) / L
    d = np.abs(v - mean)
    if variant == "power":
        integrand = d ** p
    elif variant == "exp":
        integrand = np.expm1(d)
    else:
        raise InvalidInputError("variant must be 'power' or 'exp'")
    return float(simpson(integrand, x=xs) / L)


# --------------------------------------------------------------------------
# Cayley transform


def cayley(z):
    z = np.asarray(z, dtype=complex)
    return (z - 1j) / (z + 1j)


def cayley_prime(z):
    z = np.asarray(z, dtype=complex)
    return 2j / (z + 1j) ** 2


def cayley_angle(x):
    """Angle in (0, 2 pi) of the image of real x."""
    return 2.0 * np.arctan2(1.0, -np.asarray(x, dtype=float))


def cayley_inverse_angle(theta):
    """Real x whose image has angle theta (theta in (0, 2 pi))."""
    return -1.0 / np.tan(np.asarray(theta, dtype=float) / 2.0)


def tangential_field(speed: CircleFunction) -> CircleFunction:
    """Complex vector field i w a(theta) from a real angular speed a."""
    w = np.exp(1j * speed.thetas)
    return CircleFunction(1j * w * speed.samples, is_real=False)


def angular_speed(g: CircleFunction, tol=1e-8) -> CircleFunction:
    """Real a with g = i w a; raises if g is not tangential."""
    w = np.exp(1j * g.thetas)
    prod = np.conj(w) * np.asarray(g.samples, dtype=complex)
    scale = max(1.0, float(np.abs(prod).max()))
    if np.abs(prod.real).max() > tol * scale:
        raise InvalidInputError("vector field is not tangential (Re conj(w) g(w) != 0)")
    return CircleFunction(prod.imag, is_real=True)


def cayley_pull(g: CircleFunction, mode="function", X=16.0, n=2049) -> LineFunction:
    """Transport a circle function (or tangential vector field) to the line.

    ``function`` mode returns ``g(gamma(x))``; ``vectorfield`` mode returns the
    real field ``g(gamma(x)) / gamma'(x)``, which equals ``a(theta(x)) (1+x^2)/2``
    for g = i w a.
    """
    xs = np.linspace(-X, X, n)
    th = cayley_angle(xs)
    if mode == "function":
        vals = g(th)
        return LineFunction(-X, 2 * X / (n - 1), vals, tail="none", decay_exponent=0.0)
    if mode == "vectorfield":
        a = angular_speed(g)
        vals = a(th) * (1.0 + xs * xs) / 2.0
        return LineFunction(-X, 2 * X / (n - 1), vals, tail="none", decay_exponent=2.0)
    raise InvalidInputError("mode must be 'function' or 'vectorfield'")


def cayley_push(f, mode="function", M=1024) -> CircleFunction:
    """Inverse of :func:`cayley_pull` sampled at M uniform angles.

    ``f`` is a LineFunction or a callable; the angle 0 (the image of infinity)
    takes the limit value 0 in vectorfield mode and ``f``'s tail value in
    function mode. Angles mapping outside a LineFunction's window with tail
    'none' are filled with NaN-free linear extension and should be excluded by
    callers comparing values.
    """
    th = TWO_PI * np.arange(M) / M
    xs = cayley_inverse_angle(th[1:])
    if isinstance(f, LineFunction) and f.tail == "none":
        xs_eval = np.clip(xs, f.a, f.b)
    else:
        xs_eval = xs
    fv = np.asarray(f(xs_eval))
    if mode == "function":
        at_inf = 0.0
        vals = np.concatenate(([at_inf], fv))
        return CircleFunction(vals)
    if mode == "vectorfield":
        a = np.concatenate(([0.0], 2.0 * np.real(fv) / (1.0 + xs * xs)))
        return tangential_field(CircleFunction(a, is_real=True))
    raise InvalidInputError("mode must be 'function' or 'vectorfield'")


# --------------------------------------------------------------------------
# built-in test functions


def gauss_bump(x, amp=1.0, center=0.0, width=1.0):
    x = np.asarray(x, dtype=float)
    return amp * np.exp(-((x - center) / width) ** 2)


def gauss_bump_prime(x, amp=1.0, center=0.0, width=1.0):
    x = np.asarray(x, dtype=float)
    s = (x - center) / width
    return -2.0 * amp * s / width * np.exp(-s * s)


def sine_window(x, amp=1.0, freq=0.5, half_width=4.0, taper=2.0):
    """amp sin(2 pi freq x) times a smooth plateau window."""
    x = np.asarray(x, dtype=float)
    return amp * np.sin(TWO_PI * freq * x) * plateau(x, half_width, taper)


def triangle(x, height=1.0, half_width=1.0):
    x = np.asarray(x, dtype=float)
    return height * np.maximum(0.0, 1.0 - np.abs(x) / half_width)


def logistic_field(x, half_width=3.0, taper=1.5):
    """u(1-u) on [0, 1], cut off smoothly far from the interval."""
    x = np.asarray(x, dtype=float)
    return x * (1.0 - x) * plateau(x - 0.5, half_width, taper)


_LINE_BUILTINS: dict[str, tuple[Callable, dict]] = {
    "gauss_bump": (gauss_bump, {"tail": "zero"}),
    "sine_window": (sine_window, {"tail": "zero"}),
    "triangle": (triangle, {"tail": "zero"}),
    "logistic": (logistic_field, {"tail": "zero"}),
    "zero": (lambda x: np.zeros_like(np.asarray(x, dtype=float)), {"tail": "zero"}),
    "constant": (lambda x, c=1.0: np.full(np.shape(x), float(c)), {"tail": "affine"}),
    "linear": (lambda x, slope=1.0, intercept=0.0: slope * np.asarray(x, dtype=float) + intercept,
               {"tail": "affine", "decay_exponent": 1.0}),
    "rational": (lambda x: 1.0 / (1.0 + np.asarray(x, dtype=float) ** 2), {"tail": "zero"}),
}


def _trig(theta, coeffs=None):
    """sum over {"n": [a_n, b_n]} of a_n cos n theta + b_n sin n theta."""
    out = np.zeros_like(theta)
    for key, (an, bn) in (coeffs or {}).items():
        k = int(key)
        out = out + an * np.cos(k * theta) + bn * np.sin(k * theta)
    return out


_CIRCLE_BUILTINS: dict[str, Callable] = {
    "cos": lambda th, amp=1.0, k=1: amp * np.cos(k * th),
    "sin": lambda th, amp=1.0, k=1: amp * np.sin(k * th),
    "constant_circle": lambda th, c=1.0: np.full_like(th, float(c)),
    "trig": _trig,
    # angular speed vanishing at angles 0, pi and 3 pi / 2
    "normalized_sin": lambda th, amp=1.0: amp * np.sin(th) * (1.0 + np.sin(th)),
}


def builtin(name, params=None, X=16.0, n=2049, M=1024):
    """Instantiate a named test function (line or circle)."""
    params = dict(params or {})
    if name in _LINE_BUILTINS:
        fn, opts = _LINE_BUILTINS[name]
        opts = dict(opts)
        X = float(params.pop("X", X))
        n = int(params.pop("n", n))
        tail = params.pop("tail", opts.pop("tail"))
        try:
            return LineFunction.from_callable(lambda x: fn(x, **params), X=X, n=n, tail=tail, **opts)
        except TypeError as exc:
            raise InvalidInputError(f"bad parameters for builtin {name!r}: {exc}") from exc
    if name in _CIRCLE_BUILTINS:
        fn = _CIRCLE_BUILTINS[name]
        M = int(params.pop("M", M))
        try:
            return CircleFunction.from_callable(lambda th: fn(th, **params), M=M)
        except TypeError as exc:
            raise InvalidInputError(f"bad parameters for builtin {name!r}: {exc}") from exc
    raise InvalidInputError(f"unknown builtin {name!r}; known: "
                            f"{sorted(list(_LINE_BUILTINS) + list(_CIRCLE_BUILTINS))}")


def _number(v, where):
    if isinstance(v, bool):
        raise SpecParseError(f"{where}: expected a number, got a boolean")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(t, (int, float)) for t in v):
        return complex(v[0], v[1])
    raise SpecParseError(f"{where}: expected a number or [re, im] pair")


def parse_function(spec, M=1024, X=16.0, n=2049):
    """Parse a function literal (JSON text or an already decoded dict).

    Accepted forms::

        {"type": "fourier", "coeffs": [c_-K, ..., c_K], "M": 1024}
        {"type": "samples", "xs": [...], "ys": [...], "tail": "zero"}
        {"type": "samples", "domain": "circle", "ys": [...]}
        {"type": "builtin", "name": "gauss_bump", "params": {...}}
    """
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise SpecParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(spec, dict):
        raise SpecParseError("function literal must be an object")
    kind = spec.get("type")
    if kind == "fourier":
        coeffs = spec.get("coeffs")
        if not isinstance(coeffs, list) or len(coeffs) % 2 != 1:
            raise SpecParseError("'coeffs' must be a list of odd length (n = -K..K)")
        c = [_number(v, f"coeffs[{i}]") for i, v in enumerate(coeffs)]
        return CircleFunction.from_coeffs(c, M=int(spec.get("M", M)))
    if kind == "samples":
        ys = spec.get("ys")
        if not isinstance(ys, list) or len(ys) < 4:
            raise SpecParseError("'ys' must be a list with at least 4 entries")
        vals = np.array([_number(v, f"ys[{i}]") for i, v in enumerate(ys)])
        if np.all(vals.imag == 0):
            vals = vals.real
        if spec.get("domain", "line") == "circle":
            return CircleFunction(vals)
        xs = spec.get("xs")
        if not isinstance(xs, list) or len(xs) != len(ys):
            raise SpecParseError("'xs' must be a list with the same length as 'ys'")
        xs = np.array([_number(v, f"xs[{i}]").real for i, v in enumerate(xs)])
        d = np.diff(xs)
        if np.any(d <= 0):
            raise SpecParseError("'xs' must be strictly increasing")
        tail = spec.get("tail", "zero")
        if tail not in LineFunction.TAILS:
            raise SpecParseError(f"'tail' must be one of {LineFunction.TAILS}")
        if not np.allclose(d, d[0], rtol=1e-9, atol=0):
            # resample non-uniform data onto a uniform grid of the same size
            ug = np.linspace(xs[0], xs[-1], xs.size)
            vals = CubicSpline(xs, vals)(ug)
        return LineFunction(xs[0], (xs[-1] - xs[0]) / (xs.size - 1), vals, tail=tail,
                            decay_exponent=float(spec.get("decay_exponent", 0.0)))
    if kind == "builtin":
        name = spec.get("name")
        if not isinstance(name, str):
            raise SpecParseError("'name' must be a string")
        params = spec.get("params", {})
        if not isinstance(params, dict):
            raise SpecParseError("'params' must be an object")
        return builtin(name, params, X=X, n=n, M=M)
    raise SpecParseError(f"unknown function type {kind!r}")
