"""Smooth bumps on [-1, 1], the derived Wirtinger kernels and scaled convolution.

Convolution convention: ``(m_y * f)(x) = int m(r) f(x - y r) dr``, i.e. the
kernel ``m_y(s) = m(s / y) / y`` applied as ``int m_y(x - t) f(t) dt``.
With this convention ``psi_y * t = -y`` and ``phi_y * t = x``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from . import kernels
from .errors import InvalidInputError, OutOfDomainError
from .functions import LineFunction, bmo_norm

DEFAULT_K = 4096


def _bump(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1
    out[inside] = np.exp(-1.0 / (1.0 - x[inside] ** 2))
    return out


def _trap(vals, h):
    return h * (np.sum(vals) - 0.5 * (vals[0] + vals[-1]))


@dataclass(frozen=True)
class Mollifier:
    """Smooth kernel supported in [-1, 1].

    ``fn`` evaluates the kernel; ``xs``/``samples`` hold K uniform samples and
    ``moments`` the recorded (int m, int x m, int x^2 m). Derived kernels keep a
    ``combo`` describing them as ``(p0 + p1 r) phi + (q0 + q1 r) psi``.
    """

    name: str
    fn: Callable
    xs: np.ndarray
    samples: np.ndarray
    parity: str
    moments: tuple
    is_complex: bool = False
    combo: Optional[tuple] = None

    def __call__(self, r):
        return self.fn(np.asarray(r, dtype=float))

    def weights(self, n_r):
        """Nodes and quadrature weights for ``int m(r) g(r) dr`` with n_r nodes.

        Even kernels are rescaled so the discrete mass equals the recorded
        mass; odd kernels so the discrete first moment matches. Derived kernels
        combine the weights of their components, which keeps their discrete
        moments exact as well.
        """
        n_r = int(n_r)
        if n_r < 5 or n_r % 2 == 0:
            raise InvalidInputError("n_r must be odd and at least 5")
        r = np.linspace(-1.0, 1.0, n_r)
        r[n_r // 2] = 0.0
        r[n_r // 2 + 1:] = -r[n_r // 2 - 1::-1]
        if self.combo is not None:
            phi, psi, p0, p1, q0, q1 = self.combo
            _, wphi = phi.weights(n_r)
            _, wpsi = psi.weights(n_r)
            return r, (p0 + p1 * r) * wphi + (q0 + q1 * r) * wpsi
        h = 2.0 / (n_r - 1)
        t = np.full(n_r, h)
        t[[0, -1]] = h / 2
        w = t * self.fn(r)
        if self.parity == "even":
            w = w * (self.moments[0] / np.sum(w))
        elif self.parity == "odd":
            w = w * (self.moments[1] / np.sum(w * r))
        return r, w

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["x", "value_re", "value_im"])
            for x, v in zip(self.xs, self.samples):
                v = complex(v)
                wr.writerow([repr(float(x)), repr(v.real), repr(v.imag)])


def _record(name, fn, parity, K, is_complex=False, combo=None):
    xs = np.linspace(-1.0, 1.0, K)
    s = fn(xs)
    h = 2.0 / (K - 1)
    moments = tuple(complex(_trap(s * xs ** p, h)) if is_complex else float(_trap(s * xs ** p, h))
                    for p in range(3))
    s = np.asarray(s)
    s.setflags(write=False)
    xs.setflags(write=False)
    return Mollifier(name, fn, xs, s, parity, moments, is_complex, combo)


_BUMP_MASS = None
_BUMP_M2 = None


def _bump_moments():
    """Mass and second moment of exp(-1/(1-x^2)) by a fine trapezoid rule."""
    global _BUMP_MASS, _BUMP_M2
    if _BUMP_MASS is None:
        x = np.linspace(-1.0, 1.0, 2 ** 14 + 1)
        b = _bump(x)
        h = x[1] - x[0]
        _BUMP_MASS = _trap(b, h)
        _BUMP_M2 = _trap(b * x * x, h) / _BUMP_MASS
    return _BUMP_MASS, _BUMP_M2


def make_phi(K=DEFAULT_K) -> Mollifier:
    """Even bump with unit mass."""
    mass, _ = _bump_moments()
    return _record("phi", lambda x: _bump(x) / mass, "even", K)


def make_psi(K=DEFAULT_K) -> Mollifier:
    """Odd kernel x phi(x) / m2 with unit first moment."""
    mass, m2 = _bump_moments()
    return _record("psi", lambda x: np.asarray(x, dtype=float) * _bump(x) / (mass * m2), "odd", K)


def derive_alpha_beta(phi: Mollifier, psi: Mollifier, K=DEFAULT_K, tol=1e-8):
    """Kernels alpha, beta with dbar rho = alpha_y * gamma' and d rho = beta_y * gamma'.

    For ``rho = phi_y * gamma - i psi_y * gamma``::

        alpha = ((phi - r psi) - i (psi + r phi)) / 2
        beta  = ((phi + r psi) - i (psi - r phi)) / 2
    """
    if phi.parity != "even" or psi.parity != "odd":
        raise InvalidInputError("phi must be even and psi odd")
    if abs(phi.moments[0] - 1) > tol or abs(psi.moments[1] - 1) > tol:
        raise InvalidInputError("phi needs unit mass and psi unit first moment")
    if abs(phi.moments[1]) > tol or abs(psi.moments[0]) > tol:
        raise InvalidInputError("phi and psi moments violate parity")

    def alpha(r):
        return 0.5 * ((phi(r) - r * psi(r)) - 1j * (psi(r) + r * phi(r)))

    def beta(r):
        return 0.5 * ((phi(r) + r * psi(r)) - 1j * (psi(r) - r * phi(r)))

    a = _record("alpha", alpha, "none", K, True, (phi, psi, 0.5, -0.5j, -0.5j, -0.5))
    b = _record("beta", beta, "none", K, True, (phi, psi, 0.5, 0.5j, -0.5j, 0.5))
    return a, b


def default_nodes(y, dx):
    """Odd kernel node count resolving both the kernel and the data grid."""
    return max(65, 2 * math.ceil(y / dx) + 1)


def convolve_many(mols, y, f: LineFunction, xq, n_r=None, impl=None):
    """Scaled convolutions of several kernels with f at points xq (fixed y).

    Returns a list of arrays (complex when either side is complex).
    """
    xq = np.atleast_1d(np.asarray(xq, dtype=float))
    if not y > 0:
        raise InvalidInputError("y must be positive")
    if xq.min() - y < f.a - 1e-12 or xq.max() + y > f.b + 1e-12:
        raise OutOfDomainError("kernel support leaves the sampled window")
    n_r = default_nodes(y, f.dx) if n_r is None else int(n_r)
    rows, split = [], []
    r = None
    for m in mols:
        r, w = m.weights(n_r)
        if np.iscomplexobj(w):
            rows += [w.real, w.imag]
            split.append(2)
        else:
            rows.append(w)
            split.append(1)
    wr = np.vstack(rows)
    if f.is_complex:
        re = kernels.hermite_conv(f.values.real, f.slopes.real, f.x0, f.dx, xq, y, r, wr, impl=impl)
        im = kernels.hermite_conv(f.values.imag, f.slopes.imag, f.x0, f.dx, xq, y, r, wr, impl=impl)
        res = re + 1j * im
    else:
        res = kernels.hermite_conv(f.values, f.slopes, f.x0, f.dx, xq, y, r, wr, impl=impl)
    out, i = [], 0
    for s in split:
        out.append(res[i] if s == 1 else res[i] + 1j * res[i + 1])
        i += s
    return out


def convolve_scaled(m: Mollifier, y, f: LineFunction, x, n_r=None, impl=None):
    """``int m(r) f(x - y r) dr``; scalar in, scalar out."""
    scalar = np.ndim(x) == 0
    out = convolve_many([m], y, f, x, n_r=n_r, impl=impl)[0]
    return out[0] if scalar else out


# --------------------------------------------------------------------------
# BMO-regime estimates


def comparability_ratios(u: LineFunction, xs, ys, phi=None):
    """|phi_y * e^u| / exp(phi_y * u) on the grid xs x ys (rows follow ys)."""
    phi = make_phi() if phi is None else phi
    eu = u.with_values(np.exp(u.values), slopes=np.exp(u.values) * u.slopes)
    out = np.empty((len(ys), len(xs)))
    for j, y in enumerate(ys):
        a, = convolve_many([phi], y, eu, xs)
        b, = convolve_many([phi], y, u, xs)
        out[j] = np.abs(a) / np.exp(b)
    return out


def mean_deviation_constant(u: LineFunction, xs, ys, phi=None, bmo=None):
    """max |phi_y * u(x) - u_I| / ||u||_BMO with I = [x - y, x + y]."""
    phi = make_phi() if phi is None else phi
    bmo = bmo_norm(u).value if bmo is None else bmo
    if bmo == 0:
        return 0.0
    prim = np.concatenate(([0.0], np.cumsum(u.dx * (u.values[1:] + u.values[:-1]) / 2
                                           + u.dx ** 2 * (u.slopes[:-1] - u.slopes[1:]) / 12)))
    g = u.grid
    P = CubicHermiteSpline(g, prim, u.values)
    worst = 0.0
    for y in ys:
        conv, = convolve_many([phi], y, u, xs)
        avg = (P(np.asarray(xs) + y) - P(np.asarray(xs) - y)) / (2 * y)
        worst = max(worst, float(np.max(np.abs(conv - avg))))
    return worst / bmo
