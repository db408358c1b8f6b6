"""The exponential map Psi(u) = int_0^x e^u / int_0^1 e^u and its calculus.

All primitives integrate the cubic Hermite interpolant of (values, slopes)
exactly, so Psi and its differential are discretely consistent.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import InvalidInputError
from .functions import IncreasingMap, LineFunction, h12_line
from .semmes import exp_normaliser, gamma_u, primitive, _hermite_at


@dataclass(frozen=True)
class SobolevClass:
    """Class of u modulo constants; ``canonical`` has zero mean over the window."""

    representative: LineFunction
    mean_zero: bool = False

    def canonical(self):
        r = self.representative
        if self.mean_zero:
            return self
        m = r.integral() / (r.b - r.a)
        return SobolevClass(r.with_values(r.values - m, slopes=r.slopes), True)


@dataclass(frozen=True)
class TangentVectorWP:
    representative: LineFunction
    vanishes_at_endpoints: bool = True

    def __post_init__(self):
        if self.vanishes_at_endpoints:
            r = self.representative
            ends = r(np.array([0.0, 1.0]))
            scale = max(1.0, float(np.max(np.abs(r.values))))
            if np.max(np.abs(ends)) > 1e-8 * scale:
                raise InvalidInputError("tangent vector must vanish at 0 and 1")


def _line(u):
    if isinstance(u, SobolevClass):
        return u.representative
    if isinstance(u, TangentVectorWP):
        return u.representative
    if isinstance(u, LineFunction):
        return u
    raise InvalidInputError("expected a LineFunction, SobolevClass or TangentVectorWP")


def psi(u) -> IncreasingMap:
    """Psi(u); constants in u cancel."""
    return gamma_u(_line(u))


def _same_grid(u, v):
    if u.n != v.n or abs(u.x0 - v.x0) > 1e-12 or abs(u.dx - v.dx) > 1e-15:
        raise InvalidInputError("u and v must share a grid")


def d_psi(u, v) -> TangentVectorWP:
    """Differential of Psi at u applied to v.

    ``[c int_0^x e^u v - c_v int_0^x e^u] / c^2`` with ``c = int_0^1 e^u`` and
    ``c_v = int_0^1 e^u v``.
    """
    u, v = _line(u), _line(v)
    _same_grid(u, v)
    e, P, c, p0 = exp_normaliser(u)
    ev = e.values * v.values
    evs = e.values * (u.slopes * v.values + v.slopes)
    Q = primitive(ev, evs, u.dx)
    q0 = _hermite_at(u.x0, u.dx, Q, ev, 0.0)
    cv = _hermite_at(u.x0, u.dx, Q, ev, 1.0) - q0
    vals = (c * (Q - q0) - cv * (P - p0)) / c ** 2
    slopes = (c * ev - cv * e.values) / c ** 2
    return TangentVectorWP(LineFunction(u.x0, u.dx, vals, tail="none", slopes=slopes))


def d_psi_inv(u, w, tol=1e-8) -> SobolevClass:
    """Inverse differential: ``c w'(x) e^{-u(x)}`` as a mean-zero class."""
    u = _line(u)
    wl = _line(w)
    _same_grid(u, wl)
    ends = wl(np.array([0.0, 1.0]))
    scale = max(1.0, float(np.max(np.abs(wl.values))))
    if np.max(np.abs(ends)) > tol * scale:
        raise InvalidInputError("w must vanish at 0 and 1")
    e, _, c, _ = exp_normaliser(u)
    w2 = CubicSpline(wl.grid, wl.slopes)(wl.grid, 1)
    vals = c * wl.slopes / e.values
    slopes = c * (w2 - wl.slopes * u.slopes) / e.values
    return SobolevClass(LineFunction(u.x0, u.dx, vals, tail="none", slopes=slopes)).canonical()


def compose(u: LineFunction, h: IncreasingMap) -> LineFunction:
    """u o h sampled on u's grid (u continues by its tail)."""
    x = u.grid
    return u.with_values(u(h(x)))


def pullback_probe(h: IncreasingMap, family):
    """Ratios of H^1/2 seminorms ||u o h|| / ||u|| over the family."""
    ratios = []
    for u in family:
        u = _line(u)
        base = h12_line(u).norm
        if base == 0:
            continue
        ratios.append(h12_line(compose(u, h)).norm / base)
    return {"ratios": ratios, "max_ratio": max(ratios) if ratios else float("nan"), "members": len(ratios)}


def translations(h0: IncreasingMap, u):
    """Residual sup |Psi(u) o h0^{-1} - Psi(L u)| with L u = (u - log h0') o h0^{-1}.

    Both sides are sampled on u's grid. ``log h0'`` is interpolated by a cubic
    spline and held constant beyond h0's samples (h0 is affine there).
    """
    u = _line(u)
    if h0.dys is None or h0.dys.size != h0.xs.size:
        raise InvalidInputError("h0 needs derivative samples")
    ygrid = u.grid
    x = h0.inverse(ygrid)
    logd = CubicSpline(h0.xs, np.log(h0.dys))
    lu = u(x) - logd(np.clip(x, h0.xs[0], h0.xs[-1]))
    Lu = LineFunction(u.x0, u.dx, lu, tail="none")
    right = psi(Lu)(ygrid)
    left = psi(u)(x)
    diff = np.abs(left - right)
    return {"sup": float(diff.max()), "mean": float(diff.mean())}


def interpolation_family(h: IncreasingMap, t: float) -> IncreasingMap:
    """h_t(x) = int_0^x (h')^t on h's samples."""
    if not 0.0 <= t <= 1.0:
        raise InvalidInputError("t must lie in [0, 1]")
    dx = np.diff(h.xs)
    if not np.allclose(dx, dx[0], rtol=1e-9, atol=0):
        raise InvalidInputError("interpolation_family needs uniform samples")
    if not (h.xs[0] <= 0.0 <= h.xs[-1]):
        raise InvalidInputError("samples must contain 0")
    logd = np.log(h.dys)
    dlog = CubicSpline(h.xs, logd)(h.xs, 1)
    vals = np.exp(t * logd)
    slopes = t * dlog * vals
    P = primitive(vals, slopes, dx[0])
    p0 = _hermite_at(h.xs[0], dx[0], P, vals, 0.0)
    return IncreasingMap(h.xs, P - p0, vals, domain=h.domain)
