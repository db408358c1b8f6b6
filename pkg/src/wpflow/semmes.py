"""Mollifier extension of gamma_u to the upper half plane and its Beltrami field.

``rho(x + iy) = phi_y * gamma_u(x) - i psi_y * gamma_u(x)`` with
``gamma_u(x) = int_0^x e^u / int_0^1 e^u``. Its Wirtinger derivatives are
``alpha_y * e^u / c`` and ``beta_y * e^u / c`` with ``c = int_0^1 e^u``.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (DegeneracyError, ExpOverflowError, InvalidInputError,
                     OutOfDomainError, ResolutionError)
from .functions import IncreasingMap, LineFunction, h12_line
from .mollifier import convolve_many, derive_alpha_beta, make_phi, make_psi

DEFAULT_DELTA = 0.3


class SemmesRegimeWarning(UserWarning):
    """Input seminorm above the configured smallness threshold."""


@dataclass(frozen=True)
class HalfPlaneGrid:
    """Tensor grid: uniform x on [-X, X], log-spaced y on [y_min, Y].

    Weights are trapezoid in x times the nonuniform trapezoid in y, so they sum
    to the rectangle area.
    """

    X: float = 8.0
    nx: int = 257
    y_min: float = 2.0 ** -7
    Y: float = 4.0
    ny: int = 128

    def __post_init__(self):
        if not (self.X > 0 and self.y_min > 0 and self.Y > self.y_min):
            raise InvalidInputError("grid needs X > 0 and 0 < y_min < Y")
        if self.nx < 3 or self.ny < 3:
            raise InvalidInputError("grid needs at least 3 nodes per axis")

    @property
    def xs(self):
        return np.linspace(-self.X, self.X, self.nx)

    @property
    def ys(self):
        return np.geomspace(self.y_min, self.Y, self.ny)

    @property
    def hx(self):
        return 2.0 * self.X / (self.nx - 1)

    @property
    def wx(self):
        w = np.full(self.nx, self.hx)
        w[[0, -1]] *= 0.5
        return w

    @property
    def wy(self):
        y = self.ys
        w = np.empty_like(y)
        w[1:-1] = (y[2:] - y[:-2]) / 2
        w[0] = (y[1] - y[0]) / 2
        w[-1] = (y[-1] - y[-2]) / 2
        return w

    @property
    def weights(self):
        return np.outer(self.wy, self.wx)

    def area(self):
        return 2.0 * self.X * (self.Y - self.y_min)

    def meta(self):
        return {"X": self.X, "nx": self.nx, "y_min": self.y_min, "Y": self.Y, "ny": self.ny}


@dataclass(frozen=True)
class ComplexGridField:
    """Complex values on a HalfPlaneGrid; rows follow y, columns follow x."""

    values: np.ndarray
    tag: str
    grid: HalfPlaneGrid

    TAGS = ("rho", "dbar", "d", "mu", "reich_H", "reich_A3", "reich_dbar", "other")

    def __post_init__(self):
        if self.tag not in self.TAGS:
            raise InvalidInputError(f"unknown field tag {self.tag!r}")
        if self.values.shape != (self.grid.ny, self.grid.nx):
            raise InvalidInputError("field shape does not match the grid")
        if not np.all(np.isfinite(self.values)):
            raise InvalidInputError("field contains non-finite values")
        if self.tag == "mu" and np.max(np.abs(self.values)) >= 1:
            raise DegeneracyError("Beltrami coefficient reaches modulus 1")

    def to_csv(self, path):
        xs, ys = self.grid.xs, self.grid.ys
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["x", "y", "re", "im"])
            for j, y in enumerate(ys):
                for i, x in enumerate(xs):
                    v = self.values[j, i]
                    wr.writerow([repr(float(x)), repr(float(y)), repr(float(v.real)), repr(float(v.imag))])

    def to_matrix(self, path, part="abs"):
        """Whitespace matrix (rows follow y) suitable for gnuplot ``matrix``."""
        f = {"abs": np.abs, "re": np.real, "im": np.imag}[part]
        np.savetxt(path, f(self.values), fmt="%.17g")


@dataclass(frozen=True)
class EnergyReport:
    value: float
    sup_mu: float
    grid: dict = field(default_factory=dict)
    y_min_tail_estimate: float = 0.0

    def to_row(self):
        row = {"value": self.value, "sup_mu": self.sup_mu, "y_min_tail_estimate": self.y_min_tail_estimate}
        row.update({f"grid_{k}": v for k, v in self.grid.items()})
        return row


# --------------------------------------------------------------------------


def primitive(values, slopes, dx):
    """Cumulative integral (from the first node) of the cubic Hermite interpolant."""
    inc = dx * (values[1:] + values[:-1]) / 2 + dx * dx * (slopes[:-1] - slopes[1:]) / 12
    return np.concatenate(([0.0], np.cumsum(inc)))


def _hermite_at(grid_x0, dx, vals, slopes, x):
    return float(kernels.hermite_eval(vals, slopes, grid_x0, dx, np.array([x]))[0])


def exp_line(u: LineFunction) -> LineFunction:
    """e^u on u's grid with exact node derivatives e^u u'."""
    if u.is_complex:
        raise InvalidInputError("u must be real-valued")
    if np.max(u.values) > 700:
        raise ExpOverflowError("exp(u) overflows; reduce the amplitude of u")
    e = np.exp(u.values)
    return LineFunction(u.x0, u.dx, e, tail="none", slopes=e * u.slopes)


def exp_normaliser(u: LineFunction):
    """(primitive P of e^u on the grid, c = int_0^1 e^u, P(0))."""
    e = exp_line(u)
    P = primitive(e.values, e.slopes, u.dx)
    if not (u.a <= 0.0 and u.b >= 1.0):
        raise OutOfDomainError("the window must contain [0, 1]")
    p0 = _hermite_at(u.x0, u.dx, P, e.values, 0.0)
    p1 = _hermite_at(u.x0, u.dx, P, e.values, 1.0)
    return e, P, p1 - p0, p0


def gamma_u(u: LineFunction) -> IncreasingMap:
    """Normalized primitive of e^u: fixes 0 and 1, strictly increasing."""
    e, P, c, p0 = exp_normaliser(u)
    return IncreasingMap(u.grid, (P - p0) / c, e.values / c)


def map_as_line(h: IncreasingMap) -> LineFunction:
    """Sampled map as a LineFunction (values ys, slopes dys) on uniform xs."""
    dx = np.diff(h.xs)
    if not np.allclose(dx, dx[0], rtol=1e-9, atol=0):
        raise InvalidInputError("map samples must be uniform")
    return LineFunction(h.xs[0], dx[0], h.ys, tail="none", slopes=h.dys)


def _check_support(u, grid):
    if grid.X + grid.Y > min(-u.a, u.b) + 1e-12:
        raise OutOfDomainError("grid plus kernel radius leaves the window of u")


_KERNELS = {}


def _mollifiers():
    if not _KERNELS:
        phi, psi = make_phi(), make_psi()
        a, b = derive_alpha_beta(phi, psi)
        _KERNELS.update(phi=phi, psi=psi, alpha=a, beta=b)
    return _KERNELS


def rho_extension(u: LineFunction, grid: HalfPlaneGrid, impl=None) -> ComplexGridField:
    _check_support(u, grid)
    k = _mollifiers()
    gam = map_as_line(gamma_u(u))
    xs = grid.xs

    def row(y):
        a, b = convolve_many([k["phi"], k["psi"]], y, gam, xs, impl=impl)
        return a - 1j * b

    vals = np.array(kernels.ordered_map(row, grid.ys))
    return ComplexGridField(vals, "rho", grid)


def wirtinger(u: LineFunction, grid: HalfPlaneGrid, method="kernels", impl=None):
    """(dbar rho, d rho) on the grid.

    ``kernels`` convolves e^u / c with the derived kernels; ``finite_difference``
    differentiates :func:`rho_extension` numerically (second order, one-sided
    at the edges, whose values should not be used for comparisons).
    """
    _check_support(u, grid)
    if method == "kernels":
        k = _mollifiers()
        e, _, c, _ = exp_normaliser(u)
        xs = grid.xs

        def row(y):
            a, b = convolve_many([k["alpha"], k["beta"]], y, e, xs, impl=impl)
            return a / c, b / c

        rows = kernels.ordered_map(row, grid.ys)
        dbar = np.array([r[0] for r in rows])
        d = np.array([r[1] for r in rows])
    elif method == "finite_difference":
        if grid.nx < 5 or grid.ny < 5:
            raise ResolutionError("finite differences need at least 5 nodes per axis")
        rho = rho_extension(u, grid, impl=impl).values
        rx = np.gradient(rho, grid.xs, axis=1, edge_order=2)
        ry = np.gradient(rho, grid.ys, axis=0, edge_order=2)
        dbar = 0.5 * (rx + 1j * ry)
        d = 0.5 * (rx - 1j * ry)
    else:
        raise InvalidInputError("method must be 'kernels' or 'finite_difference'")
    return ComplexGridField(dbar, "dbar", grid), ComplexGridField(d, "d", grid)


def regime_check(u: LineFunction, delta=DEFAULT_DELTA):
    """Warn when the H^1/2 seminorm of u exceeds the smallness threshold delta."""
    s = h12_line(u).norm
    if s > delta:
        warnings.warn(f"H^1/2 seminorm {s:.3g} exceeds threshold {delta}; "
                      "the extension may leave the small-norm regime", SemmesRegimeWarning, stacklevel=3)
    return s


def beltrami(u: LineFunction, grid: HalfPlaneGrid, delta=DEFAULT_DELTA, impl=None) -> ComplexGridField:
    """mu = dbar rho / d rho; |d rho| < 1e-9 anywhere is a degeneracy error."""
    regime_check(u, delta)
    dbar, d = wirtinger(u, grid, "kernels", impl=impl)
    if np.min(np.abs(d.values)) < 1e-9:
        raise DegeneracyError("|d rho| vanishes on the grid; u is too large for the extension")
    return ComplexGridField(dbar.values / d.values, "mu", grid)


def wp_energy(mu: ComplexGridField, grid: HalfPlaneGrid | None = None) -> EnergyReport:
    """(1/pi) sum w |mu|^2 / y^2 over the grid, with sup |mu|."""
    if mu.tag != "mu":
        raise InvalidInputError("wp_energy expects a mu-tagged field")
    grid = mu.grid if grid is None else grid
    y = grid.ys[:, None]
    dens = np.abs(mu.values) ** 2 / y ** 2
    val = math.fsum((grid.weights * dens).ravel()) / math.pi
    # |mu|^2 / y^2 tends to a finite limit at y -> 0: estimate the strip below y_min
    tail = math.fsum(grid.wx * dens[0]) * grid.y_min / math.pi
    return EnergyReport(val, float(np.max(np.abs(mu.values))), grid.meta(), tail)


# --------------------------------------------------------------------------
# local oscillation, Fubini identity, pointwise bound


def _gl_panels(length, panel=0.25, order=8):
    n = max(1, math.ceil(length / panel))
    gx, gw = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, 1.0, n + 1)
    c = (edges[:-1] + edges[1:]) / 2
    hw = (edges[1] - edges[0]) / 2
    return (c[:, None] + hw * gx).ravel(), np.tile(hw * gw, n)


def local_oscillation(u: LineFunction, xs, y, panel=0.25):
    """G(x, y) = int_{-y}^{y} |u(x + t) - u(x)|^2 dt for each x (u uses its tail)."""
    s, w = _gl_panels(2.0 * y, panel)
    t = -y + 2.0 * y * s
    w = 2.0 * y * w
    xs = np.asarray(xs, dtype=float)
    pts = xs[:, None] + t[None, :]
    diff = u(pts) - u(xs)[:, None]
    return np.sum(w * np.abs(diff) ** 2, axis=1)


def fubini_check(u: LineFunction, grid: HalfPlaneGrid | None = None, support_tol=1e-14):
    """Both sides of iint y^-3 int_{-y}^{y} |u(x+t)-u(x)|^2 = iint |u(x+t)-u(x)|^2 / (2 t^2).

    The left side is a half-plane quadrature (x on the grid, y log-spaced)
    with closed-form tails for |x| > X, y < y_min and y > Y; u must vanish
    outside [-X, X] and its support must fit in a length-Y interval. The right
    side is 2 pi^2 times the Gagliardo seminorm value.
    """
    grid = HalfPlaneGrid(X=8.0, nx=257, y_min=2.0 ** -7, Y=16.0, ny=128) if grid is None else grid
    if u.tail != "zero":
        raise InvalidInputError("fubini_check needs a compactly supported (tail 'zero') function")
    g = u.grid
    v = np.asarray(u.values)
    big = np.abs(v) > support_tol * max(np.abs(v).max(), 1e-300)
    if not big.any():
        return 0.0, 0.0
    s0, s1 = g[big][0] - u.dx, g[big][-1] + u.dx
    if s0 < -grid.X or s1 > grid.X or s1 - s0 > grid.Y:
        raise ResolutionError("support of u must lie in [-X, X] and fit within Y")
    xs, ys = grid.xs, grid.ys
    rows = kernels.ordered_map(lambda y: local_oscillation(u, xs, y), ys)
    inner = np.array([math.fsum(grid.wx * r) for r in rows])
    # |x| > X: int |u(s)|^2 m(s, y) ds
    wts = np.full(u.n, u.dx)
    wts[[0, -1]] /= 2
    u2 = np.abs(v) ** 2
    outside = np.array([np.sum(wts * u2 * (np.maximum(0, g + y - grid.X) + np.maximum(0, y - g - grid.X)))
                        for y in ys])
    inner = inner + outside
    middle = math.fsum(grid.wy * inner / ys ** 3)
    du2 = np.abs(u.slopes) ** 2
    low = (2.0 / 3.0) * grid.y_min * float(np.sum(wts * du2))
    norm2 = float(np.sum(wts * u2))
    mass = u.integral()
    high = 4.0 * norm2 / grid.Y - abs(mass) ** 2 / grid.Y ** 2
    lhs = middle + low + high
    rhs = 2.0 * math.pi ** 2 * h12_line(u).value
    return lhs, rhs


def pointwise_bound_constant(u: LineFunction, mu: ComplexGridField, rel_floor=1e-10):
    """max over nodes of |mu|^2 / ((1/y) int_{-y}^{y} |u(x+t)-u(x)|^2 dt)."""
    grid = mu.grid
    rhs = np.array([local_oscillation(u, grid.xs, y) / y for y in grid.ys])
    mask = rhs > rel_floor * rhs.max()
    return float(np.max(np.abs(mu.values[mask]) ** 2 / rhs[mask]))
