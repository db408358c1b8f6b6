"""Cauchy-type operators of quasiconformal deformation theory on the upper half plane.

For real f on the line with f(t) = O(|t|^alpha), alpha < 2::

    Af(z)    = (z^2 + 1) / (i pi) int f(t) / ((t - z)(t^2 + 1)) dt
    (Af)'''  = 6 / (i pi) int f(t) / (t - z)^4 dt
    Hf(z)    = (z - zbar)^3 / (2 pi i) int f(t) / ((t - z)(t - zbar)^3) dt

Hf is a smooth extension of f with dbar Hf = -y^2 conj((Af)''').
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidInputError, ResolutionError
from .functions import (CircleFunction, LineFunction, angular_speed, builtin,
                        cayley, cayley_prime)
from .semmes import ComplexGridField, HalfPlaneGrid

REICH_X = 16.0
REICH_N = 2 ** 14 + 1  # step 2^-9


@dataclass(frozen=True)
class BoundaryFunction:
    """Real boundary data with declared growth exponent alpha < 2."""

    f: LineFunction
    growth_constant: float = 0.0

    def __post_init__(self):
        f = self.f
        if f.is_complex:
            raise InvalidInputError("boundary data must be real")
        if not f.decay_exponent < 2:
            raise InvalidInputError("growth exponent must be below 2")
        if f.tail == "none":
            raise InvalidInputError("boundary data needs a tail model ('zero' or 'affine')")
        g = f.grid
        C = float(np.max(np.abs(f.values) / (1.0 + np.abs(g)) ** f.decay_exponent))
        object.__setattr__(self, "growth_constant", C)

    @classmethod
    def builtin(cls, name, params=None, X=REICH_X, n=REICH_N):
        return cls(builtin(name, params, X=X, n=n))

    @property
    def min_height(self):
        return 4.0 * self.f.dx


@dataclass(frozen=True)
class DeformationField:
    ext: ComplexGridField
    dbar: ComplexGridField


def _as_boundary(f):
    if isinstance(f, BoundaryFunction):
        return f
    if isinstance(f, LineFunction):
        return BoundaryFunction(f)
    raise InvalidInputError("expected a BoundaryFunction or LineFunction")


def _row(bf, xs, y, kind, impl=None):
    if not y > 0:
        raise InvalidInputError("points must lie in the upper half plane")
    if y < bf.min_height * (1 - 1e-12):
        raise ResolutionError(f"Im z = {y:g} is below 4 grid steps ({bf.min_height:g}); refine f")
    f = bf.f
    return kernels.line_integral(f.values, f.slopes, f.x0, f.dx, xs, y, kind, f.tail_coeffs(), impl=impl)


def _pointwise(f, z, kind, impl=None):
    bf = _as_boundary(f)
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    out = np.empty(flat.shape, dtype=complex)
    for y in np.unique(flat.imag):
        idx = np.nonzero(flat.imag == y)[0]
        out[idx] = _row(bf, flat.real[idx], y, kind, impl)
    return out.reshape(z.shape) if z.ndim else out[0]


def reich_A(f, z, impl=None):
    return _pointwise(f, z, kernels.KIND_A, impl)


def reich_A3(f, z, impl=None):
    return _pointwise(f, z, kernels.KIND_A3, impl)


def reich_H_at(f, z, impl=None):
    return _pointwise(f, z, kernels.KIND_H, impl)


def _grid_eval(bf, grid, kind, impl=None):
    xs = grid.xs
    return np.array(kernels.ordered_map(lambda y: _row(bf, xs, y, kind, impl), grid.ys))


def grid_dbar(values, grid):
    """Centred-difference dbar = (d_x + i d_y)/2 (one-sided second order at edges)."""
    fx = np.gradient(values, grid.xs, axis=1, edge_order=2)
    fy = np.gradient(values, grid.ys, axis=0, edge_order=2)
    return 0.5 * (fx + 1j * fy)


def reich_H(f, grid: HalfPlaneGrid, impl=None) -> DeformationField:
    bf = _as_boundary(f)
    vals = _grid_eval(bf, grid, kernels.KIND_H, impl)
    return DeformationField(ComplexGridField(vals, "reich_H", grid),
                            ComplexGridField(grid_dbar(vals, grid), "reich_dbar", grid))


def reich_A3_grid(f, grid: HalfPlaneGrid, impl=None) -> ComplexGridField:
    return ComplexGridField(_grid_eval(_as_boundary(f), grid, kernels.KIND_A3, impl), "reich_A3", grid)


def check_dbar_identity(f, grid: HalfPlaneGrid, field: DeformationField | None = None, impl=None):
    """sup / mean of |dbar Hf + y^2 conj(A3)| over interior nodes."""
    field = reich_H(f, grid, impl) if field is None else field
    a3 = reich_A3_grid(f, grid, impl).values
    y = grid.ys[:, None]
    res = np.abs(field.dbar.values + y ** 2 * np.conj(a3))[1:-1, 1:-1]
    scale = float(np.max(np.abs(field.dbar.values[1:-1, 1:-1])))
    return {"sup": float(res.max()), "mean": float(res.mean()), "dbar_scale": scale,
            "step": grid.hx}


def qd_energy(field: DeformationField, grid: HalfPlaneGrid | None = None) -> float:
    """iint |dbar f~|^2 / y^2 over the truncated grid."""
    grid = field.dbar.grid if grid is None else grid
    dens = np.abs(field.dbar.values) ** 2 / grid.ys[:, None] ** 2
    return math.fsum((grid.weights * dens).ravel())


def a3_energy(a3: ComplexGridField) -> float:
    """iint |(Af)'''|^2 y^2 over the truncated grid."""
    g = a3.grid
    return math.fsum((g.weights * np.abs(a3.values) ** 2 * g.ys[:, None] ** 2).ravel())


def chain_check(f, grid: HalfPlaneGrid, constant=9.5, impl=None):
    """iint |A3|^2 y^2 <= constant * qd_energy(Hf) on the grid."""
    fld = reich_H(f, grid, impl)
    lhs = a3_energy(reich_A3_grid(f, grid, impl))
    rhs = qd_energy(fld, grid)
    return {"lhs": lhs, "qd_energy": rhs, "ratio": lhs / rhs if rhs > 0 else float("nan"),
            "pass": bool(lhs <= constant * rhs + 1e-14)}


# --------------------------------------------------------------------------
# analytic test family (z + i)^(-k)


def psi_k(k):
    if k < 2:
        raise InvalidInputError("psi_k needs k >= 2 (the area integral diverges otherwise)")
    return (lambda z: (z + 1j) ** (-k)), (lambda z: -k * (z + 1j) ** (-k - 1))


def dirichlet_grid():
    return HalfPlaneGrid(X=64.0, nx=513, y_min=2.0 ** -10, Y=64.0, ny=256)


def dirichlet_equiv(k=2, grid: HalfPlaneGrid | None = None, scale=1.0):
    """(iint |psi|^2, iint |psi'|^2 y^2) for psi = scale (z + i)^-k on the grid."""
    grid = dirichlet_grid() if grid is None else grid
    f, fp = psi_k(k)
    z = grid.xs[None, :] + 1j * grid.ys[:, None]
    w = grid.weights
    lhs = math.fsum((w * np.abs(scale * f(z)) ** 2).ravel())
    rhs = math.fsum((w * np.abs(scale * fp(z)) ** 2 * grid.ys[:, None] ** 2).ravel())
    return lhs, rhs


def reproducing_check(k, z, grid: HalfPlaneGrid | None = None, scale=1.0):
    """(psi(z), (4/pi) iint v^2 psi'(w) / (conj(w) - z)^3 du dv)."""
    grid = dirichlet_grid() if grid is None else grid
    f, fp = psi_k(k)
    w = grid.xs[None, :] + 1j * grid.ys[:, None]
    v = grid.ys[:, None]
    integrand = v ** 2 * scale * fp(w) / (np.conj(w) - z) ** 3
    val = (4.0 / math.pi) * np.sum(grid.weights * integrand)
    return complex(scale * f(z)), complex(val)


def area_formula_grid():
    return HalfPlaneGrid(X=16.0, nx=513, y_min=2.0 ** -7, Y=16.0, ny=128)


def check_area_formula(f, z, grid: HalfPlaneGrid | None = None, field: DeformationField | None = None, impl=None):
    """(conj((Af)'''(z)), -(12/pi) iint dbar Hf(w) / (w - zbar)^4)."""
    grid = area_formula_grid() if grid is None else grid
    field = reich_H(f, grid, impl) if field is None else field
    lhs = complex(np.conj(reich_A3(f, z, impl)))
    w = grid.xs[None, :] + 1j * grid.ys[:, None]
    rhs = -(12.0 / math.pi) * np.sum(grid.weights * field.dbar.values / (w - np.conj(z)) ** 4)
    return lhs, complex(rhs)


# --------------------------------------------------------------------------
# Cayley transfer of dbar


def _harmonic_extension(g: CircleFunction, cutoff=1e-14):
    c = g.coeffs
    n = g.modes
    keep = np.abs(c) > cutoff * max(np.abs(c).max(), 1e-300)
    n, c = n[keep], c[keep]

    def ext(w):
        w = np.asarray(w, dtype=complex)
        out = np.zeros(w.shape, dtype=complex)
        for nk, ck in zip(n, c):
            out += ck * (w ** nk if nk >= 0 else np.conj(w) ** (-nk))
        return out

    def dbar(w):
        w = np.asarray(w, dtype=complex)
        out = np.zeros(w.shape, dtype=complex)
        for nk, ck in zip(n, c):
            if nk < 0:
                out += ck * (-nk) * np.conj(w) ** (-nk - 1)
        return out

    return ext, dbar


def cayley_transfer_check(g: CircleFunction, zs=None, h=1e-4):
    """Check dbar f~ = (dbar g~ o gamma) conj(gamma') / gamma' for f~ = (g~ o gamma) / gamma'.

    g~ is the harmonic extension of g into the disk; dbar f~ is computed by
    centred differences at the sample points ``zs``.
    """
    if g.is_real:
        raise InvalidInputError("expected a complex (tangential) vector field")
    angular_speed(g)
    if abs(g(np.array([0.0]))[0]) > 1e-8 * max(1.0, float(np.abs(g.samples).max())):
        raise InvalidInputError("vector field must vanish at w = 1")
    ext, dbar_g = _harmonic_extension(g)
    if zs is None:
        xx, yy = np.meshgrid(np.linspace(-2, 2, 9), np.linspace(0.2, 2.0, 7))
        zs = (xx + 1j * yy).ravel()
    zs = np.asarray(zs, dtype=complex)

    def ft(z):
        return ext(cayley(z)) / cayley_prime(z)

    fd = 0.5 * ((ft(zs + h) - ft(zs - h)) / (2 * h) + 1j * (ft(zs + 1j * h) - ft(zs - 1j * h)) / (2 * h))
    gp = cayley_prime(zs)
    law = dbar_g(cayley(zs)) * np.conj(gp) / gp
    res = np.abs(fd - law)
    mod = np.abs(np.abs(law) - np.abs(dbar_g(cayley(zs))))
    return {"sup": float(res.max()), "mean": float(res.mean()), "modulus_sup": float(mod.max())}
