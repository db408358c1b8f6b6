"""Backend selection and the line-integral engine built on the hot kernels.

The compiled module ``_ckernels`` is used when it imports; setting the
environment variable ``WPFLOW_PURE=1`` forces the NumPy fallback. Both expose
``shift_sums``, ``hermite_eval``, ``hermite_conv`` and ``line_cauchy_row`` with
identical semantics.

Cauchy-type integrals over the real line are split into the sampled window
[a, b], handled by clustered Gauss-Legendre panels, and two tails on which the
function is affine (zero or linearly extrapolated); the tails are integrated in
closed form after partial fractions.
"""
import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _pykernels
from .errors import InvalidInputError

try:  # pragma: no cover - depends on the build
    from . import _ckernels as _compiled
except ImportError:  # pragma: no cover
    _compiled = None

KIND_A = _pykernels.KIND_A
KIND_A3 = _pykernels.KIND_A3
KIND_H = _pykernels.KIND_H
KIND_CAUCHY = _pykernels.KIND_CAUCHY

GL_ORDER = 16
GL_X, GL_W = np.polynomial.legendre.leggauss(GL_ORDER)

# near-field radius, target panel width in the sinh variable, far panel length
R_NEAR = 1.0
W_SINH = 0.5
L_FAR = 1.0


def compiled_available():
    return _compiled is not None


def backend(name=None):
    """Return the kernel module for ``name`` ('c', 'python' or None for default)."""
    if name is None:
        name = "python" if os.environ.get("WPFLOW_PURE") else "c"
    if name == "python":
        return _pykernels
    if name == "c":
        return _compiled if _compiled is not None else _pykernels
    raise InvalidInputError(f"unknown backend {name!r}")


def backend_name(name=None):
    return "c" if backend(name) is _compiled else "python"


def n_workers():
    raw = os.environ.get("WPFLOW_WORKERS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise InvalidInputError(f"WPFLOW_WORKERS must be an integer, got {raw!r}") from exc
    return max(1, n)


def ordered_map(fn, items):
    """Map ``fn`` over ``items`` with the worker pool; results keep input order."""
    items = list(items)
    workers = n_workers()
    if workers == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _c64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def shift_sums(values, periodic, impl=None):
    v = np.asarray(values)
    return backend(impl).shift_sums(_c64(v.real), _c64(v.imag if np.iscomplexobj(v) else np.zeros(v.shape)),
                                    bool(periodic))


def hermite_eval(vals, slopes, x0, dx, p, impl=None):
    return backend(impl).hermite_eval(_c64(vals), _c64(slopes), float(x0), float(dx), np.asarray(p, dtype=float))


def hermite_conv(vals, slopes, x0, dx, xq, y, r, wr, impl=None):
    """Weighted sums sum_k wr[m, k] f(xq - y r[k]) for every kernel row m."""
    return backend(impl).hermite_conv(_c64(vals), _c64(slopes), float(x0), float(dx),
                                      _c64(xq), float(y), _c64(r), np.ascontiguousarray(wr, dtype=np.float64))


def layout(y, a, b):
    """Panel counts (n_near, n_far) used for every target of a row at height ``y``."""
    n_near = max(1, math.ceil(2.0 * math.asinh(R_NEAR / y) / W_SINH))
    n_far = max(1, math.ceil((b - a) / L_FAR))
    return n_near, n_far


def _window_row(vals, slopes, x0, dx, xs, y, kind, impl):
    b = x0 + (len(vals) - 1) * dx
    n_near, n_far = layout(y, x0, b)
    return backend(impl).line_cauchy_row(_c64(vals), _c64(slopes), float(x0), float(dx), _c64(xs),
                                         float(y), int(kind), GL_X, GL_W, n_near, n_far, R_NEAR)


def partial_fractions(kind, z):
    """(prefactor, [(pole, order, coeff), ...]) with K(t; z) = pref * sum coeff/(t-pole)^order."""
    y = z.imag
    if kind == KIND_A:
        return 1.0 / (1j * math.pi), [(z, 1, 1.0),
                                      (1j, 1, -(0.5 + z / 2j)),
                                      (-1j, 1, -(0.5 - z / 2j))]
    if kind == KIND_A3:
        return 6.0 / (1j * math.pi), [(z, 4, 1.0)]
    if kind == KIND_H:
        d = 2j * y
        zc = z.conjugate()
        return 1.0 / (2j * math.pi), [(z, 1, 1.0), (zc, 1, -1.0), (zc, 2, -d), (zc, 3, -d * d)]
    if kind == KIND_CAUCHY:
        return 1.0 / (2j * math.pi), [(z, 1, 1.0)]
    raise InvalidInputError(f"unknown kernel kind {kind}")


def right_tail(terms, alpha, beta, b):
    """int_b^inf (alpha + beta t) sum c/(t-p)^k dt for a convergent combination."""
    coeff = {}
    for p, k, c in terms:
        if beta != 0.0 and k >= 1:
            coeff[(p, k - 1)] = coeff.get((p, k - 1), 0.0) + beta * c
        coeff[(p, k)] = coeff.get((p, k), 0.0) + (alpha + beta * p) * c
    total = 0.0 + 0.0j
    for (p, m), c in coeff.items():
        if c == 0:
            continue
        if m == 0:
            continue  # constants cancel across a convergent combination
        if m == 1:
            total -= c * np.log(b - p)
        else:
            total += c * (b - p) ** (1 - m) / (m - 1)
    return total


def left_tail(terms, alpha, beta, a):
    """int_-inf^a (alpha + beta t) sum c/(t-p)^k dt, via t -> -t."""
    flipped = [(-p, k, c * (-1) ** k) for p, k, c in terms]
    return right_tail(flipped, alpha, -beta, -a)


def line_integral(vals, slopes, x0, dx, xs, y, kind, tails=None, impl=None):
    """int_R f(t) K_kind(t; x + i y) dt for each x in ``xs``.

    ``f`` is the Hermite interpolant of (vals, slopes) on the uniform grid
    starting at ``x0``; outside the grid ``f`` follows ``tails``, a tuple
    (alpha_left, beta_left, alpha_right, beta_right) of affine coefficients, or
    is zero when ``tails`` is None.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    out = _window_row(vals, slopes, x0, dx, xs, y, kind, impl)
    if tails is None or not any(tails):
        return out
    al, bl, ar, br = tails
    a = x0
    b = x0 + (len(vals) - 1) * dx
    if kind == KIND_CAUCHY:
        raise InvalidInputError("plain Cauchy integral diverges for non-decaying tails")
    extra = np.empty(len(xs), dtype=complex)
    for i, x in enumerate(xs):
        pref, terms = partial_fractions(kind, complex(x, y))
        extra[i] = pref * (left_tail(terms, al, bl, a) + right_tail(terms, ar, br, b))
    return out + extra
