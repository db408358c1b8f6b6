"""Pure NumPy implementations of the hot loops.

These mirror ``_ckernels.pyx`` operation for operation (same node layouts, same
interpolation rule); results agree with the compiled versions to rounding.
"""
import numpy as np

# kernel codes for line_cauchy_row
KIND_A = 0
KIND_A3 = 1
KIND_H = 2
KIND_CAUCHY = 3


def shift_sums(re, im, periodic):
    """S[k] = sum_j |u[j+k] - u[j]|^2 for k = 0..n-1.

    With ``periodic`` the index j+k wraps; otherwise only pairs inside the
    array contribute.
    """
    n = re.shape[0]
    out = np.zeros(n)
    for k in range(1, n):
        if periodic:
            dr = np.concatenate((re[k:], re[:k])) - re
            di = np.concatenate((im[k:], im[:k])) - im
        else:
            dr = re[k:] - re[:-k]
            di = im[k:] - im[:-k]
        out[k] = np.dot(dr, dr) + np.dot(di, di)
    return out


def hermite_eval(vals, slopes, x0, dx, p):
    """Cubic Hermite interpolant on a uniform grid, evaluated at ``p``.

    Points must lie inside the grid; callers check the range.
    """
    n = vals.shape[0]
    s = (p - x0) / dx
    j = np.floor(s).astype(np.intp)
    np.clip(j, 0, n - 2, out=j)
    tau = s - j
    t2 = tau * tau
    t3 = t2 * tau
    h00 = 2.0 * t3 - 3.0 * t2 + 1.0
    h10 = t3 - 2.0 * t2 + tau
    h01 = -2.0 * t3 + 3.0 * t2
    h11 = t3 - t2
    return (h00 * vals[j] + h10 * dx * slopes[j]
            + h01 * vals[j + 1] + h11 * dx * slopes[j + 1])


def hermite_conv(vals, slopes, x0, dx, xq, y, r, wr):
    """out[m, i] = sum_k wr[m, k] * f(xq[i] - y * r[k])."""
    p = xq[:, None] - y * r[None, :]
    f = hermite_eval(vals, slopes, x0, dx, p)
    return np.ascontiguousarray((f @ wr.T).T)


def _kernel(kind, t, z, y):
    if kind == KIND_A:
        pref = (z * z + 1.0) / (1j * np.pi)
        return pref / ((t - z) * (t * t + 1.0))
    if kind == KIND_A3:
        d = t - z
        d2 = d * d
        return (6.0 / (1j * np.pi)) / (d2 * d2)
    if kind == KIND_H:
        zc = np.conj(z)
        e = t - zc
        pref = (2j * y) ** 3 / (2j * np.pi)
        return pref / ((t - z) * (e * e * e))
    if kind == KIND_CAUCHY:
        return (1.0 / (2j * np.pi)) / (t - z)
    raise ValueError(f"unknown kernel kind {kind}")


def row_nodes(x0, dx, n, xs, y, gx, gw, n_near, n_far, r_near):
    """Quadrature nodes and weights for one row of targets at height ``y``.

    Near ``x`` the abscissa is t = x + y sinh(s) with Gauss-Legendre panels
    uniform in s; the two far pieces use panels uniform in t.
    Returns (t, w), each of shape (len(xs), 16 * (n_near + 2 * n_far)) for
    16-point rules.
    """
    a = x0
    b = x0 + (n - 1) * dx
    lo = np.clip(xs - r_near, a, b)
    hi = np.clip(xs + r_near, a, b)
    s_lo = np.arcsinh((lo - xs) / y)
    s_hi = np.arcsinh((hi - xs) / y)

    k = np.arange(n_near)
    step = (s_hi - s_lo) / n_near
    centre = s_lo[:, None] + (k[None, :] + 0.5) * step[:, None]
    half = 0.5 * step
    s = centre[:, :, None] + half[:, None, None] * gx[None, None, :]
    ws = np.broadcast_to(half[:, None, None] * gw[None, None, :], s.shape)
    t_near = xs[:, None, None] + y * np.sinh(s)
    w_near = ws * y * np.cosh(s)

    k = np.arange(n_far)
    pieces_t = [t_near.reshape(len(xs), -1)]
    pieces_w = [w_near.reshape(len(xs), -1)]
    for start, stop in ((np.full_like(lo, a), lo), (hi, np.full_like(hi, b))):
        step = (stop - start) / n_far
        centre = start[:, None] + (k[None, :] + 0.5) * step[:, None]
        half = 0.5 * step
        t = centre[:, :, None] + half[:, None, None] * gx[None, None, :]
        w = np.broadcast_to(half[:, None, None] * gw[None, None, :], t.shape)
        pieces_t.append(t.reshape(len(xs), -1))
        pieces_w.append(w.reshape(len(xs), -1))
    return np.concatenate(pieces_t, axis=1), np.concatenate(pieces_w, axis=1)


def line_cauchy_row(vals, slopes, x0, dx, xs, y, kind, gx, gw, n_near, n_far, r_near):
    """Window part of a Cauchy-type line integral for a row of targets.

    out[i] = int_a^b f(t) K_kind(t; xs[i] + i y) dt  with f the Hermite
    interpolant of (vals, slopes).
    """
    n = vals.shape[0]
    t, w = row_nodes(x0, dx, n, xs, y, gx, gw, n_near, n_far, r_near)
    f = hermite_eval(vals, slopes, x0, dx, t)
    z = (xs + 1j * y)[:, None]
    return np.sum(w * f * _kernel(kind, t, z, y), axis=1)
