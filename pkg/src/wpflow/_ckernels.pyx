# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops; see ``_pykernels`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport floor, sinh, cosh, asinh, M_PI

cnp.import_array()

ctypedef double complex cplx


cdef inline double _herm(const double[::1] vals, const double[::1] slopes,
                         double x0, double dx, Py_ssize_t n, double p) nogil:
    cdef double s = (p - x0) / dx
    cdef Py_ssize_t j = <Py_ssize_t>floor(s)
    if j < 0:
        j = 0
    elif j > n - 2:
        j = n - 2
    cdef double tau = s - j
    cdef double t2 = tau * tau
    cdef double t3 = t2 * tau
    return ((2.0 * t3 - 3.0 * t2 + 1.0) * vals[j]
            + (t3 - 2.0 * t2 + tau) * dx * slopes[j]
            + (-2.0 * t3 + 3.0 * t2) * vals[j + 1]
            + (t3 - t2) * dx * slopes[j + 1])


def shift_sums(const double[::1] re, const double[::1] im, bint periodic):
    cdef Py_ssize_t n = re.shape[0]
    out_arr = np.zeros(n)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, j, jj
    cdef double acc, dr, di
    with nogil:
        for k in range(1, n):
            acc = 0.0
            if periodic:
                for j in range(n):
                    jj = j + k
                    if jj >= n:
                        jj -= n
                    dr = re[jj] - re[j]
                    di = im[jj] - im[j]
                    acc += dr * dr + di * di
            else:
                for j in range(n - k):
                    dr = re[j + k] - re[j]
                    di = im[j + k] - im[j]
                    acc += dr * dr + di * di
            out[k] = acc
    return out_arr


def hermite_eval(const double[::1] vals, const double[::1] slopes,
                 double x0, double dx, p):
    pa = np.ascontiguousarray(p, dtype=np.float64)
    flat = pa.reshape(-1)
    cdef const double[::1] pv = flat
    res = np.empty(flat.shape[0])
    cdef double[::1] rv = res
    cdef Py_ssize_t i, n = vals.shape[0]
    with nogil:
        for i in range(pv.shape[0]):
            rv[i] = _herm(vals, slopes, x0, dx, n, pv[i])
    return res.reshape(pa.shape)


def hermite_conv(const double[::1] vals, const double[::1] slopes, double x0, double dx,
                 const double[::1] xq, double y, const double[::1] r,
                 const double[:, ::1] wr):
    cdef Py_ssize_t nq = xq.shape[0], nk = r.shape[0], nm = wr.shape[0]
    cdef Py_ssize_t n = vals.shape[0]
    out_arr = np.zeros((nm, nq))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, k, m
    cdef double f
    with nogil:
        for i in range(nq):
            for k in range(nk):
                f = _herm(vals, slopes, x0, dx, n, xq[i] - y * r[k])
                for m in range(nm):
                    out[m, i] += wr[m, k] * f
    return out_arr


cdef inline cplx _kernel(int kind, double t, cplx z, double y) nogil:
    cdef cplx d, e, d2
    cdef cplx I = 1j
    if kind == 0:
        return ((z * z + 1.0) / (I * M_PI)) / ((t - z) * (t * t + 1.0))
    elif kind == 1:
        d = t - z
        d2 = d * d
        return (6.0 / (I * M_PI)) / (d2 * d2)
    elif kind == 2:
        e = t - z.conjugate()
        d = 2.0 * I * y
        return (d * d * d / (2.0 * I * M_PI)) / ((t - z) * (e * e * e))
    else:
        return (1.0 / (2.0 * I * M_PI)) / (t - z)


def line_cauchy_row(const double[::1] vals, const double[::1] slopes, double x0, double dx,
                    const double[::1] xs, double y, int kind,
                    const double[::1] gx, const double[::1] gw,
                    int n_near, int n_far, double r_near):
    if kind < 0 or kind > 3:
        raise ValueError(f"unknown kernel kind {kind}")
    cdef Py_ssize_t nq = xs.shape[0], ng = gx.shape[0], n = vals.shape[0]
    out_arr = np.zeros(nq, dtype=np.complex128)
    cdef cplx[::1] out = out_arr
    cdef double a = x0, b = x0 + (n - 1) * dx
    cdef Py_ssize_t i, k, g, piece
    cdef double x, lo, hi, s_lo, s_hi, step, half, centre, s, t, w, start, stop
    cdef cplx z, acc
    with nogil:
        for i in range(nq):
            x = xs[i]
            z = x + 1j * y
            lo = x - r_near
            lo = a if lo < a else (b if lo > b else lo)
            hi = x + r_near
            hi = a if hi < a else (b if hi > b else hi)
            acc = 0.0
            s_lo = asinh((lo - x) / y)
            s_hi = asinh((hi - x) / y)
            step = (s_hi - s_lo) / n_near
            half = 0.5 * step
            for k in range(n_near):
                centre = s_lo + (k + 0.5) * step
                for g in range(ng):
                    s = centre + half * gx[g]
                    t = x + y * sinh(s)
                    w = half * gw[g] * y * cosh(s)
                    acc = acc + w * _herm(vals, slopes, x0, dx, n, t) * _kernel(kind, t, z, y)
            for piece in range(2):
                if piece == 0:
                    start = a
                    stop = lo
                else:
                    start = hi
                    stop = b
                step = (stop - start) / n_far
                half = 0.5 * step
                for k in range(n_far):
                    centre = start + (k + 0.5) * step
                    for g in range(ng):
                        t = centre + half * gx[g]
                        w = half * gw[g]
                        acc = acc + w * _herm(vals, slopes, x0, dx, n, t) * _kernel(kind, t, z, y)
            out[i] = acc
    return out_arr
