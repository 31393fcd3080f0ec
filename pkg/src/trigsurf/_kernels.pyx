# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled branch-tracking kernels.

Same contract as ``trigsurf._kernels_py``; see that module for the
argument conventions.
"""

import numpy as np
cimport numpy as cnp

from libc.math cimport sin, fabs, sqrt, pow

from .errors import BranchPointOnInterior

cnp.import_array()

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double complex clog(double complex)
    double cabs(double complex)

CIRCLE = 0
LINE = 1

cdef double SQRT3 = 1.7320508075688772
cdef double complex OMEGA = -0.5 + 0.8660254037844386j
cdef double complex OMEGA2 = -0.5 - 0.8660254037844386j


cdef inline double complex _z(int kind, double complex c, double complex v,
                              double s, double t) nogil:
    if kind == 0:
        return c + v * cexp(1j * s * t)
    return c + v * t


cdef inline double complex _dz(int kind, double complex v, double s, double t) nogil:
    if kind == 0:
        return 1j * s * v * cexp(1j * s * t)
    return v


cdef inline double complex _poly(double complex[::1] roots, double complex z) nogil:
    cdef double complex p = 1.0
    cdef Py_ssize_t i
    for i in range(roots.shape[0]):
        p = p * (z - roots[i])
    return p


cdef inline double complex _cbrt(double complex r) nogil:
    return cexp(clog(r) / 3.0)


def march(int kind, c, v, double s, roots, double t_start, w_start,
          double t_stop, double zone, double h_max, double p_min):
    cdef double complex cc = complex(c)
    cdef double complex vv = complex(v)
    cdef double complex[::1] rr = np.ascontiguousarray(roots, dtype=np.complex128)
    cdef double dirn = 1.0 if t_stop >= t_start else -1.0
    cdef double target = t_stop - dirn * zone
    if dirn * (target - t_start) < 0.0:
        target = t_start

    cdef double t = t_start
    cdef double complex w = complex(w_start)
    cdef double complex z = _z(kind, cc, vv, s, t)
    cdef double complex p = _poly(rr, z)
    cdef double h = h_max
    cdef double h_min = 1e-14 * max(1.0, fabs(t_stop - t_start))
    cdef double remaining, step, t_new, sep, d0, d1, d2
    cdef double complex z_new, p_new, p_mid, ratio, w_cont, logder, dw, w_pred
    cdef Py_ssize_t i
    cdef bint accept

    ts = [t]
    ws = [w]
    ps = [p]
    while dirn * (target - t) > 0.0:
        remaining = dirn * (target - t)
        step = min(h, remaining)
        t_new = target if step == remaining else t + dirn * step
        z_new = _z(kind, cc, vv, s, t_new)
        p_new = _poly(rr, z_new)
        p_mid = _poly(rr, _z(kind, cc, vv, s, 0.5 * (t + t_new)))
        if cabs(p_new) < p_min or cabs(p_mid) < p_min:
            raise BranchPointOnInterior(
                f"|p(z)| below {p_min:g} near t={t_new!r} (z={complex(z_new)!r})")
        ratio = p_new / p
        accept = cabs(ratio - 1.0) <= 0.5 and cabs(p_mid / p - 1.0) <= 0.5
        if accept:
            w_cont = w * _cbrt(ratio)
            logder = 0.0
            for i in range(rr.shape[0]):
                logder = logder + 1.0 / (z - rr[i])
            dw = p * logder * _dz(kind, vv, s, t) / (3.0 * w * w)
            w_pred = w + dw * (t_new - t)
            sep = SQRT3 * pow(cabs(p_new), 1.0 / 3.0)
            d0 = cabs(w_pred - w_cont)
            d1 = cabs(w_pred - w_cont * OMEGA)
            d2 = cabs(w_pred - w_cont * OMEGA2)
            accept = d0 <= d1 and d0 <= d2 and d0 < sep / 3.0
        if not accept:
            h = 0.5 * step
            if h < h_min:
                raise BranchPointOnInterior(
                    f"step size underflow near t={t!r}; path too close to a branch point")
            continue
        t = t_new
        z = z_new
        p = p_new
        w = w_cont
        ts.append(t)
        ws.append(w)
        ps.append(p)
        h = min(2.0 * step, h_max)

    return (np.asarray(ts, dtype=np.float64), np.asarray(ws, dtype=np.complex128),
            np.asarray(ps, dtype=np.complex128))


def lift(int kind, c, v, double s, roots, double t_left, double t_right,
         int root_left, int root_right, side, off, a_t, a_w, a_p):
    cdef double complex cc = complex(c)
    cdef double complex vv = complex(v)
    cdef double complex[::1] rr = np.ascontiguousarray(roots, dtype=np.complex128)
    cdef cnp.int64_t[::1] sd = np.ascontiguousarray(side, dtype=np.int64)
    cdef double[::1] of = np.ascontiguousarray(off, dtype=np.float64)
    cdef double[::1] at = np.ascontiguousarray(a_t, dtype=np.float64)
    cdef double complex[::1] aw = np.ascontiguousarray(a_w, dtype=np.complex128)
    cdef double complex[::1] ap = np.ascontiguousarray(a_p, dtype=np.complex128)
    cdef Py_ssize_t n = of.shape[0]
    cdef Py_ssize_t na = at.shape[0]
    out_z = np.empty(n, dtype=np.complex128)
    out_dz = np.empty(n, dtype=np.complex128)
    out_w = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] oz = out_z
    cdef double complex[::1] odz = out_dz
    cdef double complex[::1] ow = out_w
    cdef Py_ssize_t i, k, lo, hi, mid, j
    cdef double te, t, half
    cdef double complex e0, delta, z, p, fac

    with nogil:
        for i in range(n):
            te = t_left if sd[i] == 0 else t_right
            t = te + of[i]
            if kind == 0:
                e0 = cexp(1j * s * te)
                half = 0.5 * s * of[i]
                delta = vv * e0 * (2j * sin(half) * cexp(1j * half))
                z = cc + vv * e0 + delta
                odz[i] = 1j * s * vv * cexp(1j * s * t)
            else:
                delta = vv * of[i]
                z = cc + vv * te + delta
                odz[i] = vv
            oz[i] = z
            p = 1.0
            for k in range(rr.shape[0]):
                if (k == root_left and sd[i] == 0) or (k == root_right and sd[i] == 1):
                    fac = delta
                else:
                    fac = z - rr[k]
                p = p * fac
            # nearest anchor by bisection
            lo = 0
            hi = na
            while lo < hi:
                mid = (lo + hi) // 2
                if at[mid] < t:
                    lo = mid + 1
                else:
                    hi = mid
            if na == 1:
                j = 0
            else:
                if lo < 1:
                    lo = 1
                if lo > na - 1:
                    lo = na - 1
                j = lo - 1 if fabs(t - at[lo - 1]) <= fabs(at[lo] - t) else lo
            ow[i] = aw[j] * _cbrt(p / ap[j])
    return out_z, out_dz, out_w
