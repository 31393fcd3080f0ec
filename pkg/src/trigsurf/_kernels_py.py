"""Pure-Python implementation of the branch-tracking kernels.

This module mirrors ``_kernels.pyx`` function for function and is used when
the compiled extension is unavailable.  Arcs are passed in packed form
``(kind, c, v, s)``:

* ``kind == CIRCLE``: ``z(t) = c + v * exp(1j * s * t)``
* ``kind == LINE``:   ``z(t) = c + v * t``
"""

import cmath
import math

import numpy as np

from .errors import BranchPointOnInterior

CIRCLE = 0
LINE = 1

_SQRT3 = math.sqrt(3.0)
_OMEGA = cmath.exp(2j * math.pi / 3)


def _z(kind, c, v, s, t):
    if kind == CIRCLE:
        return c + v * cmath.exp(1j * s * t)
    return c + v * t


def _dz(kind, c, v, s, t):
    if kind == CIRCLE:
        return 1j * s * v * cmath.exp(1j * s * t)
    return v


def _poly(roots, z):
    p = 1.0 + 0.0j
    for a in roots:
        p *= z - a
    return p


def _cbrt(r):
    return cmath.exp(cmath.log(r) / 3.0)


def march(kind, c, v, s, roots, t_start, w_start, t_stop, zone, h_max, p_min):
    """Continue ``w`` from ``t_start`` toward ``t_stop``.

    Marching stops ``zone`` short of ``t_stop``.  Returns the anchors
    ``(t, w, p)`` as arrays, starting with the seed.  Every accepted step
    satisfies ``|p_new/p - 1| <= 1/2`` (also at the midpoint), and the
    Euler-predicted ``w`` must select the same cube root as the ratio
    continuation, within a third of the cube-root separation.
    """
    roots = [complex(a) for a in roots]
    c = complex(c)
    v = complex(v)
    dirn = 1.0 if t_stop >= t_start else -1.0
    target = t_stop - dirn * zone
    if dirn * (target - t_start) < 0.0:
        target = t_start

    t = float(t_start)
    w = complex(w_start)
    z = _z(kind, c, v, s, t)
    p = _poly(roots, z)
    ts, ws, ps = [t], [w], [p]
    h = h_max
    h_min = 1e-14 * max(1.0, abs(t_stop - t_start))

    while dirn * (target - t) > 0.0:
        remaining = dirn * (target - t)
        step = min(h, remaining)
        t_new = target if step == remaining else t + dirn * step
        z_new = _z(kind, c, v, s, t_new)
        p_new = _poly(roots, z_new)
        p_mid = _poly(roots, _z(kind, c, v, s, 0.5 * (t + t_new)))
        if abs(p_new) < p_min or abs(p_mid) < p_min:
            raise BranchPointOnInterior(
                f"|p(z)| below {p_min:g} near t={t_new!r} (z={z_new!r})")
        ratio = p_new / p
        accept = abs(ratio - 1.0) <= 0.5 and abs(p_mid / p - 1.0) <= 0.5
        if accept:
            w_cont = w * _cbrt(ratio)
            logder = 0j
            for a in roots:
                logder += 1.0 / (z - a)
            dw = p * logder * _dz(kind, c, v, s, t) / (3.0 * w * w)
            w_pred = w + dw * (t_new - t)
            sep = _SQRT3 * abs(p_new) ** (1.0 / 3.0)
            dists = [abs(w_pred - w_cont * _OMEGA ** k) for k in range(3)]
            accept = dists[0] == min(dists) and dists[0] < sep / 3.0
        if not accept:
            h = 0.5 * step
            if h < h_min:
                raise BranchPointOnInterior(
                    f"step size underflow near t={t!r}; path too close to a branch point")
            continue
        t, z, p, w = t_new, z_new, p_new, w_cont
        ts.append(t)
        ws.append(w)
        ps.append(p)
        h = min(2.0 * step, h_max)

    return (np.asarray(ts, dtype=float), np.asarray(ws, dtype=complex),
            np.asarray(ps, dtype=complex))


def lift(kind, c, v, s, roots, t_left, t_right, root_left, root_right,
         side, off, a_t, a_w, a_p):
    """Evaluate ``(z, dz/dt, w)`` at quadrature nodes.

    Node ``i`` sits at ``t = te + off[i]`` with ``te`` the left
    (``side == 0``) or right endpoint.  When that endpoint is the branch
    point ``roots[root_left]`` (or ``root_right``) the factor ``z - a`` is
    taken from the arc offset so that nodes arbitrarily close to the
    endpoint keep full relative accuracy.  ``w`` is continued from the
    nearest anchor by the principal cube root of ``p/p_anchor``.
    """
    side = np.asarray(side)
    off = np.asarray(off, dtype=float)
    a_t = np.asarray(a_t, dtype=float)
    te = np.where(side == 0, t_left, t_right)
    t = te + off
    c = complex(c)
    v = complex(v)
    if kind == CIRCLE:
        e0 = np.exp(1j * s * te)
        half = 0.5 * s * off
        delta = v * e0 * (2j * np.sin(half) * np.exp(1j * half))
        z = c + v * e0 + delta
        dz = 1j * s * v * np.exp(1j * s * t)
    else:
        delta = v * off
        z = c + v * te + delta
        dz = np.full(t.shape, v, dtype=complex)

    p = np.ones(t.shape, dtype=complex)
    for i, a in enumerate(roots):
        fac = z - a
        if i == root_left:
            fac = np.where(side == 0, delta, fac)
        if i == root_right:
            fac = np.where(side == 1, delta, fac)
        p = p * fac

    j = np.searchsorted(a_t, t)
    j = np.clip(j, 1, len(a_t) - 1) if len(a_t) > 1 else np.zeros_like(j)
    if len(a_t) > 1:
        left_closer = np.abs(t - a_t[j - 1]) <= np.abs(a_t[j] - t)
        j = np.where(left_closer, j - 1, j)
    aw = np.asarray(a_w)[j]
    ap = np.asarray(a_p)[j]
    w = aw * np.exp(np.log(p / ap) / 3.0)
    return z, dz, w
