# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled pointwise Euler kernels; same contract as ``_python``."""

import numpy as np
from libc.math cimport sqrt, fmax, fmin

cdef double GAMMA = 1.4


def euler_flux_1d(const double[:, ::1] u):
    cdef Py_ssize_t M = u.shape[1], i
    out = np.empty((3, M))
    cdef double[:, ::1] f = out
    cdef double rho, v, p
    for i in range(M):
        rho = u[0, i]
        v = u[1, i] / rho
        p = (GAMMA - 1.0) * (u[2, i] - 0.5 * rho * v * v)
        f[0, i] = u[1, i]
        f[1, i] = u[1, i] * v + p
        f[2, i] = (u[2, i] + p) * v
    return out


def euler_flux_2d(const double[:, ::1] u, const double[::1] nx, const double[::1] ny):
    cdef Py_ssize_t M = u.shape[1], i, j
    cdef bint scalar = nx.shape[0] == 1
    out = np.empty((4, M))
    cdef double[:, ::1] f = out
    cdef double rho, v1, v2, p, vn, ex, ey
    for i in range(M):
        j = 0 if scalar else i
        ex = nx[j]
        ey = ny[j]
        rho = u[0, i]
        v1 = u[1, i] / rho
        v2 = u[2, i] / rho
        p = (GAMMA - 1.0) * (u[3, i] - 0.5 * rho * (v1 * v1 + v2 * v2))
        vn = ex * v1 + ey * v2
        f[0, i] = rho * vn
        f[1, i] = u[1, i] * vn + ex * p
        f[2, i] = u[2, i] * vn + ey * p
        f[3, i] = (u[3, i] + p) * vn
    return out


def steger_warming_1d(const double[:, ::1] u):
    cdef Py_ssize_t M = u.shape[1], i
    outp = np.empty((3, M))
    outm = np.empty((3, M))
    cdef double[:, ::1] fp = outp
    cdef double[:, ::1] fm = outm
    cdef double rho, v, p, a, k, l1, l2, l3, l1p, l2p, l3p, l1m, l2m, l3m, alpha
    for i in range(M):
        rho = u[0, i]
        v = u[1, i] / rho
        p = (GAMMA - 1.0) * (u[2, i] - 0.5 * rho * v * v)
        a = sqrt(GAMMA * p / rho)
        k = 0.5 * rho / GAMMA
        l1 = v
        l2 = v + a
        l3 = v - a
        l1p = fmax(l1, 0.0)
        l2p = fmax(l2, 0.0)
        l3p = fmax(l3, 0.0)
        l1m = l1 - l1p
        l2m = l2 - l2p
        l3m = l3 - l3p
        alpha = 2.0 * (GAMMA - 1.0) * l1p + l2p + l3p
        fp[0, i] = k * alpha
        fp[1, i] = k * (alpha * v + a * (l2p - l3p))
        fp[2, i] = k * (0.5 * alpha * v * v + a * v * (l2p - l3p)
                        + a * a * (l2p + l3p) / (GAMMA - 1.0))
        alpha = 2.0 * (GAMMA - 1.0) * l1m + l2m + l3m
        fm[0, i] = k * alpha
        fm[1, i] = k * (alpha * v + a * (l2m - l3m))
        fm[2, i] = k * (0.5 * alpha * v * v + a * v * (l2m - l3m)
                        + a * a * (l2m + l3m) / (GAMMA - 1.0))
    return outp, outm


def steger_warming_2d(const double[:, ::1] u, const double[::1] nx, const double[::1] ny):
    cdef Py_ssize_t M = u.shape[1], i, j
    cdef bint scalar = nx.shape[0] == 1
    outp = np.empty((4, M))
    outm = np.empty((4, M))
    cdef double[:, ::1] fp = outp
    cdef double[:, ::1] fm = outm
    cdef double rho, v1, v2, p, a, k, vn, norm, ex, ey, q2, jump
    cdef double l1, l2, l3, l1p, l2p, l3p, l1m, l2m, l3m, alpha
    for i in range(M):
        j = 0 if scalar else i
        norm = sqrt(nx[j] * nx[j] + ny[j] * ny[j])
        ex = nx[j] / norm
        ey = ny[j] / norm
        rho = u[0, i]
        v1 = u[1, i] / rho
        v2 = u[2, i] / rho
        q2 = v1 * v1 + v2 * v2
        p = (GAMMA - 1.0) * (u[3, i] - 0.5 * rho * q2)
        a = sqrt(GAMMA * p / rho)
        k = 0.5 * rho / GAMMA * norm
        vn = ex * v1 + ey * v2
        l1 = vn
        l2 = vn + a
        l3 = vn - a
        l1p = fmax(l1, 0.0)
        l2p = fmax(l2, 0.0)
        l3p = fmax(l3, 0.0)
        l1m = l1 - l1p
        l2m = l2 - l2p
        l3m = l3 - l3p
        alpha = 2.0 * (GAMMA - 1.0) * l1p + l2p + l3p
        jump = a * (l2p - l3p)
        fp[0, i] = k * alpha
        fp[1, i] = k * (alpha * v1 + ex * jump)
        fp[2, i] = k * (alpha * v2 + ey * jump)
        fp[3, i] = k * (0.5 * alpha * q2 + vn * jump + a * a * (l2p + l3p) / (GAMMA - 1.0))
        alpha = 2.0 * (GAMMA - 1.0) * l1m + l2m + l3m
        jump = a * (l2m - l3m)
        fm[0, i] = k * alpha
        fm[1, i] = k * (alpha * v1 + ex * jump)
        fm[2, i] = k * (alpha * v2 + ey * jump)
        fm[3, i] = k * (0.5 * alpha * q2 + vn * jump + a * a * (l2m + l3m) / (GAMMA - 1.0))
    return outp, outm


def van_leer_haenel_1d(const double[:, ::1] u):
    cdef Py_ssize_t M = u.shape[1], i, c
    outp = np.empty((3, M))
    outm = np.empty((3, M))
    cdef double[:, ::1] fp = outp
    cdef double[:, ::1] fm = outm
    cdef double rho, v, p, a, H, Mach, mp, mm, pp, pm
    for i in range(M):
        rho = u[0, i]
        v = u[1, i] / rho
        p = (GAMMA - 1.0) * (u[2, i] - 0.5 * rho * v * v)
        a = sqrt(GAMMA * p / rho)
        H = (u[2, i] + p) / rho
        Mach = v / a
        if Mach >= 1.0 or Mach <= -1.0:
            if Mach >= 1.0:
                fp[0, i] = u[1, i]
                fp[1, i] = u[1, i] * v + p
                fp[2, i] = (u[2, i] + p) * v
                for c in range(3):
                    fm[c, i] = 0.0
            else:
                fm[0, i] = u[1, i]
                fm[1, i] = u[1, i] * v + p
                fm[2, i] = (u[2, i] + p) * v
                for c in range(3):
                    fp[c, i] = 0.0
            continue
        mp = 0.25 * rho * a * (Mach + 1.0) * (Mach + 1.0)
        mm = -0.25 * rho * a * (Mach - 1.0) * (Mach - 1.0)
        pp = 0.5 * (1.0 + GAMMA * Mach) * p
        pm = 0.5 * (1.0 - GAMMA * Mach) * p
        fp[0, i] = mp
        fp[1, i] = mp * v + pp
        fp[2, i] = mp * H
        fm[0, i] = mm
        fm[1, i] = mm * v + pm
        fm[2, i] = mm * H
    return outp, outm


def van_leer_haenel_2d(const double[:, ::1] u, const double[::1] nx, const double[::1] ny):
    cdef Py_ssize_t M = u.shape[1], i, j, c
    cdef bint scalar = nx.shape[0] == 1
    outp = np.empty((4, M))
    outm = np.empty((4, M))
    cdef double[:, ::1] fp = outp
    cdef double[:, ::1] fm = outm
    cdef double rho, v1, v2, p, a, H, Mach, mp, mm, pp, pm, vn, ex, ey
    for i in range(M):
        j = 0 if scalar else i
        ex = nx[j]
        ey = ny[j]
        rho = u[0, i]
        v1 = u[1, i] / rho
        v2 = u[2, i] / rho
        p = (GAMMA - 1.0) * (u[3, i] - 0.5 * rho * (v1 * v1 + v2 * v2))
        a = sqrt(GAMMA * p / rho)
        H = (u[3, i] + p) / rho
        vn = ex * v1 + ey * v2
        Mach = vn / a
        if Mach >= 1.0 or Mach <= -1.0:
            if Mach >= 1.0:
                fp[0, i] = rho * vn
                fp[1, i] = u[1, i] * vn + ex * p
                fp[2, i] = u[2, i] * vn + ey * p
                fp[3, i] = (u[3, i] + p) * vn
                for c in range(4):
                    fm[c, i] = 0.0
            else:
                fm[0, i] = rho * vn
                fm[1, i] = u[1, i] * vn + ex * p
                fm[2, i] = u[2, i] * vn + ey * p
                fm[3, i] = (u[3, i] + p) * vn
                for c in range(4):
                    fp[c, i] = 0.0
            continue
        mp = 0.25 * rho * a * (Mach + 1.0) * (Mach + 1.0)
        mm = -0.25 * rho * a * (Mach - 1.0) * (Mach - 1.0)
        pp = 0.5 * (1.0 + GAMMA * Mach) * p
        pm = 0.5 * (1.0 - GAMMA * Mach) * p
        fp[0, i] = mp
        fp[1, i] = mp * v1 + ex * pp
        fp[2, i] = mp * v2 + ey * pp
        fp[3, i] = mp * H
        fm[0, i] = mm
        fm[1, i] = mm * v1 + ex * pm
        fm[2, i] = mm * v2 + ey * pm
        fm[3, i] = mm * H
    return outp, outm
