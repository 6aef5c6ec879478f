"""Vectorised numpy versions of the pointwise Euler kernels.

All functions take conserved variables of shape ``(nvar, M)`` and return
arrays of the same shape. ``nx`` and ``ny`` are arrays of length ``M`` or
length 1 (broadcast).
"""

from __future__ import annotations

import numpy as np

GAMMA = 1.4


def _prim_1d(u):
    rho = u[0]
    v = u[1] / rho
    p = (GAMMA - 1.0) * (u[2] - 0.5 * rho * v * v)
    return rho, v, p


def _prim_2d(u):
    rho = u[0]
    v1 = u[1] / rho
    v2 = u[2] / rho
    p = (GAMMA - 1.0) * (u[3] - 0.5 * rho * (v1 * v1 + v2 * v2))
    return rho, v1, v2, p


def euler_flux_1d(u):
    rho, v, p = _prim_1d(u)
    return np.stack([u[1], u[1] * v + p, (u[2] + p) * v])


def euler_flux_2d(u, nx, ny):
    rho, v1, v2, p = _prim_2d(u)
    vn = nx * v1 + ny * v2
    return np.stack([rho * vn, u[1] * vn + nx * p, u[2] * vn + ny * p, (u[3] + p) * vn])


def _sw_parts(vn, a):
    l1, l2, l3 = vn, vn + a, vn - a
    l1p, l2p, l3p = np.maximum(l1, 0.0), np.maximum(l2, 0.0), np.maximum(l3, 0.0)
    l1m, l2m, l3m = l1 - l1p, l2 - l2p, l3 - l3p
    return (l1p, l2p, l3p), (l1m, l2m, l3m)


def steger_warming_1d(u):
    rho, v, p = _prim_1d(u)
    a = np.sqrt(GAMMA * p / rho)
    k = 0.5 * rho / GAMMA
    out = []
    for l1, l2, l3 in _sw_parts(v, a):
        alpha = 2.0 * (GAMMA - 1.0) * l1 + l2 + l3
        out.append(np.stack([
            k * alpha,
            k * (alpha * v + a * (l2 - l3)),
            k * (0.5 * alpha * v * v + a * v * (l2 - l3) + a * a * (l2 + l3) / (GAMMA - 1.0)),
        ]))
    return out[0], out[1]


def steger_warming_2d(u, nx, ny):
    rho, v1, v2, p = _prim_2d(u)
    norm = np.sqrt(nx * nx + ny * ny)
    ex, ey = nx / norm, ny / norm
    vn = ex * v1 + ey * v2
    a = np.sqrt(GAMMA * p / rho)
    k = 0.5 * rho / GAMMA * norm
    out = []
    for l1, l2, l3 in _sw_parts(vn, a):
        alpha = 2.0 * (GAMMA - 1.0) * l1 + l2 + l3
        jump = a * (l2 - l3)
        out.append(np.stack([
            k * alpha,
            k * (alpha * v1 + ex * jump),
            k * (alpha * v2 + ey * jump),
            k * (0.5 * alpha * (v1 * v1 + v2 * v2) + vn * jump
                 + a * a * (l2 + l3) / (GAMMA - 1.0)),
        ]))
    return out[0], out[1]


def van_leer_haenel_1d(u):
    rho, v, p = _prim_1d(u)
    a = np.sqrt(GAMMA * p / rho)
    H = (u[2] + p) / rho
    M = v / a
    mp = 0.25 * rho * a * (M + 1.0) ** 2
    mm = -0.25 * rho * a * (M - 1.0) ** 2
    pp = 0.5 * (1.0 + GAMMA * M) * p
    pm = 0.5 * (1.0 - GAMMA * M) * p
    fp = np.stack([mp, mp * v + pp, mp * H])
    fm = np.stack([mm, mm * v + pm, mm * H])
    return _supersonic_1d(u, M, fp, fm)


def _supersonic_1d(u, M, fp, fm):
    sup_r, sup_l = M >= 1.0, M <= -1.0
    if np.any(sup_r) or np.any(sup_l):
        f = euler_flux_1d(u)
        fp = np.where(sup_r, f, np.where(sup_l, 0.0, fp))
        fm = np.where(sup_l, f, np.where(sup_r, 0.0, fm))
    return fp, fm


def van_leer_haenel_2d(u, nx, ny):
    """Splitting in direction ``(nx, ny)`` without normalising the vector.

    The resulting fluxes are quadratic polynomials in the components of the
    direction vector.
    """
    rho, v1, v2, p = _prim_2d(u)
    vn = nx * v1 + ny * v2
    a = np.sqrt(GAMMA * p / rho)
    H = (u[3] + p) / rho
    M = vn / a
    mp = 0.25 * rho * a * (M + 1.0) ** 2
    mm = -0.25 * rho * a * (M - 1.0) ** 2
    pp = 0.5 * (1.0 + GAMMA * M) * p
    pm = 0.5 * (1.0 - GAMMA * M) * p
    fp = np.stack([mp, mp * v1 + nx * pp, mp * v2 + ny * pp, mp * H])
    fm = np.stack([mm, mm * v1 + nx * pm, mm * v2 + ny * pm, mm * H])
    sup_r, sup_l = M >= 1.0, M <= -1.0
    if np.any(sup_r) or np.any(sup_l):
        f = euler_flux_2d(u, nx, ny)
        fp = np.where(sup_r, f, np.where(sup_l, 0.0, fp))
        fm = np.where(sup_l, f, np.where(sup_r, 0.0, fm))
    return fp, fm
