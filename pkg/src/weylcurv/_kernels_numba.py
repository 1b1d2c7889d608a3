"""Numba-jitted twins of the hot kernels (see _kernels_numpy for the spec).

Compiled lazily on first call, with on-disk caching so repeated runs skip
the jit cost.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _rhs_into(gam, f, u, out):
    n = u.size
    uu = 0.0
    fu = 0.0
    for i in range(n):
        uu += u[i] * u[i]
        fu += f[i] * u[i]
    if uu < 1e-300:
        return False
    for k in range(n):
        a = 0.0
        for i in range(n):
            for j in range(n):
                a += u[i] * u[j] * gam[i, j, k]
        out[k] = -a + f[k] - (fu / uu) * u[k]
    return True


@njit(cache=True)
def rk4_velocity_path(gam, f, v0, dt, steps):
    n = v0.size
    path = np.empty((steps + 1, n))
    v = v0.astype(np.float64).copy()
    for k in range(n):
        path[0, k] = v[k]
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    tmp = np.empty(n)
    for s in range(steps):
        if not _rhs_into(gam, f, v, k1):
            return path, s
        for k in range(n):
            tmp[k] = v[k] + 0.5 * dt * k1[k]
        if not _rhs_into(gam, f, tmp, k2):
            return path, s
        for k in range(n):
            tmp[k] = v[k] + 0.5 * dt * k2[k]
        if not _rhs_into(gam, f, tmp, k3):
            return path, s
        for k in range(n):
            tmp[k] = v[k] + dt * k3[k]
        if not _rhs_into(gam, f, tmp, k4):
            return path, s
        bad = False
        for k in range(n):
            v[k] = v[k] + (dt / 6.0) * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k])
            if not np.isfinite(v[k]):
                bad = True
        if bad:
            return path, s
        for k in range(n):
            path[s + 1, k] = v[k]
    return path, -1


@njit(cache=True)
def _orthonormalize2_into(V, W):
    n = V.shape[0]
    n1 = 0.0
    for i in range(n):
        n1 += V[i, 0] * V[i, 0]
    n1 = np.sqrt(n1)
    if n1 < 1e-13:
        return False
    dot = 0.0
    for i in range(n):
        W[i, 0] = V[i, 0] / n1
        dot += W[i, 0] * V[i, 1]
    n2 = 0.0
    for i in range(n):
        W[i, 1] = V[i, 1] - dot * W[i, 0]
        n2 += W[i, 1] * W[i, 1]
    n2 = np.sqrt(n2)
    if n2 < 1e-10:
        return False
    for i in range(n):
        W[i, 1] /= n2
    return True


@njit(cache=True)
def _form_value(Q, pi, pj, V, m, q):
    N = pi.size
    for p in range(N):
        m[p] = V[pi[p], 0] * V[pj[p], 1] - V[pj[p], 0] * V[pi[p], 1]
    val = 0.0
    for p in range(N):
        qp = 0.0
        for r in range(N):
            qp += Q[p, r] * m[r]
        q[p] = qp
        val += m[p] * qp
    return val


@njit(cache=True)
def ascend_pairs(Q, pi, pj, starts, max_iter, gtol, stop_value):
    n = starts.shape[1]
    N = pi.size
    best_val = -np.inf
    best_V = np.empty((n, 2))
    V = np.empty((n, 2))
    W = np.empty((n, 2))
    trial = np.empty((n, 2))
    G = np.empty((n, 2))
    m = np.empty(N)
    q = np.empty(N)
    mw = np.empty(N)
    qw = np.empty(N)

    for s in range(starts.shape[0]):
        if not _orthonormalize2_into(starts[s], V):
            continue
        val = _form_value(Q, pi, pj, V, m, q)
        if val > best_val:
            best_val = val
            best_V[:] = V
        for _ in range(max_iter):
            if best_val > stop_value:
                return best_val, best_V
            # gradient: gx = 2 A y, gy = -2 A x with A the antisymmetric
            # matrix carrying q on the (pi, pj) pairs
            for i in range(n):
                G[i, 0] = 0.0
                G[i, 1] = 0.0
            for p in range(N):
                i = pi[p]
                j = pj[p]
                G[i, 0] += 2.0 * q[p] * V[j, 1]
                G[j, 0] -= 2.0 * q[p] * V[i, 1]
                G[i, 1] -= 2.0 * q[p] * V[j, 0]
                G[j, 1] += 2.0 * q[p] * V[i, 0]
            # project onto the tangent space of the orthonormal 2-frames
            s00 = 0.0
            s01 = 0.0
            s10 = 0.0
            s11 = 0.0
            for i in range(n):
                s00 += V[i, 0] * G[i, 0]
                s01 += V[i, 0] * G[i, 1]
                s10 += V[i, 1] * G[i, 0]
                s11 += V[i, 1] * G[i, 1]
            sym01 = 0.5 * (s01 + s10)
            gn2 = 0.0
            for i in range(n):
                g0 = G[i, 0] - (V[i, 0] * s00 + V[i, 1] * sym01)
                g1 = G[i, 1] - (V[i, 0] * sym01 + V[i, 1] * s11)
                G[i, 0] = g0
                G[i, 1] = g1
                gn2 += g0 * g0 + g1 * g1
            if gn2 < gtol * gtol:
                break
            t = 1.0
            improved = False
            for _ in range(40):
                for i in range(n):
                    trial[i, 0] = V[i, 0] + t * G[i, 0]
                    trial[i, 1] = V[i, 1] + t * G[i, 1]
                if _orthonormalize2_into(trial, W):
                    vw = _form_value(Q, pi, pj, W, mw, qw)
                    if np.isfinite(vw) and vw > val + 1e-4 * t * gn2:
                        for i in range(n):
                            V[i, 0] = W[i, 0]
                            V[i, 1] = W[i, 1]
                        for p in range(N):
                            m[p] = mw[p]
                            q[p] = qw[p]
                        val = vw
                        improved = True
                        break
                t *= 0.5
            if not improved:
                break
            if val > best_val:
                best_val = val
                best_V[:] = V
    return best_val, best_V
