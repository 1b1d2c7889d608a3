"""Pure-numpy implementations of the hot kernels.

Same signatures and algorithms as the numba twin; selected by setting
WEYLCURV_NO_NUMBA=1 (or automatically when numba is unavailable).
"""

from __future__ import annotations

import numpy as np


def rk4_velocity_path(gam, f, v0, dt, steps):
    """Fixed-step RK4 for v' = -gam(v,v) + f - (<f,v>/<v,v>) v.

    gam is the (n,n,n) connection coefficient tensor, f the constant forcing
    field.  Returns (path, fail_step) where path has shape (steps+1, n) and
    fail_step is -1 on success or the index of the first bad step.
    """
    n = v0.size
    gflat = np.ascontiguousarray(gam.reshape(n * n, n))
    path = np.empty((steps + 1, n))
    path[0] = v0
    v = v0.astype(float).copy()

    def rhs(u):
        uu = float(u @ u)
        if uu < 1e-300:
            return None
        a = np.outer(u, u).ravel() @ gflat
        return -a + f - (float(f @ u) / uu) * u

    # bad states are detected and reported through fail_step, so numpy's
    # overflow warnings are noise here
    with np.errstate(all="ignore"):
        for s in range(steps):
            k1 = rhs(v)
            k2 = rhs(v + 0.5 * dt * k1) if k1 is not None else None
            k3 = rhs(v + 0.5 * dt * k2) if k2 is not None else None
            k4 = rhs(v + dt * k3) if k3 is not None else None
            if k4 is None:
                return path, s
            v = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(v)):
                return path, s
            path[s + 1] = v
    return path, -1


def _orthonormalize2(V):
    """Gram-Schmidt for an n x 2 frame; returns (ok, W)."""
    w1 = V[:, 0]
    n1 = np.linalg.norm(w1)
    if n1 < 1e-13:
        return False, V
    q1 = w1 / n1
    w2 = V[:, 1] - (q1 @ V[:, 1]) * q1
    n2 = np.linalg.norm(w2)
    if n2 < 1e-10:
        return False, V
    return True, np.column_stack((q1, w2 / n2))


def _plucker(x, y, pi, pj):
    return x[pi] * y[pj] - x[pj] * y[pi]


def ascend_pairs(Q, pi, pj, starts, max_iter, gtol, stop_value):
    """Multi-start projected-gradient ascent of a bivector form over 2-frames.

    Maximizes m(V)^T Q m(V) where m(V) are the Plucker coordinates of the
    orthonormal pair V = (x, y).  Retraction is re-orthonormalization, the
    step is halved until ascent.  Exits early once stop_value is exceeded.
    Returns (best_value, best_frame).
    """
    n = starts.shape[1]
    best_val = -np.inf
    best_V = starts[0].copy()

    for s in range(starts.shape[0]):
        ok, V = _orthonormalize2(starts[s].copy())
        if not ok:
            continue
        m = _plucker(V[:, 0], V[:, 1], pi, pj)
        q = Q @ m
        val = float(m @ q)
        if val > best_val:
            best_val, best_V = val, V.copy()
        for _ in range(max_iter):
            if best_val > stop_value:
                return best_val, best_V
            # euclidean gradient from the antisymmetric lift of Q m
            Amat = np.zeros((n, n))
            Amat[pi, pj] = q
            Amat[pj, pi] = -q
            G = np.column_stack((2.0 * (Amat @ V[:, 1]), -2.0 * (Amat @ V[:, 0])))
            S = V.T @ G
            G = G - V @ (0.5 * (S + S.T))
            gn2 = float(np.sum(G * G))
            if gn2 < gtol * gtol:
                break
            t = 1.0
            improved = False
            for _ in range(40):
                ok_w, W = _orthonormalize2(V + t * G)
                if ok_w:
                    mw = _plucker(W[:, 0], W[:, 1], pi, pj)
                    qw = Q @ mw
                    vw = float(mw @ qw)
                    if np.isfinite(vw) and vw > val + 1e-4 * t * gn2:
                        V, m, q, val = W, mw, qw, vw
                        improved = True
                        break
                t *= 0.5
            if not improved:
                break
            if val > best_val:
                best_val, best_V = val, V.copy()
    return best_val, best_V
