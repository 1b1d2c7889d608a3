"""Gaussian-thermostat trajectories in the left-invariant frame.

The frame velocity of a thermostat trajectory obeys

    v' = -nabla_v v + F - (<F, v>/<v, v>) v,        F = gamma * E,

which conserves the kinetic energy |v|^2 exactly in the continuum; the
fixed-step RK4 drift is monitored, never corrected.  For the two model
geometries with explicit charts the group coordinates can be
reconstructed by integrating the chart frame fields along the velocity.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from . import kernels
from .weyl import WeylStructure

__all__ = [
    "HYPERBOLIC",
    "IntegrationError",
    "IntegratorConfig",
    "SOL",
    "ThermostatState",
    "Trajectory",
    "integrate",
    "reconstruct",
    "rhs",
    "write_csv",
]

SOL = "sol"
HYPERBOLIC = "hyperbolic"


class IntegrationError(RuntimeError):
    def __init__(self, step: int, message: str):
        super().__init__(f"{message} at step {step}")
        self.step = step


@dataclass(frozen=True)
class ThermostatState:
    t: float
    v: np.ndarray


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float
    steps: int

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.steps < 1:
            raise ValueError("need at least one step")


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    velocities: np.ndarray

    @property
    def energies(self) -> np.ndarray:
        return np.einsum("si,si->s", self.velocities, self.velocities)

    @property
    def energy_drift(self) -> float:
        e = self.energies
        return float(np.abs(e - e[0]).max() / e[0])

    def states(self):
        return [ThermostatState(float(t), v) for t, v in zip(self.times, self.velocities)]


def rhs(W: WeylStructure, v) -> np.ndarray:
    """Frame acceleration of the thermostat flow."""
    A = W.space
    v = A._check_vec(v)
    vv = float(v @ v)
    if vv == 0.0:
        raise ValueError("velocity must be nonzero")
    F = W.effective_field
    acc = np.einsum("i,j,ijk->k", v, v, A.gamma)
    return -acc + F - (float(F @ v) / vv) * v


def integrate(W: WeylStructure, v0, cfg: IntegratorConfig) -> Trajectory:
    """Fixed-step RK4 integration of the frame velocity."""
    A = W.space
    v0 = A._check_vec(v0).astype(float)
    if float(v0 @ v0) == 0.0:
        raise ValueError("initial velocity must be nonzero")
    gam = np.ascontiguousarray(A.gamma)
    f = np.ascontiguousarray(W.effective_field)
    path, fail = kernels.rk4_velocity_path(gam, f, v0, float(cfg.dt), int(cfg.steps))
    if fail >= 0:
        raise IntegrationError(fail, "velocity integration produced a non-finite "
                                     "or vanishing state")
    times = cfg.dt * np.arange(cfg.steps + 1)
    return Trajectory(times, path)


# -- coordinate charts ---------------------------------------------------


def _sol_chart(A) -> tuple[np.ndarray, float]:
    """Rotation taking frame coordinates to the chart order (x, y, z) and
    the eigenvalue scale of a SOL-type algebra.

    Accepts the diagonalized form (b at index 0, [b,e1] = -lam e1,
    [b,e2] = lam e2) and the skew 3-frame form ([e2,e3] = lam e1,
    [e3,e1] = -lam e2, [e1,e2] = 0, b = e3); anything else is a mismatch.
    The chart carries the moving frame
    (exp(-lam z) d_x, exp(lam z) d_y, d_z).
    """
    c = A.c
    if A.n != 3:
        raise ValueError("SOL chart needs a 3-dimensional algebra")
    tol = 1e-10

    lam = c[0, 2, 2]
    probe = np.zeros((3, 3, 3))
    if lam > tol:
        probe[0, 1, 1] = -lam
        probe[1, 0, 1] = lam
        probe[0, 2, 2] = lam
        probe[2, 0, 2] = -lam
        if np.abs(c - probe).max() <= tol:
            # frame coords (b, u-, u+) -> chart components (x, y, z)
            R = np.array([[0.0, 1.0, 0.0],
                          [0.0, 0.0, 1.0],
                          [1.0, 0.0, 0.0]])
            return R, float(lam)

    lam = c[1, 2, 0]
    probe = np.zeros((3, 3, 3))
    if lam > tol:
        probe[1, 2, 0] = lam
        probe[2, 1, 0] = -lam
        probe[2, 0, 1] = -lam
        probe[0, 2, 1] = lam
        if np.abs(c - probe).max() <= tol:
            s = 1.0 / np.sqrt(2.0)
            # (e1 + e2)/sqrt2 and (e1 - e2)/sqrt2 diagonalize ad_{e3}
            R = np.array([[s, s, 0.0],
                          [s, -s, 0.0],
                          [0.0, 0.0, 1.0]])
            return R, float(lam)
    raise ValueError("algebra does not match the SOL chart")


def _hyperbolic_scale(A) -> float:
    """Check the half-space pattern [b, e_i] = lam e_i and return lam."""
    c = A.c
    n = A.n
    lam = c[0, 1, 1] if n >= 2 else 0.0
    probe = np.zeros_like(c)
    for i in range(1, n):
        probe[0, i, i] = lam
        probe[i, 0, i] = -lam
    if lam <= 1e-10 or np.abs(c - probe).max() > 1e-10:
        raise ValueError("algebra does not match the hyperbolic half-space chart")
    return float(lam)


def _chart_velocity(model, A):
    """Return (x0, xdot(x, v)) for the requested chart."""
    if model == SOL:
        R, lam = _sol_chart(A)

        def xdot(x, v):
            w = R @ v  # (w_x, w_y, w_z)
            return np.array([w[0] * np.exp(-lam * x[2]),
                             w[1] * np.exp(lam * x[2]),
                             w[2]])

        return np.zeros(3), xdot
    if model == HYPERBOLIC:
        lam = _hyperbolic_scale(A)
        n = A.n

        # orthonormal chart frame (lam y d_{x_i}, lam y d_y); lam = 1 is the
        # usual half-space frame (y d_{x_i}, y d_y)
        def xdot(x, v):
            y = x[-1]
            out = np.empty(n)
            out[:-1] = v[1:] * lam * y
            out[-1] = v[0] * lam * y
            return out

        x0 = np.zeros(n)
        x0[-1] = 1.0
        return x0, xdot
    raise ValueError(f"unknown model {model!r}")


def reconstruct(W: WeylStructure, traj: Trajectory, model: str,
                x0=None) -> np.ndarray:
    """Group coordinates along a trajectory in a model chart.

    Integrates the joint system (velocity, position) with RK4 on the
    trajectory's own grid, starting from the trajectory's initial
    velocity; the final velocities are checked against the stored ones.
    For SOL the chart is (x, y, z) with frame
    (exp(-lam z) d_x, exp(lam z) d_y, d_z); for the hyperbolic half-space
    it is (x_1..x_{n-1}, y) with frame (y d_{x_i}, y d_y), y > 0 and the
    vertical direction listed first in the algebra.
    """
    A = W.space
    x0_default, xdot = _chart_velocity(model, A)
    x = np.asarray(x0, dtype=float) if x0 is not None else x0_default
    if x.shape != x0_default.shape:
        raise ValueError("chart start point has the wrong dimension")

    dt = float(traj.times[1] - traj.times[0])
    steps = len(traj.times) - 1
    v = traj.velocities[0].copy()
    coords = np.empty((steps + 1, x.size))
    coords[0] = x

    def deriv(state):
        vv, xx = state
        return rhs(W, vv), xdot(xx, vv)

    for s in range(steps):
        k1v, k1x = deriv((v, x))
        k2v, k2x = deriv((v + 0.5 * dt * k1v, x + 0.5 * dt * k1x))
        k3v, k3x = deriv((v + 0.5 * dt * k2v, x + 0.5 * dt * k2x))
        k4v, k4x = deriv((v + dt * k3v, x + dt * k3x))
        v = v + (dt / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v)
        x = x + (dt / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x)
        if not (np.all(np.isfinite(v)) and np.all(np.isfinite(x))):
            raise IntegrationError(s, "coordinate reconstruction diverged")
        coords[s + 1] = x

    if np.abs(v - traj.velocities[-1]).max() > 1e-6 * max(1.0, float(np.abs(v).max())):
        raise ValueError("trajectory was not produced by this structure "
                         "(final velocities disagree)")
    return coords


def write_csv(path, traj: Trajectory, coords: np.ndarray | None = None) -> None:
    """Export t, velocity components, energy and optional chart coordinates."""
    n = traj.velocities.shape[1]
    header = ["t"] + [f"v{i}" for i in range(n)] + ["energy"]
    if coords is not None:
        header += [f"x{i}" for i in range(coords.shape[1])]
    energies = traj.energies
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for s, t in enumerate(traj.times):
            row = [repr(float(t))] + [repr(float(x)) for x in traj.velocities[s]]
            row.append(repr(float(energies[s])))
            if coords is not None:
                row.extend(repr(float(x)) for x in coords[s])
            w.writerow(row)
