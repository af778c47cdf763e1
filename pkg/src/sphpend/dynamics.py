"""Independent ground truth: integration of the full constrained dynamics on
the sphere's tangent bundle and of the reduced planar dynamics, with
first-return period and azimuth-advance measurement.

Everything here is deliberately decoupled from the quadrature path so the two
can check each other; only the turning-point cubic is shared.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .cubic import Classification, EnergyMomentum, classify, turning_points
from .errors import EventError, NotInRange, StepError

DRIFT_TOL = 1e-10  # allowed post-projection constraint residual per unit time


@dataclass(frozen=True)
class FullState:
    q: tuple[float, float, float]
    p: tuple[float, float, float]

    def as_array(self) -> np.ndarray:
        return np.array(self.q + self.p, dtype=float)


@dataclass(frozen=True)
class ReducedState:
    z: float       # vertical position q3
    pz: float      # vertical momentum p3
    p_sq: float    # |p|^2, nonnegative
    l: float       # angular momentum

    def as_array(self) -> np.ndarray:
        return np.array([self.z, self.pz, self.p_sq], dtype=float)


@dataclass(frozen=True)
class ReturnData:
    t_period: float
    theta_angle: float


def full_vector_field(state: FullState) -> tuple[np.ndarray, np.ndarray]:
    q = np.asarray(state.q, dtype=float)
    p = np.asarray(state.p, dtype=float)
    lam = q[2] - p @ p
    return p, np.array([0.0, 0.0, -1.0]) + lam * q


def reduced_vector_field(state: ReducedState) -> tuple[float, float, float]:
    z, pz, p_sq = state.z, state.pz, state.p_sq
    return pz, -z * p_sq + z * z - 1.0, -2.0 * pz


def energy(y: np.ndarray) -> np.ndarray:
    """H along a full trajectory array of shape (..., 6)."""
    q, p = y[..., :3], y[..., 3:]
    return 0.5 * (p * p).sum(axis=-1) + q[..., 2]


def angular_momentum(y: np.ndarray) -> np.ndarray:
    return y[..., 0] * y[..., 4] - y[..., 1] * y[..., 3]


def constraint_residuals(y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    q, p = y[..., :3], y[..., 3:]
    return (q * q).sum(axis=-1) - 1.0, (q * p).sum(axis=-1)


def integrate_full(state: FullState, duration: float, step: float) -> np.ndarray:
    """RK4 with per-step projection onto <q,q>=1, <q,p>=0.

    Returns the trajectory, shape (nsteps+1, 6).
    """
    if step <= 0.0:
        raise StepError("step must be positive")
    nsteps = int(round(duration / step))
    out = np.empty((nsteps + 1, 6))
    worst = _kernels.rk4_full(state.as_array(), step, nsteps, out)
    if worst > DRIFT_TOL * max(1.0, duration):
        raise StepError(f"constraint drift {worst:.2e} exceeds tolerance")
    return out


def integrate_reduced(state: ReducedState, duration: float, step: float) -> np.ndarray:
    """RK4 with per-step projection onto pz^2 + l^2 = p_sq (1 - z^2)."""
    if step <= 0.0:
        raise StepError("step must be positive")
    nsteps = int(round(duration / step))
    out = np.empty((nsteps + 1, 3))
    worst = _kernels.rk4_reduced(state.as_array(), state.l, step, nsteps, out)
    if worst > DRIFT_TOL * max(1.0, duration):
        raise StepError(f"relation drift {worst:.2e} exceeds tolerance")
    return out


def seed_on_torus(em: EnergyMomentum) -> FullState:
    """A phase-space point with H = h, L = l, placed at the lower turning
    point with azimuth zero."""
    tp = turning_points(em)
    z = tp.x_minus
    r = math.sqrt(1.0 - z * z)
    return FullState(q=(r, 0.0, z), p=(0.0, em.l / r, 0.0))


def _measure_from(y0, l: float, step: float, t_max: float) -> ReturnData:
    t, dphi, status = _kernels.reduced_return(y0, l, step, t_max)
    if status != 0:
        raise EventError(f"no first return within t_max={t_max}")
    return ReturnData(t_period=t, theta_angle=dphi)


def measure_first_return(
    em: EnergyMomentum, step: float = 1e-3, t_max: float = 200.0
) -> ReturnData:
    """Period and azimuth advance of one oscillation, measured from the flow.

    Seeds the reduced system at the lower turning point and measures between
    consecutive upward pz zero-crossings; the azimuth angle accumulates
    dphi/dt = l / (1 - z^2) alongside.
    """
    if classify(em) is not Classification.REGULAR:
        raise NotInRange(f"({em.h}, {em.l}) is not a regular point")
    if em.l == 0.0:
        raise NotInRange("first-return measurement needs l != 0")
    tp = turning_points(em)
    y0 = np.array([tp.x_minus, 0.0, 2.0 * (em.h - tp.x_minus)])
    return _measure_from(y0, em.l, step, t_max)
