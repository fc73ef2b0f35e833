"""Fixed-step schemes for the removals equation.

Two families live here:

* steps for the *linear* relaxation problem ``R_k' = -M R_k + f_k(t)``,
  where the forcing ``f_k`` is built from the previous iterate
  (semi-implicit Euler and RK4 with a linearly interpolated midpoint
  forcing), and
* the direct baselines, explicit Euler and classical RK4 applied to the
  nonlinear equation ``R' = gamma N - g(R)`` of the plain SIR model.

The single-step functions are the literal schemes.  The trajectory solvers
for the linear problem exploit that one step is an affine map
``R^p = alpha R^{p-1} + beta_p`` and run the recurrence through
:func:`scipy.signal.lfilter`; the coefficients are obtained by probing the
literal step functions, so both paths describe the same scheme.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.signal import lfilter

from .grid import TimeGrid
from .models import ModelSpec, Variant

__all__ = [
    "NumericOverflowError",
    "RelaxLinearRhs",
    "DirectNonlinearRhs",
    "euler_relax_step",
    "rk4_step",
    "rk4_relax_stages",
    "euler_relax_trajectory",
    "rk4_relax_trajectory",
    "direct_euler_solve",
    "direct_rk4_solve",
]


class NumericOverflowError(ArithmeticError):
    """A non-finite value appeared at iteration ``k``, mesh index ``p``."""

    def __init__(self, p: int, k: int | None = None):
        self.k = k
        self.p = p
        where = f"k={k}, p={p}" if k is not None else f"p={p}"
        super().__init__(f"non-finite value encountered at {where}")


class RelaxLinearRhs:
    """``F(t, R) = -M R + gamma N - g(prev(t)) + M prev(t)`` on a grid.

    ``prev`` is the previous iterate on the mesh.  It is used exactly at mesh
    points and averaged between neighbours at half steps; the forcing at
    both locations is computed once here and reused by every stage.
    """

    def __init__(self, model: ModelSpec, grid: TimeGrid, prev: np.ndarray, M: float):
        prev = np.asarray(prev, dtype=float)
        if prev.shape != (grid.P + 1,):
            raise ValueError(f"previous iterate has shape {prev.shape}, expected {(grid.P + 1,)}")
        self.model = model
        self.grid = grid
        self.M = float(M)
        const = model.source_rate
        mid = 0.5 * (prev[:-1] + prev[1:])
        with np.errstate(over="ignore", invalid="ignore"):
            self.forcing = const - model.g(grid.points, prev) + self.M * prev
            self.forcing_mid = const - model.g(grid.midpoints, mid) + self.M * mid

    def forcing_at(self, t: float) -> float:
        half = 2.0 * t / self.grid.dt
        j = int(round(half))
        if abs(half - j) > 1e-6 or not 0 <= j <= 2 * self.grid.P:
            raise ValueError(f"t={t} is not a mesh point or half step")
        if j % 2 == 0:
            return float(self.forcing[j // 2])
        return float(self.forcing_mid[j // 2])

    def __call__(self, t: float, r: float) -> float:
        return -self.M * r + self.forcing_at(t)


class DirectNonlinearRhs:
    """``F(t, R) = gamma (N - n exp(-mu R) - R)`` for the plain SIR model."""

    def __init__(self, model: ModelSpec):
        if model.variant is not Variant.SIR:
            raise ValueError("direct baselines are defined for the SIR variant only")
        self.model = model
        p = model.params
        self._gamma, self._N, self._n, self._mu = p.gamma, p.N, p.n, p.mu

    def __call__(self, t: float, r: float) -> float:
        return self._gamma * (self._N - self._n * math.exp(-self._mu * r) - r)


def euler_relax_step(r_prev: float, forcing: float, dt: float, M: float) -> float:
    """Semi-implicit Euler: ``(1 + dt M) R^p = R^{p-1} + dt f^p``.

    The forcing is taken at the *new* index ``p``.
    """
    return (r_prev + dt * forcing) / (1.0 + dt * M)


def rk4_step(rhs, t_prev: float, r_prev: float, dt: float) -> float:
    k1 = dt * rhs(t_prev, r_prev)
    k2 = dt * rhs(t_prev + 0.5 * dt, r_prev + 0.5 * k1)
    k3 = dt * rhs(t_prev + 0.5 * dt, r_prev + 0.5 * k2)
    k4 = dt * rhs(t_prev + dt, r_prev + k3)
    return r_prev + (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def rk4_relax_stages(r_prev, f_prev, f_mid, f_next, dt, M):
    """One RK4 step of ``R' = -M R + f`` given the forcing at the step start,
    its midpoint (shared by the second and third stages) and the step end."""
    k1 = dt * (-M * r_prev + f_prev)
    k2 = dt * (-M * (r_prev + 0.5 * k1) + f_mid)
    k3 = dt * (-M * (r_prev + 0.5 * k2) + f_mid)
    k4 = dt * (-M * (r_prev + k3) + f_next)
    return r_prev + (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def _affine_recurrence(alpha: float, beta: np.ndarray) -> np.ndarray:
    out = np.zeros(beta.size + 1)
    out[1:] = lfilter([1.0], [1.0, -alpha], beta)
    return out


def _first_nonfinite(x: np.ndarray):
    bad = np.flatnonzero(~np.isfinite(x))
    return int(bad[0]) if bad.size else None


def euler_relax_trajectory(rhs: RelaxLinearRhs) -> np.ndarray:
    """Solve one relaxation iterate with :func:`euler_relax_step`, ``R^0 = 0``."""
    dt, M = rhs.grid.dt, rhs.M
    alpha = euler_relax_step(1.0, 0.0, dt, M)
    unit = euler_relax_step(0.0, 1.0, dt, M)
    with np.errstate(over="ignore", invalid="ignore"):
        R = _affine_recurrence(alpha, unit * rhs.forcing[1:])
    return R


def rk4_relax_trajectory(rhs: RelaxLinearRhs) -> np.ndarray:
    """Solve one relaxation iterate with :func:`rk4_relax_stages`, ``R^0 = 0``."""
    dt, M = rhs.grid.dt, rhs.M
    alpha = rk4_relax_stages(1.0, 0.0, 0.0, 0.0, dt, M)
    c_prev = rk4_relax_stages(0.0, 1.0, 0.0, 0.0, dt, M)
    c_mid = rk4_relax_stages(0.0, 0.0, 1.0, 0.0, dt, M)
    c_next = rk4_relax_stages(0.0, 0.0, 0.0, 1.0, dt, M)
    with np.errstate(over="ignore", invalid="ignore"):
        beta = c_prev * rhs.forcing[:-1] + c_mid * rhs.forcing_mid + c_next * rhs.forcing[1:]
        R = _affine_recurrence(alpha, beta)
    return R


def _direct_solve(model: ModelSpec, grid: TimeGrid, step) -> np.ndarray:
    rhs = DirectNonlinearRhs(model)
    dt = grid.dt
    times = grid.points.tolist()
    R = np.zeros(grid.P + 1)
    r = 0.0
    for p in range(1, grid.P + 1):
        try:
            r = step(rhs, times[p - 1], r, dt)
        except OverflowError:
            raise NumericOverflowError(p) from None
        if not math.isfinite(r):
            raise NumericOverflowError(p)
        R[p] = r
    return R


def _euler_step(rhs, t, r, dt):
    return r + dt * rhs(t, r)


def direct_euler_solve(model: ModelSpec, grid: TimeGrid) -> np.ndarray:
    """Explicit Euler on ``R' = gamma N - g(R)``, ``R^0 = 0``."""
    return _direct_solve(model, grid, _euler_step)


def direct_rk4_solve(model: ModelSpec, grid: TimeGrid) -> np.ndarray:
    """Classical RK4 on ``R' = gamma N - g(R)``, ``R^0 = 0``."""
    return _direct_solve(model, grid, rk4_step)
