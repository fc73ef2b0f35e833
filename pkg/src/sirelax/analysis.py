"""Turning removals trajectories into epidemic curves and judging them.

Conventions used for reporting:

* the peak day is the whole day during which the maximum of I falls,
  i.e. ``floor(t_argmax)``; ties in I go to the earlier mesh point;
* integer amplitudes are truncated toward zero (:func:`report_int`), the
  raw value stays available on every report.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .analytic import analytic_params, analytic_R
from .grid import TimeGrid
from .integrators import direct_euler_solve, direct_rk4_solve
from .models import (
    ModelSpec,
    Variant,
    deceased_from_removals,
    infectives_from_conservation,
    susceptibles_from_removals,
)
from .relaxation import (
    Backend,
    BoundReport,
    IterateSequence,
    RelaxationConfig,
    relax_solve,
    successive_diffs,
)

__all__ = [
    "Method",
    "SolutionBundle",
    "RunReport",
    "MethodRun",
    "ReferenceSolution",
    "OrderEstimate",
    "reconstruct",
    "peak",
    "peak_day_of",
    "report_int",
    "audit",
    "summarize",
    "run_method",
    "reference_oracle",
    "observed_order",
]

# tolerance for t_p landing a hair below an integer day
_DAY_EPS = 1e-9


class Method(str, enum.Enum):
    EULER_RELAX = "euler_relax"
    RK4_RELAX = "rk4_relax"
    EULER_DIRECT = "euler_direct"
    RK4_DIRECT = "rk4_direct"
    ANALYTIC = "analytic"
    LINEARIZATION = "linearization"

    @property
    def is_relaxation(self) -> bool:
        return self in (Method.EULER_RELAX, Method.RK4_RELAX, Method.LINEARIZATION)


@dataclass(frozen=True)
class SolutionBundle:
    grid: TimeGrid
    S: np.ndarray
    I: np.ndarray
    R: np.ndarray
    method: str
    model: ModelSpec
    D: Optional[np.ndarray] = None
    N_of_t: Optional[np.ndarray] = None

    @property
    def t(self) -> np.ndarray:
        return self.grid.points

    def columns(self) -> dict:
        cols = {"t": self.t, "S": self.S, "I": self.I, "R": self.R}
        if self.D is not None:
            cols["D"] = self.D
        if self.N_of_t is not None:
            cols["N"] = self.N_of_t
        return cols


@dataclass(frozen=True)
class RunReport:
    amplitude: float
    peak_day: int
    conservation_residual: float
    min_value: float
    successive_diffs: Optional[np.ndarray] = None
    bounds: Optional[BoundReport] = None

    @property
    def amplitude_int(self) -> int:
        return report_int(self.amplitude)


@dataclass(frozen=True)
class MethodRun:
    bundle: SolutionBundle
    sequence: Optional[IterateSequence] = None


def report_int(x: float) -> int:
    return math.trunc(x)


def peak_day_of(t: float) -> int:
    return math.floor(t + _DAY_EPS)


def reconstruct(
    source: Union[IterateSequence, np.ndarray],
    model: Optional[ModelSpec] = None,
    grid: Optional[TimeGrid] = None,
    method: str = "",
) -> SolutionBundle:
    """Rebuild S, I (and D or N(t)) from a removals trajectory.

    ``source`` is either an :class:`IterateSequence` (its last iterate is
    used) or a bare array on ``grid``.  For the mortality variant the array
    holds the transformed removals ``exp(sigma t) R``.
    """
    if isinstance(source, IterateSequence):
        model = model or source.model
        grid = grid or source.grid
        method = method or source.config.backend.value
        solver_R = np.asarray(source.final, dtype=float)
    else:
        if model is None or grid is None:
            raise ValueError("model and grid are required for a bare trajectory")
        solver_R = np.asarray(source, dtype=float)
    if solver_R.shape != (grid.P + 1,):
        raise ValueError(f"trajectory has shape {solver_R.shape}, expected {(grid.P + 1,)}")

    t = grid.points
    D = N_of_t = None
    if model.variant is Variant.SIR_MORTALITY:
        R = np.exp(-model.params.sigma * t) * solver_R
        N_of_t = model.params.total(t)
    else:
        R = solver_R.copy()
    S = susceptibles_from_removals(R, model, t)
    if model.variant is Variant.SIRD:
        D = deceased_from_removals(R, model.params)
    I = infectives_from_conservation(S, R, model, t, D)
    return SolutionBundle(grid=grid, S=S, I=I, R=R, method=method, model=model, D=D, N_of_t=N_of_t)


def peak(bundle: SolutionBundle):
    """``(amplitude, peak_day)``: the largest I and the day it falls on."""
    i = int(np.argmax(bundle.I))
    return float(bundle.I[i]), peak_day_of(float(bundle.t[i]))


def audit(bundle: SolutionBundle):
    """``(conservation_residual, min_value)`` over all compartments and points."""
    total = bundle.S + bundle.I + bundle.R
    if bundle.D is not None:
        total = total + bundle.D
    target = bundle.N_of_t if bundle.N_of_t is not None else bundle.model.params.N
    residual = float(np.max(np.abs(total - target)))
    parts = [bundle.S, bundle.I, bundle.R] + ([bundle.D] if bundle.D is not None else [])
    return residual, float(min(np.min(x) for x in parts))


def summarize(bundle: SolutionBundle, sequence: Optional[IterateSequence] = None, bounds=None) -> RunReport:
    amplitude, day = peak(bundle)
    residual, low = audit(bundle)
    diffs = successive_diffs(sequence) if sequence is not None and sequence.K >= 1 else None
    return RunReport(amplitude, day, residual, low, diffs, bounds)


def run_method(
    model: ModelSpec,
    method: Union[Method, str],
    P: int,
    K: Optional[int] = None,
    M: Optional[float] = None,
    allow_violation: bool = False,
) -> MethodRun:
    """Run one of the six solution methods on ``P`` steps over ``[0, T]``."""
    method = Method(method)
    grid = TimeGrid(P, model.params.T)
    if method.is_relaxation:
        if K is None:
            raise ValueError(f"{method.value} needs K")
        if method is Method.LINEARIZATION:
            if M not in (None, 0, 0.0):
                raise ValueError("linearization fixes M = 0")
            cfg = RelaxationConfig(M=0.0, K=K, backend=Backend.EULER_RELAX, allow_violation=True)
        else:
            if M is None:
                raise ValueError(f"{method.value} needs M")
            cfg = RelaxationConfig(M=M, K=K, backend=Backend(method.value), allow_violation=allow_violation)
        seq = relax_solve(model, grid, cfg)
        return MethodRun(reconstruct(seq, method=method.value), seq)

    if model.variant is not Variant.SIR:
        raise ValueError(f"{method.value} is defined for the sir model only")
    if method is Method.EULER_DIRECT:
        R = direct_euler_solve(model, grid)
    elif method is Method.RK4_DIRECT:
        R = direct_rk4_solve(model, grid)
    else:
        R = analytic_R(grid.points, analytic_params(model.params))
    return MethodRun(reconstruct(R, model, grid, method.value))


@dataclass(frozen=True)
class ReferenceSolution:
    """High-resolution trajectory in the solver variable (``exp(sigma t) R``
    for the mortality variant)."""

    model: ModelSpec
    grid: TimeGrid
    R: np.ndarray
    method: str

    def on_grid(self, grid: TimeGrid) -> np.ndarray:
        if not math.isclose(grid.T, self.grid.T, rel_tol=1e-12):
            raise ValueError(f"horizon mismatch: {grid.T} vs {self.grid.T}")
        if self.grid.P % grid.P:
            raise ValueError(f"reference P={self.grid.P} is not a multiple of P={grid.P}")
        return self.R[:: self.grid.P // grid.P]

    def bundle(self) -> SolutionBundle:
        return reconstruct(self.R, self.model, self.grid, self.method)


def reference_oracle(model: ModelSpec, P_ref: int = 200_000, K: int = 200) -> ReferenceSolution:
    """Ground truth for judging coarser runs.

    Direct RK4 for SIR; RK4-relaxation with ``K`` iterations and ``M`` at the
    threshold for the variants that have no direct baseline.
    """
    grid = TimeGrid(P_ref, model.params.T)
    if model.variant is Variant.SIR:
        return ReferenceSolution(model, grid, direct_rk4_solve(model, grid), Method.RK4_DIRECT.value)
    cfg = RelaxationConfig(M=model.threshold, K=K, backend=Backend.RK4_RELAX)
    return ReferenceSolution(model, grid, relax_solve(model, grid, cfg).final, Method.RK4_RELAX.value)


@dataclass(frozen=True)
class OrderEstimate:
    order: Optional[float]
    dts: np.ndarray
    errors: np.ndarray
    saturated: bool


ERROR_FLOOR = 1e-12


def observed_order(
    model: ModelSpec,
    method: Union[Method, str],
    P_list: Sequence[int],
    reference: Optional[ReferenceSolution] = None,
    K: int = 50,
    M: Optional[float] = None,
) -> OrderEstimate:
    """Least-squares slope of ``log(error)`` against ``log(dt)``.

    The error is the max over mesh points of the distance to ``reference``
    (built with :func:`reference_oracle` if not given).  When any error is
    below ``ERROR_FLOOR`` the estimate is reported as saturated.
    """
    method = Method(method)
    if len(P_list) < 2:
        raise ValueError("need at least two step counts")
    if reference is None:
        reference = reference_oracle(model)
    if M is None and method in (Method.EULER_RELAX, Method.RK4_RELAX):
        M = model.threshold
    dts, errors = [], []
    for P in P_list:
        run = run_method(model, method, P, K=K if method.is_relaxation else None, M=M)
        grid = run.bundle.grid
        exact = reference.on_grid(grid)
        if run.sequence is not None:
            approx = run.sequence.final
        else:
            approx = _solver_variable(run.bundle)
        dts.append(grid.dt)
        errors.append(float(np.max(np.abs(approx - exact))))
    dts, errors = np.array(dts), np.array(errors)
    if np.any(errors < ERROR_FLOOR):
        return OrderEstimate(None, dts, errors, True)
    slope = np.polyfit(np.log(dts), np.log(errors), 1)[0]
    return OrderEstimate(float(slope), dts, errors, False)


def _solver_variable(bundle: SolutionBundle) -> np.ndarray:
    if bundle.model.variant is Variant.SIR_MORTALITY:
        return np.exp(bundle.model.params.sigma * bundle.t) * bundle.R
    return bundle.R
