"""Relaxed successive linearization of the removals equation.

Starting from ``R_0 = 0`` each iterate solves the *linear* problem

    R_k' + M R_k = C - g(t, R_{k-1}) + M R_{k-1},    R_k(0) = 0,

where ``C`` is ``gamma N`` (``gamma N0`` for the mortality variant).  With
``M`` at or above the model threshold the right-hand side is non-negative
and the iterates stay non-negative and converge to the solution of
``R' = C - g(t, R)``.  ``M = 0`` gives the plain (unrelaxed) linearization.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .grid import TimeGrid
from .integrators import (
    NumericOverflowError,
    RelaxLinearRhs,
    _first_nonfinite,
    euler_relax_trajectory,
    rk4_relax_trajectory,
)
from .models import ModelSpec

__all__ = [
    "Backend",
    "RelaxationConfig",
    "RelaxationConstantError",
    "ConstantCheck",
    "IterateSequence",
    "BoundReport",
    "validate_relaxation_constant",
    "relax_solve",
    "apriori_bounds",
    "successive_diffs",
]


class Backend(str, enum.Enum):
    EULER_RELAX = "euler_relax"
    RK4_RELAX = "rk4_relax"


_TRAJECTORY = {
    Backend.EULER_RELAX: euler_relax_trajectory,
    Backend.RK4_RELAX: rk4_relax_trajectory,
}


class RelaxationConstantError(ValueError):
    def __init__(self, M: float, threshold: float):
        super().__init__(
            f"relaxation constant M={M!r} is below the non-negativity threshold {threshold!r}"
        )
        self.M = M
        self.threshold = threshold


@dataclass(frozen=True)
class RelaxationConfig:
    M: float
    K: int
    backend: Backend = Backend.EULER_RELAX
    allow_violation: bool = False

    def __post_init__(self):
        object.__setattr__(self, "backend", Backend(self.backend))
        if not (isinstance(self.K, (int, np.integer)) and not isinstance(self.K, bool)) or self.K < 0:
            raise ValueError(f"K must be a non-negative integer, got {self.K!r}")
        if not math.isfinite(self.M) or self.M < 0:
            raise ValueError(f"M must be finite and >= 0, got {self.M!r}")


@dataclass(frozen=True)
class ConstantCheck:
    ok: bool
    threshold: float

    def __bool__(self):
        return self.ok


def validate_relaxation_constant(model: ModelSpec, M: float) -> ConstantCheck:
    """Compare ``M`` with the model threshold (gamma, or gamma + sigma for SIRD)."""
    threshold = model.threshold
    return ConstantCheck(ok=M >= threshold, threshold=threshold)


@dataclass(frozen=True)
class IterateSequence:
    """All iterates ``R_0..R_K`` on the mesh, shape ``(K + 1, P + 1)``.

    For the mortality variant the rows hold the transformed removals
    ``exp(sigma t) R``.
    """

    model: ModelSpec
    grid: TimeGrid
    iterates: np.ndarray
    config: RelaxationConfig

    @property
    def K(self) -> int:
        return self.iterates.shape[0] - 1

    @property
    def final(self) -> np.ndarray:
        return self.iterates[-1]

    def __getitem__(self, k):
        return self.iterates[k]


def relax_solve(model: ModelSpec, grid: TimeGrid, cfg: RelaxationConfig) -> IterateSequence:
    check = validate_relaxation_constant(model, cfg.M)
    if not check.ok and not cfg.allow_violation:
        raise RelaxationConstantError(cfg.M, check.threshold)

    solve_one = _TRAJECTORY[cfg.backend]
    iterates = np.zeros((cfg.K + 1, grid.P + 1))
    for k in range(1, cfg.K + 1):
        rhs = RelaxLinearRhs(model, grid, iterates[k - 1], cfg.M)
        R = solve_one(rhs)
        bad = _first_nonfinite(R)
        if bad is not None:
            raise NumericOverflowError(bad, k)
        iterates[k] = R
    iterates.setflags(write=False)
    return IterateSequence(model, grid, iterates, cfg)


def successive_diffs(seq: IterateSequence) -> np.ndarray:
    """``max_p |R_k^p - R_{k-1}^p|`` for ``k = 1..K``."""
    if seq.K < 1:
        raise ValueError("need at least one iteration")
    return np.abs(np.diff(seq.iterates, axis=0)).max(axis=1)


@dataclass(frozen=True)
class BoundReport:
    """A priori bounds for iterations ``k = 1..K``.

    thm_main_bound
        ``L^(2k) T^(k+1) / k! * sup|R|^2`` with ``L = M + gamma n mu - theta``
        (``theta`` the model threshold).  This expression is not
        dimensionless: with time measured in days and ``T > 1`` it can sit
        below the actual squared error.
    squared_error_bound
        ``(L T)^(2k) / (2k - 1)!! * sup|R|^2``, which is what iterating
        ``|E_k(t)|^2 <= L^2 t * int_0^t |E_{k-1}|^2`` produces.
    corollary_rate
        ``sqrt(L / (M - gamma n mu + theta))``, defined only when
        ``gamma n mu < theta`` (``n mu < 1`` for SIR); ``None`` otherwise.
    corollary_bound
        ``rate^k * sup|R|`` (NaN where the rate is undefined).
    iterate_sup_bound
        ``gamma a * sum_{i<=k} (M - theta)^(i-1) T^i / i!``.
    removals_sup_bound
        Same sum with ``gamma N`` in place of ``gamma a``; this one follows
        from ``n exp(-mu r) >= 0`` and holds for every valid ``M``.
    """

    k: np.ndarray
    factor: float
    thm_main_bound: np.ndarray
    squared_error_bound: np.ndarray
    corollary_rate: Optional[float]
    corollary_bound: np.ndarray
    iterate_sup_bound: np.ndarray
    removals_sup_bound: np.ndarray
    R_ref_sup: float


def _log_pow(base, exponent):
    if exponent == 0:
        return 0.0
    if base == 0:
        return -math.inf
    return exponent * math.log(abs(base))


def _exp(x):
    return math.inf if x > 709.0 else math.exp(x)


def apriori_bounds(model: ModelSpec, cfg: RelaxationConfig, grid: TimeGrid, R_ref_sup: float) -> BoundReport:
    if R_ref_sup < 0:
        raise ValueError("R_ref_sup must be >= 0")
    p = model.params
    theta = model.threshold
    gnm = p.gamma * p.n * p.mu
    L = cfg.M + gnm - theta
    T = grid.T
    ks = np.arange(1, cfg.K + 1)
    sup2 = R_ref_sup**2

    thm = np.empty(ks.size)
    sq = np.empty(ks.size)
    for j, k in enumerate(ks):
        log_thm = _log_pow(L, 2 * k) + (k + 1) * math.log(T) - math.lgamma(k + 1)
        # (2k-1)!! = (2k)! / (2^k k!)
        log_dfact = math.lgamma(2 * k + 1) - k * math.log(2.0) - math.lgamma(k + 1)
        log_sq = _log_pow(L * T, 2 * k) - log_dfact
        thm[j] = _exp(log_thm) * sup2
        sq[j] = _exp(log_sq) * sup2

    rate = None
    cor = np.full(ks.size, np.nan)
    if p.n * p.mu < theta / p.gamma and cfg.M >= theta:
        rate = math.sqrt(L / (cfg.M - gnm + theta))
        cor = rate**ks * R_ref_sup

    excess = cfg.M - theta
    terms = np.array([
        math.copysign(1.0, excess) ** (i - 1)
        * _exp(_log_pow(excess, i - 1) + i * math.log(T) - math.lgamma(i + 1))
        for i in ks
    ])
    partial = np.cumsum(terms)
    return BoundReport(
        k=ks,
        factor=L,
        thm_main_bound=thm,
        squared_error_bound=sq,
        corollary_rate=rate,
        corollary_bound=cor,
        iterate_sup_bound=p.gamma * p.a * partial,
        removals_sup_bound=p.gamma * p.N * partial,
        R_ref_sup=float(R_ref_sup),
    )
