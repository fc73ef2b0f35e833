"""Parameter records for the SIR family and the algebra tying S, I, D to R.

Every model in this package is reduced to a scalar ODE for the removals
``R(t)`` of the form ``R' = const - g(t, R)``.  The functions below give
the right-hand sides ``g`` and the maps that rebuild the other compartments
once ``R`` is known.

Populations are real numbers throughout; integer rounding is a reporting
concern (see :func:`sirelax.analysis.report_int`).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

__all__ = [
    "InvalidParamsError",
    "Variant",
    "SirParams",
    "SirdParams",
    "SirMortalityParams",
    "ModelSpec",
    "g_sir",
    "g_sird",
    "g_mortality",
    "susceptibles_from_removals",
    "infectives_from_conservation",
    "deceased_from_removals",
    "amplitude_sir",
    "amplitude_sird",
]


class InvalidParamsError(ValueError):
    """Raised when a parameter record violates its invariants."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


class Variant(str, enum.Enum):
    SIR = "sir"
    SIRD = "sird"
    SIR_MORTALITY = "sir_mortality"


def _check_positive(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise InvalidParamsError(name, f"must be a finite number > 0, got {value!r}")


@dataclass(frozen=True)
class SirParams:
    """Classic SIR inputs.

    ``N`` may be passed explicitly; it is then checked against ``n + a``
    instead of being derived silently.
    """

    beta: float
    gamma: float
    n: float
    a: float
    T: float
    N: Optional[float] = None

    def __post_init__(self):
        for name in ("beta", "gamma", "T"):
            _check_positive(name, getattr(self, name))
        if not (math.isfinite(self.n) and self.n > 1):
            raise InvalidParamsError("n", f"initial susceptibles must exceed 1, got {self.n!r}")
        if not (math.isfinite(self.a) and self.a >= 1):
            raise InvalidParamsError("a", f"initial infectives must be >= 1, got {self.a!r}")
        total = self.n + self.a
        if self.N is None:
            object.__setattr__(self, "N", total)
        elif not math.isclose(self.N, total, rel_tol=1e-12, abs_tol=0.0):
            raise InvalidParamsError("N", f"must equal n + a = {total!r}, got {self.N!r}")

    @property
    def mu(self) -> float:
        """Reciprocal relative removal rate beta/gamma."""
        return self.beta / self.gamma


@dataclass(frozen=True)
class SirdParams(SirParams):
    sigma: float = field(default=float("nan"), kw_only=True)

    def __post_init__(self):
        super().__post_init__()
        _check_positive("sigma", self.sigma)


@dataclass(frozen=True)
class SirMortalityParams(SirParams):
    """SIR with background death rate ``sigma`` acting on every compartment.

    ``N`` here is the initial total ``N0``; the living population decays as
    ``N(t) = exp(-sigma t) N0``.
    """

    sigma: float = field(default=float("nan"), kw_only=True)

    def __post_init__(self):
        super().__post_init__()
        _check_positive("sigma", self.sigma)

    @property
    def N0(self) -> float:
        return self.N

    def total(self, t):
        return np.exp(-self.sigma * np.asarray(t, dtype=float)) * self.N0


AnyParams = Union[SirParams, SirdParams, SirMortalityParams]

_PARAM_TYPES = {
    Variant.SIR: SirParams,
    Variant.SIRD: SirdParams,
    Variant.SIR_MORTALITY: SirMortalityParams,
}


@dataclass(frozen=True)
class ModelSpec:
    """One model variant together with its parameters."""

    variant: Variant
    params: AnyParams

    def __post_init__(self):
        variant = Variant(self.variant)
        object.__setattr__(self, "variant", variant)
        if type(self.params) is not _PARAM_TYPES[variant]:
            raise InvalidParamsError(
                "model",
                f"{variant.value} needs {_PARAM_TYPES[variant].__name__}, "
                f"got {type(self.params).__name__}",
            )

    @classmethod
    def sir(cls, **kw) -> "ModelSpec":
        return cls(Variant.SIR, SirParams(**kw))

    @classmethod
    def sird(cls, **kw) -> "ModelSpec":
        return cls(Variant.SIRD, SirdParams(**kw))

    @classmethod
    def sir_mortality(cls, **kw) -> "ModelSpec":
        return cls(Variant.SIR_MORTALITY, SirMortalityParams(**kw))

    @property
    def threshold(self) -> float:
        """Smallest relaxation constant that keeps the iterates non-negative."""
        p = self.params
        if self.variant is Variant.SIRD:
            return p.gamma + p.sigma
        return p.gamma

    @property
    def source_rate(self) -> float:
        """Constant term of the removals equation: gamma*N, or gamma*N0."""
        return self.params.gamma * self.params.N

    def g(self, t, r):
        """Right-hand side g evaluated at time(s) ``t`` and removals ``r``.

        For the mortality variant ``r`` is the transformed removals
        ``exp(sigma t) R``.
        """
        if self.variant is Variant.SIR:
            return g_sir(r, self.params)
        if self.variant is Variant.SIRD:
            return g_sird(r, self.params)
        return g_mortality(t, r, self.params)


def g_sir(r, p: SirParams):
    return p.gamma * p.n * np.exp(-p.mu * r) + p.gamma * r


def g_sird(r, p: SirdParams):
    return p.gamma * p.n * np.exp(-p.mu * r) + (p.gamma + p.sigma) * r


def g_mortality(t, r, p: SirMortalityParams):
    decay = np.exp(-p.sigma * np.asarray(t, dtype=float))
    return p.gamma * p.n * np.exp(p.mu * (decay - 1.0)) * np.exp(-p.mu * decay * r) + p.gamma * r


def susceptibles_from_removals(R, model: ModelSpec, t=0.0):
    """S from the removals.

    For the mortality variant ``R`` is the untransformed removals and the
    result already includes the ``exp(-sigma t)`` population decay.
    """
    p = model.params
    if model.variant is Variant.SIR_MORTALITY:
        decay = np.exp(-p.sigma * np.asarray(t, dtype=float))
        return decay * p.n * np.exp(p.mu * (decay - 1.0)) * np.exp(-p.mu * R)
    return p.n * np.exp(-p.mu * R)


def infectives_from_conservation(S, R, model: ModelSpec, t=0.0, D=None):
    p = model.params
    if model.variant is Variant.SIRD:
        if D is None:
            D = deceased_from_removals(R, p)
        return p.N - S - R - D
    if model.variant is Variant.SIR_MORTALITY:
        return p.total(t) - S - R
    return p.N - S - R


def deceased_from_removals(R, p: SirdParams):
    return (p.sigma / p.gamma) * R


def _amplitude_at_turning_point(L, n, a):
    # I as a function of S is L*ln(S) - S + const, maximal at S = L.
    return L * math.log(L) - L + a + n - L * math.log(n)


def amplitude_sir(p: SirParams) -> float:
    """Peak number of infectives, reached when S = 1/mu.

    Only meaningful when n*mu > 1; returned unconditionally.
    """
    return _amplitude_at_turning_point(p.gamma / p.beta, p.n, p.a)


def amplitude_sird(p: SirdParams) -> float:
    return _amplitude_at_turning_point((p.gamma + p.sigma) / p.beta, p.n, p.a)
