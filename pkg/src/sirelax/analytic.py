"""Kermack-McKendrick approximate solution for the removals.

Expanding ``exp(-mu R)`` to second order turns the removals equation into a
Riccati equation whose solution is a shifted ``tanh``.  The approximation is
only trustworthy while ``mu R`` stays small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .models import InvalidParamsError, SirParams

__all__ = ["AnalyticParams", "analytic_params", "analytic_R"]


@dataclass(frozen=True)
class AnalyticParams:
    eta: float
    psi: float
    source: SirParams


def analytic_params(p: SirParams) -> AnalyticParams:
    nmu = p.n * p.mu
    eta = math.sqrt(2.0 * p.n * p.mu**2 * (p.N - p.n) + (nmu - 1.0) ** 2)
    if eta == 0.0:
        raise InvalidParamsError("a", "degenerate analytic parameters (eta = 0)")
    arg = (nmu - 1.0) / eta
    if abs(arg) >= 1.0:
        raise InvalidParamsError("a", f"atanh argument {arg!r} outside (-1, 1); need N > n")
    return AnalyticParams(eta=eta, psi=math.atanh(arg), source=p)


def analytic_R(t, ap: AnalyticParams):
    p = ap.source
    t = np.asarray(t, dtype=float)
    nmu = p.n * p.mu
    R = (nmu - 1.0 + ap.eta * np.tanh(0.5 * p.gamma * ap.eta * t - ap.psi)) / (p.n * p.mu**2)
    # tanh(-psi) = -(n mu - 1)/eta holds only to rounding; pin the initial value
    return np.where(t == 0.0, 0.0, R)[()]
