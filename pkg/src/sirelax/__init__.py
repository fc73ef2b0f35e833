"""Relaxation solvers for SIR-type epidemic models.

Every model is reduced to a scalar equation for the removals ``R(t)``; the
other compartments follow algebraically.  The nonlinear equation is solved
by a sequence of linear problems whose iterates stay non-negative.
"""

__version__ = "0.1.0"

from .models import (  # noqa: E402
    InvalidParamsError,
    ModelSpec,
    SirdParams,
    SirMortalityParams,
    SirParams,
    Variant,
    amplitude_sir,
    amplitude_sird,
)
from .grid import TimeGrid  # noqa: E402
from .integrators import NumericOverflowError  # noqa: E402
from .relaxation import (  # noqa: E402
    Backend,
    BoundReport,
    IterateSequence,
    RelaxationConfig,
    RelaxationConstantError,
    apriori_bounds,
    relax_solve,
    successive_diffs,
    validate_relaxation_constant,
)
from .analytic import analytic_params, analytic_R  # noqa: E402
from .analysis import (  # noqa: E402
    Method,
    RunReport,
    SolutionBundle,
    audit,
    observed_order,
    peak,
    reconstruct,
    reference_oracle,
    run_method,
    summarize,
)

__all__ = [
    "__version__",
    "InvalidParamsError",
    "ModelSpec",
    "SirParams",
    "SirdParams",
    "SirMortalityParams",
    "Variant",
    "amplitude_sir",
    "amplitude_sird",
    "TimeGrid",
    "NumericOverflowError",
    "Backend",
    "BoundReport",
    "IterateSequence",
    "RelaxationConfig",
    "RelaxationConstantError",
    "apriori_bounds",
    "relax_solve",
    "successive_diffs",
    "validate_relaxation_constant",
    "analytic_params",
    "analytic_R",
    "Method",
    "RunReport",
    "SolutionBundle",
    "audit",
    "observed_order",
    "peak",
    "reconstruct",
    "reference_oracle",
    "run_method",
    "summarize",
]
