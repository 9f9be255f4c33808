from .dynamics import CONVERGED, CYCLE_DETECTED, MAX_ITERS, Trajectory, best_response_dynamics, random_profile
from .equilibrium import (
    DEFAULT_BUDGET,
    DEFAULT_EPSILON,
    BudgetExceeded,
    EquilibriumReport,
    Violation,
    check_equilibrium,
    enumerate_pure_equilibria,
    onpath_projection,
    profile_space_size,
)
from .evaluate import (
    Context,
    ForwardResult,
    StrategyProfile,
    Undetermined,
    backward_eval,
    closed_context,
    forward_eval,
)
from .explore import explore, reachable_cells

__all__ = [
    "CONVERGED",
    "CYCLE_DETECTED",
    "MAX_ITERS",
    "DEFAULT_BUDGET",
    "DEFAULT_EPSILON",
    "BudgetExceeded",
    "Context",
    "EquilibriumReport",
    "ForwardResult",
    "StrategyProfile",
    "Trajectory",
    "Undetermined",
    "Violation",
    "backward_eval",
    "best_response_dynamics",
    "check_equilibrium",
    "closed_context",
    "enumerate_pure_equilibria",
    "explore",
    "forward_eval",
    "onpath_projection",
    "profile_space_size",
    "random_profile",
    "reachable_cells",
]
