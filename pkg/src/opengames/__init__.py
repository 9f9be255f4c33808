"""Compositional game theory engine: typed open games, combinators, equilibria."""

from .combinators import (
    ArmOutputMismatch,
    CombinatorError,
    DuplicateTag,
    GameTemplate,
    Interface,
    InterfaceMismatch,
    MissingBinding,
    branch,
    identity,
    par_compose,
    seq_compose,
    substitute,
)
from .diagnostics import Diagnostic, Span
from .dist import Dist, dist_bind, dist_expectation
from .graph import (
    BOUNDARY,
    EMPTY,
    Branch,
    Decision,
    Function,
    GameGraph,
    Hole,
    Nature,
    Payoff,
    Port,
    Wire,
    validate_graph,
)
from .types import (
    UNIT,
    Enum,
    Product,
    Sum,
    Tagged,
    Unit,
    Variant,
    cardinality,
    enum_range,
    enumerate_values,
    format_value,
    parse_value,
    typecheck,
)

__version__ = "0.1.0"

__all__ = [
    "ArmOutputMismatch",
    "BOUNDARY",
    "Branch",
    "CombinatorError",
    "Decision",
    "Diagnostic",
    "Dist",
    "DuplicateTag",
    "EMPTY",
    "Enum",
    "Function",
    "GameGraph",
    "GameTemplate",
    "Hole",
    "Interface",
    "InterfaceMismatch",
    "MissingBinding",
    "Nature",
    "Payoff",
    "Port",
    "Product",
    "Span",
    "Sum",
    "Tagged",
    "UNIT",
    "Unit",
    "Variant",
    "Wire",
    "branch",
    "cardinality",
    "dist_bind",
    "dist_expectation",
    "enum_range",
    "enumerate_values",
    "format_value",
    "identity",
    "par_compose",
    "parse_value",
    "seq_compose",
    "substitute",
    "typecheck",
    "validate_graph",
]
