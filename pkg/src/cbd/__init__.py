"""Contextuality-by-Default analysis of systems of dichotomous random variables.

Exact rational LPs over the polytope of couplings decide contextuality and
compute the measure ``delta0 - delta_max``; closed-form rank-3 cyclic
criterion; extraction and realization of hidden-variable models.
"""

from .coupling import (
    DEFAULT_MAX_SLOTS,
    AnalysisResult,
    CapacityError,
    Coupling,
    analyze,
    build_coupling_lp,
    connection_equality_probs,
    delta0,
    enumerate_assignments,
    identically_connected_coupling,
    independent_coupling,
    max_delta,
    max_pair_equal_prob,
    verify_coupling,
)
from .cyclic import Cyclic3View, cyclic3_contextual, is_cyclic3, suppes_zanotti_value
from .hidden import ContextHvModel, HiddenVariableModel, context_specific_hv, extract, realize
from .lp import LinearProgram, LpResult, Status, check_solution, solve
from .system import (
    ConnectionPair,
    ContextDistribution,
    InvalidSystemError,
    System,
    connected_components,
    context_graph,
    correlation,
    is_consistently_connected,
    marginal,
    validate,
)

__version__ = "0.1.0"
