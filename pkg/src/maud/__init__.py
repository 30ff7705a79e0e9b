"""maud: expected multiattribute utility evaluation of design alternatives.

The package separates objective feasibility knowledge (production rules
over a declarative knowledge base) from subjective preference (an
individually assessed multiplicative multiattribute utility function), and
ranks feasible alternatives by expected utility under beta-distributed
performance estimates.
"""

from .assessment import (
    Session,
    finalize_profile,
    fit_single_attribute,
    next_question,
    run_answer_script,
    start_session,
    submit_answer,
)
from .errors import MaudError
from .evaluation import (
    ComparisonReport,
    EvaluationResult,
    compare_modes,
    estimate_attributes,
    evaluate_design,
    rank_alternatives,
)
from .rules import (
    Alternative,
    FactSet,
    KnowledgeBase,
    Rule,
    enumerate_configurations,
    load_knowledge_base,
    run_applicability,
    run_restrictions,
)
from .utility import (
    AggregationMode,
    AttributeSpec,
    Direction,
    SingleAttributeUtility,
    UserProfile,
    aggregate,
    aggregate_expected,
    build_profile,
    evaluate_utility,
    make_exponential_utility,
    solve_master_constant,
)
from .uncertainty import (
    AttributeEstimate,
    BetaSpec,
    beta_density,
    beta_mean,
    beta_mode,
    expected_single_attribute_utility,
    expected_utility_quadrature,
    expected_utility_series,
    fit_beta,
)

__version__ = "0.1.0"

__all__ = [
    "AggregationMode",
    "Alternative",
    "AttributeEstimate",
    "AttributeSpec",
    "BetaSpec",
    "ComparisonReport",
    "Direction",
    "EvaluationResult",
    "FactSet",
    "KnowledgeBase",
    "MaudError",
    "Rule",
    "Session",
    "SingleAttributeUtility",
    "UserProfile",
    "aggregate",
    "aggregate_expected",
    "beta_density",
    "beta_mean",
    "beta_mode",
    "build_profile",
    "compare_modes",
    "enumerate_configurations",
    "estimate_attributes",
    "evaluate_design",
    "evaluate_utility",
    "expected_single_attribute_utility",
    "expected_utility_quadrature",
    "expected_utility_series",
    "finalize_profile",
    "fit_beta",
    "fit_single_attribute",
    "load_knowledge_base",
    "make_exponential_utility",
    "next_question",
    "rank_alternatives",
    "run_answer_script",
    "run_applicability",
    "run_restrictions",
    "solve_master_constant",
    "start_session",
    "submit_answer",
]
