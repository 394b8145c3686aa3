"""Exact-arithmetic certification of correlated perfect equilibria in finite
normal-form games.

The package decides, with exact rational arithmetic end to end, whether a
correlated equilibrium is robust to vanishing mediator noise.  Positive
answers come with an explicit supporting sequence of completely mixed
distributions; negative answers come with a collectively profitable
deviation-plan profile and the exact profiles where it gains.  On top of the
core test sit a support-by-support classifier, a weak-dominance reporter and
a checker for robustness to independent player trembles.
"""

from .certify import (
    CpeVerdict,
    DeviationPlan,
    DualVectorProfile,
    NotCorrelatedEquilibriumError,
    Perfect,
    Refuted,
    aggregate_gain,
    certify_support,
    deviation_gain,
    is_cpe,
    is_dual_vector,
    is_restricted,
)
from .classify import (
    DEFAULT_SUPPORT_CAP,
    SupportClassification,
    SupportEnumerationCapError,
    ce_with_exact_support,
    classify_all_supports,
    enumerate_product_supports,
    maximal_cpe_supports,
)
from .dominance import dominating_mixture, weakly_dominated_strategies
from .game import (
    CeCheck,
    CeViolation,
    CorrelatedStrategy,
    Game,
    MixedProfile,
    ProductSupport,
    conditional_deviation_value,
    is_completely_mixed,
    is_correlated_equilibrium,
    marginal,
    product_distribution,
    product_support,
)
from .lp import (
    Constraint,
    Infeasible,
    LinearProgram,
    LpOutcome,
    Optimal,
    Unbounded,
    feasible_point,
    solve,
    verify_farkas_certificate,
)
from .pdce import (
    PerceivedDistribution,
    TrembleFamily,
    TrembleRobustnessReport,
    pdce_check,
    perceived_distribution,
)
from .polynomials import EpsPolynomial, limit_ratio_at_zero
from .rationals import ONE, ZERO, Rational, format_rational, parse_rational, rat
from .sequences import (
    ParametricCheck,
    ParametricDistribution,
    SequenceTermCheck,
    SupportWeights,
    find_support_weights,
    support_weight_system,
    supporting_sequence_term,
    verify_parametric_sequence,
    verify_sequence_term,
)

__version__ = "0.1.0"
