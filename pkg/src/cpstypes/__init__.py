"""Finite epistemic type structures over conditional probability systems."""

from .errors import CpsError
from .hierarchy import (
    FIXPOINT,
    Description,
    PartitionFamily,
    check_morphism_preserves_descriptions,
    describe,
    description_tables,
    hierarchy_partition,
    tree_to_json,
    truncate,
)
from .logic import And, Believes, Not, Prop, Top, check, evaluate, parse_formula, print_formula
from .measure import (
    Cps,
    Measure,
    Report,
    Violation,
    dirac,
    marginal,
    project,
    pushforward,
    pushforward_cps,
    rational,
    validate_cps,
)
from .quotient import is_non_redundant, quotient, terminal_approximation
from .space import (
    EventSet,
    FiniteConditionalSpace,
    Literal,
    LiteralSet,
    PropositionalSpace,
    Valuation,
    induce_from_propositions,
    lift_conditioning,
    new_space,
    product_space,
    satisfies_conditioning_conditions,
)
from .structure import (
    NATURE,
    MorphismSpec,
    TypeStructure,
    beta,
    check_isomorphism,
    check_morphism,
    p_belief,
    validate_structure,
)

__all__ = [
    "CpsError",
    "FIXPOINT",
    "Description",
    "PartitionFamily",
    "check_morphism_preserves_descriptions",
    "describe",
    "description_tables",
    "hierarchy_partition",
    "tree_to_json",
    "truncate",
    "And",
    "Believes",
    "Not",
    "Prop",
    "Top",
    "check",
    "evaluate",
    "parse_formula",
    "print_formula",
    "Cps",
    "Measure",
    "Report",
    "Violation",
    "dirac",
    "marginal",
    "project",
    "pushforward",
    "pushforward_cps",
    "rational",
    "validate_cps",
    "is_non_redundant",
    "quotient",
    "terminal_approximation",
    "EventSet",
    "FiniteConditionalSpace",
    "Literal",
    "LiteralSet",
    "PropositionalSpace",
    "Valuation",
    "induce_from_propositions",
    "lift_conditioning",
    "new_space",
    "product_space",
    "satisfies_conditioning_conditions",
    "NATURE",
    "MorphismSpec",
    "TypeStructure",
    "beta",
    "check_isomorphism",
    "check_morphism",
    "p_belief",
    "validate_structure",
]

__version__ = "0.1.0"
