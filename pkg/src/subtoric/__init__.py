"""Toric ideals of two-way tables with a subtable sum constraint."""

from subtoric.binomials import (
    Binomial,
    BuchbergerFailure,
    BuchbergerReport,
    MonomialOrder,
    ReductionStep,
    buchberger_check,
    normal_form,
    s_polynomial,
)
from subtoric.fibers import (
    Budget,
    CensusRow,
    DEFAULT_BUDGET,
    Fiber,
    GenerationCheck,
    MoveSet,
    WalkTrace,
    apply_move,
    enumerate_fiber,
    fiber_components,
    fibers_of_degree,
    generation_check,
    initial_ideal_census,
    random_walk,
    table_from_csv,
    table_to_csv,
    walk_vs_exact,
)
from subtoric.ideal import (
    GeneratorSet,
    QuadGen,
    all_quads,
    block_reduce,
    build_generators,
    minor_excluded,
    quad_membership,
)
from subtoric.tables import (
    BlockWitness,
    BudgetError,
    CellTable,
    Classification,
    Margins,
    PermPair,
    ShapeMismatchError,
    Subset,
    TableShape,
    block_pattern,
    classify,
    classify_oracle,
    is_block_diagonal_in_place,
    is_triangular_in_place,
    margins,
)
from subtoric.verify import (
    BlockReduction,
    VerificationError,
    VerificationReport,
    verify_subset,
)

__all__ = [
    "Binomial",
    "BlockReduction",
    "BlockWitness",
    "BuchbergerFailure",
    "BuchbergerReport",
    "Budget",
    "BudgetError",
    "CellTable",
    "CensusRow",
    "Classification",
    "DEFAULT_BUDGET",
    "Fiber",
    "GenerationCheck",
    "GeneratorSet",
    "Margins",
    "MonomialOrder",
    "MoveSet",
    "PermPair",
    "QuadGen",
    "ReductionStep",
    "ShapeMismatchError",
    "Subset",
    "TableShape",
    "VerificationError",
    "VerificationReport",
    "WalkTrace",
    "all_quads",
    "apply_move",
    "block_pattern",
    "block_reduce",
    "buchberger_check",
    "build_generators",
    "classify",
    "classify_oracle",
    "enumerate_fiber",
    "fiber_components",
    "fibers_of_degree",
    "generation_check",
    "initial_ideal_census",
    "is_block_diagonal_in_place",
    "is_triangular_in_place",
    "margins",
    "minor_excluded",
    "normal_form",
    "quad_membership",
    "random_walk",
    "s_polynomial",
    "table_from_csv",
    "table_to_csv",
    "verify_subset",
    "walk_vs_exact",
]
