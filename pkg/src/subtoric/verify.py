"""One-subset verification pipeline.

Classifies the subset, then certifies what the classification promises:
staircase patterns get a Buchberger pass and a balanced census on their
canonical form, block-diagonal patterns are reduced to their top-left
block and certified there, and everything else is searched for a
disconnected fiber that explains why quadratic moves cannot suffice.
A failed certification on a classified pattern is impossible unless the
implementation is wrong, and raises VerificationError.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from subtoric.binomials import BuchbergerReport, MonomialOrder, buchberger_check
from subtoric.fibers import (
    Budget,
    CensusRow,
    DEFAULT_BUDGET,
    Fiber,
    fibers_of_degree,
    generation_check,
    initial_ideal_census,
)
from subtoric.ideal import GeneratorSet, block_reduce, build_generators
from subtoric.tables import (
    BudgetError,
    Classification,
    Subset,
    classify,
    is_triangular_in_place,
)


class VerificationError(RuntimeError):
    """A certified property failed; signals a bug, never expected input."""


@dataclass(frozen=True)
class BlockReduction:
    """Outcome of dropping the second block: the reduced pattern and the
    two bounded equivalence checks against the original."""

    reduced: Subset
    generators_match: bool
    fibers_match: bool

    def to_json_dict(self) -> dict:
        return {
            "reduced": self.reduced.to_json_dict(),
            "generators_match": self.generators_match,
            "fibers_match": self.fibers_match,
        }


@dataclass(frozen=True)
class VerificationReport:
    classification: Classification
    max_degree: int
    gb: Optional[BuchbergerReport] = None
    census: Optional[list[CensusRow]] = None
    block_reduction: Optional[BlockReduction] = None
    neither_witness: Optional[Fiber] = None
    canonical: Optional[Subset] = None

    def to_json_dict(self) -> dict:
        return {
            "classification": self.classification.to_json_dict(),
            "gb": None if self.gb is None else self.gb.to_json_dict(),
            "census": None
            if self.census is None
            else [r.to_json_dict() for r in self.census],
            "block_reduction": None
            if self.block_reduction is None
            else self.block_reduction.to_json_dict(),
            "neither_witness": None
            if self.neither_witness is None
            else self.neither_witness.to_json_dict(),
        }


def _certify_staircase(
    s: Subset, max_degree: int, budget: Budget
) -> tuple[BuchbergerReport, list[CensusRow]]:
    """GB pass, squarefree antidiagonal leading terms, balanced census.
    The pattern must already sit in its staircase corner."""
    if not is_triangular_in_place(s):
        raise VerificationError("certification target is not a staircase in place")
    order = MonomialOrder(s.shape)
    gset = build_generators(s)
    gens = gset.binomials(order)
    for q, g in zip(gset, gens):
        anti = q.expand(s.shape).plus
        if g.plus != anti or not g.plus.is_squarefree:
            raise VerificationError(
                f"leading term of {q.as_tuple} is not the squarefree antidiagonal"
            )
    gb = buchberger_check(gens, order)
    if not gb.passed:
        raise VerificationError(f"Buchberger failed on staircase: {gb.failure}")
    census = initial_ideal_census(s, gset, order, max_degree, budget)
    bad = [r for r in census if not r.balanced]
    if bad:
        raise VerificationError(f"census unbalanced on staircase: {bad[0]}")
    return gb, census


def _partition_of_degree(s: Subset, d: int, budget: Budget) -> list[tuple]:
    return sorted(
        tuple(t.flat for t in f.tables) for f in fibers_of_degree(s, d, budget)
    )


def verify_subset(
    s: Subset, max_degree: int = 4, budget: Budget = DEFAULT_BUDGET
) -> VerificationReport:
    """Classify, then certify along every branch the classification opens.

    Triangular: canonical form must pass Buchberger and balance the
    census.  Block diagonal: the reduced pattern must carry the same
    generators and the same bounded fiber partition, then certify the
    reduced staircase.  Neither: hunt for a disconnected fiber; finding
    none up to the bound is reported as witness None, not as success of
    any generation claim.
    """
    if max_degree > budget.max_degree:
        raise BudgetError(
            f"degree bound {max_degree} exceeds budget {budget.max_degree}"
        )
    cls = classify(s)
    gb = census = block = witness = canonical = None

    if cls.triangular is not None:
        canonical = s.permuted(cls.triangular)
        gb, census = _certify_staircase(canonical, max_degree, budget)

    if cls.block_diagonal is not None:
        w = cls.block_diagonal
        moved = s.permuted(w.perms)
        reduced = block_reduce(s, w)
        generators_match = (
            build_generators(moved).index_set == build_generators(reduced).index_set
        )
        fibers_match = all(
            _partition_of_degree(moved, d, budget)
            == _partition_of_degree(reduced, d, budget)
            for d in range(max_degree + 1)
        )
        if not (generators_match and fibers_match):
            raise VerificationError(
                f"block reduction mismatch: generators_match={generators_match}, "
                f"fibers_match={fibers_match}"
            )
        block = BlockReduction(reduced, generators_match, fibers_match)
        reduced_gb, reduced_census = _certify_staircase(reduced, max_degree, budget)
        if gb is None:
            gb, census, canonical = reduced_gb, reduced_census, reduced

    if cls.is_neither:
        check = generation_check(s, build_generators(s), max_degree, budget)
        witness = check.witness

    return VerificationReport(
        classification=cls,
        max_degree=max_degree,
        gb=gb,
        census=census,
        block_reduction=block,
        neither_witness=witness,
        canonical=canonical,
    )
