"""Quadratic moves attached to a subset pattern.

For rows i<j and columns k<l, the move swaps mass between the diagonal
cells (i,k),(j,l) and the antidiagonal cells (i,l),(j,k) of the 2x2
submatrix.  Such a move respects the subset-sum constraint exactly when
the two cell pairs meet the subset equally often; those quadruples form
the generating set studied here.  Also provides the exclusion rule that
characterizes the missing quadruples on staircase patterns, and the
reduction of a block-diagonal pattern to its top-left block.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from subtoric.binomials import Binomial, MonomialOrder, orient
from subtoric.tables import (
    BlockWitness,
    CellTable,
    Subset,
    TableShape,
    block_pattern,
    margins,
)


@dataclass(frozen=True)
class QuadGen:
    """Row pair i<j and column pair k<ell naming one quadratic move."""

    i: int
    j: int
    k: int
    ell: int

    def __post_init__(self) -> None:
        if not (1 <= self.i < self.j and 1 <= self.k < self.ell):
            raise ValueError(
                f"need 1 <= i < j and 1 <= k < ell, got {self.as_tuple}"
            )

    @property
    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.i, self.j, self.k, self.ell)

    @property
    def antidiagonal_cells(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.i, self.ell), (self.j, self.k))

    @property
    def diagonal_cells(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.i, self.k), (self.j, self.ell))

    def expand(self, shape: TableShape) -> Binomial:
        """The move as a binomial: antidiagonal product minus diagonal."""
        if self.j > shape.m or self.ell > shape.n:
            raise ValueError(f"{self.as_tuple} does not fit in {shape}")
        (a1, a2), (d1, d2) = self.antidiagonal_cells, self.diagonal_cells
        anti = CellTable.variable(shape, *a1) * CellTable.variable(shape, *a2)
        diag = CellTable.variable(shape, *d1) * CellTable.variable(shape, *d2)
        return Binomial(anti, diag)


def all_quads(shape: TableShape) -> list[QuadGen]:
    return [
        QuadGen(i, j, k, ell)
        for i in range(1, shape.m + 1)
        for j in range(i + 1, shape.m + 1)
        for k in range(1, shape.n + 1)
        for ell in range(k + 1, shape.n + 1)
    ]


@dataclass(frozen=True)
class GeneratorSet:
    subset: Subset
    quads: tuple[QuadGen, ...]

    @property
    def index_set(self) -> tuple[tuple[int, int, int, int], ...]:
        return tuple(q.as_tuple for q in self.quads)

    def binomials(self, order: MonomialOrder) -> list[Binomial]:
        return [orient(q.expand(self.subset.shape), order) for q in self.quads]

    def __iter__(self) -> Iterator[QuadGen]:
        return iter(self.quads)

    def __len__(self) -> int:
        return len(self.quads)

    def __contains__(self, q: QuadGen) -> bool:
        return q in self.quads


def build_generators(s: Subset) -> GeneratorSet:
    """Every quadruple whose two cell pairs meet the subset equally often.

    Row and column margins of the two products always agree; only the
    subset-sum coordinate can tell them apart, so the count decides.
    """
    kept = []
    for q in all_quads(s.shape):
        hits_anti = sum(c in s for c in q.antidiagonal_cells)
        hits_diag = sum(c in s for c in q.diagonal_cells)
        if hits_anti == hits_diag:
            kept.append(q)
    return GeneratorSet(s, tuple(kept))


def minor_excluded(s: Subset, q: QuadGen) -> bool:
    """The staircase exclusion rule: the quadruple's 2x2 submatrix meets
    the subset in exactly the low corner, or in everything except the
    high corner."""
    cells = {
        (q.i, q.k): (q.i, q.k) in s,
        (q.i, q.ell): (q.i, q.ell) in s,
        (q.j, q.k): (q.j, q.k) in s,
        (q.j, q.ell): (q.j, q.ell) in s,
    }
    inside = {c for c, hit in cells.items() if hit}
    low = (q.i, q.k)
    return inside == {low} or inside == {low, (q.i, q.ell), (q.j, q.k)}


def quad_membership(s: Subset, q: QuadGen) -> bool:
    """Does the expanded move respect the subset-sum constraint?

    Decided by comparing margins of the two monomials, independently of
    the counting rule in build_generators.
    """
    f = q.expand(s.shape)
    return margins(s, f.plus) == margins(s, f.minus)


def block_reduce(s: Subset, witness: BlockWitness) -> Subset:
    """Drop the second block: the returned pattern is the top-left r x c
    block alone, in the frame the witness permutes the subset into."""
    moved = s.permuted(witness.perms)
    if moved != block_pattern(s.shape, witness.r, witness.c):
        raise ValueError("witness does not carry the subset onto a block pattern")
    return Subset.from_cells(
        s.shape.m,
        s.shape.n,
        [
            (i, j)
            for i in range(1, witness.r + 1)
            for j in range(1, witness.c + 1)
        ],
    )
