"""Table shapes, subset patterns, margins, and pattern classification.

A subset S of the m x n index set marks the cells whose entries share a
common sum constraint.  Monomials in the cell variables are stored as
exponent tables.  The margin map sends an exponent table to its row sums,
column sums, and the split of its total degree into the part supported on
S and the part outside S.  Two pattern classes matter downstream: subsets
that are triangular (downward closed after permuting rows and columns)
and subsets that are 2x2 block diagonal up to permutation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Optional, Sequence


class ShapeMismatchError(ValueError):
    """Operands live on different table shapes."""


class BudgetError(RuntimeError):
    """An exhaustive computation would exceed its configured budget."""


@dataclass(frozen=True, order=True)
class TableShape:
    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ValueError(f"shape sides must be positive, got {self.m}x{self.n}")

    def cells(self) -> list[tuple[int, int]]:
        """All (i, j) positions, 1-based, row-major."""
        return [(i, j) for i in range(1, self.m + 1) for j in range(1, self.n + 1)]

    def __str__(self) -> str:
        return f"{self.m}x{self.n}"


def _check_same_shape(a: TableShape, b: TableShape) -> None:
    if a != b:
        raise ShapeMismatchError(f"shape mismatch: {a} vs {b}")


@dataclass(frozen=True)
class PermPair:
    """A pair of permutations acting on rows and columns.

    row_perm[i-1] is the destination row of original row i, and likewise
    for columns.  Both are 1-based.
    """

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]

    def __post_init__(self) -> None:
        for name, p in (("row_perm", self.row_perm), ("col_perm", self.col_perm)):
            if sorted(p) != list(range(1, len(p) + 1)):
                raise ValueError(f"{name} is not a permutation of 1..{len(p)}: {p}")

    @classmethod
    def identity(cls, shape: TableShape) -> "PermPair":
        return cls(tuple(range(1, shape.m + 1)), tuple(range(1, shape.n + 1)))

    @classmethod
    def from_orders(
        cls, row_order: Sequence[int], col_order: Sequence[int]
    ) -> "PermPair":
        """Build from target orders: row_order[k] is the original index of
        the row that ends up in position k+1."""
        row_perm = [0] * len(row_order)
        col_perm = [0] * len(col_order)
        for new, old in enumerate(row_order, start=1):
            row_perm[old - 1] = new
        for new, old in enumerate(col_order, start=1):
            col_perm[old - 1] = new
        return cls(tuple(row_perm), tuple(col_perm))

    def inverse(self) -> "PermPair":
        row = [0] * len(self.row_perm)
        col = [0] * len(self.col_perm)
        for old, new in enumerate(self.row_perm, start=1):
            row[new - 1] = old
        for old, new in enumerate(self.col_perm, start=1):
            col[new - 1] = old
        return PermPair(tuple(row), tuple(col))

    def apply(self, i: int, j: int) -> tuple[int, int]:
        return self.row_perm[i - 1], self.col_perm[j - 1]

    def to_json_dict(self) -> dict:
        return {"rows": list(self.row_perm), "cols": list(self.col_perm)}


def _permute_rows(
    rows: Sequence[Sequence], perms: PermPair
) -> tuple[tuple, ...]:
    m = len(rows)
    n = len(rows[0]) if m else 0
    out = [[None] * n for _ in range(m)]
    for i in range(m):
        for j in range(n):
            out[perms.row_perm[i] - 1][perms.col_perm[j] - 1] = rows[i][j]
    return tuple(tuple(r) for r in out)


@dataclass(frozen=True)
class Subset:
    """A subset of the cells of an m x n table, stored as a 0/1 mask."""

    shape: TableShape
    mask: tuple[tuple[bool, ...], ...]

    def __post_init__(self) -> None:
        if len(self.mask) != self.shape.m or any(
            len(row) != self.shape.n for row in self.mask
        ):
            raise ValueError("mask dimensions do not match shape")

    @classmethod
    def from_cells(
        cls, m: int, n: int, cells: Iterable[tuple[int, int]]
    ) -> "Subset":
        shape = TableShape(m, n)
        mask = [[False] * n for _ in range(m)]
        for i, j in cells:
            if not (1 <= i <= m and 1 <= j <= n):
                raise ValueError(f"cell ({i},{j}) outside {shape}")
            mask[i - 1][j - 1] = True
        return cls(shape, tuple(tuple(r) for r in mask))

    @classmethod
    def empty(cls, m: int, n: int) -> "Subset":
        return cls.from_cells(m, n, [])

    @classmethod
    def full(cls, m: int, n: int) -> "Subset":
        return cls.from_cells(m, n, TableShape(m, n).cells())

    @classmethod
    def from_text(cls, text: str) -> "Subset":
        """Parse the grid format: one line of '0'/'1' per row.

        Blank lines and lines starting with '#' are skipped.
        """
        rows = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if set(line) - {"0", "1"}:
                raise ValueError(f"grid line has characters other than 0/1: {line!r}")
            rows.append(tuple(ch == "1" for ch in line))
        if not rows:
            raise ValueError("no grid rows found")
        if len({len(r) for r in rows}) != 1:
            raise ValueError("grid rows have unequal lengths")
        shape = TableShape(len(rows), len(rows[0]))
        return cls(shape, tuple(rows))

    @classmethod
    def from_json(cls, data) -> "Subset":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        try:
            m, n = int(data["m"]), int(data["n"])
            cells = [(int(i), int(j)) for i, j in data["cells"]]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed subset JSON: {exc}") from exc
        return cls.from_cells(m, n, cells)

    @property
    def cells(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (i + 1, j + 1)
            for i in range(self.shape.m)
            for j in range(self.shape.n)
            if self.mask[i][j]
        )

    @property
    def size(self) -> int:
        return sum(sum(row) for row in self.mask)

    def __contains__(self, cell: tuple[int, int]) -> bool:
        i, j = cell
        return 1 <= i <= self.shape.m and 1 <= j <= self.shape.n and self.mask[i - 1][j - 1]

    def row_support(self, i: int) -> frozenset[int]:
        return frozenset(j + 1 for j, hit in enumerate(self.mask[i - 1]) if hit)

    def col_support(self, j: int) -> frozenset[int]:
        return frozenset(
            i + 1 for i in range(self.shape.m) if self.mask[i][j - 1]
        )

    def complement(self) -> "Subset":
        return Subset(
            self.shape, tuple(tuple(not v for v in row) for row in self.mask)
        )

    def permuted(self, perms: PermPair) -> "Subset":
        if len(perms.row_perm) != self.shape.m or len(perms.col_perm) != self.shape.n:
            raise ShapeMismatchError("permutation sizes do not match shape")
        return Subset(self.shape, _permute_rows(self.mask, perms))

    def to_text(self) -> str:
        return "\n".join(
            "".join("1" if v else "0" for v in row) for row in self.mask
        )

    def to_json_dict(self) -> dict:
        return {
            "m": self.shape.m,
            "n": self.shape.n,
            "cells": [[i, j] for i, j in self.cells],
        }


@dataclass(frozen=True)
class CellTable:
    """A monomial in the cell variables: one nonnegative exponent per cell."""

    shape: TableShape
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.shape.m or any(
            len(row) != self.shape.n for row in self.entries
        ):
            raise ValueError("entry dimensions do not match shape")
        if any(e < 0 for row in self.entries for e in row):
            raise ValueError("exponents must be nonnegative")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "CellTable":
        shape = TableShape(len(rows), len(rows[0]) if rows else 0)
        return cls(shape, tuple(tuple(int(e) for e in row) for row in rows))

    @classmethod
    def zero(cls, shape: TableShape) -> "CellTable":
        return cls(shape, tuple((0,) * shape.n for _ in range(shape.m)))

    @classmethod
    def variable(cls, shape: TableShape, i: int, j: int) -> "CellTable":
        rows = [[0] * shape.n for _ in range(shape.m)]
        rows[i - 1][j - 1] = 1
        return cls(shape, tuple(tuple(r) for r in rows))

    @property
    def degree(self) -> int:
        return sum(sum(row) for row in self.entries)

    @property
    def flat(self) -> tuple[int, ...]:
        """Row-major flattening, handy as a dict key."""
        return tuple(e for row in self.entries for e in row)

    def entry(self, i: int, j: int) -> int:
        return self.entries[i - 1][j - 1]

    @property
    def support_cells(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (i + 1, j + 1)
            for i in range(self.shape.m)
            for j in range(self.shape.n)
            if self.entries[i][j]
        )

    @property
    def is_squarefree(self) -> bool:
        return all(e <= 1 for row in self.entries for e in row)

    def _zip(self, other: "CellTable", op) -> "CellTable":
        _check_same_shape(self.shape, other.shape)
        return CellTable(
            self.shape,
            tuple(
                tuple(op(a, b) for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
        )

    def __mul__(self, other: "CellTable") -> "CellTable":
        return self._zip(other, lambda a, b: a + b)

    def divides(self, other: "CellTable") -> bool:
        _check_same_shape(self.shape, other.shape)
        return all(
            a <= b
            for ra, rb in zip(self.entries, other.entries)
            for a, b in zip(ra, rb)
        )

    def __floordiv__(self, other: "CellTable") -> "CellTable":
        if not other.divides(self):
            raise ValueError("quotient would have negative exponents")
        return self._zip(other, lambda a, b: a - b)

    def lcm(self, other: "CellTable") -> "CellTable":
        return self._zip(other, max)

    def gcd(self, other: "CellTable") -> "CellTable":
        return self._zip(other, min)

    def coprime(self, other: "CellTable") -> bool:
        _check_same_shape(self.shape, other.shape)
        return all(
            a == 0 or b == 0
            for ra, rb in zip(self.entries, other.entries)
            for a, b in zip(ra, rb)
        )

    def permuted(self, perms: PermPair) -> "CellTable":
        if len(perms.row_perm) != self.shape.m or len(perms.col_perm) != self.shape.n:
            raise ShapeMismatchError("permutation sizes do not match shape")
        return CellTable(self.shape, _permute_rows(self.entries, perms))

    def to_json_dict(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def __str__(self) -> str:
        if self.degree == 0:
            return "1"
        parts = []
        for i, j in self.support_cells:
            e = self.entry(i, j)
            parts.append(f"x{i}{j}" if e == 1 else f"x{i}{j}^{e}")
        return "*".join(parts)


@dataclass(frozen=True)
class Margins:
    """Row sums, column sums, and the in/out degree split of a monomial.

    in_sum counts the exponents on cells inside the subset, out_sum the
    rest.  Row totals, column totals, and in_sum + out_sum all equal the
    monomial degree.
    """

    row_sums: tuple[int, ...]
    col_sums: tuple[int, ...]
    in_sum: int
    out_sum: int

    def __post_init__(self) -> None:
        total = sum(self.row_sums)
        if total != sum(self.col_sums) or total != self.in_sum + self.out_sum:
            raise ValueError("margin totals disagree")

    @property
    def degree(self) -> int:
        return self.in_sum + self.out_sum

    def __add__(self, other: "Margins") -> "Margins":
        if len(self.row_sums) != len(other.row_sums) or len(self.col_sums) != len(
            other.col_sums
        ):
            raise ShapeMismatchError("margin vectors have different lengths")
        return Margins(
            tuple(a + b for a, b in zip(self.row_sums, other.row_sums)),
            tuple(a + b for a, b in zip(self.col_sums, other.col_sums)),
            self.in_sum + other.in_sum,
            self.out_sum + other.out_sum,
        )

    def sort_key(self) -> tuple:
        return (self.row_sums, self.col_sums, self.in_sum)

    def to_json_dict(self) -> dict:
        return {
            "rows": list(self.row_sums),
            "cols": list(self.col_sums),
            "s_sum": self.in_sum,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Margins":
        rows = tuple(int(v) for v in data["rows"])
        cols = tuple(int(v) for v in data["cols"])
        s_sum = int(data["s_sum"])
        return cls(rows, cols, s_sum, sum(rows) - s_sum)


def margins(subset: Subset, table: CellTable) -> Margins:
    """Margins of a monomial relative to a subset pattern."""
    _check_same_shape(subset.shape, table.shape)
    row_sums = tuple(sum(row) for row in table.entries)
    col_sums = tuple(
        sum(table.entries[i][j] for i in range(table.shape.m))
        for j in range(table.shape.n)
    )
    in_sum = sum(
        e
        for mrow, erow in zip(subset.mask, table.entries)
        for hit, e in zip(mrow, erow)
        if hit
    )
    return Margins(row_sums, col_sums, in_sum, sum(row_sums) - in_sum)


# ---------------------------------------------------------------------------
# Pattern classification


@dataclass(frozen=True)
class BlockWitness:
    """Permutations carrying S onto a top-left r x c block plus the
    complementary bottom-right block."""

    r: int
    c: int
    perms: PermPair

    def to_json_dict(self) -> dict:
        return {"r": self.r, "c": self.c, "perms": self.perms.to_json_dict()}


@dataclass(frozen=True)
class Classification:
    """Which of the two pattern classes S falls into, with witnesses.

    Either field is None when S is not in that class; both present and
    both absent are possible.
    """

    triangular: Optional[PermPair] = None
    block_diagonal: Optional[BlockWitness] = None

    @property
    def is_neither(self) -> bool:
        return self.triangular is None and self.block_diagonal is None

    def to_json_dict(self) -> dict:
        return {
            "triangular": None
            if self.triangular is None
            else self.triangular.to_json_dict(),
            "block_diagonal": None
            if self.block_diagonal is None
            else self.block_diagonal.to_json_dict(),
        }


def is_triangular_in_place(s: Subset) -> bool:
    """True iff S is downward closed as it sits: (i,j) in S forces every
    (i',j') with i' <= i, j' <= j into S."""
    for i in range(s.shape.m):
        for j in range(s.shape.n):
            if not s.mask[i][j]:
                continue
            if i > 0 and not s.mask[i - 1][j]:
                return False
            if j > 0 and not s.mask[i][j - 1]:
                return False
    return True


def block_pattern(shape: TableShape, r: int, c: int) -> Subset:
    """The literal two-block subset: full r x c top-left block plus full
    bottom-right complement block."""
    if not (0 <= r <= shape.m and 0 <= c <= shape.n):
        raise ValueError(f"block sizes ({r},{c}) outside {shape}")
    cells = [(i, j) for i in range(1, r + 1) for j in range(1, c + 1)]
    cells += [
        (i, j)
        for i in range(r + 1, shape.m + 1)
        for j in range(c + 1, shape.n + 1)
    ]
    return Subset.from_cells(shape.m, shape.n, cells)


def is_block_diagonal_in_place(s: Subset) -> Optional[tuple[int, int]]:
    """The first (r, c) realizing the two-block pattern without moving
    anything, or None.  Larger top-left blocks are preferred, so the full
    subset reports (m, n) and the empty subset (m, 0)."""
    m, n = s.shape.m, s.shape.n
    for r in range(m, -1, -1):
        for c in range(n, -1, -1):
            ok = True
            for i in range(m):
                for j in range(n):
                    want = (i < r and j < c) or (i >= r and j >= c)
                    if s.mask[i][j] != want:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return (r, c)
    return None


def _triangular_witness(s: Subset) -> Optional[PermPair]:
    m, n = s.shape.m, s.shape.n
    sups = [s.row_support(i) for i in range(1, m + 1)]
    row_order = sorted(range(1, m + 1), key=lambda i: (-len(sups[i - 1]), i))
    # Triangular up to permutation iff the row supports form a chain under
    # inclusion; with supports sorted by size it suffices to nest neighbors.
    for a, b in zip(row_order, row_order[1:]):
        if not sups[b - 1] <= sups[a - 1]:
            return None
    col_sums = [len(s.col_support(j)) for j in range(1, n + 1)]
    col_order = sorted(range(1, n + 1), key=lambda j: (-col_sums[j - 1], j))
    return PermPair.from_orders(row_order, col_order)


def _block_witness(s: Subset) -> Optional[BlockWitness]:
    m, n = s.shape.m, s.shape.n
    sups = [s.row_support(i) for i in range(1, m + 1)]
    distinct = set(sups)
    all_cols = frozenset(range(1, n + 1))
    if len(distinct) > 2:
        return None
    if len(distinct) == 1:
        # Every row looks the same: one block holds all rows and the
        # support columns, the other block is empty.
        top_cols = sups[0]
        top_rows = list(range(1, m + 1))
    else:
        p, q = distinct
        if p & q or (p | q) != all_cols:
            return None
        # The first row's class goes on top, except an all-empty class
        # always goes to the bottom block.
        if not p or not q:
            top_cols = p or q
        else:
            top_cols = sups[0]
        top_rows = [i for i in range(1, m + 1) if sups[i - 1] == top_cols]
    bottom_rows = [i for i in range(1, m + 1) if sups[i - 1] != top_cols]
    col_order = sorted(top_cols) + sorted(all_cols - top_cols)
    perms = PermPair.from_orders(top_rows + bottom_rows, col_order)
    return BlockWitness(len(top_rows), len(top_cols), perms)


def classify(s: Subset) -> Classification:
    """Fast recognition of both pattern classes, with witnesses."""
    return Classification(
        triangular=_triangular_witness(s), block_diagonal=_block_witness(s)
    )


# ---------------------------------------------------------------------------
# Brute-force oracle

def _packed_tri_masks(m: int, n: int) -> tuple[int, int]:
    rows2 = cols2 = 0
    for i in range(m):
        for j in range(n):
            b = 1 << (i * n + j)
            if i >= 1:
                rows2 |= b
            if j >= 1:
                cols2 |= b
    return rows2, cols2


def _packed_blocks(m: int, n: int) -> dict[int, tuple[int, int]]:
    # Largest top-left block first, matching is_block_diagonal_in_place.
    table: dict[int, tuple[int, int]] = {}
    for r in range(m, -1, -1):
        for c in range(n, -1, -1):
            bits = 0
            for i in range(m):
                for j in range(n):
                    if (i < r and j < c) or (i >= r and j >= c):
                        bits |= 1 << (i * n + j)
            table.setdefault(bits, (r, c))
    return table


def classify_oracle(s: Subset, max_side: int = 5) -> Classification:
    """Definition-checking oracle: try every row/column permutation pair.

    Exponential in the table sides; refuses shapes beyond max_side.
    Witnesses may differ from classify's, the flags never do.
    """
    m, n = s.shape.m, s.shape.n
    if m > max_side or n > max_side:
        raise BudgetError(
            f"oracle budget is {max_side}x{max_side}, got {s.shape}"
        )
    cells0 = [(i - 1, j - 1) for i, j in s.cells]
    rows2, cols2 = _packed_tri_masks(m, n)
    blocks = _packed_blocks(m, n)

    tri: Optional[PermPair] = None
    blk: Optional[BlockWitness] = None
    for rp in permutations(range(m)):
        for cp in permutations(range(n)):
            bits = 0
            for i, j in cells0:
                bits |= 1 << (rp[i] * n + cp[j])
            if tri is None:
                if not (bits & rows2 & ~(bits << n)) and not (
                    bits & cols2 & ~(bits << 1)
                ):
                    tri = PermPair(
                        tuple(v + 1 for v in rp), tuple(v + 1 for v in cp)
                    )
            if blk is None:
                hit = blocks.get(bits)
                if hit is not None:
                    blk = BlockWitness(
                        hit[0],
                        hit[1],
                        PermPair(
                            tuple(v + 1 for v in rp), tuple(v + 1 for v in cp)
                        ),
                    )
            if tri is not None and blk is not None:
                return Classification(tri, blk)
    return Classification(tri, blk)
