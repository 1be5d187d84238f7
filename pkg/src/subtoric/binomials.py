"""Pure-difference binomial arithmetic under a bottom-row lex order.

Everything here works with two-term polynomials whose coefficients are
+1 and -1, which is all a toric ideal ever needs.  The zero polynomial
is represented by None.  The monomial order ranks the variables of the
bottom table row highest, reading each row left to right and the rows
from the bottom up; comparison is plain lex on that variable sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from subtoric.tables import CellTable, PermPair, ShapeMismatchError, TableShape

_KINDS = ("bottom_row_lex",)


@dataclass(frozen=True)
class MonomialOrder:
    shape: TableShape
    kind: str = "bottom_row_lex"

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown order kind {self.kind!r}")

    def key(self, t: CellTable) -> tuple[int, ...]:
        """Exponents in precedence order: row m first, columns ascending."""
        if t.shape != self.shape:
            raise ShapeMismatchError(f"monomial on {t.shape}, order on {self.shape}")
        return tuple(e for row in reversed(t.entries) for e in row)


def lex_compare(a: CellTable, b: CellTable, order: MonomialOrder) -> int:
    """-1, 0, or 1 as a is smaller than, equal to, or greater than b."""
    ka, kb = order.key(a), order.key(b)
    return (ka > kb) - (ka < kb)


@dataclass(frozen=True)
class Binomial:
    """plus - minus with unit coefficients; the two monomials differ."""

    plus: CellTable
    minus: CellTable

    def __post_init__(self) -> None:
        if self.plus.shape != self.minus.shape:
            raise ShapeMismatchError("binomial sides on different shapes")
        if self.plus == self.minus:
            raise ValueError("plus and minus coincide; use None for zero")

    @property
    def shape(self) -> TableShape:
        return self.plus.shape

    def swapped(self) -> "Binomial":
        return Binomial(self.minus, self.plus)

    def is_oriented(self, order: MonomialOrder) -> bool:
        return lex_compare(self.plus, self.minus, order) > 0

    def permuted(self, perms: PermPair) -> "Binomial":
        return Binomial(self.plus.permuted(perms), self.minus.permuted(perms))

    def __str__(self) -> str:
        return f"{self.plus}-{self.minus}"


def orient(f: Binomial, order: MonomialOrder) -> Binomial:
    """Put the order-larger monomial in front.  Idempotent."""
    return f if f.is_oriented(order) else f.swapped()


def _require_oriented(f: Binomial, order: MonomialOrder, who: str) -> None:
    if not f.is_oriented(order):
        raise ValueError(f"{who} requires oriented input, got {f}")


def s_polynomial(
    g1: Binomial, g2: Binomial, order: MonomialOrder
) -> Optional[Binomial]:
    """The lcm cancellation of two oriented binomials, returned oriented.

    None when the combination collapses, e.g. for equal inputs.
    """
    _require_oriented(g1, order, "s_polynomial")
    _require_oriented(g2, order, "s_polynomial")
    big = g1.plus.lcm(g2.plus)
    a = (big // g2.plus) * g2.minus
    b = (big // g1.plus) * g1.minus
    if a == b:
        return None
    return orient(Binomial(a, b), order)


@dataclass(frozen=True)
class ReductionStep:
    """One rewrite: generator lt divided a term, the cofactor of its
    trailing monomial replaced it."""

    generator_index: int
    before: Binomial
    after: Optional[Binomial]

    def to_json_dict(self) -> dict:
        return {
            "generator_index": self.generator_index,
            "before": str(self.before),
            "after": None if self.after is None else str(self.after),
        }


def _first_divisor(
    target: CellTable, gens: Sequence[Binomial]
) -> Optional[int]:
    for idx, g in enumerate(gens):
        if g.plus.divides(target):
            return idx
    return None


def normal_form(
    f: Optional[Binomial], gens: Sequence[Binomial], order: MonomialOrder
) -> tuple[Optional[Binomial], list[ReductionStep]]:
    """Deterministic division: reduce the leading term until no generator's
    leading term divides it, then the trailing term likewise.

    Generators are tried in list order, first divisor wins.  Each step
    replaces a monomial by a strictly smaller one, so the loop ends.
    Returns the irreducible remainder (None when everything cancels) and
    the full step trace.
    """
    trace: list[ReductionStep] = []
    if f is None:
        return None, trace
    _require_oriented(f, order, "normal_form")

    current = f
    while True:
        idx = _first_divisor(current.plus, gens)
        if idx is None:
            break
        g = gens[idx]
        replaced = (current.plus // g.plus) * g.minus
        if replaced == current.minus:
            trace.append(ReductionStep(idx, current, None))
            return None, trace
        nxt = orient(Binomial(replaced, current.minus), order)
        trace.append(ReductionStep(idx, current, nxt))
        current = nxt

    while True:
        idx = _first_divisor(current.minus, gens)
        if idx is None:
            break
        g = gens[idx]
        replaced = (current.minus // g.plus) * g.minus
        if replaced == current.plus:
            trace.append(ReductionStep(idx, current, None))
            return None, trace
        # The rewritten trailing term only shrinks, so plus stays in front.
        nxt = Binomial(current.plus, replaced)
        trace.append(ReductionStep(idx, current, nxt))
        current = nxt

    return current, trace


@dataclass(frozen=True)
class BuchbergerFailure:
    i: int
    j: int
    remainder: Binomial

    def to_json_dict(self) -> dict:
        return {"pair": [self.i, self.j], "remainder": str(self.remainder)}


@dataclass(frozen=True)
class BuchbergerReport:
    passed: bool
    checked_pairs: int
    skipped_coprime: int
    failure: Optional[BuchbergerFailure]

    def to_json_dict(self) -> dict:
        return {
            "pass": self.passed,
            "checked_pairs": self.checked_pairs,
            "skipped_coprime": self.skipped_coprime,
            "failure": None if self.failure is None else self.failure.to_json_dict(),
        }


def buchberger_check(
    gens: Sequence[Binomial], order: MonomialOrder
) -> BuchbergerReport:
    """Does every S-polynomial of a generator pair reduce to zero?

    Pairs whose leading monomials share no variable are skipped; their
    S-polynomials always reduce to zero.  All pairs are visited even
    after a failure, so the counts are complete, and the reported
    failure is the first one in pair order.
    """
    for g in gens:
        _require_oriented(g, order, "buchberger_check")
    checked = skipped = 0
    failure: Optional[BuchbergerFailure] = None
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if gens[i].plus.coprime(gens[j].plus):
                skipped += 1
                continue
            checked += 1
            f = s_polynomial(gens[i], gens[j], order)
            remainder, _ = normal_form(f, gens, order)
            if remainder is not None and failure is None:
                failure = BuchbergerFailure(i, j, remainder)
    return BuchbergerReport(failure is None, checked, skipped, failure)
