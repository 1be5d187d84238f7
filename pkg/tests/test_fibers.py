"""Tests for subtoric.fibers: enumeration, connectivity, census, walks."""

from __future__ import annotations

import math
import random

import pytest

from subtoric.binomials import MonomialOrder, buchberger_check, normal_form, orient, Binomial
from subtoric.fibers import (
    Budget,
    DEFAULT_BUDGET,
    Fiber,
    MoveSet,
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
from subtoric.ideal import QuadGen, build_generators
from subtoric.tables import (
    BudgetError,
    CellTable,
    Margins,
    Subset,
    TableShape,
    margins,
)
from util import random_staircase, random_subset, random_table


def S(m, n, *cells):
    return Subset.from_cells(m, n, cells)


def key(rows, cols, s_sum):
    return Margins(tuple(rows), tuple(cols), s_sum, sum(rows) - s_sum)


DIAG3 = S(3, 3, (1, 1), (2, 2), (3, 3))


# ----------------------------------------------------------- enumeration

def test_enumerate_two_table_fiber():
    f = enumerate_fiber(Subset.full(2, 2), key((1, 1), (1, 1), 2))
    assert f.size == 2
    flats = [t.flat for t in f.tables]
    assert flats == [(0, 1, 1, 0), (1, 0, 0, 1)]


def test_enumerate_split_by_subtable_sum():
    f = enumerate_fiber(S(2, 2, (1, 1)), key((1, 1), (1, 1), 1))
    assert [t.flat for t in f.tables] == [(1, 0, 0, 1)]


def test_enumerate_degree_zero():
    f = enumerate_fiber(DIAG3, key((0, 0, 0), (0, 0, 0), 0))
    assert f.size == 1
    assert f.tables[0].degree == 0


def test_enumerate_matches_filter_oracle():
    rng = random.Random(401)
    for _ in range(40):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        s = random_subset(rng, m, n)
        probe = random_table(rng, m, n, rng.randint(0, 4))
        k = margins(s, probe)
        fib = enumerate_fiber(s, k)
        # Independent route: filter every table of that degree.
        expected = sorted(
            t.flat for t in _all_tables(m, n, k.degree) if margins(s, t) == k
        )
        assert [t.flat for t in fib.tables] == expected
        assert probe.flat in expected


def _all_tables(m, n, d):
    shape = TableShape(m, n)
    out = []

    def rec(cells, left):
        if len(cells) == m * n:
            if left == 0:
                rows = [
                    tuple(cells[r * n : (r + 1) * n]) for r in range(m)
                ]
                out.append(CellTable(shape, tuple(rows)))
            return
        for e in range(left + 1):
            rec(cells + [e], left - e)

    rec([], d)
    return out


def test_enumerate_rejects_oversized_degree():
    with pytest.raises(BudgetError):
        enumerate_fiber(
            Subset.full(2, 2),
            key((5, 5), (5, 5), 10),
            Budget(max_degree=6),
        )


def test_fiber_size_budget_is_hard():
    with pytest.raises(BudgetError):
        enumerate_fiber(
            Subset.full(3, 3),
            key((2, 2, 2), (2, 2, 2), 6),
            Budget(max_fiber_size=3),
        )


def test_fibers_of_degree_partition_everything():
    for d in range(5):
        fibs = fibers_of_degree(DIAG3, d)
        seen = set()
        for f in fibs:
            assert f.size >= 1
            for t in f.tables:
                assert margins(DIAG3, t) == f.key
                assert t.flat not in seen
                seen.add(t.flat)
        assert len(seen) == math.comb(d + 8, 8)
        keys = [f.key.sort_key() for f in fibs]
        assert keys == sorted(keys)


def test_fibers_of_degree_budget():
    with pytest.raises(BudgetError):
        fibers_of_degree(Subset.full(3, 3), 4, Budget(max_tables_per_degree=100))


# ----------------------------------------------------------------- moves

def test_apply_move_signs_and_negativity():
    t = CellTable.from_rows([[1, 0], [0, 1]])
    q = QuadGen(1, 2, 1, 2)
    fwd = apply_move(t, q, +1)
    assert fwd is None  # would need mass on the antidiagonal
    back = apply_move(t, q, -1)
    assert back is not None
    assert back.flat == (0, 1, 1, 0)
    assert apply_move(back, q, +1).flat == t.flat


def test_in_generator_moves_preserve_margins():
    rng = random.Random(402)
    for _ in range(60):
        m, n = rng.randint(2, 4), rng.randint(2, 4)
        s = random_subset(rng, m, n)
        gens = build_generators(s)
        if not len(gens):
            continue
        t = random_table(rng, m, n, rng.randint(2, 5))
        q = rng.choice(list(gens))
        for sign in (+1, -1):
            moved = apply_move(t, q, sign)
            if moved is not None:
                assert margins(s, moved) == margins(s, t)


def test_two_table_fiber_connected_by_its_minor():
    f = enumerate_fiber(Subset.full(2, 2), key((1, 1), (1, 1), 2))
    moves = MoveSet((QuadGen(1, 2, 1, 2),))
    comps = fiber_components(f, moves)
    assert len(comps) == 1
    assert len(comps[0]) == 2


def test_empty_move_set_gives_singleton_components():
    f = enumerate_fiber(Subset.full(2, 2), key((1, 1), (1, 1), 2))
    comps = fiber_components(f, MoveSet(()))
    assert len(comps) == 2
    assert all(len(c) == 1 for c in comps)


def test_components_sorted_largest_first():
    fibs = fibers_of_degree(Subset.full(3, 3), 3)
    moves = MoveSet((QuadGen(1, 2, 1, 2),))
    for f in fibs:
        comps = fiber_components(f, moves)
        sizes = [len(c) for c in comps]
        assert sizes == sorted(sizes, reverse=True)
        assert sum(sizes) == f.size


# ------------------------------------------------------ generation check

def test_generation_check_passes_on_staircase():
    s = S(3, 3, (1, 1), (1, 2), (2, 1))
    res = generation_check(s, build_generators(s), 4)
    assert res.passed
    assert res.witness is None


def test_generation_check_diagonal_fails_with_frozen_witness():
    res = generation_check(DIAG3, build_generators(DIAG3), 4)
    assert not res.passed
    w = res.witness
    assert w is not None
    assert w.key == key((1, 1, 1), (1, 1, 1), 0)
    assert [t.flat for t in w.tables] == [
        (0, 0, 1, 1, 0, 0, 0, 1, 0),
        (0, 1, 0, 0, 0, 1, 1, 0, 0),
    ]


def test_generation_check_degree_one_vacuous():
    rng = random.Random(403)
    for _ in range(10):
        s = random_subset(rng, 3, 3)
        assert generation_check(s, build_generators(s), 1).passed


def test_connected_fibers_mirror_reduction_to_zero():
    # Cross-check: inside a connected fiber, any two tables differ by a
    # binomial the certified basis reduces to zero.
    rng = random.Random(404)
    for s in [
        S(3, 3, (1, 1), (1, 2), (2, 1)),
        S(3, 3, (1, 1), (2, 1), (3, 1)),
        Subset.full(3, 3),
    ]:
        order = MonomialOrder(s.shape)
        gset = build_generators(s)
        gens = gset.binomials(order)
        assert buchberger_check(gens, order).passed
        for d in (2, 3, 4):
            for f in fibers_of_degree(s, d):
                if f.size < 2:
                    continue
                comps = fiber_components(f, MoveSet(tuple(gset)))
                assert len(comps) == 1
                for _ in range(3):
                    a, b = rng.sample(f.tables, 2)
                    diff = orient(Binomial(a, b), order)
                    remainder, _ = normal_form(diff, gens, order)
                    assert remainder is None


# ----------------------------------------------------------------- census

def test_census_full_2x2_balances_with_frozen_counts():
    s = Subset.full(2, 2)
    order = MonomialOrder(s.shape)
    rows = initial_ideal_census(s, build_generators(s), order, 2)
    assert [(r.degree, r.standard_count, r.fiber_count) for r in rows] == [
        (0, 1, 1),
        (1, 4, 4),
        (2, 9, 9),
    ]
    assert all(r.balanced for r in rows)


def test_census_inequality_always_holds():
    rng = random.Random(405)
    for _ in range(25):
        m, n = rng.randint(2, 3), rng.randint(2, 3)
        s = random_subset(rng, m, n)
        order = MonomialOrder(s.shape)
        rows = initial_ideal_census(s, build_generators(s), order, 3)
        for r in rows:
            assert r.standard_count >= r.fiber_count


def test_census_balances_on_3x3_staircases():
    from util import staircases

    for s in staircases(3, 3):
        order = MonomialOrder(s.shape)
        rows = initial_ideal_census(s, build_generators(s), order, 4)
        assert all(r.balanced for r in rows), s.to_text()


def test_census_detects_non_basis():
    # The diagonal subset has no quadratic moves at all, so its standard
    # count strictly exceeds the fiber count as soon as fibers merge.
    order = MonomialOrder(TableShape(3, 3))
    rows = initial_ideal_census(DIAG3, build_generators(DIAG3), order, 3)
    assert any(r.standard_count > r.fiber_count for r in rows)


# ------------------------------------------------------------------ walks

def test_walk_zero_steps_visits_only_start():
    start = CellTable.from_rows([[1, 0], [0, 1]])
    moves = MoveSet((QuadGen(1, 2, 1, 2),))
    tr = random_walk(Subset.full(2, 2), start, moves, 0, seed=7)
    assert tr.visit_counts == {start: 1}
    assert tr.final == start


def test_walk_two_state_chain_is_near_uniform():
    start = CellTable.from_rows([[1, 0], [0, 1]])
    other = CellTable.from_rows([[0, 1], [1, 0]])
    moves = MoveSet((QuadGen(1, 2, 1, 2),))
    tr = random_walk(Subset.full(2, 2), start, moves, 10_000, seed=11)
    total = 10_001
    assert set(tr.visit_counts) == {start, other}
    for t, c in tr.visit_counts.items():
        assert abs(c / total - 0.5) < 0.05
    assert sum(tr.visit_counts.values()) == total


def test_walk_is_reproducible():
    start = CellTable.from_rows([[2, 0, 1], [0, 1, 0], [1, 0, 0]])
    s = S(3, 3, (1, 1), (1, 2), (2, 1))
    moves = MoveSet(tuple(build_generators(s)))
    a = random_walk(s, start, moves, 500, seed=42)
    b = random_walk(s, start, moves, 500, seed=42)
    assert a == b
    c = random_walk(s, start, moves, 500, seed=43)
    assert c != a


def test_walk_stays_in_fiber():
    rng = random.Random(406)
    for _ in range(10):
        s = random_subset(rng, 3, 3)
        start = random_table(rng, 3, 3, 4)
        moves = MoveSet(tuple(build_generators(s)))
        tr = random_walk(s, start, moves, 300, seed=rng.randint(0, 999))
        k = margins(s, start)
        for t in tr.visit_counts:
            assert margins(s, t) == k


def test_walk_with_no_moves_stays_put():
    start = CellTable.from_rows([[1, 0], [0, 1]])
    tr = random_walk(Subset.full(2, 2), start, MoveSet(()), 50, seed=1)
    assert tr.visit_counts == {start: 51}


def test_walk_vs_exact_mixes_on_two_table_fiber():
    start = CellTable.from_rows([[1, 0], [0, 1]])
    moves = MoveSet((QuadGen(1, 2, 1, 2),))
    tv = walk_vs_exact(Subset.full(2, 2), start, moves, 10_000, seed=3)
    assert 0 <= tv < 0.05


def test_walk_vs_exact_zero_steps_point_mass():
    start = CellTable.from_rows([[1, 0], [0, 1]])
    moves = MoveSet((QuadGen(1, 2, 1, 2),))
    tv = walk_vs_exact(Subset.full(2, 2), start, moves, 0, seed=3)
    assert tv == pytest.approx(1 - 1 / 2)


def test_walk_vs_exact_trapped_when_moves_missing():
    # Start in one component of the frozen disconnected fiber: the walk
    # can never leave, so the distance to uniform stays large.
    start = CellTable.from_rows([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    tv = walk_vs_exact(DIAG3, start, MoveSet(()), 2_000, seed=5)
    assert tv >= 0.4


# -------------------------------------------------------------------- CSV

def test_table_csv_round_trip():
    t = CellTable.from_rows([[1, 0, 2], [0, 3, 0]])
    text = table_to_csv(t)
    assert text == "1,0,2\n0,3,0\n"
    assert table_from_csv(text) == t


def test_table_csv_rejects_bad_input():
    with pytest.raises(ValueError):
        table_from_csv("1,2\n3\n")
    with pytest.raises(ValueError):
        table_from_csv("1,-2\n3,4\n")
    with pytest.raises(ValueError):
        table_from_csv("a,b\n")
