import pytest

from upbforge._table1 import TABLE1, parse_cell
from upbforge.combinators import Rule
from upbforge.planner import (
    BUILDABLE,
    EXISTENCE_ONLY,
    UNKNOWN,
    Closure,
    closure,
    compress,
    contiguous_top,
    wide_range,
    lift_range,
    multipartite_range,
    multipartite_plan,
    realize,
    reproduce_table1,
    theorem_ranges,
    near_square_range,
    seven_column_range,
    odd_rows_range,
    even_rows_range,
)
from upbforge.recipe import build_derivation
from upbforge.states import UpbError, missing_number
from upbforge.verifier import UPB, verify_exact

GRID = [(m, n) for m in range(3, 15) for n in range(3, 15)]


@pytest.fixture(scope="module")
def full():
    return closure(14, 14)


def test_parse_cell():
    assert parse_cell("4-6, 8") == {4, 5, 6, 8}
    assert TABLE1[7, 7] == parse_cell("4-28, 30, 36")
    assert len(TABLE1) == 78


def test_compress_round_trip():
    vals = {4, 5, 6, 8, 10, 11}
    assert compress(vals) == "4-6, 8, 10-11"
    assert compress(()) == ""


def test_table_containment(full):
    for (m, n), cell in TABLE1.items():
        assert cell <= full.values(m, n), (m, n)


def test_closure_is_symmetric(full):
    for m, n in GRID:
        assert full.values(m, n) == full.values(n, m)


def test_sanity_bound(full):
    for m, n in GRID:
        vals = full.values(m, n)
        assert not vals or max(vals) <= (m - 1) * (n - 1), (m, n)
    assert max(full.values(3, 6)) == 10


def test_monotone_in_grid_size(full):
    small = Closure(8, 8)
    for m in range(3, 9):
        for n in range(3, 9):
            assert small.values(m, n) <= full.values(m, n)


@pytest.mark.parametrize("dims,expected", [
    ((3, 3), {4}),
    ((3, 6), {4, 5, 6, 8, 10}),
    ((5, 5), set(range(4, 10)) | {12, 16}),
    ((6, 6), set(range(4, 17)) | {18, 20, 24}),
])
def test_small_cells_exact(full, dims, expected):
    assert full.values(*dims) == expected


def test_tensor_cell(full):
    assert 56 in full.values(9, 9)
    assert full.prov[(9, 9), 56].rule in (Rule.TENSOR, Rule.FOUR_SQUARE, Rule.DIRECT_SUM_A,
                                         Rule.DIRECT_SUM_B)


def test_table_report_diff():
    rep = reproduce_table1()
    assert rep.ok and rep.missed_total == 0
    assert rep.extra_total == 0
    assert rep.grid_text().splitlines()[0] == " 3 | 4"


@pytest.mark.parametrize("fn,args,expected", [
    (near_square_range, (7, 7), set(range(4, 26))),
    (seven_column_range, (10,), set(range(4, 47)) | {48, 54}),
    (wide_range, (4, 10), {4, 5, 6}),
    (odd_rows_range, (5, 10), set(range(4, 9))),
    (even_rows_range, (4, 10), set(range(4, 7))),
])
def test_guaranteed_range_literals(fn, args, expected):
    assert fn(*args) == expected


@pytest.mark.parametrize("fn,args", [
    (near_square_range, (6, 6)), (near_square_range, (7, 9)), (seven_column_range, (6,)), (odd_rows_range, (4, 10)),
    (even_rows_range, (5, 10)), (wide_range, (3, 12)), (lift_range, (7, 2)),
    (multipartite_range, ((9, 4, 2),)),
])
def test_range_hypotheses_reported(fn, args):
    with pytest.raises(UpbError) as exc:
        fn(*args)
    assert exc.value.code == "hypothesis"


def test_guaranteed_ranges_on_grid(full):
    for m, n in GRID:
        for name, rng in theorem_ranges(m, n).items():
            assert rng <= full.values(m, n), (name, m, n)


def test_guaranteed_ranges_pick_party_order():
    assert "seven_column" in theorem_ranges(7, 10) and "seven_column" in theorem_ranges(10, 7)
    assert theorem_ranges(3, 3) == {}


def test_contiguous_top():
    assert contiguous_top({4, 5, 6, 8}) == 6
    assert contiguous_top({5}) == 3


@pytest.mark.parametrize("dims,must", [
    ((10, 4, 2), set(range(4, 13))),
    ((3, 3, 2), {4, 8}),
    ((3, 3, 3), {4, 8, 12}),
])
def test_multipartite_plan(dims, must):
    assert must <= set(multipartite_plan(dims).values)


@pytest.mark.parametrize("K", [2, 3, 4])
def test_multipartite_lift_containment(full, K):
    L = contiguous_top(full.values(10, 4))
    plan = set(multipartite_plan((10, 4, K)).values)
    assert lift_range(L, K) <= plan
    assert multipartite_range((10, 4, K)) <= plan


def test_multipartite_needs_three_parties():
    with pytest.raises(UpbError):
        multipartite_plan((3, 3))


def test_realize_examples():
    r = realize((3, 6), 8)
    assert r.status == BUILDABLE and r.derivation.rule is Rule.DIRECT_SUM_B
    assert [c.label for c in r.derivation.children] == ["tiles3x3", "tiles3x3"]
    r = realize((6, 6), 16)
    assert r.status == BUILDABLE and r.derivation.rule is Rule.FOUR_SQUARE
    assert len(r.derivation.children) == 4
    assert realize((3, 3), 5).status == UNKNOWN
    r = realize((3, 4), 5)
    assert r.status == EXISTENCE_ONLY and not r.derivation.buildable


@pytest.mark.parametrize("dims", [(3, 4), (3, 6), (4, 4), (3, 7), (4, 6), (6, 3), (3, 3, 2)])
def test_realize_verify_coherence(dims):
    top = closure(14, 14, buildable_only=True)
    if len(dims) == 2:
        ks = sorted(top.values(*dims))
    else:
        ks = sorted(multipartite_plan(dims, buildable_only=True).values)
    assert ks
    for k in ks:
        r = realize(dims, k)
        assert r.status == BUILDABLE
        u = build_derivation(r.derivation)
        assert missing_number(u) == k and u.dims.dims == dims
        if len(u.states) <= 20:
            assert verify_exact(u).verdict == UPB, (dims, k)


def test_imported_fact_extends_closure(tiles):
    from upbforge.combinators import direct_sum_b

    u = direct_sum_b(tiles, tiles)
    doc_u = type(u)(u.dims, u.states, label="mine", source="import:mine.json")
    cl = Closure(6, 6, [doc_u], buildable_only=True)
    assert 8 in cl.values(3, 6)
    assert "mine" in cl.imports
