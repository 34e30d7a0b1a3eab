from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transversals.engine import brute_force_find
from transversals.generators import gen_R, random_linear, random_rowlatin
from transversals.instance import (
    Cell,
    Classification,
    InstanceError,
    ParseError,
    classify_positions,
    format_certificate,
    graphic,
    linear,
    load_instance,
    logical_view,
    materialize,
    parse_certificate,
    permute,
    restrict,
    rowlatin,
    serialize,
    uniform,
    validate_rows,
)
from transversals.matroid import LinearOracle

R43_TEXT = """\
# R_{4,3}
rowlatin 4 3 3
1 2 3
1 2 3
2 3 1
2 3 1
"""


# -- load_instance -----------------------------------------------------------


def labels(inst):
    return [[x + 1 for x in row] for row in inst.view_grid()]


def test_load_r43():
    inst = load_instance(R43_TEXT)
    assert (inst.m, inst.n, inst.k, inst.kind) == (4, 3, 3, "rowlatin")
    assert labels(inst) == [[1, 2, 3], [1, 2, 3], [2, 3, 1], [2, 3, 1]]
    assert inst.same_grid(gen_R(4, 3))


def test_load_accepts_bytes():
    assert load_instance(R43_TEXT.encode()).m == 4


def test_repeated_symbol_loads_but_fails_validation():
    inst = load_instance("rowlatin 2 3 3\n1 2 3\n1 1 2\n")
    assert validate_rows(inst) == [2]


def test_linear_gf5_round_trip_matches_hand_built_oracle():
    text = "linear 3 1 5 3 2\n1 0\n0 1\n1 1\n1\n2\n3\n"
    inst = load_instance(text)
    hand = LinearOracle([[1, 0], [0, 1], [1, 1]], 5)
    assert inst.base.p == 5
    for mask in range(8):
        s = [i for i in range(3) if mask >> i & 1]
        assert inst.base.is_independent(s) == hand.is_independent(s)
    # cells are the ground elements of the instance oracle
    assert inst.oracle.is_independent(inst.ids([(1, 1), (2, 1)]))
    assert not inst.oracle.is_independent(inst.ids([(1, 1), (2, 1), (3, 1)]))
    assert serialize(inst) == text


def test_duplicate_entries_become_parallel_cells():
    inst = uniform(3, 2, [[1, 2], [1, 3]])
    a, b = inst.cell_id((1, 1)), inst.cell_id((2, 1))
    assert a != b
    assert inst.oracle.are_parallel(a, b)
    assert inst.oracle.is_independent([a, inst.cell_id((2, 2))])


@pytest.mark.parametrize(
    "text,line",
    [
        ("", None),
        ("rowlatin 2 2\n1 2\n2 1\n", 1),
        ("bogus 1 1 1\n1\n", 1),
        ("rowlatin 2 2 2\n1 2\n2\n", 3),
        ("rowlatin 2 2 2\n1 2\n2 3\n", 3),
        ("rowlatin 2 2 2\n1 2\n", 3),
        ("rowlatin 1 2 2\n1 2\n2 1\n", 3),
        ("# c\nrowlatin 1 2 2\n1 x\n", 3),
        ("linear 1 1 4 1 1\n1\n1\n", 1),
        ("linear 1 1 5 1 1\n1\n2\n", 3),
        ("graphic 1 1 1 2\n1 3\n1\n", 2),
        ("rowlatin 0 2 2\n", 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as exc:
        load_instance(text)
    assert exc.value.line == line


def test_non_ascii_rejected():
    with pytest.raises(ParseError):
        load_instance("rowlatin 1 1 1\n1 \xe9\n".encode("latin-1"))


# -- validate_rows -------------------------------------------------------------


def test_validate_examples():
    assert validate_rows(gen_R(6, 4)) == []
    assert validate_rows(rowlatin([[1, 2, 3], [2, 2, 3], [3, 1, 2]], 3)) == [2]
    lin = linear([[1, 0], [2, 0], [0, 1]], 5, [[1, 2], [1, 3]])
    assert validate_rows(lin) == [1]


def test_graphic_row_with_cycle_is_invalid():
    tri = [(1, 2), (2, 3), (1, 3)]
    assert validate_rows(graphic(tri, 3, [[1, 2], [1, 3]])) == []
    assert validate_rows(graphic(tri, 3, [[1, 2, 3]])) == [1]


# -- classify_positions --------------------------------------------------------


def test_classify_examples():
    assert classify_positions(gen_R(5, 3), [(1, 1), (2, 2), (3, 3)]).classification is Classification.IT
    assert classify_positions(gen_R(5, 3), [(1, 1), (2, 1)]).classification is Classification.NONE
    r43 = gen_R(4, 3)
    assert classify_positions(r43, [(1, 1), (3, 2), (4, 3)]).classification is Classification.PT
    assert classify_positions(r43, [(1, 1), (3, 2)]).classification is Classification.IPT


def test_classify_out_of_bounds():
    with pytest.raises(InstanceError):
        classify_positions(gen_R(4, 3), [(5, 1)])
    view = logical_view(gen_R(5, 3), [1, 2], [1])
    with pytest.raises(InstanceError):
        classify_positions(view, [(1, 2)])


def test_certificate_ordering():
    cert = classify_positions(gen_R(5, 3), [(3, 3), (1, 1), (2, 2)])
    assert cert.positions == (Cell(1, 1), Cell(2, 2), Cell(3, 3))
    assert cert.is_it


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_rowlatin_it_iff_distinct_symbols_one_per_row_and_column(n, seed):
    rng = np.random.default_rng(seed)
    inst = random_rowlatin(2 * n - 1, n, rng.integers(n, 2 * n + 1), rng)
    rows = rng.choice(inst.m, size=n, replace=False) + 1
    cols = rng.permutation(n) + 1
    cells = list(zip(rows.tolist(), cols.tolist()))
    symbols = {inst.label(c) for c in cells}
    cert = classify_positions(inst, cells)
    assert cert.is_it == (len(symbols) == n)
    if cert.is_it:
        assert len(cert.positions) == n
        assert {c.col for c in cert.positions} == set(range(1, n + 1))
        assert inst.oracle.is_independent(inst.ids(cert.positions))


# -- views ---------------------------------------------------------------------


def test_logical_view_examples():
    r53 = gen_R(5, 3)
    view = logical_view(r53, [1, 2], [1])
    assert (view.m, view.n) == (3, 2)
    assert view.rows == (3, 4, 5) and view.cols == (2, 3)
    assert labels(view) == [[2, 3], [3, 1], [3, 1]]
    assert view.oracle is r53.oracle
    ident = logical_view(r53)
    assert ident.view_grid() == r53.view_grid()
    nested = logical_view(logical_view(r53, [1], [3]), [4], [1])
    flat = logical_view(r53, [1, 4], [1, 3])
    assert (nested.rows, nested.cols) == (flat.rows, flat.cols)


def test_view_reports_original_coordinates():
    view = logical_view(gen_R(5, 3), [1, 2], [1])
    assert view.label((3, 2)) == 2
    assert format_certificate(view, [(4, 3), (3, 2)]) == "3 2 2\n4 3 1\n"


def test_view_errors():
    r = gen_R(2, 2)
    with pytest.raises(InstanceError):
        logical_view(r, [1, 2])
    with pytest.raises(InstanceError):
        logical_view(r, [3])
    with pytest.raises(InstanceError):
        restrict(logical_view(r, [1]), rows=[1])


def test_materialize_and_restrict():
    r = gen_R(5, 3)
    sub = restrict(r, rows=[5, 1], cols=[3, 1])
    assert labels(sub) == [[1, 2], [3, 1]]
    mat = materialize(sub)
    assert mat.rows == (1, 2) and mat.view_grid() == sub.view_grid()


# -- serialization and permutations ------------------------------------------


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_serialize_round_trip_rowlatin(m, n, seed):
    rng = np.random.default_rng(seed)
    inst = random_rowlatin(m, n, n + int(rng.integers(0, 3)), rng)
    again = load_instance(serialize(inst))
    assert again.same_grid(inst) and again.k == inst.k
    assert serialize(again) == serialize(inst)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.sampled_from([2, 3, 5]), st.integers(0, 2**32 - 1))
def test_serialize_round_trip_linear(m, n, p, seed):
    inst = random_linear(m, n, p, n + 1, np.random.default_rng(seed))
    again = load_instance(serialize(inst))
    assert again.same_grid(inst)
    assert np.array_equal(again.base.vectors, inst.base.vectors)


def test_serialize_round_trip_graphic_and_uniform():
    g = graphic([(1, 2), (2, 3), (1, 3), (1, 1)], 3, [[1, 2], [3, 1]])
    u = uniform(5, 3, [[1, 2, 3], [3, 4, 5]])
    for inst in (g, u):
        assert serialize(load_instance(serialize(inst))) == serialize(inst)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_permutations_preserve_it_count(n, rng):
    for _ in range(4):
        m = 2 * n - 1 + int(rng.integers(0, 2))
        inst = random_rowlatin(m, n, n + int(rng.integers(0, n + 1)), rng)
        base = brute_force_find(inst, "count")
        for cp in permutations(range(1, n + 1)):
            rp = (rng.permutation(m) + 1).tolist()
            assert brute_force_find(permute(inst, rp, cp), "count") == base


def test_permute_moves_cells():
    r = gen_R(4, 3)
    p = permute(r, [4, 3, 2, 1], [3, 1, 2])
    assert labels(p)[0] == [1, 2, 3]
    assert labels(p)[3] == [3, 1, 2]
    with pytest.raises(InstanceError):
        permute(r, [1, 1, 2, 3], [1, 2, 3])


def test_parse_certificate():
    text = "1 1 1\n2 2\ncalls=7 depth=3\n"
    assert parse_certificate(text) == [(Cell(1, 1), 1), (Cell(2, 2), None)]
    with pytest.raises(ParseError):
        parse_certificate("1 2 3 4\n")
