from itertools import chain, combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transversals.matroid import (
    ContractError,
    GraphicOracle,
    IndependenceOracle,
    InvalidElementError,
    LinearOracle,
    MatroidError,
    PartitionOracle,
    UniformOracle,
    axiom_fixtures,
    verify_axioms,
)


def subsets(items):
    items = list(items)
    return chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))


def brute_rank(oracle, s):
    return max(len(t) for t in subsets(s) if oracle._independent(tuple(sorted(t))))


def minimal_dependent_subsets(oracle, s):
    dep = [set(t) for t in subsets(s) if t and not oracle._independent(tuple(sorted(t)))]
    return [d for d in dep if not any(o < d for o in dep)]


GF2_TRIANGLE = LinearOracle([[1, 0], [0, 1], [1, 1]], 2)


# -- is_independent ---------------------------------------------------------


def test_empty_set_independent():
    for _, oracle in axiom_fixtures():
        assert oracle.is_independent([])


def test_partition_parallel_pair_dependent():
    o = PartitionOracle([1, 1, 2])
    assert not o.is_independent([0, 1])
    assert o.is_independent([0, 2])


def test_gf2_triangle_dependent():
    assert not GF2_TRIANGLE.is_independent([0, 1, 2])
    assert GF2_TRIANGLE.is_independent([0, 2])


def test_invalid_element():
    with pytest.raises(InvalidElementError):
        GF2_TRIANGLE.is_independent([3])
    with pytest.raises(InvalidElementError):
        GF2_TRIANGLE.is_independent([-1])


def test_call_counter_counts_base_queries():
    o = UniformOracle(5, 2)
    assert o.calls == 0
    o.is_independent([0, 1])
    o.is_independent([0, 1, 2])
    assert o.calls == 2
    o.rank([0, 1, 2, 3])
    assert o.calls == 6  # one query per element
    twin = o.fork()
    assert twin.calls == 0 and o.calls == 6
    twin.is_independent([1])
    assert o.calls == 6


# -- rank ------------------------------------------------------------------


def test_rank_examples():
    assert GF2_TRIANGLE.rank([]) == 0
    assert GF2_TRIANGLE.rank([0, 1, 2]) == 2
    # a row of R_{4,3} in the symbol partition matroid
    assert PartitionOracle([0, 1, 2]).rank([0, 1, 2]) == 3


def test_rank_matches_brute_force_on_fixtures():
    for _, o in axiom_fixtures():
        if o.ground_size > 8:
            continue
        for s in subsets(range(o.ground_size)):
            assert o.rank(s) == brute_rank(o, s)


@pytest.mark.parametrize("name,oracle", [f for f in axiom_fixtures() if f[1].ground_size <= 8])
def test_rank_monotone_and_submodular(name, oracle):
    g = oracle.ground_size
    r = {}
    for mask in range(1 << g):
        r[mask] = oracle.rank([i for i in range(g) if mask >> i & 1])
    for a in range(1 << g):
        for b in range(1 << g):
            if a & b == a:
                assert r[a] <= r[b]
            assert r[a] + r[b] >= r[a | b] + r[a & b]


# -- in_span ---------------------------------------------------------------


def test_in_span_examples():
    assert GF2_TRIANGLE.in_span([0], 0)
    assert UniformOracle(4, 2).in_span([0, 1], 2)
    gf3 = LinearOracle([[1, 0], [0, 1]], 3)
    assert not gf3.in_span([0], 1)
    assert not gf3.in_span([0], 1, independent=True)


@pytest.mark.parametrize("name,oracle", [f for f in axiom_fixtures() if f[1].ground_size <= 8])
def test_in_span_agrees_with_rank(name, oracle):
    g = oracle.ground_size
    for s in subsets(range(g)):
        rs = oracle.rank(s)
        indep = len(s) == rs
        for x in range(g):
            expected = oracle.rank(set(s) | {x}) == rs
            assert oracle.in_span(s, x) == expected
            if indep:
                assert oracle.in_span(s, x, independent=True) == expected


# -- fundamental circuits ----------------------------------------------------


def test_fundamental_circuit_examples():
    part = PartitionOracle([1, 2, 1])  # a1=0, b=1, a2=2
    assert part.fundamental_circuit([0, 1], 2) == (0, 2)
    assert UniformOracle(4, 2).fundamental_circuit([0, 1], 2) == (0, 1, 2)
    assert GF2_TRIANGLE.fundamental_circuit([0, 1], 2) == (0, 1, 2)


def test_fundamental_circuit_query_budget():
    o = UniformOracle(6, 4)
    o.fundamental_circuit([0, 1, 2, 3], 5)
    assert o.calls == 4 + 1


def test_fundamental_circuit_contract_errors():
    with pytest.raises(ContractError):
        GF2_TRIANGLE.fundamental_circuit([0], 1)  # {0,1} independent
    with pytest.raises(ContractError):
        PartitionOracle([0, 0, 1]).fundamental_circuit([0, 1], 2, strict=True)  # base dependent
    with pytest.raises(ContractError):
        GF2_TRIANGLE.fundamental_circuit([0, 1], 1)


def test_fundamental_circuit_of_a_loop():
    lin = LinearOracle([[1, 0], [0, 0]], 5)
    assert lin.fundamental_circuit([0], 1) == (1,)
    assert lin.fundamental_circuit([], 1) == (1,)


@pytest.mark.parametrize("name,oracle", [f for f in axiom_fixtures() if f[1].ground_size <= 10])
def test_fundamental_circuit_is_unique_minimal_dependent(name, oracle):
    g = oracle.ground_size
    checked = 0
    for i in subsets(range(g)):
        if not oracle._independent(tuple(i)):
            continue
        for e in range(g):
            if e in i or oracle._independent(tuple(sorted(set(i) | {e}))):
                continue
            circuits = minimal_dependent_subsets(oracle, set(i) | {e})
            assert len(circuits) == 1
            assert set(oracle.fundamental_circuit(i, e)) == circuits[0]
            checked += 1
            if checked > 300:
                return


# -- parallelism -------------------------------------------------------------


def test_are_parallel_examples():
    part = PartitionOracle([1, 1, 2])
    assert part.are_parallel(0, 1)
    assert not part.are_parallel(0, 2)
    assert part.are_parallel(2, 2)
    u13 = UniformOracle(3, 1)
    assert all(u13.are_parallel(a, b) for a in range(3) for b in range(3))


def test_loops_are_not_parallel():
    lin = LinearOracle([[0, 0], [1, 0]], 5)
    assert lin.is_loop(0)
    assert not lin.are_parallel(0, 1)
    g = GraphicOracle([(1, 1), (1, 2), (1, 2)], 2)
    assert g.is_loop(0)
    assert g.are_parallel(1, 2)


# -- axioms --------------------------------------------------------------------


def test_verify_axioms_examples():
    assert verify_axioms(PartitionOracle([0, 0, 1, 1, 2, 2])).passed
    assert verify_axioms(UniformOracle(5, 2)).passed


@pytest.mark.parametrize("name,oracle", axiom_fixtures())
def test_fixture_battery_passes(name, oracle):
    assert oracle.ground_size <= 12
    report = verify_axioms(oracle)
    assert report.passed, report.summary()


class CorruptOracle(IndependenceOracle):
    """Claims {0} dependent while {0, 1} is independent."""

    kind = "corrupt"

    def _independent(self, ids):
        return ids != (0,) and len(ids) <= 2


def test_corrupt_oracle_hereditary_violation():
    report = verify_axioms(CorruptOracle(4))
    assert not report.passed
    assert any(small == (0,) for _, small in report.hereditary)


class NoExchangeOracle(IndependenceOracle):
    """Independent sets {}, {0}, {1}, {2}, {1,2}: {0} cannot grow from {1,2}."""

    kind = "broken"

    def _independent(self, ids):
        return ids in [(), (0,), (1,), (2,), (1, 2)]


def test_exchange_violation_reported():
    report = verify_axioms(NoExchangeOracle(3))
    assert not report.hereditary
    assert report.exchange and report.exchange[0] == ((0,), (1, 2))


def test_verify_axioms_refuses_large_ground_set():
    with pytest.raises(MatroidError):
        verify_axioms(UniformOracle(13, 2))
    assert verify_axioms(UniformOracle(13, 2), limit=13).passed


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 8), st.data())
def test_random_graphic_oracles_are_matroids(nedges, data):
    v = data.draw(st.integers(1, 5))
    edges = data.draw(st.lists(st.tuples(st.integers(1, v), st.integers(1, v)), min_size=nedges, max_size=nedges))
    assert verify_axioms(GraphicOracle(edges, v)).passed


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 8), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_random_linear_oracles_are_matroids(p, g, d, seed):
    vecs = np.random.default_rng(seed).integers(0, p, size=(g, d))
    assert verify_axioms(LinearOracle(vecs, p)).passed


def test_linear_rejects_composite_modulus():
    with pytest.raises(ValueError):
        LinearOracle([[1]], 4)
    with pytest.raises(ValueError):
        LinearOracle([[1]], 2**31 + 11)
