from __future__ import annotations

from fractions import Fraction
from math import factorial

import pytest
from hypothesis import assume, given, settings, strategies as st

from circuitkit import (
    DirectedMultigraph,
    GuardExceededError,
    IntPolynomial,
    NotEulerianError,
    TransitionSystem,
    UndirectedMultigraph,
    circuit_count,
    circuit_partition_polynomial,
    disjoint_union,
    enumerate_transition_systems,
    evaluate,
    transition_system_count,
)
from circuitkit.partition import circuit_count_tally, double_factorial


# ---------------------------------------------------------------------------
# Independent circuit-count oracles: walk edges with an explicit unused set,
# one closed walk at a time. No successor permutation, no component scan.
# ---------------------------------------------------------------------------

def walk_circuits_directed(g: DirectedMultigraph, ts: TransitionSystem) -> int:
    ins: list[list[int]] = [[] for _ in range(g.vertex_count)]
    outs: list[list[int]] = [[] for _ in range(g.vertex_count)]
    for e, (u, v) in enumerate(g.edges):
        outs[u].append(e)
        ins[v].append(e)
    unused = set(range(g.edge_count))
    circuits = 0
    while unused:
        start = min(unused)
        circuits += 1
        e = start
        while True:
            unused.discard(e)
            head = g.edges[e][1]
            slot = ins[head].index(e)
            e = outs[head][ts.wirings[head][slot]]
            if e == start:
                break
    return circuits


def walk_circuits_undirected(g: UndirectedMultigraph, ts: TransitionSystem) -> int:
    match: dict[int, int] = {}
    for v in range(g.vertex_count):
        slots = g.half_edges_at(v)
        for a, b in ts.wirings[v]:
            match[slots[a]] = slots[b]
            match[slots[b]] = slots[a]
    unused = set(range(g.edge_count))
    circuits = 0
    while unused:
        start = min(unused)
        circuits += 1
        d = 2 * start  # traverse the start edge away from its first endpoint
        while True:
            unused.discard(d // 2)
            d = match[d ^ 1]  # cross the edge, continue via the vertex wiring
            if d == 2 * start:
                break
    return circuits


def walk_circuits(g, ts) -> int:
    if isinstance(g, DirectedMultigraph):
        return walk_circuits_directed(g, ts)
    return walk_circuits_undirected(g, ts)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def test_fig1_has_two_transition_systems(fig1):
    systems = list(enumerate_transition_systems(fig1))
    assert len(systems) == 2
    assert transition_system_count(fig1) == 2


def test_single_loop_has_one_system(single_loop):
    assert len(list(enumerate_transition_systems(single_loop))) == 1


def test_figure_eight_has_three_systems(figure_eight):
    systems = list(enumerate_transition_systems(figure_eight))
    assert len(systems) == 3
    assert transition_system_count(figure_eight) == 3


def test_enumeration_is_lexicographic(fig1, figure_eight):
    directed = [ts.wirings for ts in enumerate_transition_systems(fig1)]
    assert directed == sorted(directed)
    undirected = [ts.wirings for ts in enumerate_transition_systems(figure_eight)]
    assert undirected == sorted(undirected)


def test_enumeration_yields_each_system_once(corpus_graphs):
    for g in corpus_graphs.values():
        systems = list(enumerate_transition_systems(g))
        assert len(systems) == transition_system_count(g)
        assert len(set(systems)) == len(systems)


def test_range_enumeration_matches_slices(fig1, figure_eight):
    for g in (fig1, figure_eight):
        total = transition_system_count(g)
        full = list(enumerate_transition_systems(g))
        for start, stop in [(0, total), (1, total), (0, 1), (1, 2), (total, total)]:
            assert list(enumerate_transition_systems(g, start, stop)) == full[start:stop]


def test_tallies_merge_across_ranges(corpus_graphs):
    for g in corpus_graphs.values():
        total = transition_system_count(g)
        mid = total // 2
        merged: dict[int, int] = {}
        for part in (circuit_count_tally(g, 0, mid), circuit_count_tally(g, mid, total)):
            for t, c in part.items():
                merged[t] = merged.get(t, 0) + c
        assert merged == circuit_count_tally(g)


def test_unranking_matches_iteration_order():
    import itertools
    from circuitkit.partition import _iter_matchings, _unrank_matching, _unrank_permutation

    for d in range(6):
        perms = list(itertools.permutations(range(d)))
        assert [_unrank_permutation(d, r) for r in range(len(perms))] == perms
    for count in (0, 2, 4, 6, 8):
        matchings = list(_iter_matchings(count))
        assert [_unrank_matching(count, r) for r in range(len(matchings))] == matchings


def test_on_demand_unranking_beyond_materialize_limit():
    import itertools
    from circuitkit.partition import _VertexWirings, _iter_matchings

    big = _VertexWirings("directed", 9)  # 9! options, above the table limit
    assert big._table is None
    assert big[12345] == next(itertools.islice(itertools.permutations(range(9)), 12345, None))
    matchy = _VertexWirings("undirected", 14)  # 13!! options
    assert matchy._table is None
    assert matchy[999] == next(itertools.islice(_iter_matchings(14), 999, None))


def test_enumeration_guard_refuses_with_count():
    g = DirectedMultigraph(1, ((0, 0),) * 13)  # 13! systems
    with pytest.raises(GuardExceededError) as excinfo:
        next(enumerate_transition_systems(g))
    assert excinfo.value.required == factorial(13)


def test_non_eulerian_enumeration_cites_report():
    g = DirectedMultigraph(2, ((0, 1),))
    with pytest.raises(NotEulerianError) as excinfo:
        next(enumerate_transition_systems(g))
    assert excinfo.value.report.offending_vertices == ((0, 0, 1), (1, 1, 0))


# ---------------------------------------------------------------------------
# Circuit counting
# ---------------------------------------------------------------------------

def test_fig1_wirings_give_two_and_one_circuits(fig1):
    # Only vertex 2 (in-degree 2) has a choice: straight-through vs crossing.
    straight, crossing = enumerate_transition_systems(fig1)
    assert straight.wirings[2] == (0, 1)
    assert circuit_count(fig1, straight) == 2
    assert circuit_count(fig1, crossing) == 1


def test_figure_eight_matchings(figure_eight):
    by_wiring = {ts.wirings[0]: circuit_count(figure_eight, ts)
                 for ts in enumerate_transition_systems(figure_eight)}
    assert by_wiring[((0, 1), (2, 3))] == 2  # each loop on its own
    assert by_wiring[((0, 2), (1, 3))] == 1
    assert by_wiring[((0, 3), (1, 2))] == 1


def test_circuit_count_matches_walk_oracle(corpus_graphs):
    for g in corpus_graphs.values():
        for ts in enumerate_transition_systems(g):
            assert circuit_count(g, ts) == walk_circuits(g, ts)


def test_invalid_wiring_rejected(fig1):
    bad = TransitionSystem(((0,), (0,), (0, 0), (0,)))
    with pytest.raises(ValueError):
        circuit_count(fig1, bad)


# ---------------------------------------------------------------------------
# The polynomial
# ---------------------------------------------------------------------------

def test_fig1_polynomial(fig1):
    assert circuit_partition_polynomial(fig1).coefficients == (0, 1, 1)


def test_two_directed_loops_polynomial(two_loop):
    assert circuit_partition_polynomial(two_loop).coefficients == (0, 1, 1)


def test_figure_eight_polynomial(figure_eight):
    poly = circuit_partition_polynomial(figure_eight)
    assert poly.coefficients == (0, 2, 1)
    assert poly.variant == "undirected"


def test_edgeless_polynomial_is_one():
    assert circuit_partition_polynomial(DirectedMultigraph(3, ())).coefficients == (1,)
    assert circuit_partition_polynomial(UndirectedMultigraph(0, ())).coefficients == (1,)


def test_evaluate_examples():
    p = IntPolynomial((0, 1, 1))
    assert evaluate(p, 2) == Fraction(6)
    assert evaluate(p, 1) == Fraction(2)
    assert evaluate(IntPolynomial((1,)), Fraction(7, 3)) == Fraction(1)
    assert evaluate(p, Fraction(1, 2)) == Fraction(3, 4)


def test_coefficient_sum_equals_system_count(corpus_graphs):
    for g in corpus_graphs.values():
        poly = circuit_partition_polynomial(g)
        assert poly.coefficient_sum() == transition_system_count(g)
        assert poly.evaluate(1) == transition_system_count(g)


def test_top_coefficient_positive_iff_all_loops():
    loops_only = DirectedMultigraph(2, ((0, 0), (0, 0), (1, 1)))
    poly = circuit_partition_polynomial(loops_only)
    assert poly.coefficients[loops_only.edge_count] > 0
    cycle = DirectedMultigraph(2, ((0, 1), (1, 0)))
    assert circuit_partition_polynomial(cycle).coefficients == (0, 1)


def test_reversal_invariance(corpus_graphs):
    for g in corpus_graphs.values():
        if isinstance(g, DirectedMultigraph):
            assert circuit_partition_polynomial(g.reversed_edges()) == circuit_partition_polynomial(g)


def test_disjoint_union_multiplies(fig1, single_loop, two_loop):
    pairs = [(fig1, single_loop), (fig1, two_loop), (two_loop, single_loop)]
    for g1, g2 in pairs:
        product = circuit_partition_polynomial(g1) * circuit_partition_polynomial(g2)
        assert circuit_partition_polynomial(disjoint_union(g1, g2)) == product


def test_polynomial_normalization_and_output():
    p = IntPolynomial((0, 1, 1, 0, 0))
    assert p.coefficients == (0, 1, 1)
    assert p.degree == 2
    assert p.to_text() == "0 1 1"
    assert p.to_json_dict() == {"coefficients": ["0", "1", "1"]}
    assert IntPolynomial.from_json_dict(p.to_json_dict()) == p
    with pytest.raises(ValueError):
        IntPolynomial((1, -1))


def test_double_factorial_conventions():
    assert double_factorial(-1) == 1
    assert double_factorial(0) == 1
    assert double_factorial(5) == 15
    assert double_factorial(6) == 48


# ---------------------------------------------------------------------------
# Properties over random Eulerian graphs
# ---------------------------------------------------------------------------

@st.composite
def eulerian_directed(draw):
    n = draw(st.integers(1, 4))
    cycles = draw(st.lists(
        st.lists(st.integers(0, n - 1), min_size=1, max_size=4), min_size=1, max_size=3))
    edges = []
    for cycle in cycles:
        for i, u in enumerate(cycle):
            edges.append((u, cycle[(i + 1) % len(cycle)]))
    return DirectedMultigraph(n, tuple(edges))


@st.composite
def even_degree_undirected(draw):
    n = draw(st.integers(1, 4))
    cycles = draw(st.lists(
        st.lists(st.integers(0, n - 1), min_size=1, max_size=3), min_size=1, max_size=2))
    edges = []
    for cycle in cycles:
        for i, u in enumerate(cycle):
            edges.append((u, cycle[(i + 1) % len(cycle)]))
    return UndirectedMultigraph(n, tuple(edges))


@settings(max_examples=40, deadline=None)
@given(eulerian_directed())
def test_random_directed_counts_and_reversal(g):
    assume(transition_system_count(g) <= 5000)
    poly = circuit_partition_polynomial(g)
    assert poly.coefficient_sum() == transition_system_count(g)
    assert circuit_partition_polynomial(g.reversed_edges()) == poly
    if transition_system_count(g) <= 500:
        for ts in enumerate_transition_systems(g):
            assert circuit_count(g, ts) == walk_circuits_directed(g, ts)


@settings(max_examples=40, deadline=None)
@given(even_degree_undirected())
def test_random_undirected_against_walk_oracle(g):
    assume(transition_system_count(g) <= 2000)
    tally: dict[int, int] = {}
    for ts in enumerate_transition_systems(g):
        t = walk_circuits_undirected(g, ts)
        assert t == circuit_count(g, ts)
        tally[t] = tally.get(t, 0) + 1
    assert sum(tally.values()) == transition_system_count(g)
