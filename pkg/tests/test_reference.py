from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings

from dgmatch.graph import Edge, generate, new_graph, random_corpus
from dgmatch.reference import (
    Matching,
    OracleLimitError,
    all_matchings,
    brute_force_matching,
    candidate,
    is_valid_matching,
    locally_heaviest,
    matching_weight,
    optimal_matching,
    sequential_greedy,
)

from conftest import graphs


def enumerate_best_weight(g):
    """Independent oracle: try every edge subset, keep the heaviest matching."""
    best = 0
    es = list(g.edges)
    for k in range(len(es) + 1):
        for sub in combinations(es, k):
            ends = [x for e in sub for x in e.pair]
            if len(ends) == len(set(ends)):
                best = max(best, sum((e.w for e in sub), 0))
    return best


def test_candidate_heaviest():
    g = new_graph(3, [(0, 1, 5), (0, 2, 3)])
    assert candidate(0, {1, 2}, g) == 1


def test_candidate_empty_is_none():
    g = new_graph(3, [(0, 1, 5)])
    assert candidate(0, set(), g) is None


def test_candidate_tie_uses_edge_order():
    g = new_graph(4, [(0, 2, 5), (0, 3, 5)])
    assert candidate(0, {2, 3}, g) == 2
    # from the other side the tie is broken on the low endpoint
    g = new_graph(4, [(0, 3, 5), (1, 3, 5)])
    assert candidate(3, {0, 1}, g) == 0


def test_candidate_rejects_non_neighbour():
    g = new_graph(3, [(0, 1, 5)])
    with pytest.raises(ValueError):
        candidate(0, {2}, g)


def test_locally_heaviest_path(p4):
    assert locally_heaviest(p4.edges) == [Edge(1, 2, 3)]


def test_greedy_single_edge():
    m = sequential_greedy(new_graph(2, [(0, 1, 7)]))
    assert m.pairs == [(0, 1)] and m.total_weight == 7


def test_greedy_p4(p4):
    m = sequential_greedy(p4)
    assert m.pairs == [(1, 2)] and m.total_weight == 3
    # 3 against the enumerated optimum 4
    assert Fraction(m.total_weight, enumerate_best_weight(p4)) == Fraction(3, 4)


def test_greedy_triangle():
    g = new_graph(3, [(0, 1, 1), (1, 2, 2), (0, 2, 3)])
    m = sequential_greedy(g)
    assert m.pairs == [(0, 2)] and m.total_weight == 3
    assert enumerate_best_weight(g) == 3


def test_greedy_pick_validation(p4):
    with pytest.raises(ValueError):
        sequential_greedy(p4, pick="middle")


def test_optimal_examples(p4):
    assert optimal_matching(p4).total_weight == 4
    assert optimal_matching(p4).pairs == [(0, 1), (2, 3)]
    assert optimal_matching(new_graph(3, [])).total_weight == 0
    assert optimal_matching(new_graph(2, [(0, 1, 7)])).total_weight == 7


def test_optimal_limit():
    with pytest.raises(OracleLimitError):
        optimal_matching(generate("path", 21, 0))
    assert optimal_matching(generate("path", 21, 0), limit=21).total_weight > 0


def test_optimal_twenty_vertices_tractable():
    g = generate("random_gnp", 20, 4, p=0.3)
    m = optimal_matching(g)
    assert is_valid_matching(g, m)
    assert 2 * sequential_greedy(g).total_weight >= m.total_weight


def test_all_matchings_p4(p4):
    ms = list(all_matchings(p4))
    # {}, {01}, {12}, {23}, {01,23}
    assert len(ms) == 5
    assert sorted(m.total_weight for m in ms) == [0, 2, 2, 3, 4]


def test_is_valid_matching(p4):
    assert is_valid_matching(p4, [])
    assert not is_valid_matching(p4, [Edge(0, 1, 2), Edge(1, 2, 3)])
    assert is_valid_matching(p4, [Edge(0, 1, 2), Edge(2, 3, 2)])
    assert not is_valid_matching(p4, [Edge(0, 2, 2)])
    assert not is_valid_matching(p4, [Edge(0, 1, 99)])


def test_matching_weight():
    assert matching_weight([]) == 0
    assert matching_weight([Edge(0, 1, 2), Edge(2, 3, 3)]) == 5
    assert matching_weight([Edge(0, 1, Fraction(1, 3)), Edge(2, 3, Fraction(1, 6))]) == Fraction(1, 2)


def test_matching_equality_ignores_order():
    a = Matching.of([Edge(2, 3, 1), Edge(0, 1, 1)])
    b = Matching.of([Edge(0, 1, 1), Edge(2, 3, 1)])
    assert a == b


@settings(max_examples=300)
@given(graphs(max_n=8, rational=True))
def test_matchers_valid_and_half_bound(g):
    seq, opt = sequential_greedy(g), optimal_matching(g)
    assert is_valid_matching(g, seq) and is_valid_matching(g, opt)
    assert 2 * seq.total_weight >= opt.total_weight
    assert seq.total_weight <= opt.total_weight


@settings(max_examples=300)
@given(graphs(max_n=9))
def test_confluence_first_vs_last(g):
    # holds for any weights because the edge order is strict
    assert sequential_greedy(g, "first") == sequential_greedy(g, "last")


@settings(max_examples=150)
@given(graphs(max_n=6))
def test_oracle_matches_subset_enumeration(g):
    assert optimal_matching(g).total_weight == enumerate_best_weight(g)
    assert brute_force_matching(g).total_weight == enumerate_best_weight(g)


def test_greedy_is_maximal():
    for g in random_corpus(60, 10, 2):
        m = sequential_greedy(g)
        used = {x for e in m for x in e.pair}
        assert all(e.u in used or e.v in used for e in g.edges)
