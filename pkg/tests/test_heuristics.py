import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from corpus import Q3_RED, corpus
from multitask import (
    Matching,
    adversarial_matching_search,
    conflict_graph,
    exact_alpha,
    exact_alpha_all,
    extract_dense_balanced_subgraph,
    extract_regular_subgraph,
    factor_criterion_violator,
    gen_cycle,
    gen_disjoint_bicliques,
    gen_hypercube_q3,
    gen_random_bipartite,
    gen_random_forest,
    gen_random_regular_bipartite,
    greedy_induced_matching,
    is_induced_matching,
    maximum_matching,
    new_bipartite,
    random_perfect_matching,
    turan_guarantee,
)
from multitask.errors import Infeasible, NoMatchingOfThatSize, NotAMatching, NotApplicable, Unbalanced
from multitask.graph import matching_from_dict


def _random_matching(G, rng):
    ids = list(range(G.num_edges))
    rng.shuffle(ids)
    out, ls, rs = [], set(), set()
    for e in ids:
        u, v = G.edges[e]
        if u not in ls and v not in rs:
            out.append(e)
            ls.add(u)
            rs.add(v)
    return Matching.of(G, out)


class TestGreedy:
    def test_q3_red_gives_one(self):
        G = gen_hypercube_q3()
        trace = greedy_induced_matching(G, Matching.from_pairs(G, Q3_RED))
        assert len(trace) == 1
        assert trace.removed_per_step == (4,)

    def test_forest_half(self):
        rng = random.Random(1)
        for s in range(40):
            G = gen_random_forest(7, 7, seed=s)
            M = _random_matching(G, rng)
            assert len(greedy_induced_matching(G, M)) >= math.ceil(len(M.edge_ids) / 2)

    def test_regular_one_over_2d(self):
        rng = random.Random(2)
        for s in range(20):
            G = gen_random_regular_bipartite(8, 3, seed=s)
            M = _random_matching(G, rng)
            assert len(greedy_induced_matching(G, M)) >= math.ceil(len(M.edge_ids) / 6)

    def test_output_induced_and_contained(self):
        rng = random.Random(3)
        for G in corpus().values():
            M = _random_matching(G, rng)
            trace = greedy_induced_matching(G, M)
            assert is_induced_matching(G, trace.induced)
            assert set(trace.picked) <= set(M.edge_ids)
            assert sum(trace.removed_per_step) == len(M.edge_ids)

    def test_tie_break_lowest_id(self):
        G = gen_cycle(8)
        M = Matching.from_pairs(G, [(i, i) for i in range(4)])
        # conflict graph is a 4-cycle: every vertex has degree 2
        assert greedy_induced_matching(G, M).picked[0] == M.edge_ids[0]

    def test_rejects_non_matching(self):
        G = gen_disjoint_bicliques(1, 2)
        with pytest.raises(NotAMatching):
            greedy_induced_matching(G, [0, 1])

    def test_json(self):
        G = gen_hypercube_q3()
        doc = greedy_induced_matching(G, Matching.from_pairs(G, Q3_RED)).to_json()
        assert doc["size"] == 1 and len(doc["picked_edges"]) == 1


@pytest.mark.parametrize("m, d, expected", [(4, 1, 2), (6, 2, 2), (5, 0, 5), (7, Fraction(1, 2), Fraction(14, 3))])
def test_turan_guarantee(m, d, expected):
    assert turan_guarantee(m, d) == expected


class TestAdversarial:
    def test_q3_finds_quarter(self):
        M, ratio = adversarial_matching_search(gen_hypercube_q3(), 4, seed=0)
        assert ratio == Fraction(1, 4) and len(M.edge_ids) == 4

    def test_c8_half(self):
        _, ratio = adversarial_matching_search(gen_cycle(8), 4, seed=3)
        assert ratio == Fraction(1, 2)

    def test_forest_never_below_half(self):
        for s in range(10):
            G = gen_random_forest(6, 6, seed=s)
            for k in range(1, len(maximum_matching(G)) + 1):
                _, ratio = adversarial_matching_search(G, k, budget=200, seed=s)
                assert ratio >= Fraction(1, 2)

    def test_sound_on_corpus(self):
        for name, G in corpus().items():
            for k, rep in exact_alpha_all(G).items():
                M, ratio = adversarial_matching_search(G, k, budget=150, seed=7)
                assert ratio >= rep.alpha, (name, k)
                assert len(M.edge_ids) == k

    def test_deterministic(self):
        G = corpus()["heawood"]
        assert adversarial_matching_search(G, 5, seed=11) == adversarial_matching_search(G, 5, seed=11)

    def test_no_such_size(self):
        with pytest.raises(NoMatchingOfThatSize):
            adversarial_matching_search(corpus()["star-3"], 2)


class TestBalancedSubgraph:
    def test_k22_forced(self):
        res = extract_dense_balanced_subgraph(gen_disjoint_bicliques(1, 2), force=True)
        assert res.b == 0.5
        assert res.avg_degree >= Fraction(1, 2) and res.max_degree <= 1
        assert res.graph.num_edges == 2

    def test_k88_forced(self):
        res = extract_dense_balanced_subgraph(gen_disjoint_bicliques(1, 8), force=True)
        assert res.b == pytest.approx(2 / 3)
        assert res.max_degree == 1
        assert res.avg_degree >= Fraction(2, 3)
        # a matching covering 2*edges vertices
        assert len(res.graph.edges) * 2 == sum(1 for x in res.graph.left_degrees() + res.graph.right_degrees() if x)

    def test_forest_not_applicable(self):
        with pytest.raises(NotApplicable):
            extract_dense_balanced_subgraph(gen_random_forest(8, 8, seed=0))

    def test_dense_graph_in_regime(self):
        # d = 60 > 4 log2 64 = 24
        G = gen_random_regular_bipartite(64, 60, seed=1)
        res = extract_dense_balanced_subgraph(G)
        b = 60 / (4 * 6)
        assert res.b == pytest.approx(b)
        assert float(res.avg_degree) >= b
        assert res.max_degree <= 2 * b
        assert set(res.graph.edges) <= set(G.edges)

    def test_forced_results_meet_their_conditions(self):
        for s in range(10):
            G = gen_random_bipartite(10, 10, 0.6, seed=s)
            try:
                res = extract_dense_balanced_subgraph(G, force=True)
            except NotApplicable:
                continue
            assert float(res.avg_degree) >= res.b - 1e-12
            assert res.max_degree <= 2 * res.b + 1e-12
            assert set(res.graph.edges) <= set(G.edges)


class TestRegularSubgraph:
    def test_k33_t1(self):
        H = extract_regular_subgraph(gen_disjoint_bicliques(1, 3), 1)
        assert H.num_edges == 3 and H.degree_stats().is_regular

    def test_k33_t2(self):
        G = gen_disjoint_bicliques(1, 3)
        H = extract_regular_subgraph(G, 2)
        assert all(x == 2 for x in H.left_degrees() + H.right_degrees())
        assert set(H.edges) <= set(G.edges)
        rest = new_bipartite(3, 3, sorted(set(G.edges) - set(H.edges)))
        assert rest.degree_stats().is_regular  # complement is a perfect matching

    def test_c8_t2_is_itself(self):
        assert extract_regular_subgraph(gen_cycle(8), 2) == gen_cycle(8)

    def test_t0(self):
        assert extract_regular_subgraph(gen_cycle(8), 0).num_edges == 0

    def test_unbalanced(self):
        with pytest.raises(Unbalanced):
            extract_regular_subgraph(corpus()["star-3"], 1)

    def test_infeasible_with_witness(self):
        # right vertex 2 has degree 1, so no 2-factor
        G = new_bipartite(3, 3, [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2)])
        with pytest.raises(Infeasible) as info:
            extract_regular_subgraph(G, 2)
        X, Y = info.value.witness
        e = sum(1 for u, v in G.edges if u not in X and v not in Y)
        assert 2 * len(X) + 2 * len(Y) + e < 2 * 3

    @given(st.integers(1, 5), st.integers(1, 3), st.integers(0, 10**6), st.floats(0.3, 0.95))
    def test_flow_agrees_with_criterion(self, n, t, seed, p):
        G = gen_random_bipartite(n, n, p, seed=seed)
        violator = factor_criterion_violator(G, t)
        try:
            H = extract_regular_subgraph(G, t)
        except Infeasible as exc:
            assert violator is not None and exc.witness is not None
        else:
            assert violator is None
            assert all(x == t for x in H.left_degrees() + H.right_degrees())


def test_random_perfect_matching():
    rng = random.Random(0)
    G = gen_random_regular_bipartite(10, 3, seed=2)
    seen = set()
    for _ in range(20):
        M = random_perfect_matching(G, rng)
        assert len(M.edge_ids) == 10
        seen.add(M.edge_ids)
    assert len(seen) > 1
