import itertools
import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from corpus import Q3_RED, corpus, p4
from multitask import (
    Matching,
    conflict_graph,
    count_k_matchings,
    count_perfect_matchings,
    exact_alpha,
    exact_alpha_all,
    gen_cycle,
    gen_disjoint_bicliques,
    gen_hypercube_q3,
    gen_random_forest,
    is_induced_matching,
    matching_graph_stats,
    max_induced_submatching,
    new_bipartite,
    worst_matching_exact,
)
from multitask.errors import BudgetExceeded, NoMatchingOfThatSize, Unbalanced
from multitask.oracle import Budget, max_independent_set, max_independent_set_naive, matching_number


def brute_matchings(G, k):
    for combo in itertools.combinations(range(G.num_edges), k):
        ls = {G.edges[e][0] for e in combo}
        rs = {G.edges[e][1] for e in combo}
        if len(ls) == k and len(rs) == k:
            yield combo


def brute_alpha(G, k):
    best = None
    for combo in brute_matchings(G, k):
        size = 0
        for r in range(k, 0, -1):
            if any(is_induced_matching(G, sub) for sub in itertools.combinations(combo, r)):
                size = r
                break
        best = size if best is None else min(best, size)
    return Fraction(best, k)


@st.composite
def small_graphs(draw, max_side=4):
    nl = draw(st.integers(1, max_side))
    nr = draw(st.integers(1, max_side))
    cells = [(u, v) for u in range(nl) for v in range(nr)]
    edges = draw(st.lists(st.sampled_from(cells), unique=True, min_size=1))
    return new_bipartite(nl, nr, edges)


class TestMaxInducedSubmatching:
    def test_q3_red(self):
        G = gen_hypercube_q3()
        size, wit = max_induced_submatching(G, Matching.from_pairs(G, Q3_RED))
        assert size == 1 and len(wit.edge_ids) == 1

    def test_c8_perfect(self):
        G = gen_cycle(8)
        size, wit = max_induced_submatching(G, Matching.from_pairs(G, [(i, i) for i in range(4)]))
        assert size == 2
        assert is_induced_matching(G, wit)

    def test_forest_half(self):
        for s in range(30):
            G = gen_random_forest(6, 6, seed=s)
            for k in range(1, matching_number(G) + 1):
                M = worst_matching_exact(G, k)
                size, _ = max_induced_submatching(G, M)
                assert 2 * size >= k

    @given(small_graphs(), st.randoms(use_true_random=False))
    def test_matches_naive_scan(self, G, rnd):
        ids = list(range(G.num_edges))
        rnd.shuffle(ids)
        chosen, used_l, used_r = [], set(), set()
        for e in ids:
            u, v = G.edges[e]
            if u not in used_l and v not in used_r:
                chosen.append(e)
                used_l.add(u)
                used_r.add(v)
        M = Matching.of(G, chosen)
        C = conflict_graph(G, M)
        size, wit = max_induced_submatching(G, M)
        assert size == max_independent_set_naive(C.adj, range(C.n))
        assert set(wit.edge_ids) <= set(M.edge_ids)
        assert is_induced_matching(G, wit)


@given(st.lists(st.integers(0, 2**10 - 1), min_size=1, max_size=10))
def test_mis_vs_naive_on_arbitrary_graphs(rows):
    n = len(rows)
    # symmetrise and drop loops
    adj = [0] * n
    for i, r in enumerate(rows):
        for j in range(n):
            if j != i and r >> j & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    size, wit = max_independent_set(adj, (1 << n) - 1)
    assert size == max_independent_set_naive(adj, range(n))
    assert all(adj[v] & wit == 0 for v in range(n) if wit >> v & 1)


class TestExactAlpha:
    def test_q3(self):
        rep = exact_alpha(gen_hypercube_q3(), 4)
        assert rep.alpha == Fraction(1, 4)
        assert len(rep.worst_matching.edge_ids) == 4
        assert len(rep.best_induced_in_worst.edge_ids) == 1

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_biclique(self, d):
        assert exact_alpha(gen_disjoint_bicliques(1, d), d).alpha == Fraction(1, d)

    def test_p4(self):
        assert exact_alpha(p4(), 2).alpha == Fraction(1, 2)

    def test_c8_table(self):
        # the 2-matching {(0,0), (1,1)} is joined by the cycle edge (1,0)
        table = {k: r.alpha for k, r in exact_alpha_all(gen_cycle(8)).items()}
        assert table == {1: 1, 2: Fraction(1, 2), 3: Fraction(2, 3), 4: Fraction(1, 2)}

    def test_single_edge(self):
        table = exact_alpha_all(new_bipartite(1, 1, [(0, 0)]))
        assert {k: r.alpha for k, r in table.items()} == {1: 1}

    def test_k22_table(self):
        table = exact_alpha_all(gen_disjoint_bicliques(1, 2))
        assert [r.alpha for r in table.values()] == [1, Fraction(1, 2)]

    def test_no_matching_of_size(self):
        with pytest.raises(NoMatchingOfThatSize):
            exact_alpha(p4(), 3)
        with pytest.raises(NoMatchingOfThatSize):
            exact_alpha(corpus()["star-3"], 2)
        with pytest.raises(NoMatchingOfThatSize):
            exact_alpha(p4(), 0)

    def test_budget_exceeded(self):
        with pytest.raises(BudgetExceeded):
            exact_alpha(gen_hypercube_q3(), 4, budget=5)

    def test_witness_invariants_on_corpus(self):
        for name, G in corpus().items():
            for k, rep in exact_alpha_all(G).items():
                assert 0 < rep.alpha <= 1, name
                size, _ = max_induced_submatching(G, rep.worst_matching)
                assert Fraction(size, k) == rep.alpha, name
                assert len(rep.best_induced_in_worst.edge_ids) == size
                assert is_induced_matching(G, rep.best_induced_in_worst)
                assert set(rep.best_induced_in_worst.edge_ids) <= set(rep.worst_matching.edge_ids)

    @given(small_graphs(max_side=3))
    def test_against_brute_force(self, G):
        for k, rep in exact_alpha_all(G).items():
            assert rep.alpha == brute_alpha(G, k)

    def test_all_agrees_with_single(self):
        G = corpus()["reg-6-3-1"]
        table = exact_alpha_all(G)
        for k in table:
            single = exact_alpha(G, k)
            assert single.alpha == table[k].alpha
            assert single.worst_matching == table[k].worst_matching

    def test_worker_count_does_not_change_result(self):
        for name in ["Q3", "C12", "gnp-1"]:
            G = corpus()[name]
            a = exact_alpha_all(G, workers=1)
            b = exact_alpha_all(G, workers=2)
            assert {k: (r.alpha, r.worst_matching, r.matchings_examined) for k, r in a.items()} == {
                k: (r.alpha, r.worst_matching, r.matchings_examined) for k, r in b.items()
            }

    def test_json_schema(self):
        doc = json.loads(json.dumps(exact_alpha(gen_hypercube_q3(), 4).to_json()))
        assert doc["alpha"] == {"num": 1, "den": 4}
        assert len(doc["worst_matching"]) == 4 and len(doc["witness_induced"]) == 1
        assert doc["counts"]["matchings_examined"] == 9


class TestWorstMatching:
    def test_q3(self):
        G = gen_hypercube_q3()
        M = worst_matching_exact(G, 4)
        assert max_induced_submatching(G, M)[0] == 1

    def test_k22(self):
        G = gen_disjoint_bicliques(1, 2)
        M = worst_matching_exact(G, 2)
        assert max_induced_submatching(G, M)[0] == 1


class TestCounting:
    def test_permanent_examples(self):
        assert count_perfect_matchings(gen_disjoint_bicliques(1, 3)) == 6
        assert count_perfect_matchings(gen_cycle(8)) == 2
        assert count_perfect_matchings(gen_hypercube_q3()) == 9

    def test_permanent_brute(self):
        for G in corpus().values():
            if not G.is_balanced:
                continue
            n = G.n_left
            brute = sum(
                all(G.has_edge(u, p[u]) for u in range(n)) for p in itertools.permutations(range(n))
            )
            assert count_perfect_matchings(G) == brute

    def test_unbalanced(self):
        with pytest.raises(Unbalanced):
            count_perfect_matchings(corpus()["star-3"])

    def test_cap(self):
        G = gen_disjoint_bicliques(3, 1)
        with pytest.raises(BudgetExceeded):
            count_perfect_matchings(G, cap=2)

    def test_k_matching_examples(self):
        assert count_k_matchings(gen_cycle(8), 2) == 20
        assert count_k_matchings(p4(), 0) == 1
        assert count_k_matchings(gen_disjoint_bicliques(1, 3), 3) == 6

    def test_k_matchings_brute(self):
        for G in corpus().values():
            for k in range(0, matching_number(G) + 2):
                assert count_k_matchings(G, k) == sum(1 for _ in brute_matchings(G, k))

    def test_permanent_is_top_count(self):
        for G in corpus().values():
            if G.is_balanced:
                assert count_perfect_matchings(G) == count_k_matchings(G, G.n_left)


class TestMatchingGraphStats:
    def test_p4(self):
        s = matching_graph_stats(p4(), Fraction(1, 2), 2)
        assert (s.L_count, s.R_count, s.avg_degree_L) == (1, 3, 2)
        assert not s.lemma_triggered

    def test_k1_alpha1(self):
        for G in corpus().values():
            s = matching_graph_stats(G, 1, 1)
            assert s.avg_degree_L == 1
            assert s.L_count == s.R_count == G.num_edges

    def test_q3_consistency(self):
        G = gen_hypercube_q3()
        s = matching_graph_stats(G, Fraction(1, 2), 4)
        if s.lemma_triggered:
            assert exact_alpha(G, 4).alpha < Fraction(1, 2)

    def test_average_is_containments_over_l(self):
        G = corpus()["C12"]
        s = matching_graph_stats(G, Fraction(2, 3), 3)
        assert s.avg_degree_L == Fraction(s.containments, s.L_count)

    def test_containments_by_brute_force(self):
        G = corpus()["gnp-0"]
        k, r = 3, 2
        s = matching_graph_stats(G, Fraction(r, k), k)
        total = sum(
            sum(is_induced_matching(G, sub) for sub in itertools.combinations(M, r))
            for M in brute_matchings(G, k)
        )
        assert s.containments == total

    def test_bad_alpha(self):
        with pytest.raises(ValueError):
            matching_graph_stats(p4(), 0, 2)


def test_budget_meter():
    b = Budget(3)
    for _ in range(3):
        b.spend()
    with pytest.raises(BudgetExceeded):
        b.spend()
    unlimited = Budget(None)
    for _ in range(1000):
        unlimited.spend()


def test_randomized_matching_ratio_bounded_below_by_alpha():
    rng = random.Random(5)
    G = corpus()["heawood"]
    alpha = {k: r.alpha for k, r in exact_alpha_all(G).items()}
    for _ in range(50):
        ids = list(range(G.num_edges))
        rng.shuffle(ids)
        chosen, ls, rs = [], set(), set()
        for e in ids:
            u, v = G.edges[e]
            if u not in ls and v not in rs:
                chosen.append(e)
                ls.add(u)
                rs.add(v)
        size, _ = max_induced_submatching(G, chosen)
        assert Fraction(size, len(chosen)) >= alpha[len(chosen)]
