import math
import random
import warnings
from fractions import Fraction

import pytest

from multitask import (
    augment_with_perfect_matching,
    count_perfect_matchings,
    exact_alpha,
    exact_alpha_all,
    gen_block_construction,
    gen_cycle,
    gen_disjoint_bicliques,
    gen_high_girth_regular,
    gen_hypercube_q3,
    gen_irregular_loglog,
    gen_locally_sparse,
    gen_path,
    gen_random_bipartite,
    gen_random_forest,
    gen_random_regular_bipartite,
    greedy_induced_matching,
    heawood_graph,
    maximum_matching,
    random_perfect_matching,
)
from multitask.constructions import loglog_layer_sizes, moore_bound_total
from multitask.errors import DegenerateParameters, HallViolated, OddLength, RetriesExhausted


class TestBicliques:
    def test_k22(self):
        G = gen_disjoint_bicliques(1, 2)
        assert G.edges == ((0, 0), (0, 1), (1, 0), (1, 1))

    def test_two_k33(self):
        G = gen_disjoint_bicliques(2, 3)
        assert G.n_left == 6 and G.degree_stats().max_degree == 3 and G.degree_stats().is_regular
        assert exact_alpha(G, 3).alpha == Fraction(1, 3)

    def test_disjoint_edges(self):
        G = gen_disjoint_bicliques(3, 1)
        assert all(r.alpha == 1 for r in exact_alpha_all(G).values())


class TestCycles:
    def test_c8(self):
        G = gen_cycle(8)
        assert G.degree_stats().is_regular and G.girth() == 8
        assert exact_alpha(G, 4).alpha == Fraction(1, 2)

    def test_c4_is_k22(self):
        assert gen_cycle(4) == gen_disjoint_bicliques(1, 2)

    def test_c12_half(self):
        assert all(r.alpha >= Fraction(1, 2) for r in exact_alpha_all(gen_cycle(12)).values())

    def test_odd(self):
        with pytest.raises(OddLength):
            gen_cycle(7)

    def test_warns_off_residue(self):
        with pytest.warns(UserWarning):
            gen_cycle(6)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            gen_cycle(12)


def test_path():
    G = gen_path(5)
    assert G.num_edges == 5 and G.girth() == math.inf
    assert len(maximum_matching(G)) == 3


def test_hypercube():
    G = gen_hypercube_q3()
    assert G.num_edges == 12 and G.girth() == 4
    assert exact_alpha(G, 4).alpha == Fraction(1, 4)
    # the planar guarantee: never below 1/4
    assert all(r.alpha >= Fraction(1, 4) for r in exact_alpha_all(G).values())


class TestRandomRegular:
    def test_small(self):
        G = gen_random_regular_bipartite(8, 3, seed=1)
        assert G.n_left == G.n_right == 8
        assert G.degree_stats().is_regular and G.degree_stats().max_degree == 3

    def test_sixteen(self):
        assert gen_random_regular_bipartite(16, 4, seed=7).degree_stats().max_degree == 4

    def test_complete(self):
        assert gen_random_regular_bipartite(5, 5, seed=3) == gen_disjoint_bicliques(1, 5)

    def test_dense_side(self):
        G = gen_random_regular_bipartite(20, 17, seed=4)
        assert G.degree_stats().is_regular and G.degree_stats().max_degree == 17

    def test_bad_degree(self):
        with pytest.raises(ValueError):
            gen_random_regular_bipartite(3, 4, seed=0)

    def test_seed_changes_graph(self):
        graphs = {gen_random_regular_bipartite(10, 3, seed=s).edges for s in range(5)}
        assert len(graphs) > 1


class TestHighGirth:
    def test_heawood(self):
        H = heawood_graph()
        assert H.girth() == 6 and H.degree_stats().is_regular and H.n_left == 7
        assert gen_high_girth_regular(7, 3, 6, seed=0) == H

    def test_heawood_capacity(self):
        # vertex sets of size < girth induce forests, so 2k <= 5 gives 1/2
        table = {k: r.alpha for k, r in exact_alpha_all(heawood_graph()).items()}
        assert table[1] == 1 and table[2] == Fraction(1, 2)
        # a 3-matching closing a 6-cycle has a triangle as conflict graph
        assert table[3] == Fraction(1, 3)

    def test_two_regular_girth_eight(self):
        G = gen_high_girth_regular(8, 2, 8, seed=1)
        assert G.girth() >= 8 and G.degree_stats().is_regular

    def test_moore_infeasible(self):
        assert moore_bound_total(3, 8) == 30
        with pytest.raises(RetriesExhausted, match="Moore"):
            gen_high_girth_regular(4, 3, 8, seed=0)


class TestBlock:
    def test_n64(self):
        C = gen_block_construction(64, seed=1)
        assert C.degree == 51 and C.t == 38
        assert C.p == 1.0 and C.p_clamped
        G = C.graph
        assert all(x == 51 for x in G.left_degrees() + G.right_degrees())

    def test_structure(self):
        C = gen_block_construction(64, seed=2)
        a1, a2 = C.sizes
        G = C.graph
        assert not any(u >= a1 and v >= a1 for u, v in G.edges)  # A2-B2 empty
        assert all(G.has_edge(u, a1 + v) for u in range(a1) for v in range(a2))
        inner = [(u, v) for u, v in G.edges if u < a1 and v < a1]
        assert len(inner) == a1 * C.t

    def test_override_t(self):
        C = gen_block_construction(20, seed=0, t_override=4)
        assert C.sizes == (12, 8) and C.degree == 12

    def test_degenerate(self):
        with pytest.raises(DegenerateParameters):
            gen_block_construction(20, seed=0, t_override=3)

    def test_perfect_matchings_have_induced_edges(self):
        C = gen_block_construction(64, seed=3)
        G, n, d = C.graph, 64, C.degree
        rng = random.Random(0)
        scale = n / math.sqrt(d * math.log(d))
        ratios = [len(greedy_induced_matching(G, random_perfect_matching(G, rng))) / scale for _ in range(100)]
        assert min(ratios) > 0


class TestLocallySparse:
    def test_exhaustive_small(self):
        G, rep = gen_locally_sparse(12, 3, Fraction(1, 10), seed=1)
        assert rep.exhaustive and not rep.sample_only
        assert rep.worst_density <= rep.density_cap
        assert G.n_left == G.n_right == 12
        # doubled from a simple graph: symmetric edge set, no loops
        assert all(G.has_edge(v, u) for u, v in G.edges)
        assert not any(u == v for u, v in G.edges)

    def test_capacity_floor(self):
        G, _ = gen_locally_sparse(10, 2, Fraction(1, 10), seed=2)
        for k, r in exact_alpha_all(G).items():
            assert r.alpha >= Fraction(1, 20)

    def test_alpha_range(self):
        with pytest.raises(ValueError):
            gen_locally_sparse(12, 3, Fraction(1, 5), seed=0)

    def test_sampled_for_large(self):
        _, rep = gen_locally_sparse(40, 3, Fraction(1, 10), seed=0, samples=200)
        assert rep.sample_only


class TestLogLog:
    def test_overrides(self):
        C = gen_irregular_loglog(100, 0.5, seed=1, layer_sizes=[50, 20, 5])
        assert C.degree_before == 3
        assert C.graph.girth() > 20
        assert C.cycle_limit == 20
        removed = set(C.removed)
        assert not removed & set(C.graph.edges)
        assert not removed & set(C.protected)

    def test_default_sizes_degenerate(self):
        assert loglog_layer_sizes(100, 0.5) == []
        with pytest.raises(DegenerateParameters):
            gen_irregular_loglog(100, 0.5, seed=0)

    def test_capacity_sampled(self):
        for seed in range(5):
            C = gen_irregular_loglog(12, 0.1, seed=seed, layer_sizes=[6, 3, 2])
            for r in exact_alpha_all(C.graph).values():
                assert r.alpha >= Fraction(1, 3) - Fraction(1, 10)

    def test_augmentation(self):
        C = gen_irregular_loglog(100, 0.5, seed=3, layer_sizes=[20, 8, 3])
        H = augment_with_perfect_matching(C)
        assert len(maximum_matching(H)) == 100
        new = set(H.edges) - set(C.graph.edges)
        assert len(new) == 100 - C.b_prime
        rd = H.right_degrees()
        assert all(rd[v] == 1 for _, v in new)
        assert all(v >= C.b_prime for _, v in new)

    def test_augmentation_hall_violated(self):
        # a 50-vertex first layer hit by 100 random picks misses about 7 vertices
        C = gen_irregular_loglog(100, 0.5, seed=1, layer_sizes=[50, 20, 5])
        with pytest.raises(HallViolated):
            augment_with_perfect_matching(C)


class TestForests:
    def test_are_forests_with_half_capacity(self):
        for s in range(25):
            G = gen_random_forest(6, 5, seed=s)
            assert G.girth() == math.inf
            assert all(r.alpha >= Fraction(1, 2) for r in exact_alpha_all(G).values())


def test_gnp_bounds():
    assert gen_random_bipartite(4, 4, 0.0, seed=0).num_edges == 0
    assert gen_random_bipartite(4, 4, 1.0, seed=0).num_edges == 16
