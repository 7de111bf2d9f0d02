"""Property-based checks of the structural lemmas on random small graphs."""

from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from multitask import (
    Matching,
    conflict_graph,
    count_k_matchings,
    count_perfect_matchings,
    exact_alpha_all,
    format_graph,
    greedy_induced_matching,
    induced_subgraph_edge_count,
    is_induced_matching,
    new_bipartite,
    parse_graph,
    turan_guarantee,
)


@st.composite
def graph_and_matching(draw, max_side=6):
    nl = draw(st.integers(1, max_side))
    nr = draw(st.integers(1, max_side))
    cells = [(u, v) for u in range(nl) for v in range(nr)]
    edges = draw(st.lists(st.sampled_from(cells), unique=True, min_size=1))
    G = new_bipartite(nl, nr, edges)
    order = draw(st.permutations(range(G.num_edges)))
    ids, ls, rs = [], set(), set()
    for e in order:
        u, v = G.edges[e]
        if u not in ls and v not in rs:
            ids.append(e)
            ls.add(u)
            rs.add(v)
    size = draw(st.integers(1, len(ids)))
    return G, Matching.of(G, ids[:size])


@given(graph_and_matching())
def test_induced_iff_no_conflicts(gm):
    G, M = gm
    assert is_induced_matching(G, M) == (conflict_graph(G, M).num_edges == 0)


@given(graph_and_matching())
def test_contraction_degree_bound(gm):
    G, M = gm
    k = len(M.edge_ids)
    d_avg_sub = Fraction(induced_subgraph_edge_count(G, M), k)  # 2e / 2k vertices
    assert conflict_graph(G, M).average_degree() <= 2 * d_avg_sub - 2


@given(graph_and_matching())
def test_greedy_meets_turan(gm):
    G, M = gm
    C = conflict_graph(G, M)
    trace = greedy_induced_matching(G, M)
    assert len(trace) >= turan_guarantee(C.n, C.average_degree())
    assert is_induced_matching(G, trace.induced)


@given(graph_and_matching(max_side=4))
def test_scaling_proposition(gm):
    G, _ = gm
    alpha = {k: r.alpha for k, r in exact_alpha_all(G).items()}
    for k in alpha:
        for k2 in alpha:
            if k <= k2:
                assert alpha[k2] >= alpha[k] * Fraction(k, k2)


@given(graph_and_matching())
def test_text_roundtrip(gm):
    G, _ = gm
    assert parse_graph(format_graph(G)) == G


@given(graph_and_matching(max_side=5))
def test_permanent_is_top_matching_count(gm):
    G, _ = gm
    if G.is_balanced:
        assert count_perfect_matchings(G) == count_k_matchings(G, G.n_left)
