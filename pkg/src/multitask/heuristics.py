"""Constructive procedures: greedy extraction of induced matchings,
adversarial search for bad matchings, and subgraph extraction by
Hall-tight sets and by flows."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import networkx as nx

from .errors import Infeasible, NoMatchingOfThatSize, NotApplicable, Unbalanced
from .graph import (
    BipartiteGraph,
    Matching,
    as_matching,
    conflict_graph,
    iter_bits,
    maximum_matching,
    popcount,
)
from .oracle import max_independent_set


@dataclass(frozen=True)
class GreedyTrace:
    picked: tuple[int, ...]
    removed_per_step: tuple[int, ...]
    induced: Matching

    def __len__(self):
        return len(self.picked)

    def to_json(self) -> dict:
        return {
            "picked": list(self.picked),
            "picked_edges": [list(self.induced.graph.edges[e]) for e in self.picked],
            "removed_per_step": list(self.removed_per_step),
            "size": len(self.picked),
        }


def greedy_induced_matching(G: BipartiteGraph, M) -> GreedyTrace:
    """Min-degree greedy independent set on the conflict graph of ``M``.

    Repeatedly takes a vertex of least residual degree (lowest index on
    ties) and deletes its closed neighbourhood.
    """
    C = conflict_graph(G, M)
    adj = C.adj
    residual = (1 << C.n) - 1
    picked, removed = [], []
    while residual:
        best, best_deg = -1, C.n + 1
        for v in iter_bits(residual):
            dv = popcount(adj[v] & residual)
            if dv < best_deg:
                best, best_deg = v, dv
                if dv == 0:
                    break
        closed = ((1 << best) | adj[best]) & residual
        removed.append(popcount(closed))
        residual &= ~closed
        picked.append(C.edge_id(best))
    return GreedyTrace(
        picked=tuple(picked),
        removed_per_step=tuple(removed),
        induced=Matching(G, tuple(sorted(picked))),
    )


def turan_guarantee(m, d_avg) -> Fraction:
    """m / (d_avg + 1): the independent-set size every graph on m vertices
    with average degree d_avg is guaranteed to have."""
    return Fraction(m) / (Fraction(d_avg) + 1)


# ------------------------------------------------------ adversarial search


def random_k_matching(G: BipartiteGraph, k: int, rng: random.Random) -> list[int]:
    order = list(range(G.num_edges))
    rng.shuffle(order)
    used_l = used_r = 0
    pairs: dict[int, int] = {}
    for e in order:
        u, v = G.edges[e]
        if (used_l >> u) & 1 or (used_r >> v) & 1:
            continue
        pairs[u] = v
        used_l |= 1 << u
        used_r |= 1 << v
        if len(pairs) == k:
            break
    if len(pairs) < k:
        left = list(range(G.n_left))
        rng.shuffle(left)

        def nbrs(u):
            out = G.left_neighbors(u)
            rng.shuffle(out)
            return out

        # augmenting only grows the matching, one edge per success
        full = maximum_matching(G, left, nbrs, start=pairs)
        if len(full) < k:
            raise NoMatchingOfThatSize(f"graph has no matching of size {k}")
        chosen = list(full.items())
        rng.shuffle(chosen)
        pairs = dict(chosen[:k])
    return sorted(G.edge_id(u, v) for u, v in pairs.items())


def _score(G: BipartiteGraph, ids: Sequence[int]) -> tuple[int, int]:
    conf = G.conflict_masks()
    mask = 0
    for e in ids:
        mask |= 1 << e
    size, _ = max_independent_set(conf, mask)
    conflicts = sum(popcount(conf[e] & mask) for e in ids)
    # lower is worse for multitasking: fewer induced, then more conflicts
    return size, -conflicts


def adversarial_matching_search(
    G: BipartiteGraph, k: int, budget: int = 2000, seed: int = 0
) -> tuple[Matching, Fraction]:
    """Search for a k-matching whose largest induced sub-matching is small.

    Random greedy completion followed by first-improvement single-edge
    swaps; restarts from a fresh random matching on a plateau.  ``budget``
    bounds the number of scored matchings.  The returned ratio is an upper
    bound on the exact capacity since it is attained by a real matching.
    """
    rng = random.Random(seed)
    edges = G.edges
    best_ids: list[int] | None = None
    best_score = None
    evals = 0
    while evals < budget:
        ids = random_k_matching(G, k, rng)
        score = _score(G, ids)
        evals += 1
        improved = True
        while improved and evals < budget:
            improved = False
            if score[0] == 1:
                break
            pos = list(range(k))
            rng.shuffle(pos)
            cand = list(range(G.num_edges))
            rng.shuffle(cand)
            for p in pos:
                rest = ids[:p] + ids[p + 1:]
                lu = {edges[e][0] for e in rest}
                rv = {edges[e][1] for e in rest}
                for f in cand:
                    if f in ids:
                        continue
                    u, v = edges[f]
                    if u in lu or v in rv:
                        continue
                    trial = sorted(rest + [f])
                    s = _score(G, trial)
                    evals += 1
                    if s < score:
                        ids, score, improved = trial, s, True
                        break
                    if evals >= budget:
                        break
                if improved or evals >= budget:
                    break
        if best_score is None or score < best_score:
            best_ids, best_score = ids, score
        if best_score[0] == 1:
            break
    return Matching(G, tuple(best_ids)), Fraction(best_score[0], k)


# -------------------------------------------- dense balanced subgraph


def _tight_set(adj: dict[int, int], W: int):
    """A nonempty ``U`` within bitset ``W`` (left vertices) with
    |N(U)| <= |U|, or ``None``.  ``adj`` maps left vertex -> right bitset.

    A maximum matching of W is found first; an unmatched vertex gives a
    deficient set by alternating reachability.  Otherwise each vertex is
    tried as a doubled copy: if the copy cannot be matched, the vertices
    reachable from it form a set whose neighbourhood is exactly as large.
    """
    verts = list(iter_bits(W))
    left_order = verts

    def nbrs(u):
        return list(iter_bits(adj[u]))

    shim = _AdjShim(adj)
    match = maximum_matching(shim, left_order, nbrs)
    match_r = {v: u for u, v in match.items()}

    def reach(root: int):
        seen_l, seen_r = {root}, set()
        stack = [root]
        while stack:
            u = stack.pop()
            for v in iter_bits(adj[u]):
                if v in seen_r:
                    continue
                seen_r.add(v)
                w = match_r.get(v)
                if w is None:
                    return None
                if w not in seen_l:
                    seen_l.add(w)
                    stack.append(w)
        return seen_l

    for u in verts:
        if u not in match:
            # free vertex: every reachable right vertex is matched
            seen_l, seen_r = {u}, set()
            stack = [u]
            while stack:
                x = stack.pop()
                for v in iter_bits(adj[x]):
                    if v not in seen_r:
                        seen_r.add(v)
                        w = match_r[v]
                        if w not in seen_l:
                            seen_l.add(w)
                            stack.append(w)
            return sum(1 << x for x in seen_l)
    for u in verts:
        seen = reach(u)
        if seen is not None:
            return sum(1 << x for x in seen)
    return None


class _AdjShim:
    """Minimal stand-in exposing what :func:`maximum_matching` reads."""

    def __init__(self, adj):
        self._adj = adj
        self.n_left = max(adj) + 1 if adj else 0

    def left_neighbors(self, u):
        return list(iter_bits(self._adj.get(u, 0)))


def _minimal_tight_set(adj: dict[int, int], W: int):
    """An inclusion-minimal tight set inside ``W``, or a deficient set
    when ``W`` cannot be saturated.

    With a matching saturating ``W``, the smallest tight set containing u
    is everything alternating-reachable from u, provided no free right
    vertex is reachable; the smallest of these over all u is minimal.
    """
    verts = list(iter_bits(W))
    match = maximum_matching(_AdjShim(adj), verts, lambda u: list(iter_bits(adj[u])))
    if len(match) < len(verts):
        return _tight_set(adj, W)
    match_r = {v: u for u, v in match.items()}
    matched_r = sum(1 << v for v in match_r)
    best = None
    for u in verts:
        seen_l, seen_r, frontier = 1 << u, 0, 1 << u
        while frontier:
            reach = 0
            for x in iter_bits(frontier):
                reach |= adj[x]
            new_r = reach & ~seen_r
            if new_r & ~matched_r:
                seen_l = None
                break
            seen_r |= new_r
            frontier = 0
            for v in iter_bits(new_r):
                w = match_r[v]
                if not seen_l >> w & 1:
                    frontier |= 1 << w
            seen_l |= frontier
        if seen_l is not None and (best is None or popcount(seen_l) < popcount(best)):
            best = seen_l
    return best


@dataclass(frozen=True)
class BalancedSubgraph:
    graph: BipartiteGraph
    b: float
    window: int
    start: int
    matching_sizes: tuple[int, ...]
    avg_degree: Fraction
    max_degree: int
    log_base: int = 2


def extract_dense_balanced_subgraph(G: BipartiteGraph, force: bool = False) -> BalancedSubgraph:
    """Subgraph with average degree >= b and maximum degree <= 2b, where
    b = d/(4 log2 n), d the average degree and n the per-side size.

    Strips low-degree vertices, then peels a nested sequence of matchings,
    each saturating a minimal Hall-tight set of the previous level, and
    returns the union of a window of ``floor(2b)`` consecutive matchings
    whose sizes at most halve.  Raises :class:`NotApplicable` when
    d <= 4 log2 n unless ``force`` is set, in which case the window is at
    least one matching.
    """
    n = (G.n_left + G.n_right) / 2
    d = float(G.degree_stats().d_avg)
    logn = math.log2(n) if n > 1 else 0.0
    if logn == 0 or d <= 4 * logn:
        if not force:
            raise NotApplicable(f"average degree {d:g} <= 4 log2 n = {4 * logn:g}")
    b = d / (4 * logn) if logn else d / 2
    window = max(1, math.floor(2 * b))

    # strip vertices of degree < d/2 until none remain
    ladj = {u: a for u, a in enumerate(G.left_adj)}
    radj = {v: a for v, a in enumerate(G.right_adj)}
    changed = True
    while changed:
        changed = False
        for u in list(ladj):
            if popcount(ladj[u]) < d / 2:
                for v in iter_bits(ladj[u]):
                    radj[v] &= ~(1 << u)
                del ladj[u]
                changed = True
        for v in list(radj):
            if popcount(radj[v]) < d / 2:
                for u in iter_bits(radj[v]):
                    ladj[u] &= ~(1 << v)
                del radj[v]
                changed = True
    if not ladj:
        raise NotApplicable("degree stripping emptied the graph")

    # orient so that side "A" is the larger one
    swapped = len(radj) > len(ladj)
    if swapped:
        ladj, radj = radj, ladj
    cur = dict(ladj)
    W = sum(1 << u for u in cur)
    matchings: list[dict[int, int]] = []
    while W:
        T = _minimal_tight_set({u: cur[u] for u in iter_bits(W)}, W)
        if T is None:
            break
        sub = {u: cur[u] for u in iter_bits(T)}
        nb = 0
        for a in sub.values():
            nb |= a
        if popcount(nb) != popcount(T) or nb == 0:
            break
        M = maximum_matching(_AdjShim(sub), list(iter_bits(T)), lambda u: list(iter_bits(sub[u])))
        if len(M) != popcount(T):
            break
        matchings.append(M)
        # restrict to T x N(T) and delete the matching
        cur = {u: (sub[u] & nb) & ~(1 << M[u]) for u in iter_bits(T)}
        W = T
    sizes = tuple(len(M) for M in matchings)
    if len(matchings) < window:
        raise NotApplicable(f"only {len(matchings)} matchings peeled, window is {window}")

    chosen = None
    for i in range(len(matchings) - window + 1):
        if 2 * sizes[i + window - 1] >= sizes[i]:
            chosen = i
            break
    if chosen is None:
        raise NotApplicable("no window of matchings with sizes within a factor 2")
    edges = set()
    for M in matchings[chosen: chosen + window]:
        for u, v in M.items():
            edges.add((v, u) if swapped else (u, v))
    H = BipartiteGraph(G.n_left, G.n_right, sorted(edges))
    ld, rd = H.left_degrees(), H.right_degrees()
    verts = sum(1 for x in ld + rd if x > 0)
    avg = Fraction(2 * H.num_edges, verts)
    maxdeg = max(ld + rd)
    if not (avg >= b - 1e-12 and maxdeg <= 2 * b + 1e-12):
        raise NotApplicable(f"window fails degree conditions: avg {avg}, max {maxdeg}, b {b}")
    return BalancedSubgraph(
        graph=H,
        b=b,
        window=window,
        start=chosen,
        matching_sizes=sizes,
        avg_degree=avg,
        max_degree=maxdeg,
    )


# ------------------------------------------------------ regular subgraph


def factor_criterion_violator(G: BipartiteGraph, t: int):
    """Exhaustive search for ``(X, Y)`` with
    t|X| + t|Y| + e(V1-X, V2-Y) < t*n, the obstruction to a t-factor.
    Returns sorted vertex lists or ``None``."""
    n = G.n_left
    full_r = (1 << G.n_right) - 1
    for xmask in range(1 << n):
        xs = popcount(xmask)
        comp_x = [u for u in range(n) if not (xmask >> u) & 1]
        for ymask in range(1 << G.n_right):
            ys = popcount(ymask)
            if xs + ys >= n:
                continue
            ybar = full_r & ~ymask
            e = sum(popcount(G.left_adj[u] & ybar) for u in comp_x)
            if t * (xs + ys) + e < t * n:
                return list(iter_bits(xmask)), list(iter_bits(ymask))
    return None


def extract_regular_subgraph(G: BipartiteGraph, t: int, witness_max_n: int = 8) -> BipartiteGraph:
    """Spanning t-regular subgraph via integral max flow.

    source -> left (capacity t), left -> right (capacity 1 per edge),
    right -> sink (capacity t).  On failure raises :class:`Infeasible`; for
    n <= ``witness_max_n`` it carries an exhaustively found violating pair.
    """
    if not G.is_balanced:
        raise Unbalanced(f"sides differ: {G.n_left} vs {G.n_right}")
    if t < 0:
        raise ValueError("t must be non-negative")
    n = G.n_left
    if t == 0:
        return BipartiteGraph(n, n, [])
    # integer labels: string/tuple nodes make the flow depend on the hash seed
    src, sink = 2 * n, 2 * n + 1
    F = nx.DiGraph()
    for u in range(n):
        F.add_edge(src, u, capacity=t)
    for u, v in G.edges:
        F.add_edge(u, n + v, capacity=1)
    for v in range(n):
        F.add_edge(n + v, sink, capacity=t)
    value, flow = nx.maximum_flow(F, src, sink)
    if value != t * n:
        witness = factor_criterion_violator(G, t) if n <= witness_max_n else None
        raise Infeasible(
            f"max flow {value} < {t * n}: no spanning {t}-regular subgraph",
            witness=witness,
            flow_value=value,
        )
    chosen = [(u, v) for u, v in G.edges if flow[u][n + v] == 1]
    H = BipartiteGraph(n, n, chosen)
    assert all(x == t for x in H.left_degrees() + H.right_degrees())
    return H


# ---------------------------------------------------------- sampling


def random_perfect_matching(G: BipartiteGraph, rng: random.Random) -> Matching:
    """A perfect matching found by augmenting paths in a random order.
    Not uniform over perfect matchings."""
    left = list(range(G.n_left))
    rng.shuffle(left)
    start = {}
    used = set()
    for u in left:
        opts = [v for v in G.left_neighbors(u) if v not in used]
        if opts:
            v = rng.choice(opts)
            start[u] = v
            used.add(v)

    def nbrs(u):
        out = G.left_neighbors(u)
        rng.shuffle(out)
        return out

    pairs = maximum_matching(G, left, nbrs, start=start)
    if len(pairs) != G.n_left or not G.is_balanced:
        raise NoMatchingOfThatSize("graph has no perfect matching")
    return Matching.of(G, [G.edge_id(u, v) for u, v in pairs.items()])
