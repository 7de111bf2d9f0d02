"""Exact ground truth by exhaustive enumeration.

Everything here is exact: capacities are :class:`fractions.Fraction`,
counts are Python ints.  Work is metered by a :class:`Budget`; exceeding it
raises :class:`BudgetExceeded` instead of returning an approximation.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

from .errors import BudgetExceeded, NoMatchingOfThatSize, Unbalanced
from .graph import (
    BipartiteGraph,
    Matching,
    as_matching,
    iter_bits,
    maximum_matching,
    popcount,
)

DEFAULT_BUDGET = 10**7
DEFAULT_PERMANENT_CAP = 20


class Budget:
    """Counter of enumerated candidate sets shared across one call."""

    def __init__(self, limit: int | None = DEFAULT_BUDGET):
        self.limit = limit
        self.used = 0

    def spend(self, n: int = 1) -> None:
        self.used += n
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(f"budget of {self.limit} candidate sets exhausted")


def _as_budget(budget) -> Budget:
    if isinstance(budget, Budget):
        return budget
    return Budget(budget)


# ------------------------------------------------------- independent sets


def _clique_cover_bound(adj: Sequence[int], cand: int) -> int:
    """Greedy clique cover size of ``cand``: an upper bound on its MIS."""
    cliques = 0
    rest = cand
    while rest:
        low = rest & -rest
        v = low.bit_length() - 1
        clique_common = adj[v] & rest
        rest ^= low
        while clique_common:
            w_low = clique_common & -clique_common
            w = w_low.bit_length() - 1
            rest &= ~w_low
            clique_common &= adj[w]
        cliques += 1
    return cliques


def max_independent_set(
    adj: Sequence[int], cand: int, budget: Budget | int | None = None
) -> tuple[int, int]:
    """Maximum independent set inside the vertex bitset ``cand``.

    ``adj`` maps vertex -> neighbour bitset (may be indexed sparsely, only
    vertices in ``cand`` are read).  Returns ``(size, witness_bitset)``.
    Branches on a highest-degree vertex (lowest id on ties) and prunes with
    a greedy clique cover.  The first maximum found in include-first DFS
    order is returned, so results are deterministic.
    """
    budget = _as_budget(budget) if budget is not None else Budget(None)
    best_size = -1
    best_set = 0

    def rec(cand: int, size: int, chosen: int) -> None:
        nonlocal best_size, best_set
        budget.spend()
        # vertices of degree <= 1 always belong to some maximum set
        while True:
            pick = -1
            for v in iter_bits(cand):
                if popcount(adj[v] & cand) <= 1:
                    pick = v
                    break
            if pick < 0:
                break
            chosen |= 1 << pick
            size += 1
            cand &= ~((1 << pick) | adj[pick])
        if not cand:
            if size > best_size:
                best_size, best_set = size, chosen
            return
        if size + _clique_cover_bound(adj, cand) <= best_size:
            return
        top, top_deg = -1, -1
        for v in iter_bits(cand):
            dv = popcount(adj[v] & cand)
            if dv > top_deg:
                top, top_deg = v, dv
        bit = 1 << top
        rec(cand & ~(bit | adj[top]), size + 1, chosen | bit)
        rec(cand & ~bit, size, chosen)

    rec(cand, 0, 0)
    return best_size, best_set


def max_independent_set_naive(adj: Sequence[int], vertices: Sequence[int]) -> int:
    """Largest independent subset by scanning all subsets (reference only)."""
    verts = list(vertices)
    for size in range(len(verts), 0, -1):
        for combo in combinations(verts, size):
            mask = 0
            for v in combo:
                mask |= 1 << v
            if all(adj[v] & mask == 0 for v in combo):
                return size
    return 0


# ------------------------------------------------------------ reports


@dataclass(frozen=True)
class CapacityReport:
    k: int
    alpha: Fraction
    worst_matching: Matching
    best_induced_in_worst: Matching
    matchings_examined: int

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "alpha": {"num": self.alpha.numerator, "den": self.alpha.denominator},
            "worst_matching": list(self.worst_matching.edge_ids),
            "witness_induced": list(self.best_induced_in_worst.edge_ids),
            "worst_matching_edges": [list(e) for e in self.worst_matching.edges],
            "witness_induced_edges": [list(e) for e in self.best_induced_in_worst.edges],
            "counts": {"matchings_examined": self.matchings_examined},
        }


def max_induced_submatching(
    G: BipartiteGraph, M, budget: Budget | int | None = DEFAULT_BUDGET
) -> tuple[int, Matching]:
    """Largest induced matching contained in ``M`` and a witness."""
    M = as_matching(G, M)
    size, witness = max_independent_set(G.conflict_masks(), M.mask, _as_budget(budget))
    return max(size, 0), Matching(G, tuple(iter_bits(witness)))


# ---------------------------------------------------------- enumeration


def iter_matchings(
    G: BipartiteGraph,
    max_size: int,
    visit: Callable[[tuple[int, ...], int], None],
    budget: Budget,
    first_edges: Sequence[int] | None = None,
) -> None:
    """Depth-first enumeration of all matchings of size 1..max_size in
    lexicographic order of their sorted edge-id tuples.

    ``visit(ids, mask)`` is called for every matching.  ``first_edges``
    restricts the smallest edge id, which partitions the search space.
    """
    edges = G.edges
    m = len(edges)
    left_inc, right_inc = G.left_incidence, G.right_incidence
    ids: list[int] = []

    def rec(start: int, blocked: int, mask: int) -> None:
        depth = len(ids)
        for e in range(start, m):
            if blocked >> e & 1:
                continue
            budget.spend()
            u, v = edges[e]
            ids.append(e)
            emask = mask | (1 << e)
            visit(tuple(ids), emask)
            if depth + 1 < max_size:
                rec(e + 1, blocked | left_inc[u] | right_inc[v], emask)
            ids.pop()

    roots = range(m) if first_edges is None else first_edges
    for e in roots:
        budget.spend()
        u, v = edges[e]
        ids.append(e)
        visit((e,), 1 << e)
        if max_size > 1:
            rec(e + 1, left_inc[u] | right_inc[v], 1 << e)
        ids.pop()


def matching_number(G: BipartiteGraph) -> int:
    return len(maximum_matching(G))


@dataclass
class _SizeBest:
    best: int = -1  # max induced size of current worst matching
    ids: tuple = ()
    witness: int = 0
    examined: int = 0


def _scan(G: BipartiteGraph, sizes: set[int], budget_limit, first_edges=None):
    budget = Budget(budget_limit)
    conf = G.conflict_masks()
    table = {k: _SizeBest() for k in sizes}
    top = max(sizes)

    def visit(ids, mask):
        k = len(ids)
        rec = table.get(k)
        if rec is None:
            return
        rec.examined += 1
        size, wit = max_independent_set(conf, mask, budget)
        if rec.best < 0 or size < rec.best:
            rec.best, rec.ids, rec.witness = size, ids, wit

    iter_matchings(G, top, visit, budget, first_edges)
    return {k: (r.best, r.ids, r.witness, r.examined) for k, r in table.items()}, budget.used


def _scan_worker(args):
    G, sizes, limit, first = args
    return _scan(G, sizes, limit, first)


def _merge(parts, sizes):
    merged = {k: (-1, (), 0, 0) for k in sizes}
    used = 0
    for table, spent in parts:
        used += spent
        for k, (best, ids, wit, n) in table.items():
            cur = merged[k]
            total = cur[3] + n
            if best >= 0 and (cur[0] < 0 or best < cur[0]):
                merged[k] = (best, ids, wit, total)
            else:
                merged[k] = (cur[0], cur[1], cur[2], total)
    return merged, used


def _run_scan(G, sizes, budget, workers):
    if workers <= 1 or G.num_edges < 2:
        return _scan(G, sizes, budget)
    m = G.num_edges
    chunks = [list(range(w, m, workers)) for w in range(workers)]
    # each partition is lexicographically ordered by its leading edge; splitting
    # by single leading edges keeps the merge tie-break equal to sequential order
    jobs = [(G, sizes, budget, [e]) for chunk in chunks for e in chunk]
    jobs.sort(key=lambda j: j[3][0])
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_scan_worker, jobs))
    merged, used = _merge(parts, sizes)
    if budget is not None and used > budget:
        raise BudgetExceeded(f"budget of {budget} candidate sets exhausted")
    return merged, used


def _report(G, k, entry) -> CapacityReport:
    best, ids, wit, examined = entry
    if best < 0:
        raise NoMatchingOfThatSize(f"graph has no matching of size {k}")
    return CapacityReport(
        k=k,
        alpha=Fraction(best, k),
        worst_matching=Matching(G, tuple(ids)),
        best_induced_in_worst=Matching(G, tuple(iter_bits(wit))),
        matchings_examined=examined,
    )


def exact_alpha(
    G: BipartiteGraph, k: int, budget: int | None = DEFAULT_BUDGET, workers: int = 1
) -> CapacityReport:
    """Multitasking capacity for matchings of size exactly ``k``.

    The minimum over all k-matchings of (largest induced sub-matching)/k.
    The witness is the lexicographically first matching attaining it; the
    result does not depend on ``workers``.
    """
    if k < 1:
        raise NoMatchingOfThatSize("k must be at least 1")
    if k > min(G.n_left, G.n_right):
        raise NoMatchingOfThatSize(f"graph has no matching of size {k}")
    table, _ = _run_scan(G, {k}, budget, workers)
    return _report(G, k, table[k])


def exact_alpha_all(
    G: BipartiteGraph, budget: int | None = DEFAULT_BUDGET, workers: int = 1
) -> dict[int, CapacityReport]:
    """``{k: report}`` for every k from 1 to the matching number, from a
    single enumeration pass."""
    nu = matching_number(G)
    if nu == 0:
        return {}
    sizes = set(range(1, nu + 1))
    table, _ = _run_scan(G, sizes, budget, workers)
    return {k: _report(G, k, table[k]) for k in sorted(sizes)}


def worst_matching_exact(G: BipartiteGraph, k: int, budget: int | None = DEFAULT_BUDGET) -> Matching:
    return exact_alpha(G, k, budget).worst_matching


# -------------------------------------------------------------- counting


def count_perfect_matchings(G: BipartiteGraph, cap: int = DEFAULT_PERMANENT_CAP) -> int:
    """Permanent of the biadjacency matrix by DP over subsets of the right
    side: ``ways[S]`` counts matchings of the first |S| left vertices onto S."""
    if not G.is_balanced:
        raise Unbalanced(f"sides differ: {G.n_left} vs {G.n_right}")
    n = G.n_left
    if n > cap:
        raise BudgetExceeded(f"n={n} exceeds permanent cap {cap}")
    ways = {0: 1}
    for u in range(n):
        nxt: dict[int, int] = {}
        adj = G.left_adj[u]
        for used, w in ways.items():
            for v in iter_bits(adj & ~used):
                key = used | (1 << v)
                nxt[key] = nxt.get(key, 0) + w
        ways = nxt
        if not ways:
            return 0
    return sum(ways.values())


def count_k_matchings(G: BipartiteGraph, k: int, budget: int | None = DEFAULT_BUDGET) -> int:
    """Number of matchings with exactly ``k`` edges.

    Include/exclude recursion over left vertices, memoised on
    (vertex, used right set).
    """
    if k < 0:
        return 0
    if k == 0:
        return 1
    meter = Budget(budget)
    n = G.n_left
    adj = G.left_adj
    memo: dict[tuple[int, int], int] = {}

    def f(i: int, used: int) -> int:
        need = k - popcount(used)
        if need == 0:
            return 1
        if n - i < need:
            return 0
        key = (i, used)
        hit = memo.get(key)
        if hit is not None:
            return hit
        meter.spend()
        total = f(i + 1, used)
        for v in iter_bits(adj[i] & ~used):
            total += f(i + 1, used | (1 << v))
        memo[key] = total
        return total

    return f(0, 0)


# ------------------------------------------------------ matching graph H


@dataclass(frozen=True)
class MatchingGraphStats:
    k: int
    alpha: Fraction
    induced_size: int
    L_count: int
    R_count: int
    containments: int
    avg_degree_L: Fraction
    lemma_triggered: bool = field(default=False)


def _count_independent_subsets(adj: Sequence[int], verts: Sequence[int], r: int) -> int:
    total = 0
    for combo in combinations(verts, r):
        mask = 0
        for v in combo:
            mask |= 1 << v
        if all(adj[v] & mask == 0 for v in combo):
            total += 1
    return total


def matching_graph_stats(
    G: BipartiteGraph, alpha, k: int, budget: int | None = DEFAULT_BUDGET
) -> MatchingGraphStats:
    """Exact statistics of the containment graph between k-matchings (side
    L) and induced ``ceil(alpha*k)``-matchings (side R)."""
    alpha = Fraction(alpha)
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    r = math.ceil(alpha * k)
    if r < 1:
        raise ValueError("ceil(alpha*k) must be at least 1")
    meter = Budget(budget)
    conf = G.conflict_masks()
    counts = {"L": 0, "R": 0, "contain": 0}

    def visit(ids, mask):
        size = len(ids)
        if size == r and all(conf[e] & mask == 0 for e in ids):
            counts["R"] += 1
        if size == k:
            counts["L"] += 1
            counts["contain"] += _count_independent_subsets(conf, ids, r)
            meter.spend(math.comb(k, r))

    iter_matchings(G, max(k, r), visit, meter)
    L = counts["L"]
    avg = Fraction(counts["contain"], L) if L else Fraction(0)
    return MatchingGraphStats(
        k=k,
        alpha=alpha,
        induced_size=r,
        L_count=L,
        R_count=counts["R"],
        containments=counts["contain"],
        avg_degree_L=avg,
        lemma_triggered=L > 0 and avg < 1,
    )
