"""Generators for the graph families studied, each checked against its
defining structural properties before being returned.

Randomised generators take an explicit integer ``seed`` and draw from a
private :class:`random.Random`, so equal arguments give equal edge lists.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import (
    DegenerateParameters,
    HallViolated,
    Infeasible,
    OddLength,
    RetriesExhausted,
    VerificationFailed,
)
from .graph import BipartiteGraph, iter_bits, maximum_matching, popcount, shortest_cycle
from .heuristics import extract_regular_subgraph


def _verify_regular(G: BipartiteGraph, d: int, family: str) -> None:
    degs = G.left_degrees() + G.right_degrees()
    if any(x != d for x in degs):
        raise VerificationFailed(f"{family}: expected {d}-regular, degrees {sorted(set(degs))}")


# ------------------------------------------------------------- simple


def gen_disjoint_bicliques(copies: int, d: int) -> BipartiteGraph:
    if copies < 1 or d < 1:
        raise ValueError("copies and d must be positive")
    edges = [
        (c * d + i, c * d + j) for c in range(copies) for i in range(d) for j in range(d)
    ]
    G = BipartiteGraph(copies * d, copies * d, edges)
    _verify_regular(G, d, "biclique")
    return G


def gen_cycle(length: int) -> BipartiteGraph:
    """Cycle on ``length`` vertices; even positions go left, odd go right."""
    if length % 2 or length < 4:
        raise OddLength(f"cycle length {length} is not an even number >= 4")
    if length % 4:
        warnings.warn(f"cycle length {length} is not 0 mod 4", stacklevel=2)
    half = length // 2
    edges = [(i, i) for i in range(half)] + [((i + 1) % half, i) for i in range(half)]
    G = BipartiteGraph(half, half, edges)
    _verify_regular(G, 2, "cycle")
    if G.girth() != length:
        raise VerificationFailed("cycle: wrong girth")
    return G


def gen_path(num_edges: int) -> BipartiteGraph:
    """Path with ``num_edges`` edges, alternating left/right from the left."""
    n_left = num_edges // 2 + 1
    n_right = (num_edges + 1) // 2
    edges = []
    for i in range(num_edges):
        edges.append((i // 2, i // 2) if i % 2 == 0 else (i // 2 + 1, i // 2))
    return BipartiteGraph(n_left, n_right, edges)


HYPERCUBE_EVEN = (0, 3, 5, 6)
HYPERCUBE_ODD = (1, 2, 4, 7)


def gen_hypercube_q3() -> BipartiteGraph:
    """The 3-cube; left = even-weight corners (0,3,5,6), right = odd-weight
    corners (1,2,4,7), in that order."""
    edges = [
        (i, j)
        for i, a in enumerate(HYPERCUBE_EVEN)
        for j, b in enumerate(HYPERCUBE_ODD)
        if popcount(a ^ b) == 1
    ]
    G = BipartiteGraph(4, 4, edges)
    _verify_regular(G, 3, "hypercube")
    return G


def heawood_graph() -> BipartiteGraph:
    """Point-line incidence graph of the Fano plane: 3-regular, girth 6."""
    edges = [(i, (i + s) % 7) for i in range(7) for s in (0, 1, 3)]
    G = BipartiteGraph(7, 7, edges)
    _verify_regular(G, 3, "heawood")
    if G.girth() != 6:
        raise VerificationFailed("heawood: girth is not 6")
    return G


def gen_random_forest(n_left: int, n_right: int, seed: int, keep: float = 0.8) -> BipartiteGraph:
    """Random bipartite forest: a random spanning tree of K_{n_left,n_right}
    grown vertex by vertex, then each edge kept with probability ``keep``."""
    rng = random.Random(seed)
    verts = [("L", i) for i in range(n_left)] + [("R", j) for j in range(n_right)]
    rng.shuffle(verts)
    placed = {"L": [], "R": []}
    edges = []
    for side, x in verts:
        other = "R" if side == "L" else "L"
        if placed[other] and rng.random() < keep:
            y = rng.choice(placed[other])
            edges.append((x, y) if side == "L" else (y, x))
        placed[side].append(x)
    G = BipartiteGraph(n_left, n_right, edges)
    if G.girth() != math.inf:
        raise VerificationFailed("forest: contains a cycle")
    return G


def gen_random_bipartite(n_left: int, n_right: int, p: float, seed: int) -> BipartiteGraph:
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n_left) for v in range(n_right) if rng.random() < p]
    return BipartiteGraph(n_left, n_right, edges)


# ---------------------------------------------------------- regular


def _permutation_avoiding(n, taken, rng, tries):
    for _ in range(tries):
        perm = list(range(n))
        rng.shuffle(perm)
        if all(perm[u] not in taken[u] for u in range(n)):
            return perm
    # fall back to a randomised augmenting-path perfect matching in the
    # complement of the edges already used
    order = list(range(n))
    rng.shuffle(order)

    def nbrs(u):
        out = [v for v in range(n) if v not in taken[u]]
        rng.shuffle(out)
        return out

    pairs = maximum_matching(_Complete(n), order, nbrs)
    if len(pairs) < n:
        return None
    return [pairs[u] for u in range(n)]


class _Complete:
    def __init__(self, n):
        self.n_left = n


def gen_random_regular_bipartite(
    n: int, d: int, seed: int, tries_per_permutation: int = 2000
) -> BipartiteGraph:
    """d-regular bipartite graph with n vertices per side, built as a union
    of d random permutations.

    Each permutation is rejection-resampled until it avoids the edges of
    the previous ones; after ``tries_per_permutation`` failures it is drawn
    as a randomised perfect matching of the remaining complement, which
    always exists.  For d > n/2 the (n-d)-regular complement is sampled
    this way and inverted.
    """
    if not 0 <= d <= n:
        raise ValueError(f"need 0 <= d <= n, got d={d}, n={n}")
    if 2 * d > n:
        # dense case: sample the sparser complement and invert it
        H = gen_random_regular_bipartite(n, n - d, seed, tries_per_permutation)
        G = BipartiteGraph(n, n, [(u, v) for u in range(n) for v in range(n) if not H.has_edge(u, v)])
        _verify_regular(G, d, "random-regular")
        return G
    rng = random.Random(seed)
    taken = [set() for _ in range(n)]
    for _ in range(d):
        perm = _permutation_avoiding(n, taken, rng, tries_per_permutation)
        if perm is None:
            raise RetriesExhausted("no permutation avoids the edges already used")
        for u in range(n):
            taken[u].add(perm[u])
    G = BipartiteGraph(n, n, [(u, v) for u in range(n) for v in taken[u]])
    _verify_regular(G, d, "random-regular")
    return G


def moore_bound_total(d: int, g: int) -> int:
    """Fewest vertices (both sides) of a d-regular bipartite graph of
    girth at least g."""
    half = (g + 1) // 2  # bipartite girth is even
    return 2 * sum((d - 1) ** i for i in range(half))


def gen_high_girth_regular(
    n: int, d: int, g: int, seed: int, retries: int = 2000
) -> BipartiteGraph:
    """d-regular bipartite graph with girth >= g by resampling random
    regular graphs.  ``(7, 3, 6)`` returns the Heawood graph directly."""
    if (n, d) == (7, 3) and g <= 6:
        return heawood_graph()
    if 2 * n < moore_bound_total(d, g):
        raise RetriesExhausted(
            f"Moore bound: d={d}, girth {g} needs at least "
            f"{moore_bound_total(d, g)} vertices, have {2 * n}"
        )
    rng = random.Random(seed)
    for _ in range(retries):
        G = gen_random_regular_bipartite(n, d, rng.getrandbits(63))
        if G.girth() >= g:
            return G
    raise RetriesExhausted(f"no girth >= {g} graph in {retries} samples")


# ----------------------------------------------------------- blocks


@dataclass(frozen=True)
class BlockConstruction:
    graph: BipartiteGraph
    degree: int
    sizes: tuple[int, int]  # (|A1|, |A2|), same on the right
    t: int
    p: float
    p_clamped: bool
    seed: int


def gen_block_construction(n: int, seed: int, t_override: int | None = None) -> BlockConstruction:
    """Regular graph with d = n/2 + sqrt(n log n) made of four blocks.

    A = A1 + A2, B = B1 + B2 with |A1| - |A2| = t.  A1-B2 and A2-B1 are
    complete, A2-B2 is empty, and A1-B1 carries a t-regular subgraph
    extracted by max flow from a random graph of density
    p = min(1, 32 sqrt(log2 n / n)).  Default t = 2 floor(sqrt(n log2 n)).
    """
    t = 2 * math.isqrt(int(n * math.log2(n))) if t_override is None else t_override
    if t < 0 or (n + t) % 2:
        raise DegenerateParameters(f"n + t must be even and t >= 0 (n={n}, t={t})")
    a1 = (n + t) // 2
    a2 = n - a1
    if a2 < 1 or t > a1:
        raise DegenerateParameters(f"block sizes ({a1}, {a2}) degenerate for n={n}, t={t}")
    raw_p = 32 * math.sqrt(math.log2(n) / n)
    p = min(1.0, raw_p)
    rng = random.Random(seed)
    dense = [(u, v) for u in range(a1) for v in range(a1) if p >= 1 or rng.random() < p]
    G1p = BipartiteGraph(a1, a1, dense)
    try:
        G1 = extract_regular_subgraph(G1p, t, witness_max_n=0)
    except Infeasible as exc:
        raise Infeasible(
            f"block construction n={n}, t={t}, p={p:.4f}: {exc}", flow_value=exc.flow_value
        ) from None
    # A1 = 0..a1-1, A2 = a1..n-1 on both sides
    edges = list(G1.edges)
    edges += [(u, a1 + v) for u in range(a1) for v in range(a2)]
    edges += [(a1 + u, v) for u in range(a2) for v in range(a1)]
    G = BipartiteGraph(n, n, edges)
    _verify_regular(G, a1, "block")
    return BlockConstruction(G, a1, (a1, a2), t, p, raw_p > 1, seed)


# ---------------------------------------------------- locally sparse


@dataclass
class SparsityReport:
    size_limit: int
    density_cap: Fraction
    exhaustive: bool
    checked: int
    worst_density: Fraction
    attempts: int
    sample_only: bool = field(default=False)


def _sparsity_check(G, half, cap, exhaustive, rng, samples):
    """Max over |A'| = |B'| = j <= half of 2e(A',B')/(2j)."""
    n = G.n_left
    worst = Fraction(0)
    checked = 0
    for j in range(1, half + 1):
        if exhaustive:
            pairs = (
                (sum(1 << x for x in A), sum(1 << y for y in B))
                for A in combinations(range(n), j)
                for B in combinations(range(n), j)
            )
        else:
            pairs = (
                (sum(1 << x for x in rng.sample(range(n), j)),
                 sum(1 << y for y in rng.sample(range(n), j)))
                for _ in range(samples)
            )
        for am, bm in pairs:
            checked += 1
            dens = Fraction(G.count_edges_between(am, bm), j)
            if dens > worst:
                worst = dens
            if dens > cap:
                return False, worst, checked
    return True, worst, checked


def gen_locally_sparse(
    n: int,
    d: float,
    alpha,
    seed: int,
    size_limit: int | None = None,
    retries: int = 50,
    samples: int = 2000,
) -> tuple[BipartiteGraph, SparsityReport]:
    """Bipartite double of a random n-vertex graph with average degree d.

    Left and right are two copies of the vertex set and a-b is an edge iff
    ab was an edge of the base graph.  Verifies that every |A'| = |B'| <=
    s/2 spans average degree at most 1/alpha - 1, with s = floor(n /
    d^(1+4 alpha)) unless overridden; exhaustive for n <= 14, sampled
    otherwise.  Resamples on failure.
    """
    alpha = Fraction(alpha).limit_denominator(10**6)
    if not 0 < alpha < Fraction(1, 5):
        raise ValueError("alpha must lie in (0, 1/5)")
    m = round(n * d / 2)
    if m > n * (n - 1) // 2:
        raise DegenerateParameters(f"{m} edges do not fit on {n} vertices")
    s = size_limit if size_limit is not None else math.floor(n / d ** (1 + 4 * float(alpha)))
    cap = 1 / alpha - 1
    exhaustive = n <= 14
    rng = random.Random(seed)
    pairs = list(combinations(range(n), 2))
    for attempt in range(1, retries + 1):
        base = rng.sample(pairs, m)
        edges = [(a, b) for a, b in base] + [(b, a) for a, b in base]
        G = BipartiteGraph(n, n, edges)
        ok, worst, checked = _sparsity_check(G, s // 2, cap, exhaustive, rng, samples)
        if ok:
            return G, SparsityReport(
                size_limit=s,
                density_cap=cap,
                exhaustive=exhaustive,
                checked=checked,
                worst_density=worst,
                attempts=attempt,
                sample_only=not exhaustive,
            )
    raise VerificationFailed(f"no locally sparse sample in {retries} attempts")


# ------------------------------------------------- irregular log log n


@dataclass(frozen=True)
class LogLogConstruction:
    graph: BipartiteGraph
    layer_sizes: tuple[int, ...]
    cycle_limit: int
    protected: tuple[tuple[int, int], ...]  # B'-saturating matching kept intact
    removed: tuple[tuple[int, int], ...]
    degree_before: int
    epsilon: float
    seed: int

    @property
    def b_prime(self) -> int:
        return sum(self.layer_sizes)


def loglog_layer_sizes(n: int, epsilon: float) -> list[int]:
    """Default layer sizes floor(n / 2^(sqrt(log2 n) T^i)), i = 1..t, with
    T = 10/epsilon and t = floor(log_T(log2 n) / 4)."""
    T = 10 / epsilon
    t = math.floor(math.log(math.log2(n), T) / 4) if n > 2 else 0
    return [math.floor(n / 2 ** (math.sqrt(math.log2(n)) * T**i)) for i in range(1, t + 1)]


def gen_irregular_loglog(
    n: int,
    epsilon: float,
    seed: int,
    layer_sizes: list[int] | None = None,
    cycle_limit: int | None = None,
) -> LogLogConstruction:
    """Irregular multitasker: every left vertex takes one uniform random
    neighbour in each right layer B_i, then one edge of every cycle of
    length <= 10/epsilon is deleted.

    Right vertices are laid out as B_1, B_2, ..., then isolated padding.
    Cycles are found shortest-first from the lowest root; from each the
    lexicographically largest edge outside a fixed B'-saturating matching
    is removed, so that matching survives for later augmentation.
    """
    sizes = list(layer_sizes) if layer_sizes is not None else loglog_layer_sizes(n, epsilon)
    if not sizes or any(s < 1 for s in sizes) or sum(sizes) > n:
        raise DegenerateParameters(
            f"layer sizes {sizes} unusable for n={n}, epsilon={epsilon}; pass layer_sizes"
        )
    limit = cycle_limit if cycle_limit is not None else math.floor(10 / epsilon)
    rng = random.Random(seed)
    offsets = [sum(sizes[:i]) for i in range(len(sizes))]
    edges = set()
    for a in range(n):
        for off, size in zip(offsets, sizes):
            edges.add((a, off + rng.randrange(size)))
    G = BipartiteGraph(n, n, edges)
    degree_before = len(sizes)
    assert all(x == degree_before for x in G.left_degrees())

    # matching saturating as much of B' as possible, computed from the B side
    bprime = sum(sizes)
    flipped = BipartiteGraph(n, n, [(v, u) for u, v in G.edges])
    sat = maximum_matching(flipped, list(range(bprime)))
    protected = {(u, v) for v, u in sat.items() if v < bprime}

    current = set(G.edges)
    removed = []
    adj = {x: set() for x in range(2 * n)}
    for u, v in current:
        adj[u].add(n + v)
        adj[n + v].add(u)
    while True:
        length, cycle = _short_cycle(adj, 2 * n, limit)
        if cycle is None:
            break
        cyc_edges = []
        for i in range(len(cycle)):
            x, y = cycle[i], cycle[(i + 1) % len(cycle)]
            u, v = (x, y - n) if x < n else (y, x - n)
            cyc_edges.append((u, v))
        victim = max(e for e in cyc_edges if e not in protected)
        current.discard(victim)
        removed.append(victim)
        adj[victim[0]].discard(n + victim[1])
        adj[n + victim[1]].discard(victim[0])
    H = BipartiteGraph(n, n, sorted(current))
    if H.girth() <= limit:
        raise VerificationFailed("loglog: short cycle survived")
    return LogLogConstruction(
        graph=H,
        layer_sizes=tuple(sizes),
        cycle_limit=limit,
        protected=tuple(sorted(protected)),
        removed=tuple(removed),
        degree_before=degree_before,
        epsilon=epsilon,
        seed=seed,
    )


def _short_cycle(adj, nverts, limit):
    """First cycle of length <= limit, searching roots in increasing order
    and keeping the shortest cycle through BFS from that root."""
    lists = [sorted(adj[x]) for x in range(nverts)]
    length, cycle = shortest_cycle(lists)
    if cycle is None or length > limit:
        return None, None
    return length, cycle


def augment_with_perfect_matching(C: LogLogConstruction) -> BipartiteGraph:
    """Pair the isolated padding vertices of B with the left vertices left
    unsaturated by the protected B'-matching, giving a graph with a
    perfect matching whose new edges all have right-degree 1."""
    G = C.graph
    n = G.n_left
    bprime = C.b_prime
    covered = {v for _, v in C.protected}
    if covered != set(range(bprime)):
        raise HallViolated(
            f"no matching saturates B': {bprime - len(covered)} layer vertices unmatched"
        )
    matched_a = {u for u, _ in C.protected}
    free_a = [u for u in range(n) if u not in matched_a]
    pad = list(range(bprime, n))
    assert len(free_a) == len(pad)
    new_edges = list(zip(free_a, pad))
    H = BipartiteGraph(n, n, list(G.edges) + new_edges)
    if len(maximum_matching(H)) != n:
        raise VerificationFailed("augmented graph has no perfect matching")
    rd = H.right_degrees()
    if any(rd[v] != 1 for _, v in new_edges):
        raise VerificationFailed("augmented edge has right degree != 1")
    return H
