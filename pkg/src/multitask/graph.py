"""Immutable bipartite graphs, matchings and conflict graphs.

Vertices on each side are numbered from 0.  Edges are kept sorted by
(left, right) and referred to by their position in that order, so edge
ids are stable for a given edge set.  Adjacency is stored as Python ints
used as bitsets, which keeps conflict queries cheap during enumeration.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import (
    DuplicateEdge,
    FormatError,
    IndexOutOfRange,
    InvalidEdgeId,
    NotAMatching,
)

Edge = tuple[int, int]


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class BipartiteGraph:
    """A simple bipartite graph with sides of size ``n_left`` and ``n_right``.

    Instances are immutable.  Use :func:`new_bipartite` or the constructor;
    duplicate edges are rejected rather than merged.
    """

    __slots__ = (
        "_n_left",
        "_n_right",
        "_edges",
        "_index",
        "_left_adj",
        "_right_adj",
        "_left_inc",
        "_right_inc",
        "_conflicts",
    )

    def __init__(self, n_left: int, n_right: int, edges: Iterable[Sequence[int]]):
        if n_left < 0 or n_right < 0:
            raise IndexOutOfRange("side sizes must be non-negative")
        pairs = [(int(u), int(v)) for u, v in edges]
        for u, v in pairs:
            if not (0 <= u < n_left and 0 <= v < n_right):
                raise IndexOutOfRange(
                    f"edge ({u}, {v}) out of range for sides {n_left}x{n_right}"
                )
        counts = Counter(pairs)
        dupes = sorted((e, c) for e, c in counts.items() if c > 1)
        if dupes:
            raise DuplicateEdge(*dupes[0])
        ordered = tuple(sorted(counts))
        left_adj = [0] * n_left
        right_adj = [0] * n_right
        left_inc = [0] * n_left
        right_inc = [0] * n_right
        for i, (u, v) in enumerate(ordered):
            left_adj[u] |= 1 << v
            right_adj[v] |= 1 << u
            left_inc[u] |= 1 << i
            right_inc[v] |= 1 << i
        set_ = object.__setattr__
        set_(self, "_n_left", n_left)
        set_(self, "_n_right", n_right)
        set_(self, "_edges", ordered)
        set_(self, "_index", {e: i for i, e in enumerate(ordered)})
        set_(self, "_left_adj", tuple(left_adj))
        set_(self, "_right_adj", tuple(right_adj))
        set_(self, "_left_inc", tuple(left_inc))
        set_(self, "_right_inc", tuple(right_inc))
        set_(self, "_conflicts", None)

    def __setattr__(self, name, value):
        raise AttributeError("BipartiteGraph is immutable")

    def __reduce__(self):
        return (BipartiteGraph, (self._n_left, self._n_right, self._edges))

    @property
    def n_left(self) -> int:
        return self._n_left

    @property
    def n_right(self) -> int:
        return self._n_right

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    @property
    def left_adj(self) -> tuple[int, ...]:
        """Bitset of right neighbours for each left vertex."""
        return self._left_adj

    @property
    def right_adj(self) -> tuple[int, ...]:
        """Bitset of left neighbours for each right vertex."""
        return self._right_adj

    @property
    def left_incidence(self) -> tuple[int, ...]:
        """Bitset of incident edge ids for each left vertex."""
        return self._left_inc

    @property
    def right_incidence(self) -> tuple[int, ...]:
        return self._right_inc

    @property
    def is_balanced(self) -> bool:
        return self._n_left == self._n_right

    def edge_id(self, u: int, v: int) -> int:
        try:
            return self._index[(u, v)]
        except KeyError:
            raise InvalidEdgeId(f"({u}, {v}) is not an edge") from None

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._index

    def left_neighbors(self, u: int) -> list[int]:
        return list(iter_bits(self._left_adj[u]))

    def right_neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self._right_adj[v]))

    def left_degrees(self) -> list[int]:
        return [popcount(a) for a in self._left_adj]

    def right_degrees(self) -> list[int]:
        return [popcount(a) for a in self._right_adj]

    def conflict_masks(self) -> tuple[int, ...]:
        """For every edge, the bitset of vertex-disjoint edges joined to it
        by a third edge.  Computed once and cached."""
        if self._conflicts is None:
            masks = []
            for u, v in self._edges:
                near = 0
                for a in iter_bits(self._right_adj[v]):
                    near |= self._left_inc[a]
                for b in iter_bits(self._left_adj[u]):
                    near |= self._right_inc[b]
                near &= ~(self._left_inc[u] | self._right_inc[v])
                masks.append(near)
            object.__setattr__(self, "_conflicts", tuple(masks))
        return self._conflicts

    def edge_subgraph(self, edge_ids: Iterable[int]) -> "BipartiteGraph":
        """Spanning subgraph keeping only the given edges."""
        return BipartiteGraph(
            self._n_left, self._n_right, [self._edges[i] for i in sorted(set(edge_ids))]
        )

    def count_edges_between(self, left_mask: int, right_mask: int) -> int:
        """Number of edges with left end in ``left_mask`` and right end in
        ``right_mask`` (both bitsets)."""
        return sum(
            popcount(self._left_adj[u] & right_mask) for u in iter_bits(left_mask)
        )

    def to_adjacency_lists(self) -> list[list[int]]:
        """Adjacency over the combined vertex set; right vertex ``v`` is
        numbered ``n_left + v``."""
        off = self._n_left
        adj: list[list[int]] = [[] for _ in range(self._n_left + self._n_right)]
        for u, v in self._edges:
            adj[u].append(off + v)
            adj[off + v].append(u)
        return adj

    def degree_stats(self) -> "DegreeStats":
        return degree_stats(self)

    def girth(self) -> float:
        return girth(self)

    def __eq__(self, other):
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (self._n_left, self._n_right, self._edges) == (
            other._n_left,
            other._n_right,
            other._edges,
        )

    def __hash__(self):
        return hash((self._n_left, self._n_right, self._edges))

    def __repr__(self):
        return (
            f"BipartiteGraph(n_left={self._n_left}, n_right={self._n_right}, "
            f"m={len(self._edges)})"
        )


def new_bipartite(n_left: int, n_right: int, edges: Iterable[Sequence[int]]) -> BipartiteGraph:
    return BipartiteGraph(n_left, n_right, edges)


@dataclass(frozen=True)
class DegreeStats:
    d_avg: Fraction
    max_degree: int
    min_degree: int
    left_avg: Fraction
    right_avg: Fraction
    is_regular: bool


def degree_stats(G: BipartiteGraph) -> DegreeStats:
    """Degree summary.  ``d_avg`` is 2|E| over the total vertex count, which
    is the per-side average when the sides are balanced."""
    ld, rd = G.left_degrees(), G.right_degrees()
    degs = ld + rd
    m = G.num_edges
    total = G.n_left + G.n_right
    return DegreeStats(
        d_avg=Fraction(2 * m, total) if total else Fraction(0),
        max_degree=max(degs, default=0),
        min_degree=min(degs, default=0),
        left_avg=Fraction(m, G.n_left) if G.n_left else Fraction(0),
        right_avg=Fraction(m, G.n_right) if G.n_right else Fraction(0),
        is_regular=len(set(degs)) <= 1,
    )


# ---------------------------------------------------------------- matchings


@dataclass(frozen=True)
class Matching:
    """A set of pairwise vertex-disjoint edges of ``graph``, by edge id."""

    graph: BipartiteGraph
    edge_ids: tuple[int, ...]

    @classmethod
    def of(cls, G: BipartiteGraph, edge_ids: Iterable[int]) -> "Matching":
        ids = tuple(sorted(int(i) for i in edge_ids))
        if not is_matching(G, ids):
            raise NotAMatching(f"edges {ids} share a vertex")
        return cls(G, ids)

    @classmethod
    def from_pairs(cls, G: BipartiteGraph, pairs: Iterable[Sequence[int]]) -> "Matching":
        return cls.of(G, [G.edge_id(u, v) for u, v in pairs])

    def __len__(self):
        return len(self.edge_ids)

    def __iter__(self):
        return iter(self.edge_ids)

    @property
    def edges(self) -> list[Edge]:
        return [self.graph.edges[i] for i in self.edge_ids]

    @property
    def mask(self) -> int:
        out = 0
        for i in self.edge_ids:
            out |= 1 << i
        return out

    def subset(self, edge_ids: Iterable[int]) -> "Matching":
        ids = tuple(sorted(edge_ids))
        if not set(ids) <= set(self.edge_ids):
            raise NotAMatching("not a sub-matching")
        return Matching(self.graph, ids)


def _check_ids(G: BipartiteGraph, ids: Iterable[int]) -> list[int]:
    out = []
    for i in ids:
        if not isinstance(i, int) or not 0 <= i < G.num_edges:
            raise InvalidEdgeId(f"edge id {i!r} out of range (m={G.num_edges})")
        out.append(i)
    return out


def is_matching(G: BipartiteGraph, edge_ids: Iterable[int]) -> bool:
    ids = _check_ids(G, edge_ids)
    if len(set(ids)) != len(ids):
        return False
    lefts = {G.edges[i][0] for i in ids}
    rights = {G.edges[i][1] for i in ids}
    return len(lefts) == len(ids) and len(rights) == len(ids)


def as_matching(G: BipartiteGraph, M) -> Matching:
    if isinstance(M, Matching):
        if M.graph is not G and M.graph != G:
            raise NotAMatching("matching belongs to a different graph")
        return M
    return Matching.of(G, M)


@dataclass(frozen=True)
class ConflictGraph:
    """Graph on the edges of a matching; ``adj[i]`` is a bitset over local
    indices ``0..len(matching)-1``."""

    matching: Matching
    adj: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.adj)

    @property
    def num_edges(self) -> int:
        return sum(popcount(a) for a in self.adj) // 2

    def degree(self, i: int) -> int:
        return popcount(self.adj[i])

    def average_degree(self) -> Fraction:
        if not self.adj:
            return Fraction(0)
        return Fraction(2 * self.num_edges, self.n)

    def edge_list(self) -> list[tuple[int, int]]:
        return [(i, j) for i, a in enumerate(self.adj) for j in iter_bits(a) if i < j]

    def edge_id(self, i: int) -> int:
        """Edge id in the parent graph of local vertex ``i``."""
        return self.matching.edge_ids[i]


def conflict_graph(G: BipartiteGraph, M) -> ConflictGraph:
    M = as_matching(G, M)
    conf = G.conflict_masks()
    ids = M.edge_ids
    pos = {e: i for i, e in enumerate(ids)}
    adj = []
    for e in ids:
        local = 0
        for f in iter_bits(conf[e] & M.mask):
            local |= 1 << pos[f]
        adj.append(local)
    return ConflictGraph(M, tuple(adj))


def is_induced_matching(G: BipartiteGraph, M) -> bool:
    M = as_matching(G, M)
    conf = G.conflict_masks()
    mask = M.mask
    return all(conf[e] & mask == 0 for e in M.edge_ids)


def induced_subgraph_edge_count(G: BipartiteGraph, M) -> int:
    """|E(G[M])|: edges among the 2|M| endpoints of the matching."""
    M = as_matching(G, M)
    lmask = rmask = 0
    for u, v in M.edges:
        lmask |= 1 << u
        rmask |= 1 << v
    return G.count_edges_between(lmask, rmask)


def maximum_matching(
    G: BipartiteGraph,
    left_order: Sequence[int] | None = None,
    neighbor_order=None,
    start: dict[int, int] | None = None,
) -> dict[int, int]:
    """Maximum matching by repeated augmenting paths, as a left->right dict.

    ``left_order`` and ``neighbor_order(u) -> list`` fix the search order,
    which lets callers draw varied matchings from a seeded RNG.  ``start``
    is an initial matching that is only ever augmented, never shrunk.
    """
    order = list(range(G.n_left)) if left_order is None else list(left_order)
    nbrs = neighbor_order or G.left_neighbors
    match_l: dict[int, int] = dict(start or {})
    match_r = {v: u for u, v in match_l.items()}

    def augment(root: int) -> bool:
        # iterative DFS over alternating paths
        seen = set()
        stack = [(root, iter(nbrs(root)))]
        parent: dict[int, tuple[int, int]] = {}
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                if v in seen:
                    continue
                seen.add(v)
                w = match_r.get(v)
                if w is None:
                    # flip the path root ... u - v
                    while True:
                        prev = match_l.get(u)
                        match_l[u] = v
                        match_r[v] = u
                        if u == root:
                            return True
                        v = prev
                        u, _ = parent[u]
                parent[w] = (u, v)
                stack.append((w, iter(nbrs(w))))
                advanced = True
                break
            if not advanced:
                stack.pop()
        return False

    for u in order:
        if u not in match_l:
            augment(u)
    return match_l


def matching_from_dict(G: BipartiteGraph, pairs: dict[int, int]) -> Matching:
    return Matching.of(G, [G.edge_id(u, v) for u, v in pairs.items()])


# ------------------------------------------------------------------- cycles


def _bfs_girth(adj: Sequence[Sequence[int]], limit: float = math.inf):
    """Shortest cycle in a simple undirected graph given as adjacency lists.

    Returns ``(length, cycle_vertices)`` or ``(inf, None)``.  Roots are
    tried in increasing order and the first shortest cycle found is kept.
    """
    best = math.inf
    best_cycle = None
    n = len(adj)
    for root in range(n):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            if 2 * dist[x] + 1 >= best:
                break
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    length = dist[x] + dist[y] + 1
                    if length < best:
                        cycle = _close_cycle(parent, x, y)
                        if cycle is not None and len(cycle) < best:
                            best = len(cycle)
                            best_cycle = cycle
        if best <= 3:
            break
    if best > limit:
        return math.inf, None
    return best, best_cycle


def _close_cycle(parent, x, y):
    px = [x]
    while parent[px[-1]] != -1:
        px.append(parent[px[-1]])
    py = [y]
    while parent[py[-1]] != -1:
        py.append(parent[py[-1]])
    sx = set(px)
    # lowest common ancestor
    lca = next(v for v in py if v in sx)
    path_x = px[: px.index(lca) + 1]
    path_y = py[: py.index(lca)]
    cycle = path_x[::-1] + path_y
    # cycle: lca ... x, y ... (back to lca)
    if len(cycle) < 3:
        return None
    return cycle


def girth_of_adjacency(adj: Sequence[Sequence[int]]) -> float:
    return _bfs_girth(adj)[0]


def shortest_cycle(adj: Sequence[Sequence[int]]):
    """(length, vertex list) of a shortest cycle, or (inf, None)."""
    return _bfs_girth(adj)


def girth(G: BipartiteGraph) -> float:
    """Exact girth by BFS from every vertex; ``math.inf`` for forests."""
    return girth_of_adjacency(G.to_adjacency_lists())


# --------------------------------------------------------------- text format


def format_graph(G: BipartiteGraph) -> str:
    lines = [f"bigraph {G.n_left} {G.n_right} {G.num_edges}"]
    lines.extend(f"{u} {v}" for u, v in G.edges)
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> BipartiteGraph:
    header = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 4 or parts[0] != "bigraph":
                raise FormatError("expected 'bigraph <n_left> <n_right> <m>'", lineno)
            try:
                header = tuple(int(p) for p in parts[1:])
            except ValueError:
                raise FormatError("non-integer header field", lineno) from None
            continue
        if len(parts) != 2:
            raise FormatError("expected '<u> <v>'", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError("non-integer vertex index", lineno) from None
        if not (0 <= u < header[0] and 0 <= v < header[1]):
            raise FormatError(f"edge ({u}, {v}) outside {header[0]}x{header[1]}", lineno)
        if (u, v) in seen:
            raise FormatError(f"duplicate edge ({u}, {v})", lineno)
        seen.add((u, v))
        edges.append((u, v))
    if header is None:
        raise FormatError("missing header")
    n_left, n_right, m = header
    if len(edges) != m:
        raise FormatError(f"header declares {m} edges, found {len(edges)}")
    return BipartiteGraph(n_left, n_right, edges)


def write_graph(G: BipartiteGraph, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_graph(G))


def read_graph(path) -> BipartiteGraph:
    with open(path, encoding="ascii") as fh:
        return parse_graph(fh.read())
