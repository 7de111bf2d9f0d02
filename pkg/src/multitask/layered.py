"""Layered networks of depth r and their node-disjoint top-bottom paths."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .constructions import gen_random_regular_bipartite
from .errors import (
    FormatError,
    InvalidPathSystem,
    NoPathSystemOfThatSize,
    RetriesExhausted,
)
from .graph import BipartiteGraph, girth_of_adjacency, is_induced_matching, iter_bits
from .oracle import Budget, DEFAULT_BUDGET, CapacityReport, max_independent_set

Path = tuple[int, ...]


@dataclass(frozen=True)
class LayeredNetwork:
    """r layers of width n; ``gaps[i]`` joins layer i (left) to layer i+1
    (right)."""

    r: int
    n: int
    gaps: tuple[BipartiteGraph, ...]

    def __post_init__(self):
        if self.r < 2 or len(self.gaps) != self.r - 1:
            raise ValueError(f"need r >= 2 and r-1 gap graphs, got r={self.r}, {len(self.gaps)}")
        for g in self.gaps:
            if g.n_left != self.n or g.n_right != self.n:
                raise ValueError("every gap graph must have n vertices per side")

    @property
    def degree(self) -> int | None:
        """Common degree when every gap is regular with the same degree."""
        degs = set()
        for g in self.gaps:
            s = g.degree_stats()
            if not s.is_regular:
                return None
            degs.add(s.max_degree)
        return degs.pop() if len(degs) == 1 else None

    def vertex(self, layer: int, v: int) -> int:
        return layer * self.n + v

    def adjacency_lists(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.r * self.n)]
        for i, g in enumerate(self.gaps):
            for u, v in g.edges:
                a, b = self.vertex(i, u), self.vertex(i + 1, v)
                adj[a].append(b)
                adj[b].append(a)
        return adj

    def adjacency_masks(self) -> list[int]:
        return [sum(1 << y for y in nb) for nb in self.adjacency_lists()]

    def girth(self) -> float:
        return girth_of_adjacency(self.adjacency_lists())


@dataclass(frozen=True)
class PathSystem:
    paths: tuple[Path, ...]

    def __len__(self):
        return len(self.paths)


def validate_path_system(N: LayeredNetwork, P: PathSystem) -> None:
    seen = [set() for _ in range(N.r)]
    for p in P.paths:
        if len(p) != N.r:
            raise InvalidPathSystem(f"path {p} does not visit all {N.r} layers")
        for i, v in enumerate(p):
            if not 0 <= v < N.n:
                raise InvalidPathSystem(f"vertex {v} out of range in layer {i}")
            if v in seen[i]:
                raise InvalidPathSystem(f"paths share vertex {v} in layer {i}")
            seen[i].add(v)
        for i in range(N.r - 1):
            if not N.gaps[i].has_edge(p[i], p[i + 1]):
                raise InvalidPathSystem(f"path {p} uses a non-edge in gap {i}")


def is_induced_path_system(N: LayeredNetwork, P: PathSystem) -> bool:
    """Per-gap characterisation: the slice of the paths in every gap is an
    induced matching of that gap graph."""
    validate_path_system(N, P)
    for i, g in enumerate(N.gaps):
        ids = [g.edge_id(p[i], p[i + 1]) for p in P.paths]
        if not is_induced_matching(g, ids):
            return False
    return True


def path_conflicts(N: LayeredNetwork, P: PathSystem) -> list[int]:
    """Conflict bitsets between paths straight from the definition: two
    paths conflict when a network edge joins an edge of one to an edge of
    the other (every path vertex is an endpoint of some path edge)."""
    masks = N.adjacency_masks()
    vsets = []
    for p in P.paths:
        vs = 0
        for i, v in enumerate(p):
            vs |= 1 << N.vertex(i, v)
        vsets.append(vs)
    out = []
    for a, va in enumerate(vsets):
        reach = 0
        for x in iter_bits(va):
            reach |= masks[x]
        conf = 0
        for b, vb in enumerate(vsets):
            if a != b and reach & vb:
                conf |= 1 << b
        out.append(conf)
    return out


def is_induced_path_system_direct(N: LayeredNetwork, P: PathSystem) -> bool:
    validate_path_system(N, P)
    return all(c == 0 for c in path_conflicts(N, P))


def iter_path_systems(N: LayeredNetwork, k: int, budget: Budget | None = None) -> Iterator[PathSystem]:
    """All sets of k node-disjoint top-bottom paths, each exactly once.

    Paths are ordered by top vertex; the gap-0 matching is chosen as an
    increasing tuple and later gaps extend each path end to distinct
    vertices in that fixed order.
    """
    budget = budget or Budget(None)
    g0 = N.gaps[0]
    n = N.n

    def extend(prefixes: list[tuple[int, ...]], gap: int):
        if gap == N.r - 1:
            yield PathSystem(tuple(prefixes))
            return
        g = N.gaps[gap]
        chosen: list[int] = []

        def assign(i: int, used: int):
            if i == len(prefixes):
                yield from extend([p + (v,) for p, v in zip(prefixes, chosen)], gap + 1)
                return
            for v in iter_bits(g.left_adj[prefixes[i][-1]] & ~used):
                budget.spend()
                chosen.append(v)
                yield from assign(i + 1, used | (1 << v))
                chosen.pop()

        yield from assign(0, 0)

    def tops(start: int, used_r: int, acc: list[tuple[int, int]]):
        if len(acc) == k:
            yield from extend([(u, v) for u, v in acc], 1)
            return
        for u in range(start, n):
            if n - u < k - len(acc):
                break
            for v in iter_bits(g0.left_adj[u] & ~used_r):
                budget.spend()
                acc.append((u, v))
                yield from tops(u + 1, used_r | (1 << v), acc)
                acc.pop()

    yield from tops(0, 0, [])


def max_induced_subsystem(N: LayeredNetwork, P: PathSystem) -> tuple[int, PathSystem]:
    conf = path_conflicts(N, P)
    size, wit = max_independent_set(conf, (1 << len(P)) - 1)
    return size, PathSystem(tuple(P.paths[i] for i in iter_bits(wit)))


@dataclass(frozen=True)
class PathCapacityReport:
    k: int
    alpha: Fraction
    worst_system: PathSystem
    best_induced_in_worst: PathSystem
    systems_examined: int

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "alpha": {"num": self.alpha.numerator, "den": self.alpha.denominator},
            "worst_system": [list(p) for p in self.worst_system.paths],
            "witness_induced": [list(p) for p in self.best_induced_in_worst.paths],
            "counts": {"systems_examined": self.systems_examined},
        }


def exact_alpha_paths(N: LayeredNetwork, k: int, budget: int | None = DEFAULT_BUDGET) -> PathCapacityReport:
    """Minimum over k-path systems of (largest induced subsystem) / k."""
    meter = Budget(budget)
    best = None
    examined = 0
    for P in iter_path_systems(N, k, meter):
        examined += 1
        conf = path_conflicts(N, P)
        size, wit = max_independent_set(conf, (1 << k) - 1, meter)
        if best is None or size < best[0]:
            best = (size, P, wit)
    if best is None:
        raise NoPathSystemOfThatSize(f"no system of {k} node-disjoint top-bottom paths")
    size, P, wit = best
    return PathCapacityReport(
        k=k,
        alpha=Fraction(size, k),
        worst_system=P,
        best_induced_in_worst=PathSystem(tuple(P.paths[i] for i in iter_bits(wit))),
        systems_examined=examined,
    )


def _gap_seed(seed: int, i: int):
    return seed if i == 0 else f"{seed}:{i}"


def gen_layered_network(
    r: int, n: int, d: int, seed: int, girth: int | None = None, retries: int = 500
) -> LayeredNetwork:
    """Independent random d-regular gaps.  Gap 0 uses ``seed`` itself so a
    depth-2 network equals :func:`gen_random_regular_bipartite`.  With
    ``girth`` set, networks are instead grown edge by edge, refusing edges
    that would close a short cycle, with restarts on dead ends."""
    if girth is None:
        gaps = tuple(
            gen_random_regular_bipartite(n, d, _seed_int(_gap_seed(seed, i))) for i in range(r - 1)
        )
        return LayeredNetwork(r, n, gaps)
    rng = random.Random(seed)
    for _ in range(retries):
        N = _greedy_high_girth(r, n, d, girth, rng)
        if N is not None and N.girth() >= girth:
            return N
    raise RetriesExhausted(f"no depth-{r} network with girth >= {girth} in {retries} attempts")


def _within(adj: list[set[int]], src: int, dst: int, radius: int) -> bool:
    """Is dst reachable from src by a path of length <= radius?"""
    frontier, seen = {src}, {src}
    for _ in range(radius):
        nxt = set()
        for x in frontier:
            for y in adj[x]:
                if y == dst:
                    return True
                if y not in seen:
                    seen.add(y)
                    nxt.add(y)
        if not nxt:
            break
        frontier = nxt
    return False


def _greedy_high_girth(r, n, d, girth, rng):
    # Grow d random permutations per gap edge by edge, rejecting any edge
    # whose endpoints are already within girth - 2 of each other.
    adj: list[set[int]] = [set() for _ in range(r * n)]
    per_gap: list[list[tuple[int, int]]] = [[] for _ in range(r - 1)]
    for _ in range(d):
        for gap in range(r - 1):
            free = set(range(n))
            order = list(range(n))
            rng.shuffle(order)
            for u in order:
                a = gap * n + u
                cands = [
                    v for v in sorted(free)
                    if (gap + 1) * n + v not in adj[a]
                    and not _within(adj, a, (gap + 1) * n + v, girth - 2)
                ]
                if not cands:
                    return None
                v = rng.choice(cands)
                free.discard(v)
                b = (gap + 1) * n + v
                adj[a].add(b)
                adj[b].add(a)
                per_gap[gap].append((u, v))
    return LayeredNetwork(r, n, tuple(BipartiteGraph(n, n, e) for e in per_gap))


def _seed_int(s) -> int:
    if isinstance(s, int):
        return s
    return random.Random(s).getrandbits(63)


# --------------------------------------------------------------- format


def format_layered(N: LayeredNetwork) -> str:
    m = sum(g.num_edges for g in N.gaps)
    lines = [f"layered {N.r} {N.n} {m}"]
    for i, g in enumerate(N.gaps):
        lines.extend(f"{i} {u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def parse_layered(text: str) -> LayeredNetwork:
    header = None
    per_gap: list[list[tuple[int, int]]] = []
    count = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts[1:]] if header is None else [int(p) for p in parts]
        except ValueError:
            raise FormatError("non-integer field", lineno) from None
        if header is None:
            if parts[0] != "layered" or len(nums) != 3:
                raise FormatError("expected 'layered <r> <n> <m>'", lineno)
            header = nums
            per_gap = [[] for _ in range(max(header[0] - 1, 0))]
            continue
        if len(nums) != 3:
            raise FormatError("expected '<gap> <u> <v>'", lineno)
        gap, u, v = nums
        if not 0 <= gap < len(per_gap):
            raise FormatError(f"gap {gap} out of range", lineno)
        if not (0 <= u < header[1] and 0 <= v < header[1]):
            raise FormatError(f"edge ({u}, {v}) outside width {header[1]}", lineno)
        if (u, v) in per_gap[gap]:
            raise FormatError(f"duplicate edge ({u}, {v}) in gap {gap}", lineno)
        per_gap[gap].append((u, v))
        count += 1
    if header is None:
        raise FormatError("missing header")
    r, n, m = header
    if count != m:
        raise FormatError(f"header declares {m} edges, found {count}")
    return LayeredNetwork(r, n, tuple(BipartiteGraph(n, n, e) for e in per_gap))


def flatten_top_bottom(N: LayeredNetwork) -> BipartiteGraph:
    """For r = 2 the network is just its single gap graph."""
    if N.r != 2:
        raise ValueError("only depth-2 networks flatten to one bipartite graph")
    return N.gaps[0]


def layered_capacity_as_report(G: BipartiteGraph, rep: PathCapacityReport) -> CapacityReport:
    """Translate a depth-2 path report into a matching report on ``G``."""
    from .graph import Matching

    def to_matching(P: PathSystem):
        return Matching.of(G, [G.edge_id(p[0], p[1]) for p in P.paths])

    return CapacityReport(
        k=rep.k,
        alpha=rep.alpha,
        worst_matching=to_matching(rep.worst_system),
        best_induced_in_worst=to_matching(rep.best_induced_in_worst),
        matchings_examined=rep.systems_examined,
    )
