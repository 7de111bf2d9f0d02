"""Spectral quantities of bipartite graphs.

The adjacency eigenvalues of a bipartite graph are plus and minus the
singular values of its biadjacency matrix, so lambda (the largest
eigenvalue magnitude after the trivial pair) is the second singular value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConvergenceFailure, NotRegular
from .graph import BipartiteGraph, popcount

TOLERANCE = 1e-9


def biadjacency(G: BipartiteGraph) -> np.ndarray:
    A = np.zeros((G.n_left, G.n_right))
    for u, v in G.edges:
        A[u, v] = 1.0
    return A


@dataclass(frozen=True)
class SpectralProfile:
    singular_values: tuple[float, ...]
    lam: float
    tolerance: float

    @property
    def top(self) -> float:
        return self.singular_values[0] if self.singular_values else 0.0


def second_singular_value(G: BipartiteGraph) -> SpectralProfile:
    A = biadjacency(G)
    if A.size == 0:
        return SpectralProfile((), 0.0, TOLERANCE)
    try:
        sv = np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    sv = [0.0 if abs(s) < TOLERANCE else float(s) for s in sv]
    lam = sv[1] if len(sv) > 1 else 0.0
    stats = G.degree_stats()
    if stats.is_regular and G.num_edges and abs(sv[0] - stats.max_degree) > TOLERANCE:
        raise ConvergenceFailure(f"top singular value {sv[0]} != degree {stats.max_degree}")
    return SpectralProfile(tuple(sv), lam, TOLERANCE)


def mixing_check(G: BipartiteGraph, lam: float, S, T) -> dict:
    """Compare |e(S,T) - |S||T| d / N| with lam sqrt(|S||T|), N the number
    of vertices per side.  ``S`` and ``T`` are iterables of left and right
    vertices."""
    stats = G.degree_stats()
    if not stats.is_regular or not G.is_balanced:
        raise NotRegular("mixing check needs a balanced regular graph")
    d = stats.max_degree
    smask = sum(1 << u for u in set(S))
    tmask = sum(1 << v for v in set(T))
    s, t = popcount(smask), popcount(tmask)
    e = G.count_edges_between(smask, tmask)
    lhs = abs(Fraction(e) - Fraction(s * t * d, G.n_left))
    rhs = lam * math.sqrt(s * t)
    return {"e": e, "lhs": lhs, "rhs": rhs, "holds": float(lhs) <= rhs + TOLERANCE}
