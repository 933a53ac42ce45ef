"""Exact offline covering-walk solver (fixed-endpoint TSP path over the
metric closure) plus a brute-force validator.

The subset DP stores, for every subset S of interior closure vertices and
every v in S, the cheapest cost of a path that starts at the destination,
visits exactly S and ends at v.  Because the closure is symmetric this table
gives the cost-to-go from any vertex through any remaining set, which lets
the visit order be reconstructed front to back, greedily picking the
smallest vertex id among cost-optimal choices.  The returned walk is
therefore the lexicographically smallest optimal visit order, expanded back
to original edges.

Weights are scaled to a common integer denominator before the DP; results
are converted back to exact rationals.  A numpy kernel handles large
subproblems, a plain-Python kernel small ones and arbitrarily large
integers; both implement the same recurrence.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping, TYPE_CHECKING

import numpy as np

from .graph import (EstimateGraph, MetricClosure, Walk, check_weights,
                    metric_closure, walk_of_vertices)

if TYPE_CHECKING:  # pragma: no cover
    from .engine import KnowledgeView

DEFAULT_EXACT_CAP = 20
BRUTE_FORCE_CAP = 10

# numpy pays off once the mask space is non-trivial
_NUMPY_MIN_INTERIOR = 7
# int64 DP must stay clear of overflow: INF + max entry < 2**63
_INT64_LIMIT = 1 << 48
_INF = 1 << 62


class SolverCapExceeded(Exception):
    """Instance too large for the exact oracle."""


@dataclass(frozen=True)
class CoverTask:
    """Find a cheapest origin->destination walk whose vertex set covers
    must_visit, under a total positive weight assignment."""

    weights: Mapping[int, Fraction]
    origin: int
    destination: int
    must_visit: frozenset[int]

    def required_vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.must_visit | {self.origin, self.destination}))


def _suffix_table_py(D: list[list[int]], dest_i: int,
                     interior: list[int]) -> list[list[int]]:
    m = len(interior)
    size = 1 << m
    g = [[_INF] * m for _ in range(size)]
    for j in range(m):
        g[1 << j][j] = D[dest_i][interior[j]]
    for mask in range(1, size):
        row = g[mask]
        bits = [j for j in range(m) if mask >> j & 1]
        if len(bits) < 2:
            continue
        for i in bits:
            prev = g[mask ^ (1 << i)]
            di = interior[i]
            best = _INF
            for j in bits:
                if j == i:
                    continue
                c = prev[j] + D[interior[j]][di]
                if c < best:
                    best = c
            row[i] = best
    return g


def _suffix_table_np(D: list[list[int]], dest_i: int,
                     interior: list[int]) -> np.ndarray:
    m = len(interior)
    size = 1 << m
    DU = np.array([[D[a][b] for b in interior] for a in interior],
                  dtype=np.int64)
    g = np.full((size, m), _INF, dtype=np.int64)
    idx = np.arange(m)
    g[1 << idx, idx] = np.array([D[dest_i][v] for v in interior],
                                dtype=np.int64)
    masks = np.arange(size, dtype=np.int64)
    pop = np.zeros(size, dtype=np.int16)
    for b in range(m):
        pop += ((masks >> b) & 1).astype(np.int16)
    order = np.argsort(pop, kind="stable")
    counts = np.bincount(pop, minlength=m + 1)
    starts = np.concatenate(([0], np.cumsum(counts)))
    for p in range(2, m + 1):
        batch = order[starts[p]:starts[p + 1]]
        for i in range(m):
            sub = batch[(batch >> i) & 1 == 1]
            if sub.size == 0:
                continue
            src = sub ^ (1 << i)
            vals = (g[src] + DU[:, i]).min(axis=1)
            g[sub, i] = vals
    return g


def _tsp_path_order(D: list[list[int]], origin_i: int,
                    dest_i: int) -> tuple[int, list[int]]:
    """Minimum cost and lexicographically smallest optimal visit order
    (as closure indices) for a fixed-endpoint path covering all indices.

    Supports origin_i == dest_i (closed tour through all other vertices).
    """
    r = len(D)
    interior = [i for i in range(r) if i != origin_i and i != dest_i]
    m = len(interior)
    if m == 0:
        if origin_i == dest_i:
            return 0, [origin_i]
        return D[origin_i][dest_i], [origin_i, dest_i]

    big = max(max(row) for row in D)
    use_numpy = m >= _NUMPY_MIN_INTERIOR and big * (r + 1) < _INT64_LIMIT
    if use_numpy:
        g = _suffix_table_np(D, dest_i, interior)
    else:
        g = _suffix_table_py(D, dest_i, interior)

    full = (1 << m) - 1
    order = [origin_i]
    pos = origin_i
    remaining = full
    total = 0
    while remaining:
        best_cost = None
        best_j = -1
        for j in range(m):
            if not remaining >> j & 1:
                continue
            c = D[pos][interior[j]] + int(g[remaining][j])
            if best_cost is None or c < best_cost:
                best_cost = c
                best_j = j
        assert best_cost is not None and best_cost < _INF
        total += D[pos][interior[best_j]]
        pos = interior[best_j]
        order.append(pos)
        remaining &= ~(1 << best_j)
    total += D[pos][dest_i]
    order.append(dest_i)
    return total, order


def _closure_matrix(closure: MetricClosure) -> tuple[int, list[list[int]]]:
    verts = closure.vertices
    denom = 1
    for u in verts:
        for v in verts:
            denom = lcm(denom, closure.distance(u, v).denominator)
    D = [[int(closure.distance(u, v) * denom) for v in verts] for u in verts]
    return denom, D


def _expand_order(graph: EstimateGraph, closure: MetricClosure,
                  order: list[int],
                  weights: Mapping[int, Fraction]) -> Walk:
    vertices: list[int] = [order[0]]
    for u, v in zip(order, order[1:]):
        vertices.extend(closure.expand(u, v)[1:])
    return walk_of_vertices(graph, vertices, weights)


def optimal_cover_walk(graph: EstimateGraph, task: CoverTask, *,
                       cap: int = DEFAULT_EXACT_CAP) -> tuple[Walk, Fraction]:
    """Exact minimum-cost covering walk via subset DP on the metric closure."""
    required = task.required_vertices()
    if len(required) > cap:
        raise SolverCapExceeded(
            f"instance too large for exact oracle: {len(required)} required "
            f"vertices exceed cap {cap}")
    check_weights(graph, task.weights)
    closure = metric_closure(graph, task.weights, required)
    denom, D = _closure_matrix(closure)
    origin_i = required.index(task.origin)
    dest_i = required.index(task.destination)
    total, order_i = _tsp_path_order(D, origin_i, dest_i)
    order = [required[i] for i in order_i]
    walk = _expand_order(graph, closure, order, task.weights)
    cost = Fraction(total, denom)
    assert walk.cost == cost
    return walk, cost


def brute_force_cover(graph: EstimateGraph, task: CoverTask, *,
                      cap: int = BRUTE_FORCE_CAP) -> tuple[Walk, Fraction]:
    """Independent oracle: exhaustive enumeration of closure visit orders.

    Permutations are generated in lexicographic order and only strictly
    better costs replace the incumbent, so ties resolve to the same
    lexicographically smallest order as the DP.
    """
    required = task.required_vertices()
    if len(required) > cap:
        raise SolverCapExceeded(
            f"instance too large for brute force: {len(required)} required "
            f"vertices exceed cap {cap}")
    check_weights(graph, task.weights)
    closure = metric_closure(graph, task.weights, required)
    denom, D = _closure_matrix(closure)
    origin_i = required.index(task.origin)
    dest_i = required.index(task.destination)
    interior = [i for i in range(len(required))
                if i != origin_i and i != dest_i]
    if not interior:
        if origin_i == dest_i:
            order_i = [origin_i]
            best = 0
        else:
            order_i = [origin_i, dest_i]
            best = D[origin_i][dest_i]
    else:
        best = None
        best_perm = None
        for perm in itertools.permutations(interior):
            cost = D[origin_i][perm[0]]
            for a, b in zip(perm, perm[1:]):
                cost += D[a][b]
            cost += D[perm[-1]][dest_i]
            if best is None or cost < best:
                best = cost
                best_perm = perm
        assert best_perm is not None
        order_i = [origin_i, *best_perm, dest_i]
    order = [required[i] for i in order_i]
    walk = _expand_order(graph, closure, order, task.weights)
    return walk, Fraction(best, denom)


def pessimistic_weights(graph: EstimateGraph,
                        revealed: Mapping[int, Fraction]) -> dict[int, Fraction]:
    """Revealed edges keep their actual weight; unrevealed price at u(e)."""
    return {eid: revealed.get(eid, e.upper)
            for eid, e in enumerate(graph.edges)}


def worst_case_cover_walk(graph: EstimateGraph, view: "KnowledgeView",
                          destination: int, *,
                          cap: int = DEFAULT_EXACT_CAP) -> tuple[Walk, Fraction]:
    """Cheapest walk finishing the exploration under worst-case pricing."""
    weights = pessimistic_weights(graph, view.revealed)
    unvisited = frozenset(range(graph.vertex_count)) - view.visited
    task = CoverTask(weights=weights, origin=view.position,
                     destination=destination, must_visit=unvisited)
    return optimal_cover_walk(graph, task, cap=cap)
