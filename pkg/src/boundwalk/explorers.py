"""Online exploration policies: lower-bound precompute, worst-case
replanning, and a nearest-neighbor baseline.

Policies are per-episode values (the first two keep a plan or replay index);
create a fresh one per run via make_explorer.
"""
from __future__ import annotations

from fractions import Fraction

from .engine import KnowledgeView
from .graph import shortest_paths
from .solver import (CoverTask, DEFAULT_EXACT_CAP, optimal_cover_walk,
                     pessimistic_weights, worst_case_cover_walk)


class PrecomputeExplorer:
    """Solves the covering walk once under all lower bounds and replays it,
    ignoring every revelation."""

    name = "precompute"

    def __init__(self, cap: int = DEFAULT_EXACT_CAP):
        self._cap = cap
        self._walk: tuple[int, ...] | None = None
        self._step = 0

    def planned_walk(self, view: KnowledgeView) -> tuple[int, ...]:
        graph = view.graph
        weights = {eid: e.lower for eid, e in enumerate(graph.edges)}
        task = CoverTask(weights=weights, origin=graph.start,
                         destination=graph.end,
                         must_visit=frozenset(range(graph.vertex_count)))
        walk, _ = optimal_cover_walk(graph, task, cap=self._cap)
        return walk.vertices

    def decide(self, view: KnowledgeView) -> int:
        if self._walk is None:
            self._walk = self.planned_walk(view)
        if self._walk[self._step] != view.position:
            raise RuntimeError("precompute replay desynchronized")
        self._step += 1
        return self._walk[self._step]


class AdaptiveExplorer:
    """Recomputes, at every vertex, a cheapest worst-case walk to the end
    vertex covering all unvisited vertices, and takes its first step.

    Unrevealed edges are priced at their announced upper bound, so the plan
    cost is a valid upper bound on the cost of finishing the walk."""

    name = "adaptive"

    def __init__(self, cap: int = DEFAULT_EXACT_CAP):
        self._cap = cap
        self.plan_costs: list[Fraction] = []

    def decide(self, view: KnowledgeView) -> int:
        walk, cost = worst_case_cover_walk(view.graph, view, view.graph.end,
                                           cap=self._cap)
        self.plan_costs.append(cost)
        return walk.vertices[1]


class NearestNeighborExplorer:
    """Moves toward the unvisited non-end vertex of minimum known distance
    (revealed weights, upper bounds for the rest); visits the end last."""

    name = "nn"

    def decide(self, view: KnowledgeView) -> int:
        graph = view.graph
        weights = pessimistic_weights(graph, view.revealed)
        dists, preds = shortest_paths(graph, weights, view.position)
        targets = sorted(view.unvisited - {graph.end})
        if targets:
            goal = min(targets, key=lambda v: (dists[v], v))
        else:
            goal = graph.end
        step = goal
        while preds.get(step) is not None and preds[step] != view.position:
            step = preds[step]
        return step


EXPLORERS = {
    "precompute": PrecomputeExplorer,
    "adaptive": AdaptiveExplorer,
    "nn": NearestNeighborExplorer,
}


def make_explorer(name: str, *, cap: int = DEFAULT_EXACT_CAP):
    if name not in EXPLORERS:
        raise ValueError(f"unknown explorer {name!r}; "
                         f"choose from {sorted(EXPLORERS)}")
    cls = EXPLORERS[name]
    if cls is NearestNeighborExplorer:
        return cls()
    return cls(cap=cap)
