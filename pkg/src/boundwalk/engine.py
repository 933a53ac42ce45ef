"""Episode engine: mediates between an explorer that sees only the
KnowledgeView and a weight source that commits actual weights on reveal.

Reveal rule: an edge's actual weight is fixed the first time one of its
endpoints is visited (including the start vertex before the first decision).
Every revealed weight must lie in its announced interval; violations raise
AdversaryFault.  Episodes are strictly sequential and fully replayable.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, NamedTuple, Protocol, Sequence

from .graph import (EstimateGraph, Walk, WeightAssignment, walk_violations)
from .solver import (CoverTask, DEFAULT_EXACT_CAP, SolverCapExceeded,
                     optimal_cover_walk)

# per-step reveal-set and containment checks; cheap at desk scale
CHECK_INVARIANTS = True


class EngineError(Exception):
    pass


class IllegalMove(EngineError):
    """Explorer proposed a move to a non-adjacent vertex."""


class Nontermination(EngineError):
    """Episode exceeded the step cap without completing."""


class AdversaryFault(EngineError):
    """Weight source returned a weight outside the announced interval."""


class WeightSource(Protocol):
    """Where actual weights come from.

    reveal() is called exactly once per edge per episode, the first time an
    endpoint is visited; visit_seq is the agent's vertex visit sequence so
    far including the triggering vertex.  complete() supplies weights for
    edges never revealed during the episode (post-hoc, for offline oracles)
    and must be deterministic and consistent with in-episode answers.
    """

    def reveal(self, eid: int, visit_seq: Sequence[int]) -> Fraction: ...

    def complete(self, eid: int, visit_seq: Sequence[int]) -> Fraction: ...


@dataclass(frozen=True)
class FixedAssignment:
    """Weight source backed by a fixed total assignment."""

    assignment: WeightAssignment

    def reveal(self, eid: int, visit_seq: Sequence[int]) -> Fraction:
        return self.assignment.weight(eid)

    def complete(self, eid: int, visit_seq: Sequence[int]) -> Fraction:
        return self.assignment.weight(eid)


class Move(NamedTuple):
    origin: int
    target: int
    edge: int
    paid: Fraction


class Reveal(NamedTuple):
    edge: int
    weight: Fraction
    trigger: int


@dataclass(frozen=True)
class KnowledgeView:
    """Everything an explorer is allowed to see during an episode."""

    graph: EstimateGraph
    visited: frozenset[int]
    position: int
    revealed: Mapping[int, Fraction]
    paid: Fraction
    history: tuple[Move, ...]
    reveals: tuple[Reveal, ...]
    _source: WeightSource = field(repr=False, compare=False)

    @property
    def unvisited(self) -> frozenset[int]:
        return frozenset(range(self.graph.vertex_count)) - self.visited

    @property
    def visit_sequence(self) -> tuple[int, ...]:
        return (self.graph.start,) + tuple(m.target for m in self.history)

    @property
    def is_complete(self) -> bool:
        return (len(self.visited) == self.graph.vertex_count
                and self.position == self.graph.end)


def _reveal_incident(graph: EstimateGraph, source: WeightSource,
                     revealed: dict[int, Fraction], vertex: int,
                     visit_seq: tuple[int, ...]) -> list[Reveal]:
    events = []
    for eid in graph.incident_edges(vertex):
        if eid in revealed:
            continue
        w = source.reveal(eid, visit_seq)
        e = graph.edges[eid]
        if not e.lower <= w <= e.upper:
            raise AdversaryFault(
                f"weight {w} for edge {eid} outside [{e.lower}, {e.upper}]")
        revealed[eid] = w
        events.append(Reveal(eid, w, vertex))
    return events


def _check_view(view: KnowledgeView) -> None:
    graph = view.graph
    expected = {eid for v in view.visited for eid in graph.incident_edges(v)}
    if set(view.revealed) != expected:
        raise EngineError("reveal set does not match edges incident to "
                          "visited vertices")
    for eid, w in view.revealed.items():
        e = graph.edges[eid]
        if not e.lower <= w <= e.upper:
            raise AdversaryFault(f"revealed weight {w} outside interval "
                                 f"of edge {eid}")


def start_episode(graph: EstimateGraph, source: WeightSource) -> KnowledgeView:
    """Place the agent at the start vertex and reveal its incident edges."""
    revealed: dict[int, Fraction] = {}
    seq = (graph.start,)
    events = _reveal_incident(graph, source, revealed, graph.start, seq)
    view = KnowledgeView(graph=graph, visited=frozenset({graph.start}),
                         position=graph.start, revealed=revealed,
                         paid=Fraction(0), history=(), reveals=tuple(events),
                         _source=source)
    if CHECK_INVARIANTS:
        _check_view(view)
    return view


def move(view: KnowledgeView, to: int) -> KnowledgeView:
    """Traverse one edge, paying its revealed weight; reveal new edges."""
    graph = view.graph
    eid = graph.edge_between(view.position, to)
    if eid is None:
        raise IllegalMove(f"no edge between {view.position} and {to}")
    w = view.revealed[eid]
    revealed = dict(view.revealed)
    visited = view.visited | {to}
    seq = view.visit_sequence + (to,)
    events = list(view.reveals)
    if to not in view.visited:
        events.extend(_reveal_incident(graph, view._source, revealed, to, seq))
    new = KnowledgeView(graph=graph, visited=visited, position=to,
                        revealed=revealed, paid=view.paid + w,
                        history=view.history + (Move(view.position, to, eid, w),),
                        reveals=tuple(events), _source=view._source)
    if CHECK_INVARIANTS:
        _check_view(new)
    return new


@dataclass(frozen=True)
class RunReport:
    """Full episode record with online/offline costs and the ratio."""

    instance: dict
    explorer: str
    moves: tuple[Move, ...]
    reveals: tuple[Reveal, ...]
    online_cost: Fraction
    offline_cost: Fraction
    offline_kind: str  # "exact" | "certificate"
    ratio: Fraction
    ratio_is_lower_bound: bool
    steps: int

    def to_json_dict(self) -> dict:
        return {
            "instance": self.instance,
            "explorer": self.explorer,
            "moves": [{"edge": m.edge, "from": m.origin, "to": m.target,
                       "paid": str(m.paid)} for m in self.moves],
            "reveals": [{"edge": r.edge, "weight": str(r.weight),
                         "trigger": r.trigger} for r in self.reveals],
            "online_cost": str(self.online_cost),
            "offline_cost": str(self.offline_cost),
            "offline_kind": self.offline_kind,
            "ratio": str(self.ratio),
            "ratio_decimal": f"{float(self.ratio):.6f}",
            "ratio_is_lower_bound": self.ratio_is_lower_bound,
            "steps": self.steps,
        }


class Explorer(Protocol):
    name: str

    def decide(self, view: KnowledgeView) -> int: ...


def realized_assignment(graph: EstimateGraph, view: KnowledgeView,
                        source: WeightSource) -> WeightAssignment:
    """Actual weights after an episode; never-revealed edges are filled by
    the source's deterministic completion rule and checked for containment."""
    weights = dict(view.revealed)
    seq = view.visit_sequence
    for eid in range(len(graph.edges)):
        if eid in weights:
            continue
        w = source.complete(eid, seq)
        e = graph.edges[eid]
        if not e.lower <= w <= e.upper:
            raise AdversaryFault(
                f"completion weight {w} for edge {eid} outside interval")
        weights[eid] = w
    return WeightAssignment(weights)


def run_episode(graph: EstimateGraph, source: WeightSource, explorer: Explorer,
                *, oracle_cap: int = DEFAULT_EXACT_CAP,
                certificate: Callable[[WeightAssignment, Sequence[int]], Walk]
                | Walk | None = None,
                instance: dict | None = None,
                step_cap: int | None = None) -> RunReport:
    """Run one episode to completion and attach the offline comparison.

    The offline optimum is computed exactly when the instance fits the
    oracle cap.  Otherwise the best available feasible walk (the provided
    certificate and the agent's own realized walk) bounds it from above and
    the reported ratio is flagged as a lower bound on the true ratio.
    """
    n = graph.vertex_count
    cap = step_cap if step_cap is not None else 10 * n * n
    view = start_episode(graph, source)
    while not view.is_complete:
        if len(view.history) >= cap:
            raise Nontermination(
                f"episode exceeded step cap {cap} for explorer "
                f"{explorer.name}")
        view = move(view, explorer.decide(view))

    assignment = realized_assignment(graph, view, source)
    online = view.paid
    task = CoverTask(weights=assignment.weights, origin=graph.start,
                     destination=graph.end,
                     must_visit=frozenset(range(n)))
    try:
        _, offline = optimal_cover_walk(graph, task, cap=oracle_cap)
        kind = "exact"
        lower_bound = False
    except SolverCapExceeded:
        candidates = [online]  # the agent's own walk is feasible offline
        if certificate is not None:
            walk = (certificate if isinstance(certificate, Walk)
                    else certificate(assignment, view.visit_sequence))
            problems = walk_violations(graph, walk, assignment.weights)
            if problems:
                raise EngineError(f"invalid certificate walk: {problems}")
            if (walk.vertices[0] != graph.start
                    or walk.vertices[-1] != graph.end
                    or set(walk.vertices) != set(range(n))):
                raise EngineError("certificate walk does not cover the "
                                  "instance from start to end")
            candidates.append(walk.cost)
        offline = min(candidates)
        kind = "certificate"
        lower_bound = True

    return RunReport(
        instance=instance or {"n": n, "s": graph.start, "t": graph.end},
        explorer=explorer.name,
        moves=view.history,
        reveals=view.reveals,
        online_cost=online,
        offline_cost=offline,
        offline_kind=kind,
        ratio=online / offline,
        ratio_is_lower_bound=lower_bound,
        steps=len(view.history),
    )
