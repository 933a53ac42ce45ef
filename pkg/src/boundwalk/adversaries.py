"""Adversarial instance builders: the recursive lower-bound family, the
half-split adaptive adversary for complete and complete bipartite graphs,
the fixed grid trap, and seeded random instance generation.

Adaptive sources here are stateless functions of the agent's visit history,
so they are deterministic and replayable by construction.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .engine import FixedAssignment, run_episode
from .graph import (Edge, EstimateGraph, Walk, WeightAssignment, alpha_of,
                    shortest_paths, validate, walk_of_vertices)
from .solver import DEFAULT_EXACT_CAP


class InvalidSpec(ValueError):
    """Builder parameters violate the family's constraints."""


class GridTrapError(Exception):
    """Grid construction failed its build-time self-check."""


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# recursive lower-bound family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RecursiveSpec:
    """Branching k >= 2, recursion depth >= 0, spread alpha in (1, 2].

    Alphas above 2 are clamped to 2: the construction cannot force more than
    a factor-2 gap, so larger announcements only loosen the instance.
    """

    k: int
    depth: int
    alpha: Fraction

    def validated(self) -> "RecursiveSpec":
        if self.k < 2:
            raise InvalidSpec("recursive family needs k >= 2")
        if self.depth < 0:
            raise InvalidSpec("recursive family needs depth >= 0")
        alpha = _as_fraction(self.alpha)
        if alpha <= 1:
            raise InvalidSpec("recursive family needs alpha > 1")
        if alpha > 2:
            alpha = Fraction(2)
        return RecursiveSpec(self.k, self.depth, alpha)


@dataclass
class _Component:
    level: int
    s: int
    t: int
    children: list["_Component"]
    path: list[int]  # depth-0 only

    @property
    def anchors(self) -> tuple[int, int]:
        return (self.s, self.t)

    def other(self, anchor: int) -> int:
        return self.t if anchor == self.s else self.s


def _build_component(level: int, k: int, alpha: Fraction, next_id: int,
                     edges: list[Edge],
                     levels: list[int]) -> tuple[_Component, int]:
    if level == 0:
        verts = list(range(next_id, next_id + k + 1))
        for a, b in zip(verts, verts[1:]):
            edges.append(Edge(a, b, Fraction(1), Fraction(1)))
            levels.append(0)
        return _Component(0, verts[0], verts[-1], [], verts), next_id + k + 1

    s = next_id
    next_id += 1
    children = []
    for _ in range(k):
        child, next_id = _build_component(level - 1, k, alpha, next_id,
                                          edges, levels)
        children.append(child)
    t = next_id
    next_id += 1
    base = Fraction(k) ** level
    lo, hi = base, alpha * base

    def level_edge(a: int, b: int) -> None:
        edges.append(Edge(a, b, lo, hi))
        levels.append(level)

    level_edge(s, children[0].s)
    level_edge(s, children[0].t)
    for left, right in zip(children, children[1:]):
        level_edge(left.s, right.s)
        level_edge(left.s, right.t)
        level_edge(left.t, right.s)
        level_edge(left.t, right.t)
    level_edge(children[-1].s, t)
    level_edge(children[-1].t, t)
    return _Component(level, s, t, children, []), next_id


def _collect_pairs(root: _Component, pair_of: dict[int, tuple[int, int]]):
    pair_of[root.s] = root.anchors
    pair_of[root.t] = root.anchors
    for child in root.children:
        _collect_pairs(child, pair_of)


class RecursiveAdversary:
    """Symmetric reactive weight source for the recursive family.

    Within each component, the first distinguished vertex the agent reaches
    is committed as the start side; level edges triggered from a start side
    reveal cheap (k^level), from an end side expensive (alpha * k^level).
    """

    def __init__(self, k: int, alpha: Fraction, levels: Sequence[int],
                 edges: Sequence[Edge], pair_of: dict[int, tuple[int, int]]):
        self._k = k
        self._alpha = alpha
        self._levels = levels
        self._edges = edges
        self._pair_of = pair_of

    def _start_side(self, pair: tuple[int, int],
                    visit_seq: Sequence[int]) -> tuple[int, int | None]:
        """(start-side vertex, index of commitment) for a distinguished pair;
        untouched pairs default to the smaller vertex id."""
        for i, v in enumerate(visit_seq):
            if v in pair:
                return v, i
        return min(pair), None

    def _weight(self, eid: int, governor: int,
                visit_seq: Sequence[int]) -> Fraction:
        level = self._levels[eid]
        base = Fraction(self._k) ** level
        start, _ = self._start_side(self._pair_of[governor], visit_seq)
        return base if governor == start else self._alpha * base

    def reveal(self, eid: int, visit_seq: Sequence[int]) -> Fraction:
        if self._levels[eid] == 0:
            return Fraction(1)
        trigger = visit_seq[-1]
        e = self._edges[eid]
        assert trigger in (e.a, e.b)
        return self._weight(eid, trigger, visit_seq)

    def complete(self, eid: int, visit_seq: Sequence[int]) -> Fraction:
        if self._levels[eid] == 0:
            return Fraction(1)
        e = self._edges[eid]
        # mimic the reveal trigger: the endpoint whose pair committed first
        _, ia = self._start_side(self._pair_of[e.a], visit_seq)
        _, ib = self._start_side(self._pair_of[e.b], visit_seq)
        if ia is None and ib is None:
            governor = min(e.a, e.b)
        elif ib is None or (ia is not None and ia < ib):
            governor = e.a
        else:
            governor = e.b
        return self._weight(eid, governor, visit_seq)


def recursive_online_lower_bound(spec: RecursiveSpec) -> Fraction:
    k, i, a = spec.k, spec.depth, spec.alpha
    return i * (a * k + 1) * Fraction(k) ** i + Fraction(k) ** (i + 1)


def recursive_certificate_cost(spec: RecursiveSpec) -> Fraction:
    k, i = spec.k, spec.depth
    return Fraction(i * (k + 1) * k ** i + k ** (i + 1))


@dataclass
class RecursiveBundle:
    graph: EstimateGraph
    source: RecursiveAdversary
    spec: RecursiveSpec
    root: _Component = field(repr=False)

    def certificate(self, assignment: WeightAssignment,
                    visit_seq: Sequence[int]) -> Walk:
        """Offline walk of the proof's shape, priced on realized weights.

        Traverses the component row sequentially; the entry anchor of each
        child is chosen by a two-state chain DP so the cheapest realized
        connector edges are used.
        """
        memo: dict[tuple[int, int], tuple[list[int], Fraction]] = {}

        def weight(a: int, b: int) -> Fraction:
            eid = self.graph.edge_between(a, b)
            assert eid is not None
            return assignment.weight(eid)

        def traverse(comp: _Component, entry: int) -> tuple[list[int], Fraction]:
            key = (id(comp), entry)
            if key in memo:
                return memo[key]
            if comp.level == 0:
                path = comp.path if entry == comp.s else comp.path[::-1]
                out = (list(path), Fraction(len(path) - 1))
            else:
                seq = comp.children if entry == comp.s else comp.children[::-1]
                # states: (cost, path) keyed by current exit vertex
                states: dict[int, tuple[Fraction, list[int]]] = {
                    entry: (Fraction(0), [entry])}
                for child in seq:
                    nxt: dict[int, tuple[Fraction, list[int]]] = {}
                    for cur, (cost, path) in sorted(states.items()):
                        for enter in sorted(child.anchors):
                            sub_path, sub_cost = traverse(child, enter)
                            total = cost + weight(cur, enter) + sub_cost
                            exit_v = child.other(enter)
                            if exit_v not in nxt or total < nxt[exit_v][0]:
                                nxt[exit_v] = (total, path + sub_path)
                    states = nxt
                goal = comp.other(entry)
                best = None
                for cur, (cost, path) in sorted(states.items()):
                    total = cost + weight(cur, goal)
                    if best is None or total < best[0]:
                        best = (total, path + [goal])
                assert best is not None
                out = (best[1], best[0])
            memo[key] = (out[0], out[1])
            return memo[key]

        vertices, _ = traverse(self.root, self.root.s)
        return walk_of_vertices(self.graph, vertices, assignment.weights)


def build_recursive(spec: RecursiveSpec) -> RecursiveBundle:
    spec = spec.validated()
    edges: list[Edge] = []
    levels: list[int] = []
    pair_of: dict[int, tuple[int, int]] = {}
    root, n = _build_component(spec.depth, spec.k, spec.alpha, 0,
                               edges, levels)
    _collect_pairs(root, pair_of)
    graph = EstimateGraph(n, edges, root.s, root.t)
    problems = validate(graph)
    assert not problems, problems
    source = RecursiveAdversary(spec.k, spec.alpha, levels, graph.edges,
                                pair_of)
    return RecursiveBundle(graph=graph, source=source, spec=spec, root=root)


def recursive_vertex_count(k: int, depth: int) -> int:
    n = k + 1
    for _ in range(depth):
        n = 2 + k * n
    return n


# ---------------------------------------------------------------------------
# half-split adaptive adversary (complete and complete bipartite graphs)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompleteAdvSpec:
    """Half size k >= 2 (graph is K_{2k}), spread alpha in (1, 2].

    For alpha > 2 the construction cannot beat 3/2, so alpha is clamped to 2.
    """

    k: int
    alpha: Fraction

    def validated(self) -> "CompleteAdvSpec":
        if self.k < 2:
            raise InvalidSpec("complete adversary needs k >= 2")
        alpha = _as_fraction(self.alpha)
        if alpha <= 1:
            raise InvalidSpec("complete adversary needs alpha > 1")
        if alpha > 2:
            alpha = Fraction(2)
        return CompleteAdvSpec(self.k, alpha)


class HalvesAdversary:
    """First `threshold` distinct visited vertices form the cheap set A;
    edges with an endpoint in A reveal weight 1, all others alpha."""

    def __init__(self, threshold: int, alpha: Fraction,
                 edges: Sequence[Edge]):
        self._threshold = threshold
        self._alpha = alpha
        self._edges = edges

    def _cheap_set(self, visit_seq: Sequence[int]) -> set[int]:
        seen: list[int] = []
        for v in visit_seq:
            if v not in seen:
                seen.append(v)
                if len(seen) == self._threshold:
                    break
        return set(seen)

    def _weight(self, eid: int, visit_seq: Sequence[int]) -> Fraction:
        a_set = self._cheap_set(visit_seq)
        e = self._edges[eid]
        if e.a in a_set or e.b in a_set:
            return Fraction(1)
        return self._alpha

    reveal = _weight
    complete = _weight


def complete_graph(n: int, alpha: Fraction, start: int = 0,
                   end: int | None = None) -> EstimateGraph:
    """K_n with uniform announced intervals [1, alpha]."""
    if n < 2:
        raise InvalidSpec("complete graph needs n >= 2")
    alpha = _as_fraction(alpha)
    end = n - 1 if end is None else end
    edges = [Edge(a, b, Fraction(1), alpha)
             for a in range(n) for b in range(a + 1, n)]
    return EstimateGraph(n, edges, start, end)


def complete_bipartite_graph(n_left: int, n_right: int, alpha: Fraction,
                             start: int, end: int) -> EstimateGraph:
    """K_{n_left,n_right}: left side 0..n_left-1, right side the rest."""
    alpha = _as_fraction(alpha)
    n = n_left + n_right
    edges = [Edge(a, b, Fraction(1), alpha)
             for a in range(n_left) for b in range(n_left, n)]
    return EstimateGraph(n, edges, start, end)


@dataclass
class AdversaryBundle:
    graph: EstimateGraph
    source: HalvesAdversary
    spec: CompleteAdvSpec


def build_complete_adversary(spec: CompleteAdvSpec) -> AdversaryBundle:
    spec = spec.validated()
    graph = complete_graph(2 * spec.k, spec.alpha)
    source = HalvesAdversary(spec.k, spec.alpha, graph.edges)
    return AdversaryBundle(graph=graph, source=source, spec=spec)


def build_bipartite_adversary(spec: CompleteAdvSpec) -> AdversaryBundle:
    """K_{n,n} with start and end on different sides, analogous phase rule."""
    spec = spec.validated()
    n = spec.k
    graph = complete_bipartite_graph(n, n, spec.alpha, start=0, end=2 * n - 1)
    source = HalvesAdversary(n, spec.alpha, graph.edges)
    return AdversaryBundle(graph=graph, source=source, spec=spec)


# ---------------------------------------------------------------------------
# grid trap (fixed assignment)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    """Side length m >= 4 and spread alpha in [1, 2).

    The expensive-detour argument needs alpha strictly below 2; alpha = 1 is
    the degenerate all-ones sanity case.
    """

    m: int
    alpha: Fraction

    def validated(self) -> "GridSpec":
        if self.m < 4:
            raise InvalidSpec("grid trap needs m >= 4")
        alpha = _as_fraction(self.alpha)
        if not 1 <= alpha < 2:
            raise InvalidSpec("grid trap needs 1 <= alpha < 2")
        return GridSpec(self.m, alpha)


@dataclass
class GridBundle:
    graph: EstimateGraph
    assignment: WeightAssignment
    certificate: Walk
    spec: GridSpec
    expected_online: Fraction          # (m*m - 1) * alpha
    certificate_bound: Fraction        # 6*m*alpha + (m-2)*m
    adaptive_verified: bool
    skip_reason: str | None


def _grid_id(m: int, row: int, col: int) -> int:
    pos = row if col % 2 == 0 else m - 1 - row
    return col * m + pos


def _grid_coords(m: int, vid: int) -> tuple[int, int]:
    col, pos = divmod(vid, m)
    row = pos if col % 2 == 0 else m - 1 - pos
    return row, col


def build_grid_trap(spec: GridSpec, *, verify_adaptive: bool = True,
                    solver_cap: int = DEFAULT_EXACT_CAP) -> GridBundle:
    """m*m grid, uniform announcements [1, alpha], fixed actual weights.

    Vertex ids follow a column serpentine from the start corner, so the
    intended expensive Hamiltonian path is 0,1,...,n-1 and every cost tie
    resolves toward it.  Actual weights: all vertical edges and the
    serpentine's connector edges cost alpha; the only weight-1 edges are
    the interior horizontal edges of the odd rows, which the cheaper
    alternative walk uses.  The construction is a reconstruction and is
    gated by build-time self-checks: the certificate walk must be valid and
    within its cost bound (always checked), and the replanning explorer must
    pay exactly (m*m - 1) * alpha (checked by simulation when the instance
    fits the exact-solver cap; otherwise flagged unverified).
    """
    spec = spec.validated()
    m, alpha = spec.m, spec.alpha
    n = m * m
    edges: list[Edge] = []
    weights: list[Fraction] = []
    for col in range(m):
        for row in range(m):
            a = _grid_id(m, row, col)
            if row + 1 < m:
                edges.append(_ordered_edge(a, _grid_id(m, row + 1, col), alpha))
                weights.append(alpha)
            if col + 1 < m:
                b = _grid_id(m, row, col + 1)
                connector = (row == m - 1) if col % 2 == 0 else (row == 0)
                cheap = (row % 2 == 1 and 1 <= row <= m - 2
                         and 1 <= col <= m - 3)
                w = Fraction(1) if cheap and not connector else alpha
                edges.append(_ordered_edge(a, b, alpha))
                weights.append(w)
    graph = EstimateGraph(n, edges, 0, n - 1)
    problems = validate(graph)
    assert not problems, problems
    assignment = WeightAssignment(dict(enumerate(weights)))

    certificate = _grid_certificate(graph, assignment, m)
    expected_online = (n - 1) * alpha
    bound = 6 * m * alpha + (m - 2) * m
    if certificate.cost > bound:
        raise GridTrapError(
            f"trap not effective for m={m}, alpha={alpha}: certificate "
            f"cost {certificate.cost} exceeds bound {bound}")
    if (certificate.vertices[0] != graph.start
            or certificate.vertices[-1] != graph.end
            or set(certificate.vertices) != set(range(n))):
        raise GridTrapError("certificate walk is not a covering s-t walk")

    verified = False
    reason: str | None = None
    if verify_adaptive:
        if n <= solver_cap:
            from .explorers import AdaptiveExplorer
            report = run_episode(graph, FixedAssignment(assignment),
                                 AdaptiveExplorer(cap=solver_cap),
                                 oracle_cap=solver_cap)
            if report.online_cost != expected_online:
                raise GridTrapError(
                    f"trap not effective for m={m}, alpha={alpha}: "
                    f"replanning explorer paid {report.online_cost}, "
                    f"expected {expected_online}")
            verified = True
        else:
            reason = (f"adaptive simulation needs exact covering-walk solves "
                      f"over up to {n} vertices, beyond the exact-solver cap "
                      f"{solver_cap}")
    else:
        reason = "adaptive verification disabled"
    return GridBundle(graph=graph, assignment=assignment,
                      certificate=certificate, spec=spec,
                      expected_online=expected_online,
                      certificate_bound=bound,
                      adaptive_verified=verified, skip_reason=reason)


def _ordered_edge(a: int, b: int, alpha: Fraction) -> Edge:
    if a > b:
        a, b = b, a
    return Edge(a, b, Fraction(1), alpha)


def _grid_certificate(graph: EstimateGraph, assignment: WeightAssignment,
                      m: int) -> Walk:
    """Row serpentine through the weight-1 interior rows, plus a cheapest
    tail back to the end corner when the parities disagree."""
    vertices: list[int] = []
    for row in range(m):
        cols = range(m) if row % 2 == 0 else range(m - 1, -1, -1)
        vertices.extend(_grid_id(m, row, c) for c in cols)
    end = graph.end
    if vertices[-1] != end:
        dists, preds = shortest_paths(graph, assignment.weights, vertices[-1])
        tail = [end]
        while tail[-1] != vertices[-1]:
            tail.append(preds[tail[-1]])
        vertices.extend(reversed(tail[:-1]))
    return walk_of_vertices(graph, vertices, assignment.weights)


# ---------------------------------------------------------------------------
# random instances
# ---------------------------------------------------------------------------

def random_instance(n: int, *, density: float = 0.5, law: str = "mixed",
                    alpha: Fraction = Fraction(2),
                    seed: int = 0) -> tuple[EstimateGraph, WeightAssignment]:
    """Seeded connected random instance with valid intervals and actuals.

    law "uniform": every interval is exactly [1, alpha].
    law "mixed": per-edge lower bounds and spreads vary, capped at alpha.
    Denominators stay small so downstream integer scaling stays cheap.
    """
    if n < 2:
        raise InvalidSpec("random instance needs n >= 2")
    alpha = _as_fraction(alpha)
    if alpha < 1:
        raise InvalidSpec("alpha must be >= 1")
    if law not in ("uniform", "mixed"):
        raise InvalidSpec(f"unknown interval law {law!r}")
    rng = random.Random(seed)
    pairs = {(rng.randrange(v), v) for v in range(1, n)}
    rest = sorted({(a, b) for a in range(n) for b in range(a + 1, n)} - pairs)
    extra = round(density * len(rest))
    pairs |= set(rng.sample(rest, extra)) if extra else set()
    edges: list[Edge] = []
    weights: dict[int, Fraction] = {}
    for eid, (a, b) in enumerate(sorted(pairs)):
        if law == "uniform":
            lo, hi = Fraction(1), alpha
        else:
            lo = Fraction(rng.randint(2, 16), 4)
            hi = lo * (1 + (alpha - 1) * Fraction(rng.randint(0, 4), 4))
        edges.append(Edge(a, b, lo, hi))
        weights[eid] = lo + (hi - lo) * Fraction(rng.randint(0, 4), 4)
    s = rng.randrange(n)
    t = rng.choice([v for v in range(n) if v != s])
    graph = EstimateGraph(n, edges, s, t)
    problems = validate(graph)
    assert not problems, problems
    assignment = WeightAssignment(weights)
    profile = alpha_of(graph)
    assert profile.alpha <= alpha
    return graph, assignment


def random_uniform_assignment(graph: EstimateGraph,
                              seed: int) -> WeightAssignment:
    """Random actual weights inside each announced interval."""
    rng = random.Random(seed)
    weights = {}
    for eid, e in enumerate(graph.edges):
        weights[eid] = e.lower + (e.upper - e.lower) * Fraction(
            rng.randint(0, 8), 8)
    return WeightAssignment(weights)
