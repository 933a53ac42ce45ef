"""JSON serialization for instances and adversary configs.

Instance files carry the graph, the announced intervals, and optionally the
actual weights ("actual" is absent when an adaptive adversary supplies
them).  Rationals are serialized as exact "p/q" strings.  Adaptive
adversaries cannot be serialized as plain instances, so they are referenced
by family name plus parameters in a config stub.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import adversaries as adv
from .graph import Edge, EstimateGraph, WeightAssignment


def fraction_str(x: Fraction) -> str:
    return str(x)


def parse_fraction(text: str | int | float) -> Fraction:
    """Accept "p/q", integer, or exact decimal strings like "1.5"."""
    if isinstance(text, (int, str)):
        return Fraction(text)
    raise ValueError(f"cannot parse exact rational from {text!r}")


def instance_to_dict(graph: EstimateGraph,
                     assignment: WeightAssignment | None = None) -> dict:
    edges = []
    for eid, e in enumerate(graph.edges):
        entry = {"a": e.a, "b": e.b,
                 "lower": fraction_str(e.lower),
                 "upper": fraction_str(e.upper)}
        if assignment is not None:
            entry["actual"] = fraction_str(assignment.weight(eid))
        edges.append(entry)
    return {"n": graph.vertex_count, "s": graph.start, "t": graph.end,
            "edges": edges}


def instance_from_dict(data: dict) -> tuple[EstimateGraph,
                                            WeightAssignment | None]:
    edges = []
    actuals: dict[int, Fraction] = {}
    have_actuals = True
    for eid, entry in enumerate(data["edges"]):
        edges.append(Edge(int(entry["a"]), int(entry["b"]),
                          parse_fraction(entry["lower"]),
                          parse_fraction(entry["upper"])))
        if "actual" in entry:
            actuals[eid] = parse_fraction(entry["actual"])
        else:
            have_actuals = False
    graph = EstimateGraph(int(data["n"]), edges, int(data["s"]),
                          int(data["t"]))
    assignment = WeightAssignment(actuals) if have_actuals and edges else None
    return graph, assignment


def save_instance(path: str | Path, graph: EstimateGraph,
                  assignment: WeightAssignment | None = None) -> None:
    payload = instance_to_dict(graph, assignment)
    Path(path).write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n",
                          encoding="utf-8")


@dataclass(frozen=True)
class AdversaryConfig:
    """Named adaptive adversary plus its parameters."""

    family: str
    params: dict

    def to_dict(self) -> dict:
        return {"family": self.family, **self.params}


def save_adversary_config(path: str | Path, config: AdversaryConfig) -> None:
    Path(path).write_text(
        json.dumps(config.to_dict(), indent=1, sort_keys=True) + "\n",
        encoding="utf-8")


def build_from_config(config: AdversaryConfig):
    """Instantiate the adversary bundle a config stub refers to."""
    family = config.family
    params = config.params
    if family == "recursive":
        spec = adv.RecursiveSpec(int(params["k"]), int(params["depth"]),
                                 parse_fraction(params["alpha"]))
        return adv.build_recursive(spec)
    if family == "complete":
        spec = adv.CompleteAdvSpec(int(params["k"]),
                                   parse_fraction(params["alpha"]))
        return adv.build_complete_adversary(spec)
    if family == "bipartite":
        spec = adv.CompleteAdvSpec(int(params["n"]),
                                   parse_fraction(params["alpha"]))
        return adv.build_bipartite_adversary(spec)
    raise ValueError(f"unknown adversary family {family!r}")


def load_run_input(path: str | Path):
    """Load either an instance file or an adversary config.

    Returns ("instance", graph, assignment) or ("adversary", bundle, config).
    """
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if "edges" in data:
        graph, assignment = instance_from_dict(data)
        return "instance", graph, assignment
    if "family" in data:
        params = {k: v for k, v in data.items() if k != "family"}
        config = AdversaryConfig(data["family"], params)
        return "adversary", build_from_config(config), config
    raise ValueError(f"{path}: neither an instance file nor an adversary "
                     f"config")
