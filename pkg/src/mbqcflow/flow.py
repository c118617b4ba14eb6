"""Finding and verifying Flow and gFlow on open graphs.

A gFlow assigns every measured vertex a correcting set of non-input
vertices together with a layered time order, such that corrections never
touch the past.  ``find_gflow`` returns the maximally delayed gFlow via
backward layer peeling (each pass solves one GF(2) system per remaining
vertex); ``find_causal_flow`` is the same peeling restricted to singleton
correcting sets.  Both are complete: a None result means no flow of that
kind exists.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

import networkx as nx

from .errors import FlowConsistencyError
from .gf2 import gf2_solve_min
from .graph import OpenGraph, odd_neighborhood
from .pattern import Plane


class Violation(NamedTuple):
    """One broken gFlow condition."""

    vertex: int
    rule: str
    detail: str


@dataclass(frozen=True)
class GFlow:
    """Correction-set map with a layered measurement order.

    ``layers`` lists the measurement rounds in time order followed by one
    final layer holding the (unmeasured) outputs.  ``planes`` assigns a
    measurement plane to every measured vertex.
    """

    corrections: dict[int, frozenset[int]]
    layers: tuple[frozenset[int], ...]
    planes: dict[int, Plane]

    def __init__(
        self,
        corrections: dict[int, Iterable[int]],
        layers: Iterable[Iterable[int]],
        planes: dict[int, Plane] | None = None,
    ) -> None:
        corr = {v: frozenset(s) for v, s in corrections.items()}
        object.__setattr__(self, "corrections", corr)
        object.__setattr__(self, "layers", tuple(frozenset(l) for l in layers))
        object.__setattr__(
            self, "planes", {v: Plane(planes[v]) if planes and v in planes else Plane.XY for v in corr}
        )

    @cached_property
    def layer_of(self) -> dict[int, int]:
        index = {}
        for k, layer in enumerate(self.layers):
            for v in layer:
                if v in index:
                    raise ValueError(f"vertex {v} appears in two layers")
                index[v] = k
        return index

    @property
    def depth(self) -> int:
        """Number of measurement rounds (the output layer does not count)."""
        return len(self.layers) - 1

    @property
    def is_flow(self) -> bool:
        return all(len(s) == 1 for s in self.corrections.values()) and all(
            p is Plane.XY for p in self.planes.values()
        )

    def to_json_dict(self) -> dict:
        return {
            "g": {str(v): sorted(s) for v, s in sorted(self.corrections.items())},
            "layers": [sorted(layer) for layer in self.layers],
            "planes": {str(v): p.value for v, p in sorted(self.planes.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, data: dict) -> GFlow:
        try:
            corrections = {int(v): set(s) for v, s in data["g"].items()}
            layers = [set(layer) for layer in data["layers"]]
            planes = {int(v): Plane(p) for v, p in data.get("planes", {}).items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed gflow JSON: {exc}") from exc
        return cls(corrections=corrections, layers=layers, planes=planes)

    @classmethod
    def from_json(cls, text: str) -> GFlow:
        return cls.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class Flow:
    """Causal flow: one correcting vertex per measured vertex."""

    successor: dict[int, int]
    layers: tuple[frozenset[int], ...]

    def __init__(self, successor: dict[int, int], layers: Iterable[Iterable[int]]):
        object.__setattr__(self, "successor", dict(successor))
        object.__setattr__(self, "layers", tuple(frozenset(l) for l in layers))

    def to_gflow(self) -> GFlow:
        return GFlow(
            corrections={v: {w} for v, w in self.successor.items()},
            layers=self.layers,
        )

    @property
    def depth(self) -> int:
        return len(self.layers) - 1


def _check_analysis_preconditions(graph: OpenGraph) -> None:
    if len(graph.inputs) > len(graph.outputs):
        raise ValueError("flow analysis requires |inputs| <= |outputs|")


def _peel(graph: OpenGraph, singleton: bool):
    """Backward layer peeling; returns construction passes or None.

    Each pass collects every unprocessed vertex u admitting a correcting
    set K of already-processed non-inputs with Odd(K) meeting the
    unprocessed region in exactly {u}.  Passes are built from the output
    side, so the first pass holds the vertices measured last.
    """
    outputs = graph.output_set
    processed = set(outputs)
    unprocessed = sorted(v for v in range(graph.n) if v not in processed)
    correctors = sorted(v for v in processed if v not in graph.input_set)
    passes: list[dict[int, frozenset[int]]] = []

    while unprocessed:
        found: dict[int, frozenset[int]] = {}
        if singleton:
            for w in correctors:
                cand = [
                    v for v in unprocessed if (graph.adjacency_masks[w] >> v) & 1
                ]
                if len(cand) == 1 and cand[0] not in found:
                    found[cand[0]] = frozenset((w,))
        else:
            rows = [
                sum(
                    1 << col
                    for col, w in enumerate(correctors)
                    if (graph.adjacency_masks[w] >> v) & 1
                )
                for v in unprocessed
            ]
            for u in unprocessed:
                rhs = [1 if v == u else 0 for v in unprocessed]
                sol = gf2_solve_min(rows, rhs)
                if sol is not None:
                    found[u] = frozenset(
                        correctors[col] for col in range(len(correctors)) if (sol >> col) & 1
                    )
        if not found:
            return None
        passes.append(found)
        processed.update(found)
        unprocessed = [v for v in unprocessed if v not in found]
        correctors = sorted(
            set(correctors) | {v for v in found if v not in graph.input_set}
        )
    return passes


def _layers_from_passes(passes, outputs: frozenset[int]) -> list[frozenset[int]]:
    layers = [frozenset(p) for p in reversed(passes)]
    layers.append(frozenset(outputs))
    return layers


def find_gflow(graph: OpenGraph) -> GFlow | None:
    """Maximally delayed XY-plane gFlow, or None when no gFlow exists."""
    _check_analysis_preconditions(graph)
    passes = _peel(graph, singleton=False)
    if passes is None:
        return None
    corrections: dict[int, frozenset[int]] = {}
    for p in passes:
        corrections.update(p)
    return GFlow(
        corrections=corrections,
        layers=_layers_from_passes(passes, graph.output_set),
    )


def find_causal_flow(graph: OpenGraph) -> Flow | None:
    """Maximally delayed causal flow, or None when no causal flow exists."""
    _check_analysis_preconditions(graph)
    passes = _peel(graph, singleton=True)
    if passes is None:
        return None
    successor: dict[int, int] = {}
    for p in passes:
        for v, s in p.items():
            (successor[v],) = s
    return Flow(
        successor=successor,
        layers=_layers_from_passes(passes, graph.output_set),
    )


def verify_gflow(graph: OpenGraph, gflow: GFlow) -> list[Violation]:
    """Check every gFlow condition; an empty list means the gFlow is valid.

    Structural malformations (correction map not defined exactly on the
    measured vertices, layers not partitioning the vertex set, correcting
    sets reaching inputs) raise ValueError; per-vertex rule violations are
    returned as a list.
    """
    measured = set(graph.measured)
    if set(gflow.corrections) != measured:
        raise ValueError(
            "correction map must be defined exactly on the non-output vertices"
        )
    layer_of = gflow.layer_of
    if set(layer_of) != set(range(graph.n)):
        raise ValueError("layers must partition the vertex set")
    if gflow.layers and gflow.layers[-1] != graph.output_set:
        raise ValueError("final layer must hold exactly the outputs")
    if set(gflow.planes) != measured:
        raise ValueError("planes must be defined exactly on the measured vertices")
    for i, corr in gflow.corrections.items():
        if corr & graph.input_set:
            raise ValueError(f"correcting set of {i} contains input vertices")
        for j in corr:
            if not 0 <= j < graph.n:
                raise ValueError(f"correcting set of {i} is out of range")

    violations: list[Violation] = []
    for i in sorted(gflow.corrections):
        corr = gflow.corrections[i]
        odd = odd_neighborhood(graph, corr)
        for j in sorted(corr):
            if j != i and not layer_of[i] < layer_of[j]:
                violations.append(
                    Violation(i, "g1", f"corrector {j} not after {i}")
                )
        for j in sorted(odd):
            # Strict form: everything the correction touches must come
            # strictly later.  Merely banning strictly-earlier vertices
            # would admit same-round corrections that overwrite each
            # other and break determinism.
            if j != i and not layer_of[i] < layer_of[j]:
                violations.append(
                    Violation(i, "g2", f"correction touches non-later vertex {j}")
                )
        plane = gflow.planes[i]
        if plane is Plane.XY:
            if i in corr or i not in odd:
                violations.append(
                    Violation(i, "g3", "XY needs i outside g(i) and inside Odd(g(i))")
                )
        elif plane is Plane.XZ:
            if i not in corr or i not in odd:
                violations.append(
                    Violation(i, "g4", "XZ needs i inside g(i) and inside Odd(g(i))")
                )
        else:
            if i not in corr or i in odd:
                violations.append(
                    Violation(i, "g5", "YZ needs i inside g(i) and outside Odd(g(i))")
                )
    return violations


def measurement_rounds(gflow: GFlow) -> tuple[tuple[frozenset[int], ...], int]:
    """Measured rounds in time order plus the depth (output layer excluded)."""
    rounds = gflow.layers[:-1]
    return rounds, len(rounds)


@dataclass(frozen=True)
class CorrectionReport:
    """Classical processing cost of a gFlow's correction schedule.

    For each vertex j, ``x_parity[j]`` collects the measured vertices whose
    outcome feeds an X correction on j, and ``z_parity[j]`` those feeding a
    Z correction.  ``total_cost`` counts all parity-set memberships and is
    traded off against ``depth``.
    """

    x_parity: dict[int, tuple[int, ...]]
    z_parity: dict[int, tuple[int, ...]]
    total_cost: int
    depth: int

    def to_json_dict(self) -> dict:
        return {
            "x_parity": {str(v): list(s) for v, s in sorted(self.x_parity.items())},
            "z_parity": {str(v): list(s) for v, s in sorted(self.z_parity.items())},
            "total_cost": self.total_cost,
            "depth": self.depth,
        }


def correction_dependencies(graph: OpenGraph, gflow: GFlow) -> CorrectionReport:
    """Per-vertex X/Z parity sets and the total classical processing cost."""
    x_parity: dict[int, list[int]] = {v: [] for v in range(graph.n)}
    z_parity: dict[int, list[int]] = {v: [] for v in range(graph.n)}
    for i in sorted(gflow.corrections):
        corr = gflow.corrections[i]
        for j in corr:
            x_parity[j].append(i)
        for j in odd_neighborhood(graph, corr):
            if j != i:
                z_parity[j].append(i)
    total = sum(len(s) for s in x_parity.values()) + sum(
        len(s) for s in z_parity.values()
    )
    return CorrectionReport(
        x_parity={v: tuple(s) for v, s in x_parity.items()},
        z_parity={v: tuple(s) for v, s in z_parity.items()},
        total_cost=total,
        depth=len(gflow.layers) - 1,
    )


@dataclass(frozen=True)
class WireReport:
    """Vertex-disjoint input-to-output paths plus the vertices they miss."""

    wires: tuple[tuple[int, ...], ...]
    uncovered_non_outputs: frozenset[int]

    def to_json_dict(self) -> dict:
        return {
            "wires": [list(w) for w in self.wires],
            "uncovered_non_outputs": sorted(self.uncovered_non_outputs),
        }


def flow_wires(graph: OpenGraph, gflow: GFlow | Flow) -> WireReport:
    """One vertex-disjoint input-to-output path per input.

    For a causal flow the wires follow the successor images from each
    input (for equally many inputs and outputs these cover every vertex).
    For a general gFlow the paths come from unit-vertex-capacity max-flow;
    fewer than ``len(inputs)`` disjoint paths means an upstream invariant
    was violated and raises :class:`FlowConsistencyError`.  Non-output
    vertices on no wire are reported for the entanglement-bound surplus
    term.
    """
    if isinstance(gflow, Flow):
        gflow = gflow.to_gflow()
    if gflow.is_flow:
        wires = _wires_from_flow(graph, gflow)
    else:
        wires = _wires_from_max_flow(graph)
    covered = {v for wire in wires for v in wire}
    uncovered = frozenset(
        v for v in range(graph.n) if v not in covered and v not in graph.output_set
    )
    return WireReport(wires=tuple(tuple(w) for w in wires), uncovered_non_outputs=uncovered)


def _wires_from_flow(graph: OpenGraph, gflow: GFlow) -> list[list[int]]:
    wires = []
    seen: set[int] = set()
    for start in graph.inputs:
        wire = [start]
        current = start
        while current not in graph.output_set:
            (current,) = gflow.corrections[current]
            if current in wire:
                raise FlowConsistencyError(f"flow successor cycle through {current}")
            wire.append(current)
        if seen & set(wire):
            raise FlowConsistencyError("flow wires are not vertex-disjoint")
        seen.update(wire)
        wires.append(wire)
    return wires


def _wires_from_max_flow(graph: OpenGraph) -> list[list[int]]:
    """Vertex-disjoint input/output paths via a vertex-split flow network."""
    digraph = nx.DiGraph()
    for v in range(graph.n):
        digraph.add_edge(("in", v), ("out", v), capacity=1)
    for u, v in graph.edges:
        digraph.add_edge(("out", u), ("in", v), capacity=1)
        digraph.add_edge(("out", v), ("in", u), capacity=1)
    for v in graph.inputs:
        digraph.add_edge("source", ("in", v), capacity=1)
    for v in graph.outputs:
        digraph.add_edge(("out", v), "sink", capacity=1)
    if not graph.inputs:
        return []
    value, flow = nx.maximum_flow(digraph, "source", "sink")
    if value < len(graph.inputs):
        raise FlowConsistencyError(
            f"only {value} vertex-disjoint paths exist for {len(graph.inputs)} inputs"
        )
    wires = []
    for start in graph.inputs:
        wire = [start]
        current = start
        while True:
            hops = flow[("out", current)]
            target = next(t for t, used in hops.items() if used)
            if target == "sink":
                break
            (_, current) = target
            wire.append(current)
        wires.append(wire)
    return wires
