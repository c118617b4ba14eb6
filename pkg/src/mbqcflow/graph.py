"""Open graphs and their GF(2) cut structure.

An open graph is a simple undirected graph with designated ordered input
and output vertex sets.  Entanglement across a bipartition of the
corresponding graph state equals the GF(2) rank of the adjacency
submatrix between the two sides, which is what the cut operations here
compute.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import BudgetExceededError
from .gf2 import Gf2Matrix

#: Cap on the number of bipartitions enumerated by the entanglement check.
DEFAULT_CUT_BUDGET = 2**20


@dataclass(frozen=True)
class OpenGraph:
    """Simple undirected graph with ordered input and output vertex sets.

    Parameters
    ----------
    n : int
        Number of vertices, labelled ``0..n-1``.
    edges : iterable of (int, int)
        Unordered vertex pairs; no self-loops or duplicates.
    inputs : iterable of int
        Ordered input vertices (the order fixes the input qubit register).
    outputs : iterable of int
        Ordered output vertices.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int]],
        inputs: Iterable[int] = (),
        outputs: Iterable[int] = (),
    ) -> None:
        canonical = sorted(tuple(sorted(e)) for e in edges)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(canonical))
        object.__setattr__(self, "inputs", tuple(inputs))
        object.__setattr__(self, "outputs", tuple(outputs))
        self._validate()

    def _validate(self) -> None:
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        for name, vertices in (("inputs", self.inputs), ("outputs", self.outputs)):
            if len(set(vertices)) != len(vertices):
                raise ValueError(f"duplicate vertex in {name}")
            for v in vertices:
                if not 0 <= v < self.n:
                    raise ValueError(f"{name} vertex {v} out of range")

    @cached_property
    def adjacency_masks(self) -> tuple[int, ...]:
        """Neighbour bitmask per vertex."""
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    @cached_property
    def input_set(self) -> frozenset[int]:
        return frozenset(self.inputs)

    @cached_property
    def output_set(self) -> frozenset[int]:
        return frozenset(self.outputs)

    @cached_property
    def measured(self) -> tuple[int, ...]:
        """Vertices outside the output set, ascending."""
        return tuple(v for v in range(self.n) if v not in self.output_set)

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(_mask_to_set(self.adjacency_masks[v]))

    def vertex_set(self) -> frozenset[int]:
        return frozenset(range(self.n))

    # -- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "edges": [list(e) for e in self.edges],
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, data: dict) -> OpenGraph:
        try:
            n = data["n"]
            edges = [tuple(e) for e in data["edges"]]
            inputs = data.get("inputs", [])
            outputs = data.get("outputs", [])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed open graph JSON: {exc}") from exc
        for e in edges:
            if len(e) != 2:
                raise ValueError(f"edge {e} is not a pair")
        return cls(n=n, edges=edges, inputs=inputs, outputs=outputs)

    @classmethod
    def from_json(cls, text: str) -> OpenGraph:
        return cls.from_json_dict(json.loads(text))

    def to_dot(self, gflow=None) -> str:
        """Graphviz rendering: boxed inputs, hollow outputs.

        When a gflow is supplied its correction assignments are drawn as
        dashed red arrows.
        """
        lines = ["digraph G {", "  node [shape=circle, style=filled, fillcolor=lightgrey];"]
        for v in range(self.n):
            attrs = []
            if v in self.input_set:
                attrs.append("shape=box")
            if v in self.output_set:
                attrs.append("style=solid")
            if attrs:
                lines.append(f"  {v} [{', '.join(attrs)}];")
            else:
                lines.append(f"  {v};")
        for u, v in self.edges:
            lines.append(f"  {u} -> {v} [dir=none];")
        if gflow is not None:
            for i in sorted(gflow.corrections):
                for j in sorted(gflow.corrections[i]):
                    lines.append(
                        f"  {i} -> {j} [style=dashed, color=red, constraint=false];"
                    )
        lines.append("}")
        return "\n".join(lines)


def _mask_to_set(mask: int) -> frozenset[int]:
    out = set()
    while mask:
        low = mask & -mask
        out.add(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


def _set_to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def _check_vertices(graph: OpenGraph, vertices: Iterable[int], name: str) -> frozenset[int]:
    vs = frozenset(vertices)
    for v in vs:
        if not 0 <= v < graph.n:
            raise ValueError(f"{name} contains out-of-range vertex {v}")
    return vs


def odd_neighborhood(graph: OpenGraph, vertices: Iterable[int]) -> frozenset[int]:
    """Vertices adjacent to an odd number of members of ``vertices``.

    Linear over symmetric difference: Odd(K1 xor K2) = Odd(K1) xor Odd(K2).
    """
    vs = _check_vertices(graph, vertices, "vertex set")
    acc = 0
    for v in vs:
        acc ^= graph.adjacency_masks[v]
    return _mask_to_set(acc)


def cut_edges(graph: OpenGraph, side: Iterable[int]) -> int:
    """Number of edges with exactly one endpoint in ``side``."""
    vs = _check_vertices(graph, side, "cut side")
    return sum(1 for u, v in graph.edges if (u in vs) != (v in vs))


def cut_rank(graph: OpenGraph, side: Iterable[int]) -> int:
    """GF(2) rank of the adjacency submatrix between ``side`` and its complement.

    For the corresponding graph state this equals the log2 Schmidt rank of
    the bipartition, so it never exceeds ``cut_edges`` nor the size of the
    smaller side.
    """
    vs = _check_vertices(graph, side, "cut side")
    other_mask = _set_to_mask(v for v in range(graph.n) if v not in vs)
    rows = [graph.adjacency_masks[v] & other_mask for v in sorted(vs)]
    return Gf2Matrix.from_rows(rows, graph.n).rank()


def has_entanglement_capacity(
    graph: OpenGraph, cut_budget: int = DEFAULT_CUT_BUDGET
) -> tuple[bool, frozenset[int] | None]:
    """Check that every input/output-separating cut can carry the input space.

    Each input is first extended with a pendant vertex standing in for the
    reference half of a maximally entangled pair; the check then requires
    cut rank at least ``len(inputs)`` for every bipartition (A, B) with the
    pendants and inputs in A and the outputs in B.  Returns ``(ok,
    witness)`` where ``witness`` is a violating A-side (original vertices
    only) when the check fails.

    Interior vertices are enumerated exhaustively; if there are more than
    ``log2(cut_budget)`` of them a :class:`BudgetExceededError` is raised.
    If an input is also an output no separating bipartition exists and the
    check is vacuously true.
    """
    k = len(graph.inputs)
    if graph.input_set & graph.output_set:
        return True, None
    free = [
        v
        for v in range(graph.n)
        if v not in graph.input_set and v not in graph.output_set
    ]
    if len(free) > 0 and 2 ** len(free) > cut_budget:
        raise BudgetExceededError(
            f"{len(free)} interior vertices exceed the cut budget of {cut_budget}"
        )

    # Pendant-extended graph: pendant n+i attached to the i-th input.
    ext_n = graph.n + k
    ext_edges = list(graph.edges) + [
        (inp, graph.n + idx) for idx, inp in enumerate(graph.inputs)
    ]
    ext = OpenGraph(n=ext_n, edges=ext_edges)
    base_a = set(graph.inputs) | set(range(graph.n, ext_n))

    for mask in range(2 ** len(free)):
        # Bit set moves the free vertex to the output side.
        a_side = set(base_a)
        a_side.update(v for bit, v in enumerate(free) if not (mask >> bit) & 1)
        if cut_rank(ext, a_side) < k:
            return False, frozenset(a_side & graph.vertex_set())
    return True, None
