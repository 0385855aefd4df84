"""Labelled open graphs and measurement patterns.

A labelled open graph is a simple undirected graph with input/output
subsets (possibly overlapping) and a measurement label in
{XY, XZ, YZ, X, Y, Z} on every non-output vertex.  Together with an
angle map it forms a measurement pattern; single-qubit gates accumulated
on outputs by rewrites ride along as a trailing-gate list.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Sequence, Tuple

PLANAR_LABELS = ("XY", "XZ", "YZ")
PAULI_LABELS = ("X", "Y", "Z")
ALL_LABELS = PLANAR_LABELS + PAULI_LABELS

Edge = Tuple[str, str]


def edge(u: str, v: str) -> Edge:
    if u == v:
        raise ValueError(f"self-loop on {u!r}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class LabelledOpenGraph:
    vertices: FrozenSet[str]
    edges: FrozenSet[Edge]
    inputs: FrozenSet[str]
    outputs: FrozenSet[str]
    labels: Mapping[str, str]

    def __post_init__(self):
        for e in self.edges:
            if e != edge(*e) or not set(e) <= self.vertices:
                raise ValueError(f"bad edge {e!r}")
        if not self.inputs <= self.vertices or not self.outputs <= self.vertices:
            raise ValueError("inputs/outputs must be vertices")
        for v in self.measured:
            if self.labels.get(v) not in ALL_LABELS:
                raise ValueError(f"measured vertex {v!r} needs a label")
        for v in self.labels:
            if v in self.outputs:
                raise ValueError(f"output {v!r} must not carry a label")

    @classmethod
    def make(cls, vertices: Iterable[str], edges: Iterable[Sequence[str]],
             inputs: Iterable[str], outputs: Iterable[str],
             labels: Mapping[str, str]) -> "LabelledOpenGraph":
        return cls(
            frozenset(vertices),
            frozenset(edge(u, v) for u, v in edges),
            frozenset(inputs),
            frozenset(outputs),
            dict(labels),
        )

    # -- basic queries ---------------------------------------------------

    @property
    def measured(self) -> FrozenSet[str]:
        """Non-output vertices (the measured ones)."""
        return self.vertices - self.outputs

    @property
    def prepared(self) -> FrozenSet[str]:
        """Non-input vertices."""
        return self.vertices - self.inputs

    def label(self, v: str) -> Optional[str]:
        return self.labels.get(v)

    def is_planar(self, v: str) -> bool:
        return self.labels.get(v) in PLANAR_LABELS

    def is_pauli(self, v: str) -> bool:
        return self.labels.get(v) in PAULI_LABELS

    def neighbours(self, v: str) -> FrozenSet[str]:
        if v not in self.vertices:
            raise KeyError(v)
        return frozenset(w for a, b in self.edges for w in ((b,) if a == v else (a,) if b == v else ()))

    def adjacent(self, u: str, v: str) -> bool:
        return edge(u, v) in self.edges

    def odd_neighbourhood(self, subset: Iterable[str]) -> FrozenSet[str]:
        """Vertices adjacent to an odd number of members of the subset."""
        subset = frozenset(subset)
        unknown = subset - self.vertices
        if unknown:
            raise KeyError(sorted(unknown)[0])
        counts: Dict[str, int] = {}
        for a, b in self.edges:
            if b in subset:
                counts[a] = counts.get(a, 0) ^ 1
            if a in subset:
                counts[b] = counts.get(b, 0) ^ 1
        return frozenset(v for v, c in counts.items() if c)

    def edges_inside(self, subset: Iterable[str]) -> int:
        subset = frozenset(subset)
        return sum(1 for a, b in self.edges if a in subset and b in subset)

    # -- structural operations (pure) -------------------------------------

    def local_complement(self, u: str) -> "LabelledOpenGraph":
        """Complement the edges among u's neighbours; everything else fixed."""
        nbrs = sorted(self.neighbours(u))
        toggled = {edge(a, b) for i, a in enumerate(nbrs) for b in nbrs[i + 1:]}
        return replace(self, edges=self.edges ^ frozenset(toggled))

    def pivot(self, u: str, v: str) -> "LabelledOpenGraph":
        """G * u * v * u for adjacent u, v."""
        if not self.adjacent(u, v):
            raise ValueError(f"{u!r} and {v!r} are not adjacent")
        return self.local_complement(u).local_complement(v).local_complement(u)

    def input_extend(self, u: str) -> Tuple["LabelledOpenGraph", str]:
        """Add a fresh XY-labelled vertex u' tied to input u; u' becomes the input."""
        if u not in self.inputs:
            raise ValueError(f"{u!r} is not an input")
        new = u + "'"
        while new in self.vertices:
            new += "'"
        labels = dict(self.labels)
        labels[new] = "XY"
        g = LabelledOpenGraph(
            self.vertices | {new},
            self.edges | {edge(u, new)},
            (self.inputs - {u}) | {new},
            self.outputs,
            labels,
        )
        return g, new

    def remove_vertex(self, u: str) -> "LabelledOpenGraph":
        if u in self.inputs or u in self.outputs:
            raise ValueError(f"{u!r} is an input or output")
        labels = {v: l for v, l in self.labels.items() if v != u}
        return LabelledOpenGraph(
            self.vertices - {u},
            frozenset(e for e in self.edges if u not in e),
            self.inputs,
            self.outputs,
            labels,
        )

    def relabel(self, v: str, label: str) -> "LabelledOpenGraph":
        if v in self.outputs:
            raise ValueError(f"{v!r} is an output")
        labels = dict(self.labels)
        labels[v] = label
        return replace(self, labels=labels)


@dataclass(frozen=True)
class TrailingGate:
    """A single-qubit gate applied to an output wire after the pattern."""

    qubit: str
    name: str  # Z | X | S | Sdg | H | RZ | RX
    angle: Optional[Fraction] = None  # units of pi, for RZ/RX


@dataclass(frozen=True)
class MeasurementPattern:
    graph: LabelledOpenGraph
    angles: Mapping[str, Fraction]  # units of pi, in [0, 2)
    trailing: Tuple[TrailingGate, ...] = ()

    def __post_init__(self):
        norm = {v: Fraction(a) % 2 for v, a in self.angles.items()}
        if set(norm) != set(self.graph.measured):
            raise ValueError("angles must be defined exactly on measured vertices")
        for v, a in norm.items():
            if self.graph.is_pauli(v) and a.denominator != 1:
                raise ValueError(f"Pauli-measured {v!r} needs an angle of 0 or pi")
        object.__setattr__(self, "angles", norm)
        for tg in self.trailing:
            if tg.qubit not in self.graph.outputs:
                raise ValueError(f"trailing gate on non-output {tg.qubit!r}")

    @classmethod
    def make(cls, vertices, edges, inputs, outputs, labels, angles,
             trailing=()) -> "MeasurementPattern":
        g = LabelledOpenGraph.make(vertices, edges, inputs, outputs, labels)
        return cls(g, {v: Fraction(a) for v, a in angles.items()}, tuple(trailing))

    def angle(self, v: str) -> Fraction:
        return self.angles[v]

    def with_graph(self, graph: LabelledOpenGraph, angles=None, trailing=None) -> "MeasurementPattern":
        return MeasurementPattern(
            graph,
            dict(self.angles if angles is None else angles),
            self.trailing if trailing is None else tuple(trailing),
        )

    def pauli_pi_vertices(self) -> FrozenSet[str]:
        """Pauli-measured vertices whose angle is an odd multiple of pi."""
        return frozenset(
            v for v in self.graph.measured
            if self.graph.is_pauli(v) and self.angles[v] % 2 == 1
        )
