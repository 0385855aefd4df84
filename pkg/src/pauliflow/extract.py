"""Ancilla-free circuit extraction: measurement pattern -> Pddag -> circuit.

Each planar measurement contributes one rotation node whose string is the
primary extraction string of its correction set, with an exact sign ledger:
one flip per edge inside the set, one per Y pair, one per absorbed Pauli
measurement at angle pi.  Tableau rows come from the inputs' extraction
strings (X rows via input extension) and the focussed-set generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from .flow import (
    FlowOrder,
    FocussedSet,
    NoPauliFlowError,
    PauliFlowData,
    find_pauli_flow_detailed,
    focus_flow,
    focussed_over_single,
    focussed_set_generators,
    is_flow_focussed,
    paulis_first,
    verify_flow,
    verify_focussed,
)
from .graph import LabelledOpenGraph, MeasurementPattern, TrailingGate
from .pauli import Rotation, SignedPauliString, single
from .pddag import Circuit, IsometryTableau, Pddag, build_pddag, node_rotation, synthesize


@dataclass(frozen=True)
class ExtractionString:
    """Axis Pauli on the measured vertex plus a signed string over outputs."""

    axis: Optional[str]  # X/Y/Z for primary strings, None for focussed sets
    string: SignedPauliString  # sign carried in the string phase

    @property
    def sign(self) -> int:
        return self.string.sign


def primary_axis(graph: LabelledOpenGraph, flow: PauliFlowData, v: str) -> str:
    """X / Y / Z by membership of v in p(v) and Odd(p(v))."""
    p = flow.p[v]
    odd = graph.odd_neighbourhood(p)
    in_p, in_odd = v in p, v in odd
    if in_p and not in_odd:
        return "X"
    if in_p and in_odd:
        return "Y"
    if not in_p and in_odd:
        return "Z"
    raise ValueError(f"{v!r} is in neither its correction set nor its odd neighbourhood")


def _string_over_outputs(graph: LabelledOpenGraph, members: FrozenSet[str]) -> Dict[str, str]:
    odd = graph.odd_neighbourhood(members)
    letters = {}
    for q in graph.outputs:
        in_m, in_odd = q in members, q in odd
        if in_m and in_odd:
            letters[q] = "Y"
        elif in_m:
            letters[q] = "X"
        elif in_odd:
            letters[q] = "Z"
    return letters


def _sign_exponent(pattern: MeasurementPattern, members: FrozenSet[str],
                   exclude: Optional[str]) -> int:
    g = pattern.graph
    odd = g.odd_neighbourhood(members)
    overlap = members & odd
    if len(overlap) % 2:
        raise ValueError("correction set overlaps its odd neighbourhood oddly")
    pauli_pi = pattern.pauli_pi_vertices() - ({exclude} if exclude else set())
    c = g.edges_inside(members) + len(overlap) // 2 + len((members | odd) & pauli_pi)
    return c % 2


def extraction_string(pattern: MeasurementPattern, flow_or_fset, v: Optional[str] = None) -> ExtractionString:
    """Primary extraction string of a vertex, or the stabilizer of a focussed set."""
    g = pattern.graph
    if v is not None:
        flow: PauliFlowData = flow_or_fset
        members = flow.p[v]
        axis = primary_axis(g, flow, v)
    else:
        members = frozenset(flow_or_fset)
        axis = None
    c = _sign_exponent(pattern, members, exclude=v)
    string = SignedPauliString(_string_over_outputs(g, members), 2 * c)
    return ExtractionString(axis, string)


# -- input extension ------------------------------------------------------------


def _extend_all_inputs(pattern: MeasurementPattern, flow: PauliFlowData):
    """Extend every input; returns (pattern', flow', {input: extension vertex})."""
    g = pattern.graph
    angles = dict(pattern.angles)
    p = dict(flow.p)
    pairs = set(flow.order.as_pairs(g.vertices))
    ext: Dict[str, str] = {}
    for u in sorted(pattern.graph.inputs):
        nbrs = g.neighbours(u)
        g, new = g.input_extend(u)
        angles[new] = Fraction(0)
        p[new] = frozenset({u})
        pairs |= {(new, w) for w in nbrs | {u}}
        ext[u] = new
    new_pattern = pattern.with_graph(g, angles=angles, trailing=())
    new_flow = PauliFlowData(p, FlowOrder.from_pairs(pairs))
    return new_pattern, new_flow, ext


def _focus_one(graph: LabelledOpenGraph, p: Dict[str, FrozenSet[str]],
               order: FlowOrder, v: str) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    """Focus p[v] over the other measured vertices; returns (set, fired trace)."""
    current = p[v]
    trace = set()
    for w in order.temporal_order(graph.measured):
        if w != v and not focussed_over_single(graph, current, w):
            current = current ^ p[w]
            trace ^= {w}
    return current, frozenset(trace)


# -- the pipeline -----------------------------------------------------------------


def extract_pddag(pattern: MeasurementPattern, flow: Optional[PauliFlowData] = None,
                  fsets: Optional[Sequence[FocussedSet]] = None,
                  extension_sets: Optional[Mapping[str, FrozenSet[str]]] = None) -> Pddag:
    """Pattern -> Pddag: find/focus a flow, emit one node per planar vertex,
    derive tableau rows from input extensions and the focussed sets.

    extension_sets optionally pins the correction set used for each input's
    extension vertex (keyed by input id); by default they are produced by
    the focussing sweep.  Rewrites thread updated sets through here so both
    report sides use the same tableau-row representatives.
    """
    g = pattern.graph
    if any(str(v).startswith("t:") for v in g.vertices):
        raise ValueError("vertex ids starting with 't:' are reserved")
    if flow is None:
        flow, stuck = find_pauli_flow_detailed(g)
        if flow is None:
            raise NoPauliFlowError(stuck)
    bad = verify_flow(g, flow)
    if bad:
        raise ValueError(f"supplied flow is invalid: {bad}")
    if not is_flow_focussed(g, flow):
        flow = focus_flow(g, flow)
    flow = paulis_first(g, flow)
    if fsets is None:
        fsets = focussed_set_generators(g)

    # Rotation nodes, one per planar measured vertex, earliest first.
    planar = [v for v in g.measured if g.is_planar(v)]
    temporal = [v for v in flow.order.temporal_order(g.measured) if v in set(planar)]
    # Identity-string nodes (a measured vertex whose angle cannot reach the
    # outputs) are kept: they are global phases, and rewrites may turn them
    # into real rotations and back.
    nodes: List[Tuple[str, Rotation]] = []
    for v in temporal:
        ext = extraction_string(pattern, flow, v)
        d = 1 if g.labels[v] == "YZ" else 0
        string = -ext.string if d else ext.string
        nodes.append((v, node_rotation(string, pattern.angles[v])))

    # Tableau rows.
    epattern, eflow, ext_ids = _extend_all_inputs(pattern, flow)
    eg = epattern.graph
    ep = dict(eflow.p)
    z_rows: Dict[str, SignedPauliString] = {}
    x_rows: Dict[str, SignedPauliString] = {}
    traces: Dict[str, FrozenSet[str]] = {}
    corrections: Dict[str, FrozenSet[str]] = {}
    for u in sorted(g.inputs):
        if u in g.outputs:
            z_rows[u] = single(u, "Z")
        else:
            zs = extraction_string(pattern, flow, u)
            if zs.axis != "Z":
                raise ValueError(f"input {u!r} does not give a Z extraction string")
            z_rows[u] = zs.string
        up = ext_ids[u]
        if extension_sets is not None and u in extension_sets:
            focussed, trace = frozenset(extension_sets[u]), frozenset()
            if not verify_focussed(eg, focussed, eg.measured - {up}):
                raise ValueError(f"supplied extension set for {u!r} is not focussed")
        else:
            focussed, trace = _focus_one(eg, ep, eflow.order, up)
        ep[up] = focussed
        xflow = PauliFlowData(ep, eflow.order)
        xs = extraction_string(epattern, xflow, up)
        if xs.axis != "Z":
            raise ValueError(f"extension of input {u!r} does not give a Z string")
        x_rows[u] = xs.string
        traces[u] = trace
        corrections[u] = focussed

    free_rows = tuple(extraction_string(pattern, fs).string for fs in fsets)
    tableau = IsometryTableau(
        inputs=tuple(sorted(g.inputs)),
        outputs=tuple(sorted(g.outputs)),
        z_rows=z_rows,
        x_rows=x_rows,
        free_rows=free_rows,
        x_traces=traces,
        x_corrections=corrections,
    )
    dag = build_pddag(tableau, nodes)
    return append_trailing(dag, pattern.trailing)


def trailing_rotations(gate: TrailingGate) -> List[Rotation]:
    """Trailing single-qubit gate as end-of-circuit rotations, temporal order."""
    q = gate.qubit
    if gate.name == "Z":
        return [Rotation(single(q, "Z"), 1)]
    if gate.name == "X":
        return [Rotation(single(q, "X"), 1)]
    if gate.name == "S":
        return [Rotation(single(q, "Z"), Fraction(-1, 2))]
    if gate.name == "Sdg":
        return [Rotation(single(q, "Z"), Fraction(1, 2))]
    if gate.name == "RZ":
        return [Rotation(single(q, "Z"), -gate.angle)]
    if gate.name == "RX":
        return [Rotation(single(q, "X"), -gate.angle)]
    if gate.name == "H":
        h = Fraction(-1, 2)
        return [
            Rotation(single(q, "Z"), h),
            Rotation(single(q, "X"), h),
            Rotation(single(q, "Z"), h),
        ]
    raise ValueError(f"unsupported trailing gate {gate.name!r}")


TRAIL_PREFIX = "t:"


def trailing_node_id(list_len: int, index: int, sub: Optional[int] = None) -> str:
    """Stable id for a trailing gate: counted from the outermost gate, so
    rewrites that prepend new trailing gates keep existing ids unchanged."""
    base = f"{TRAIL_PREFIX}{list_len - 1 - index}"
    return base if sub is None else f"{base}.{sub}"


def append_trailing(dag: Pddag, trailing: Sequence[TrailingGate]) -> Pddag:
    """Append trailing gates as rotation nodes after everything else."""
    ids = list(dag.node_ids)
    nodes = dict(dag.nodes)
    for i, tg in enumerate(trailing):
        rots = trailing_rotations(tg)
        for j, rot in enumerate(rots):
            if rot.angle % 2 == 0:
                continue
            nid = trailing_node_id(len(trailing), i, j if len(rots) > 1 else None)
            ids.append(nid)
            nodes[nid] = node_rotation(rot.string, rot.angle)
    return Pddag(dag.tableau, tuple(ids), nodes)


def extract_circuit(pattern: MeasurementPattern, flow: Optional[PauliFlowData] = None,
                    lower_exp: bool = False) -> Circuit:
    """Pattern -> gate circuit with no measurements and no ancillae beyond
    the |O|-|I| fresh-wire initializations of the isometry."""
    return synthesize(extract_pddag(pattern, flow), lower_exp=lower_exp)
