"""Pauli flow: verification, maximally delayed identification and focussing.

The identification algorithm works backwards from the outputs, solving a
GF(2) witness system per candidate vertex and depth round.  Orders are
kept either as a depth map (vertex depth counts from the outputs, so
``u`` before ``v`` iff ``d(u) > d(v)``) or as an explicit strict partial
order; flow switching extends orders beyond what a depth map can hold.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

from . import f2
from .graph import LabelledOpenGraph, PAULI_LABELS, PLANAR_LABELS


class FlowFormatError(ValueError):
    """Malformed flow data (as opposed to a flow that violates conditions)."""


class NoPauliFlowError(ValueError):
    def __init__(self, stuck: FrozenSet[str]):
        self.stuck = stuck
        super().__init__(f"no Pauli flow; stuck vertex front {sorted(stuck)}")


class FlowOrder:
    """A strict partial order, backed by a depth map or a closed pair set."""

    def __init__(self, depth: Optional[Mapping[str, int]] = None,
                 pairs: Optional[FrozenSet[Tuple[str, str]]] = None):
        if (depth is None) == (pairs is None):
            raise ValueError("exactly one of depth/pairs required")
        self.depth = dict(depth) if depth is not None else None
        self.pairs = pairs

    @classmethod
    def from_depth(cls, depth: Mapping[str, int]) -> "FlowOrder":
        return cls(depth=depth)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[str, str]]) -> "FlowOrder":
        closed = _transitive_closure(set(pairs))
        for a, b in closed:
            if a == b or (b, a) in closed:
                raise FlowFormatError(f"order has a cycle through {a!r}")
        return cls(pairs=frozenset(closed))

    def precedes(self, u: str, v: str) -> bool:
        """True iff u is strictly before v (measured earlier)."""
        if self.depth is not None:
            return self.depth.get(u, 0) > self.depth.get(v, 0)
        return (u, v) in self.pairs

    def as_pairs(self, vertices: Iterable[str]) -> FrozenSet[Tuple[str, str]]:
        if self.pairs is not None:
            vs = set(vertices)
            return frozenset((a, b) for a, b in self.pairs if a in vs and b in vs)
        vs = list(vertices)
        return frozenset(
            (a, b) for a in vs for b in vs if self.depth.get(a, 0) > self.depth.get(b, 0)
        )

    def extended(self, vertices: Iterable[str], extra: Iterable[Tuple[str, str]]) -> "FlowOrder":
        return FlowOrder.from_pairs(set(self.as_pairs(vertices)) | set(extra))

    def emission_order(self, vertices: Iterable[str]) -> List[str]:
        """Latest-measured first, deterministic (lexicographic tie-break)."""
        vs = sorted(set(vertices))
        if self.depth is not None:
            return sorted(vs, key=lambda v: (self.depth.get(v, 0), v))
        remaining = set(vs)
        out: List[str] = []
        while remaining:
            maximal = sorted(
                v for v in remaining
                if not any((v, w) in self.pairs for w in remaining if w != v)
            )
            if not maximal:
                raise FlowFormatError("order is cyclic")
            pick = maximal[0]
            out.append(pick)
            remaining.remove(pick)
        return out

    def temporal_order(self, vertices: Iterable[str]) -> List[str]:
        """Earliest-measured first."""
        return list(reversed(self.emission_order(vertices)))


def _transitive_closure(pairs: Set[Tuple[str, str]]) -> Set[Tuple[str, str]]:
    succ: Dict[str, Set[str]] = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
    changed = True
    while changed:
        changed = False
        for a in list(succ):
            new = set()
            for b in succ[a]:
                new |= succ.get(b, set())
            if not new <= succ[a]:
                succ[a] |= new
                changed = True
    return {(a, b) for a, bs in succ.items() for b in bs}


@dataclass(frozen=True)
class PauliFlowData:
    p: Mapping[str, FrozenSet[str]]
    order: FlowOrder

    def correction_set(self, v: str) -> FrozenSet[str]:
        return self.p[v]

    def with_p(self, p: Mapping[str, FrozenSet[str]]) -> "PauliFlowData":
        return PauliFlowData({v: frozenset(s) for v, s in p.items()}, self.order)


FocussedSet = FrozenSet[str]


# -- verification --------------------------------------------------------


def _check_shape(graph: LabelledOpenGraph, flow: PauliFlowData) -> None:
    measured = graph.measured
    extra = set(flow.p) - set(measured)
    if extra:
        raise FlowFormatError(f"correction sets on non-measured vertices {sorted(extra)}")
    missing = set(measured) - set(flow.p)
    if missing:
        raise FlowFormatError(f"missing correction sets for {sorted(missing)}")
    for v, s in flow.p.items():
        bad = set(s) & graph.inputs
        if bad:
            raise FlowFormatError(f"correction set of {v!r} contains inputs {sorted(bad)}")
        if not set(s) <= graph.vertices:
            raise FlowFormatError(f"correction set of {v!r} leaves the graph")


def verify_flow(graph: LabelledOpenGraph, flow: PauliFlowData) -> List[Tuple[str, str]]:
    """Return all (vertex, condition) violations of the nine flow conditions."""
    _check_shape(graph, flow)
    out: List[Tuple[str, str]] = []
    lab = graph.labels
    for u in sorted(graph.measured):
        p = flow.p[u]
        odd = graph.odd_neighbourhood(p)
        lu = lab[u]
        if any(v != u and lab.get(v) not in ("X", "Y") and not flow.order.precedes(u, v) for v in p):
            out.append((u, "PF1"))
        if any(v != u and lab.get(v) not in ("Y", "Z") and not flow.order.precedes(u, v) for v in odd):
            out.append((u, "PF2"))
        for v in graph.measured:
            if v != u and lab[v] == "Y" and not flow.order.precedes(u, v):
                if (v in p) != (v in odd):
                    out.append((u, "PF3"))
                    break
        in_p, in_odd = u in p, u in odd
        if lu == "XY" and not (not in_p and in_odd):
            out.append((u, "PF4"))
        elif lu == "XZ" and not (in_p and in_odd):
            out.append((u, "PF5"))
        elif lu == "YZ" and not (in_p and not in_odd):
            out.append((u, "PF6"))
        elif lu == "X" and not in_odd:
            out.append((u, "PF7"))
        elif lu == "Z" and not in_p:
            out.append((u, "PF8"))
        elif lu == "Y" and not (in_p != in_odd):
            out.append((u, "PF9"))
    return out


# -- identification (maximally delayed) -----------------------------------


class _Ctx:
    """Bit-mask view of a labelled open graph, for the GF(2) systems."""

    def __init__(self, graph: LabelledOpenGraph):
        self.graph = graph
        self.verts = sorted(graph.vertices)
        self.idx = {v: i for i, v in enumerate(self.verts)}
        n = len(self.verts)
        self.full = (1 << n) - 1
        self.adj = [0] * n
        for a, b in graph.edges:
            ia, ib = self.idx[a], self.idx[b]
            self.adj[ia] |= 1 << ib
            self.adj[ib] |= 1 << ia
        self.inputs = self.mask(graph.inputs)
        self.outputs = self.mask(graph.outputs)
        self.lx = self.mask(v for v in graph.measured if graph.labels[v] == "X")
        self.ly = self.mask(v for v in graph.measured if graph.labels[v] == "Y")
        self.lz = self.mask(v for v in graph.measured if graph.labels[v] == "Z")

    def mask(self, vs: Iterable[str]) -> int:
        m = 0
        for v in vs:
            m |= 1 << self.idx[v]
        return m

    def unmask(self, m: int) -> FrozenSet[str]:
        return frozenset(self.verts[i] for i in _bits(m))


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _solve_witness(ctx: _Ctx, u: int, a_mask: int, plane: str) -> Optional[int]:
    """Solve the witness system for vertex u at a depth round; return K mask."""
    ubit = 1 << u
    lyu = ctx.ly & ~ubit
    lzu = ctx.lz & ~ubit
    lxu = ctx.lx & ~ubit
    k_univ = (a_mask | lxu | lyu) & ~ctx.inputs & ~ubit
    p_rows = ctx.full & ~(a_mask | lyu | lzu)
    y_rows = lyu & ~a_mask
    cols = list(_bits(k_univ))
    nbr = ctx.adj[u]

    rows: List[int] = []
    rhs: List[int] = []
    for w in _bits(p_rows):
        rows.append(_restrict(ctx.adj[w], cols))
        if plane == "XY":
            rhs.append(1 if w == u else 0)
        elif plane == "XZ":
            rhs.append(((nbr >> w) & 1) ^ (1 if w == u else 0))
        else:
            rhs.append((nbr >> w) & 1)
    for w in _bits(y_rows):
        rows.append(_restrict(ctx.adj[w] ^ (1 << w), cols))
        rhs.append(0 if plane == "XY" else (nbr >> w) & 1)

    sol = f2.solve(f2.F2Matrix(rows, len(cols)), rhs)
    if sol is None:
        return None
    x, _ = sol
    k = 0
    for j in _bits(x):
        k |= 1 << cols[j]
    return k


def _restrict(mask: int, cols: List[int]) -> int:
    row = 0
    for j, c in enumerate(cols):
        row |= ((mask >> c) & 1) << j
    return row


def find_pauli_flow_detailed(graph: LabelledOpenGraph):
    """Run the delayed-layer identification; return (flow or None, stuck front)."""
    ctx = _Ctx(graph)
    lab = graph.labels
    depth: Dict[str, int] = {v: 0 for v in graph.outputs}
    p: Dict[str, FrozenSet[str]] = {}
    solved = ctx.outputs
    k = 0
    while True:
        a_mask = 0 if k == 0 else solved
        found = 0
        for v in sorted(graph.measured):
            i = ctx.idx[v]
            if solved & (1 << i):
                continue
            lu = lab[v]
            planes = []
            if lu in ("XY", "X", "Y"):
                planes.append("XY")
            if lu in ("XZ", "X", "Z") and v not in graph.inputs:
                planes.append("XZ")
            if lu in ("YZ", "Y", "Z") and v not in graph.inputs:
                planes.append("YZ")
            for plane in planes:
                kmask = _solve_witness(ctx, i, a_mask, plane)
                if kmask is not None:
                    if plane != "XY":
                        kmask |= 1 << i
                    p[v] = ctx.unmask(kmask)
                    depth[v] = k
                    found |= 1 << i
                    break
        if found:
            solved |= found
            k += 1
            continue
        if k == 0:
            k += 1
            continue
        if solved == ctx.full:
            return PauliFlowData(p, FlowOrder.from_depth(depth)), frozenset()
        return None, ctx.unmask(ctx.full & ~solved & ~ctx.outputs)


def find_pauli_flow(graph: LabelledOpenGraph) -> Optional[PauliFlowData]:
    return find_pauli_flow_detailed(graph)[0]


# -- focussing -------------------------------------------------------------


def focussed_over_single(graph: LabelledOpenGraph, members: FrozenSet[str], w: str) -> bool:
    lw = graph.labels.get(w)
    if lw is None:
        return True
    in_m = w in members
    in_odd = w in graph.odd_neighbourhood(members)
    if in_m and lw in ("XZ", "YZ", "Z"):
        return False
    if in_odd and lw in ("XY", "X"):
        return False
    if lw == "Y" and in_m != in_odd:
        return False
    return True


def verify_focussed(graph: LabelledOpenGraph, members: Iterable[str],
                    over: Iterable[str]) -> bool:
    """FOC1-FOC3 for the member set over the given measured vertices."""
    members = frozenset(members)
    odd = graph.odd_neighbourhood(members)
    for w in set(over) & graph.measured:
        lw = graph.labels[w]
        if w in members and lw in ("XZ", "YZ", "Z"):
            return False
        if w in odd and lw in ("XY", "X"):
            return False
        if lw == "Y" and (w in members) != (w in odd):
            return False
    return True


def focus_flow(graph: LabelledOpenGraph, flow: PauliFlowData) -> PauliFlowData:
    """Make every correction set focussed over the other measured vertices.

    Single sweep per vertex over a measurement-order index, combining with
    the current correction set of each unfocussed witness.
    """
    bad = verify_flow(graph, flow)
    if bad:
        raise ValueError(f"cannot focus an invalid flow: {bad}")
    order = flow.order.temporal_order(graph.measured)
    p = {v: frozenset(s) for v, s in flow.p.items()}
    for v in order:
        for w in order:
            if w != v and not focussed_over_single(graph, p[v], w):
                p[v] = p[v] ^ p[w]
    return PauliFlowData(p, flow.order)


def is_flow_focussed(graph: LabelledOpenGraph, flow: PauliFlowData) -> bool:
    return all(
        verify_focussed(graph, flow.p[v], graph.measured - {v})
        for v in graph.measured
    )


# -- focussed set generators ------------------------------------------------


class FocussedRankError(ValueError):
    pass


def focussed_set_generators(graph: LabelledOpenGraph) -> List[FocussedSet]:
    """|O|-|I| independent generators of the focussed-set group.

    Solves the homogeneous membership/odd-neighbourhood system over GF(2);
    each null-space basis vector (one per free variable) is one generator.
    """
    lab = graph.labels
    variables = sorted(
        v for v in graph.prepared
        if v in graph.outputs or lab.get(v) in ("XY", "X", "Y")
    )
    col = {v: j for j, v in enumerate(variables)}
    rows: List[int] = []
    for w in sorted(graph.measured):
        if lab[w] in ("XY", "X"):
            rows.append(_row_over(graph, w, variables, include_self=False))
    for w in sorted(graph.measured):
        if lab[w] == "Y":
            rows.append(_row_over(graph, w, variables, include_self=True))
    basis = f2.null_space(f2.F2Matrix(rows, len(variables)))
    gens = [frozenset(variables[j] for j in _bits(vec)) for vec in basis]
    expected = len(graph.outputs) - len(graph.inputs)
    if len(gens) != expected:
        raise FocussedRankError(
            f"focussed-set system has {len(gens)} generators, expected {expected}"
        )
    for g in gens:
        if not verify_focussed(graph, g, graph.measured):
            raise FocussedRankError(f"generator {sorted(g)} is not focussed")
    return gens


def _row_over(graph: LabelledOpenGraph, w: str, variables: List[str],
              include_self: bool) -> int:
    nbrs = graph.neighbours(w)
    row = 0
    for j, v in enumerate(variables):
        bit = 1 if v in nbrs else 0
        if include_self and v == w:
            bit ^= 1
        row |= bit << j
    return row


# -- flow surgery ------------------------------------------------------------


def add_correction_sets(flow: PauliFlowData, u: str, v: str) -> PauliFlowData:
    """Replace p(u) by p(u) symmetric-difference p(v); needs u before v."""
    if u == v:
        raise ValueError("u and v must differ")
    if not flow.order.precedes(u, v):
        raise ValueError(f"{u!r} does not precede {v!r}")
    p = dict(flow.p)
    p[u] = p[u] ^ p[v]
    return PauliFlowData(p, flow.order)


def switch_flow(graph: LabelledOpenGraph, flow: PauliFlowData, u: str,
                fset: FocussedSet) -> PauliFlowData:
    """Add a focussed set to p(u), extending the order past its support."""
    if u not in graph.measured:
        raise ValueError(f"{u!r} is not measured")
    affected = frozenset(fset) | graph.odd_neighbourhood(fset)
    for w in sorted(affected):
        if graph.labels.get(w) in PLANAR_LABELS:
            if w == u or flow.order.precedes(w, u):
                raise ValueError(f"switch at {u!r} blocked by planar vertex {w!r}")
    p = dict(flow.p)
    p[u] = p[u] ^ frozenset(fset)
    # planar vertices so their rotations stay ahead of u; outputs so the
    # ordering conditions (which count unlabelled vertices) stay satisfied
    extra = {
        (u, w) for w in affected
        if graph.labels.get(w) in PLANAR_LABELS or w in graph.outputs
    }
    return PauliFlowData(p, flow.order.extended(graph.vertices, extra))


def paulis_first(graph: LabelledOpenGraph, flow: PauliFlowData) -> PauliFlowData:
    """Strip order entries into Pauli-labelled vertices (measure them first)."""
    if not is_flow_focussed(graph, flow):
        raise ValueError("paulis_first needs a focussed flow")
    pauli = {v for v in graph.measured if graph.labels[v] in PAULI_LABELS}
    pairs = {
        (a, b) for a, b in flow.order.as_pairs(graph.vertices) if b not in pauli
    }
    return PauliFlowData(dict(flow.p), FlowOrder.from_pairs(pairs))
