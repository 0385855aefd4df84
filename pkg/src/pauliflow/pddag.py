"""Pauli Dependency DAGs: isometry tableau plus an anticommutation-ordered
rotation list, with the rewrite moves used to simulate pattern rewrites.

A Pddag stores its rotation nodes in one valid temporal linearization
(earliest applied first).  The canonical dependency DAG is derived from it:
orient every anticommuting pair by list position, close transitively and
take the Hasse diagram.  Any two linearizations of the same process give
the same canonical DAG, which is what gets compared and serialized.

Node angles live in [0, 2) (units of pi) since the represented map is
only defined up to global phase.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from . import f2
from .pauli import (
    Rotation,
    SignedPauliString,
    commutes,
    gate_to_exponentials,
    identity_string,
    multiply,
    reorder_pull,
    reorder_push,
    single,
)


# -- circuits ---------------------------------------------------------------

HALF = Fraction(1, 2)

GATE_NAMES = ("CZ", "CX", "H", "RZ", "RX", "S", "Sdg", "X", "Z", "INIT0", "EXP")


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: Tuple[int, ...]
    angle: Optional[Fraction] = None  # units of pi
    string: Optional[SignedPauliString] = None  # EXP only, over wire indices

    def __post_init__(self):
        if self.name not in GATE_NAMES:
            raise ValueError(f"unknown gate {self.name!r}")


@dataclass(frozen=True)
class Circuit:
    n_wires: int
    gates: Tuple[Gate, ...] = ()

    @property
    def init_wires(self) -> Tuple[int, ...]:
        return tuple(g.qubits[0] for g in self.gates if g.name == "INIT0")

    def __add__(self, other: "Circuit") -> "Circuit":
        if self.n_wires != other.n_wires:
            raise ValueError("wire count mismatch")
        return Circuit(self.n_wires, self.gates + other.gates)


# -- isometry tableau ---------------------------------------------------------


def _check_row(row: SignedPauliString, outputs: FrozenSet[str]) -> None:
    if not row.is_hermitian():
        raise ValueError("tableau rows need +-1 signs")
    if not row.support <= outputs:
        raise ValueError(f"row {row} leaves the outputs")


@dataclass(frozen=True)
class IsometryTableau:
    """Z/X images per input plus free stabilizer generators, all over outputs.

    x_traces records, per input, which measured vertices' correction sets
    were folded into the X row during input extension; flow switching uses
    it to replay the same row updates without re-running extraction.
    x_corrections keeps the extension vertices' correction sets themselves
    so rewrites can update them with their flow rules instead of re-running
    the focussing sweep (which may pick a different, free-action-related row).
    """

    inputs: Tuple[str, ...]
    outputs: Tuple[str, ...]
    z_rows: Mapping[str, SignedPauliString]
    x_rows: Mapping[str, SignedPauliString]
    free_rows: Tuple[SignedPauliString, ...]
    x_traces: Mapping[str, FrozenSet[str]] = field(default_factory=dict)
    x_corrections: Mapping[str, FrozenSet[str]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(sorted(self.inputs)))
        object.__setattr__(self, "outputs", tuple(sorted(self.outputs)))
        outs = frozenset(self.outputs)
        if set(self.z_rows) != set(self.inputs) or set(self.x_rows) != set(self.inputs):
            raise ValueError("need exactly one Z and one X row per input")
        if len(self.free_rows) != len(self.outputs) - len(self.inputs):
            raise ValueError("free row count must be |O| - |I|")
        for row in list(self.z_rows.values()) + list(self.x_rows.values()) + list(self.free_rows):
            _check_row(row, outs)
        self._check_commutation()
        if self.free_rows and f2.rank(self._symplectic([r.unsigned() for r in self.free_rows])) != len(self.free_rows):
            raise ValueError("free rows are dependent")

    def _check_commutation(self):
        for u in self.inputs:
            if commutes(self.z_rows[u], self.x_rows[u]):
                raise ValueError(f"Z and X rows of input {u!r} must anticommute")
            for w in self.inputs:
                if w == u:
                    continue
                for a in (self.z_rows[u], self.x_rows[u]):
                    for b in (self.z_rows[w], self.x_rows[w]):
                        if not commutes(a, b):
                            raise ValueError(f"rows of inputs {u!r}, {w!r} must commute")
        for i, r in enumerate(self.free_rows):
            for s in self.free_rows[i + 1:]:
                if not commutes(r, s):
                    raise ValueError("free rows must commute")
            for u in self.inputs:
                if not commutes(r, self.z_rows[u]) or not commutes(r, self.x_rows[u]):
                    raise ValueError("free rows must commute with input rows")

    def _symplectic(self, rows: Sequence[SignedPauliString]) -> f2.F2Matrix:
        n = len(self.outputs)
        packed = []
        for r in rows:
            bits = 0
            for i, q in enumerate(self.outputs):
                l = r.letter(q)
                if l in ("X", "Y"):
                    bits |= 1 << i
                if l in ("Z", "Y"):
                    bits |= 1 << (n + i)
            packed.append(bits)
        return f2.F2Matrix(packed, 2 * n)

    def rows_equal(self, other: "IsometryTableau") -> bool:
        return (
            self.inputs == other.inputs
            and self.outputs == other.outputs
            and dict(self.z_rows) == dict(other.z_rows)
            and dict(self.x_rows) == dict(other.x_rows)
            and self.free_rows == other.free_rows
        )

    def all_rows(self) -> List[SignedPauliString]:
        return (
            [self.z_rows[u] for u in self.inputs]
            + [self.x_rows[u] for u in self.inputs]
            + list(self.free_rows)
        )

    # -- free actions -----------------------------------------------------

    def swap_free(self, i: int, j: int) -> "IsometryTableau":
        rows = list(self.free_rows)
        rows[i], rows[j] = rows[j], rows[i]
        return replace(self, free_rows=tuple(rows))

    def multiply_free_into_free(self, src: int, dst: int) -> "IsometryTableau":
        if src == dst:
            raise ValueError("source and destination rows coincide")
        rows = list(self.free_rows)
        rows[dst] = multiply(rows[dst], rows[src])
        return replace(self, free_rows=tuple(rows))

    def multiply_free_into_input(self, src: int, input_id: str, which: str) -> "IsometryTableau":
        if which not in ("z", "x"):
            raise ValueError("which must be 'z' or 'x'")
        row = self.free_rows[src]
        if which == "z":
            z = dict(self.z_rows)
            z[input_id] = multiply(z[input_id], row)
            return replace(self, z_rows=z)
        x = dict(self.x_rows)
        x[input_id] = multiply(x[input_id], row)
        return replace(self, x_rows=x)

    def multiply_input_by_string(self, input_id: str, which: str,
                                 string: SignedPauliString) -> "IsometryTableau":
        """Multiply an input row by a string from the free-row group."""
        if self.free_combo(string) is None:
            raise ValueError("string is not in the free-row group")
        if which == "z":
            z = dict(self.z_rows)
            z[input_id] = multiply(z[input_id], string)
            return replace(self, z_rows=z)
        x = dict(self.x_rows)
        x[input_id] = multiply(x[input_id], string)
        return replace(self, x_rows=x)

    def free_combo(self, string: SignedPauliString) -> Optional[Tuple[int, ...]]:
        """Indices of free rows whose exact signed product equals the string."""
        if not string.is_hermitian():
            return None
        mat = self._symplectic([r.unsigned() for r in self.free_rows])
        target = self._symplectic([string.unsigned()]).rows[0]
        combo = f2.in_span(mat.rows, mat.cols, target)
        if combo is None:
            return None
        idx = tuple(i for i in range(len(self.free_rows)) if combo & (1 << i))
        prod = identity_string()
        for i in idx:
            prod = multiply(prod, self.free_rows[i])
        return idx if prod == string else None

    def conjugated(self, mover: Rotation, pull: bool) -> "IsometryTableau":
        step = reorder_pull if pull else reorder_push
        return replace(
            self,
            z_rows={u: step(mover, r) for u, r in self.z_rows.items()},
            x_rows={u: step(mover, r) for u, r in self.x_rows.items()},
            free_rows=tuple(step(mover, r) for r in self.free_rows),
        )


# -- the DAG -----------------------------------------------------------------


def node_rotation(string: SignedPauliString, angle: Fraction) -> Rotation:
    return Rotation(string, Fraction(angle) % 2)


def nodes_equivalent(a: Rotation, b: Rotation) -> bool:
    """Node equality modulo the (-P, t) == (P, -t) identification, angles mod 2pi."""
    if a.string == b.string and a.angle % 2 == b.angle % 2:
        return True
    return a.string == -b.string and a.angle % 2 == (-b.angle) % 2


@dataclass(frozen=True)
class Pddag:
    tableau: IsometryTableau
    node_ids: Tuple[str, ...]
    nodes: Mapping[str, Rotation]

    def __post_init__(self):
        if set(self.node_ids) != set(self.nodes) or len(self.node_ids) != len(self.nodes):
            raise ValueError("node ids and node map disagree")
        outs = frozenset(self.tableau.outputs)
        for rot in self.nodes.values():
            _check_row(rot.string, outs)
        object.__setattr__(
            self, "nodes", {i: node_rotation(r.string, r.angle) for i, r in self.nodes.items()}
        )

    # -- dependency structure ---------------------------------------------

    def partial_order(self) -> FrozenSet[Tuple[str, str]]:
        """Closure of the anticommutation-forced orderings."""
        ids = self.node_ids
        direct = set()
        for i, a in enumerate(ids):
            for b in ids[i + 1:]:
                if not commutes(self.nodes[a].string, self.nodes[b].string):
                    direct.add((a, b))
        succ: Dict[str, set] = {a: set() for a in ids}
        for a, b in direct:
            succ[a].add(b)
        for a in reversed(ids):
            for b in list(succ[a]):
                succ[a] |= succ[b]
        return frozenset((a, b) for a, bs in succ.items() for b in bs)

    def hasse(self) -> FrozenSet[Tuple[str, str]]:
        po = self.partial_order()
        return frozenset(
            (a, b) for a, b in po
            if not any((a, c) in po and (c, b) in po for c in self.node_ids)
        )

    def ancestors(self, nid: str) -> FrozenSet[str]:
        po = self.partial_order()
        return frozenset(a for a, b in po if b == nid)

    def structurally_equal(self, other: "Pddag") -> bool:
        """Same tableau rows, same nodes per id, same canonical DAG."""
        if not self.tableau.rows_equal(other.tableau):
            return False
        if set(self.node_ids) != set(other.node_ids):
            return False
        if not all(nodes_equivalent(self.nodes[i], other.nodes[i]) for i in self.node_ids):
            return False
        return self.hasse() == other.hasse()

    # -- rewrites (pure) ----------------------------------------------------

    def merge_nodes(self, j: str, k: str) -> "Pddag":
        """Fold node k into node j; strings must agree up to sign."""
        po = self.partial_order()
        if (j, k) in po or (k, j) in po:
            raise ValueError(f"nodes {j!r}, {k!r} are order-dependent")
        a, b = self.nodes[j], self.nodes[k]
        if a.string == b.string:
            angle = a.angle + b.angle
        elif a.string == -b.string:
            angle = a.angle - b.angle
        else:
            raise ValueError(f"nodes {j!r}, {k!r} have different strings")
        nodes = {i: r for i, r in self.nodes.items() if i != k}
        ids = tuple(i for i in self.node_ids if i != k)
        if angle % 4 == 0:
            nodes.pop(j)
            ids = tuple(i for i in ids if i != j)
        else:
            nodes[j] = node_rotation(a.string, angle)
        return Pddag(self.tableau, ids, nodes)

    def push_clifford_front(self, nid: str) -> "Pddag":
        """Absorb a Clifford-angled node into the tableau, conjugating what it crosses."""
        mover = self.nodes[nid]
        if not mover.is_clifford():
            raise ValueError(f"node {nid!r} has a non-Clifford angle")
        pos = self.node_ids.index(nid)
        nodes = {}
        for i, other in enumerate(self.node_ids):
            if other == nid:
                continue
            rot = self.nodes[other]
            if i < pos:
                rot = Rotation(reorder_push(mover, rot.string), rot.angle)
            nodes[other] = rot
        ids = tuple(i for i in self.node_ids if i != nid)
        return Pddag(self.tableau.conjugated(mover, pull=False), ids, nodes)

    def pull_from_tableau(self, rotation: Rotation, destination,
                          provenance: str = "stabilizer",
                          node_id: Optional[str] = None) -> "Pddag":
        """Materialize a rotation out of the Clifford block and transport it.

        destination is "end" (append after every node), ("insert", pos)
        (cross only the first pos nodes and sit there) or ("merge", id).
        provenance "stabilizer" demands the string be in the free-row group;
        "pattern" trusts the caller (rewrites justified at the pattern level).
        """
        if rotation.angle % 2 == 0:
            return self
        if provenance == "stabilizer":
            if self.tableau.free_combo(rotation.string) is None and \
               self.tableau.free_combo(-rotation.string) is None:
                raise ValueError(f"{rotation.string} is not a verified stabilizer")
        elif provenance != "pattern":
            raise ValueError("provenance must be 'stabilizer' or 'pattern'")
        tableau = self.tableau.conjugated(rotation, pull=True)
        if destination == "end" or (isinstance(destination, tuple) and destination[0] == "insert"):
            pos = len(self.node_ids) if destination == "end" else destination[1]
            if node_id is None or node_id in self.nodes:
                raise ValueError("insert destination needs a fresh node id")
            nodes = {}
            for i, other in enumerate(self.node_ids):
                rot = self.nodes[other]
                if i < pos:
                    rot = Rotation(reorder_pull(rotation, rot.string), rot.angle)
                nodes[other] = rot
            nodes[node_id] = node_rotation(rotation.string, rotation.angle)
            ids = self.node_ids[:pos] + (node_id,) + self.node_ids[pos:]
            return Pddag(tableau, ids, nodes)
        kind, target = destination
        if kind != "merge":
            raise ValueError(f"bad destination {destination!r}")
        pos = self.node_ids.index(target)
        if provenance == "stabilizer":
            blockers = [
                a for a in self.ancestors(target)
                if not commutes(self.nodes[a].string, rotation.string)
            ]
            if blockers:
                raise ValueError(f"anticommuting blockers {sorted(blockers)} before {target!r}")
        nodes = {}
        for i, other in enumerate(self.node_ids):
            rot = self.nodes[other]
            if i < pos:
                rot = Rotation(reorder_pull(rotation, rot.string), rot.angle)
            nodes[other] = rot
        dest_rot = nodes[target]
        if dest_rot.string == rotation.string:
            angle = dest_rot.angle + rotation.angle
        elif dest_rot.string == -rotation.string:
            angle = dest_rot.angle - rotation.angle
        else:
            raise ValueError(
                f"cannot merge {rotation.string} into node {target!r} carrying {dest_rot.string}"
            )
        nodes[target] = node_rotation(dest_rot.string, angle)
        return Pddag(tableau, self.node_ids, nodes)

    def stabilizer_rewrite_by_string(self, nid: str, string: SignedPauliString) -> "Pddag":
        """Multiply a node's string by a stabilizer from the free-row group."""
        if self.tableau.free_combo(string) is None:
            raise ValueError(f"{string} is not in the free-row group")
        target = self.nodes[nid]
        if not commutes(target.string, string):
            raise ValueError("stabilizer anticommutes with the node string")
        blockers = [
            a for a in self.ancestors(nid)
            if not commutes(self.nodes[a].string, string)
        ]
        if blockers:
            raise ValueError(f"anticommuting blockers {sorted(blockers)} before {nid!r}")
        new_rot = Rotation(multiply(target.string, string), target.angle)
        nodes = dict(self.nodes)
        nodes[nid] = new_rot
        # The rewritten node may newly anticommute with nodes it was
        # incomparable to; it must come before those, so relinearize.
        po = self.partial_order()
        extra = {
            (nid, x) for x in self.node_ids
            if x != nid and (x, nid) not in po and (nid, x) not in po
            and not commutes(new_rot.string, self.nodes[x].string)
        }
        ids = _linearize(self.node_ids, po | extra)
        return Pddag(self.tableau, ids, nodes)

    def apply_stabilizer_rewrite(self, nid: str, free_index: int) -> "Pddag":
        return self.stabilizer_rewrite_by_string(nid, self.tableau.free_rows[free_index])

    def with_tableau(self, tableau: IsometryTableau) -> "Pddag":
        return Pddag(tableau, self.node_ids, dict(self.nodes))


def _linearize(ids: Sequence[str], pairs) -> Tuple[str, ...]:
    """Topological order consistent with pairs, preferring the given order."""
    remaining = list(ids)
    out: List[str] = []
    while remaining:
        pick = next(
            v for v in remaining
            if not any((w, v) in pairs for w in remaining if w != v)
        )
        out.append(pick)
        remaining.remove(pick)
    return tuple(out)


def build_pddag(tableau: IsometryTableau, ordered_nodes: Sequence[Tuple[str, Rotation]]) -> Pddag:
    return Pddag(tableau, tuple(i for i, _ in ordered_nodes), dict(ordered_nodes))


def build_deps(ordered_nodes: Sequence[Tuple[str, Rotation]]) -> FrozenSet[Tuple[str, str]]:
    """Hasse diagram of the anticommutation order of a rotation list."""
    outputs = set()
    for _, rot in ordered_nodes:
        outputs |= set(rot.string.letters)
    wires = sorted(outputs, key=str)
    tab = identity_tableau(wires) if wires else IsometryTableau((), (), {}, {}, ())
    return build_pddag(tab, ordered_nodes).hasse()


# -- synthesis ----------------------------------------------------------------


def circuit_to_rotations(circuit: Circuit) -> List[Rotation]:
    """Decompose a unitary circuit into rotations, earliest applied first."""
    out: List[Rotation] = []
    for gate in circuit.gates:
        if gate.name == "INIT0":
            raise ValueError("initializations are not rotations")
        if gate.name == "EXP":
            rots = [Rotation(gate.string, gate.angle)]
        elif gate.name == "S":
            rots = [Rotation(single(gate.qubits[0], "Z"), Fraction(-1, 2))]
        elif gate.name == "Sdg":
            rots = [Rotation(single(gate.qubits[0], "Z"), Fraction(1, 2))]
        elif gate.name == "X":
            rots = [Rotation(single(gate.qubits[0], "X"), 1)]
        elif gate.name == "Z":
            rots = [Rotation(single(gate.qubits[0], "Z"), 1)]
        else:
            rots = list(reversed(gate_to_exponentials(gate.name, gate.qubits, gate.angle)))
        out.extend(r for r in rots if r.angle % 2 != 0 and not r.string.is_identity_string())
    return out


def identity_tableau(wires: Sequence) -> IsometryTableau:
    return IsometryTableau(
        inputs=tuple(wires),
        outputs=tuple(wires),
        z_rows={w: single(w, "Z") for w in wires},
        x_rows={w: single(w, "X") for w in wires},
        free_rows=(),
    )


def unitary_pddag_from_circuit(circuit: Circuit) -> Pddag:
    """Rotation list of a unitary circuit over an identity tableau."""
    if circuit.init_wires:
        raise ValueError("circuit is not unitary")
    rots = circuit_to_rotations(circuit)
    nodes = [(f"n{i}", node_rotation(r.string, r.angle)) for i, r in enumerate(rots)]
    return build_pddag(identity_tableau(range(circuit.n_wires)), nodes)


def push_clifford_nodes(dag: Pddag) -> Pddag:
    """Push every Clifford-angled node into the tableau, earliest first."""
    while True:
        nid = next((i for i in dag.node_ids if dag.nodes[i].is_clifford()), None)
        if nid is None:
            return dag
        dag = dag.push_clifford_front(nid)


def canonicalize_angles(dag: Pddag) -> Pddag:
    """Split off and push Clifford parts so every angle lies in (0, pi/2)."""
    dag = push_clifford_nodes(dag)
    while True:
        target = next(
            (i for i in dag.node_ids if dag.nodes[i].angle % 2 >= HALF), None
        )
        if target is None:
            return dag
        rot = dag.nodes[target]
        residue = rot.angle % HALF
        mover = Rotation(rot.string, rot.angle - residue)
        pos = dag.node_ids.index(target)
        nodes = {}
        for i, other in enumerate(dag.node_ids):
            r = dag.nodes[other]
            if i < pos:
                r = Rotation(reorder_push(mover, r.string), r.angle)
            nodes[other] = r
        if residue == 0:
            nodes.pop(target)
            ids = tuple(i for i in dag.node_ids if i != target)
        else:
            nodes[target] = node_rotation(rot.string, residue)
            ids = dag.node_ids
        dag = Pddag(dag.tableau.conjugated(mover, pull=False), ids, nodes)


def _string_to_bits(row: SignedPauliString, outputs: Sequence[str]) -> Tuple[int, int]:
    x = z = 0
    for i, q in enumerate(outputs):
        l = row.letter(q)
        if l in ("X", "Y"):
            x |= 1 << i
        if l in ("Z", "Y"):
            z |= 1 << i
    return x, z


def _bits_to_string(x: int, z: int, sign: int = 1) -> SignedPauliString:
    letters = {}
    i = 0
    while x or z:
        xb, zb = x & 1, z & 1
        if xb or zb:
            letters[i] = "Y" if (xb and zb) else ("X" if xb else "Z")
        x >>= 1
        z >>= 1
        i += 1
    return SignedPauliString(letters, 0 if sign == 1 else 2)


def _complete_tableau(tab: IsometryTableau) -> Tuple[List[SignedPauliString], List[SignedPauliString]]:
    """Wire-indexed Z/X conjugation targets for a full unitary tableau.

    Inputs occupy the first wires in sorted order; each free row becomes the
    Z image of a fresh wire and its X partner is completed over GF(2).
    """
    outputs = list(tab.outputs)
    n = len(outputs)
    remap = lambda row: SignedPauliString(
        {outputs.index(q): l for q, l in row.letters.items()}, row.phase_pow
    )
    z_out = [remap(tab.z_rows[u]) for u in tab.inputs]
    x_out = [remap(tab.x_rows[u]) for u in tab.inputs]
    free = [remap(r) for r in tab.free_rows]
    wires = list(range(n))

    def sym_row(s: SignedPauliString) -> int:
        # Coefficients of the symplectic product against unknown [x | z] bits.
        bits = 0
        for i in wires:
            l = s.letter(i)
            if l in ("Z", "Y"):
                bits |= 1 << i            # pairs with unknown x_i
            if l in ("X", "Y"):
                bits |= 1 << (n + i)      # pairs with unknown z_i
        return bits

    for j, zrow in enumerate(free):
        rows = [sym_row(s) for s in z_out + x_out] + [sym_row(s) for s in free]
        rhs = [0] * (len(z_out) + len(x_out)) + [1 if i == j else 0 for i in range(len(free))]
        sol = f2.solve(f2.F2Matrix(rows, 2 * n), rhs)
        if sol is None:
            raise ValueError("tableau rows violate symplectic constraints")
        xbits = sol[0] & ((1 << n) - 1)
        zbits = sol[0] >> n
        partner = _bits_to_string(xbits, zbits)
        z_out.append(zrow)
        x_out.append(partner)
    return z_out, x_out


_CONJ_ROTS = {
    "S": lambda q: [Rotation(single(q, "Z"), Fraction(-1, 2))],
    "Sdg": lambda q: [Rotation(single(q, "Z"), Fraction(1, 2))],
    "X": lambda q: [Rotation(single(q, "X"), 1)],
    "Z": lambda q: [Rotation(single(q, "Z"), 1)],
}


def _conj_gate(name: str, qubits: Tuple[int, ...], s: SignedPauliString) -> SignedPauliString:
    if name in _CONJ_ROTS:
        rots = _CONJ_ROTS[name](qubits[0])
    else:
        rots = gate_to_exponentials(name, qubits)
    for rot in reversed(rots):
        s = reorder_push(rot, s)
    return s


def clifford_circuit_from_rows(z_out: List[SignedPauliString],
                               x_out: List[SignedPauliString]) -> List[Gate]:
    """Gate list realizing a unitary Clifford with the given Z/X images, signs exact."""
    n = len(z_out)
    zr = list(z_out)
    xr = list(x_out)
    reducing: List[Gate] = []

    def emit(name, *qubits):
        reducing.append(Gate(name, tuple(qubits)))
        for rows in (zr, xr):
            for i, s in enumerate(rows):
                rows[i] = _conj_gate(name, tuple(qubits), s)

    def clean_to_x(row_list, k):
        # Reduce row_list[k] (supported on wires >= k) to +-X_k.
        for j in range(k, n):
            l = row_list[k].letter(j)
            if l == "Y":
                emit("S", j)
            elif l == "Z":
                emit("H", j)
        if row_list[k].letter(k) != "X":
            j = next(j for j in range(k + 1, n) if row_list[k].letter(j) == "X")
            emit("CX", k, j)
            emit("CX", j, k)
            emit("CX", k, j)
        for j in range(n):
            if j != k and row_list[k].letter(j) == "X":
                emit("CX", k, j)

    for k in range(n):
        clean_to_x(xr, k)
        if zr[k].unsigned() != single(k, "Z"):
            emit("H", k)
            clean_to_x(zr, k)
            emit("H", k)
        if xr[k].sign == -1:
            emit("Z", k)
        if zr[k].sign == -1:
            emit("X", k)

    for k in range(n):
        assert xr[k] == single(k, "X") and zr[k] == single(k, "Z")

    dagger = {"S": "Sdg", "Sdg": "S"}
    return [Gate(dagger.get(g.name, g.name), g.qubits) for g in reversed(reducing)]


def lower_exp_gate(gate: Gate) -> List[Gate]:
    """CX-ladder lowering of a multi-qubit Pauli rotation."""
    string, angle = gate.string, gate.angle
    support = sorted(string.letters)
    if not support:
        return []
    eff = angle if string.sign == 1 else -angle
    pre: List[Gate] = []
    post: List[Gate] = []
    for q in support:
        l = string.letter(q)
        if l == "X":
            pre.append(Gate("H", (q,)))
            post.append(Gate("H", (q,)))
        elif l == "Y":
            pre += [Gate("Sdg", (q,)), Gate("H", (q,))]
            post += [Gate("H", (q,)), Gate("S", (q,))]
    ladder = [Gate("CX", (support[i], support[i + 1])) for i in range(len(support) - 1)]
    target = support[-1]
    return (
        pre + ladder
        + [Gate("RZ", (target,), angle=-eff)]
        + list(reversed(ladder)) + post
    )


def synthesize(pddag: Pddag, lower_exp: bool = False) -> Circuit:
    """Tableau synthesis (fresh |0> wires + Clifford) then one rotation per node."""
    outputs = list(pddag.tableau.outputs)
    n = len(outputs)
    m = len(pddag.tableau.inputs)
    z_out, x_out = _complete_tableau(pddag.tableau)
    gates: List[Gate] = [Gate("INIT0", (w,)) for w in range(m, n)]
    gates += clifford_circuit_from_rows(z_out, x_out)
    for nid in pddag.node_ids:
        rot = pddag.nodes[nid]
        if rot.is_identity() or rot.angle % 2 == 0:
            continue
        wire_string = SignedPauliString(
            {outputs.index(q): l for q, l in rot.string.letters.items()}, rot.string.phase_pow
        )
        exp = Gate("EXP", tuple(sorted(wire_string.letters)), angle=rot.angle, string=wire_string)
        gates += lower_exp_gate(exp) if lower_exp else [exp]
    return Circuit(n, tuple(gates))
