"""Dense brute-force semantics for patterns, circuits and Pddags.

Everything here is the ground truth the rest of the library is tested
against, so it deliberately shares no machinery with the fast paths: maps
are complex matrices built gate by gate / projector by projector, and all
comparisons are up to a global scalar.
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .graph import MeasurementPattern
from .pauli import SignedPauliString
from .pddag import Circuit, Gate, Pddag, clifford_circuit_from_rows, _complete_tableau

DEFAULT_TOL = 1e-9

_PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_PLUS = np.array([1, 1], dtype=complex) / math.sqrt(2)


def qubit_cap() -> int:
    return int(os.environ.get("PAULIFLOW_MAX_QUBITS", "14"))


class QubitCapExceeded(ValueError):
    pass


@dataclass
class DenseMap:
    """A 2^|outputs| x 2^|inputs| complex matrix with fixed wire orders."""

    matrix: np.ndarray
    input_order: Tuple
    output_order: Tuple


def measurement_bra(plane: str, angle_pi: Fraction) -> np.ndarray:
    """Row vector <+_{plane,alpha}| for planar and Pauli labels."""
    alpha = float(angle_pi) * math.pi
    if plane == "XY":
        vec = np.array([1, cmath.exp(1j * alpha)]) / math.sqrt(2)
    elif plane == "XZ":
        vec = np.array([math.cos(alpha / 2), math.sin(alpha / 2)], dtype=complex)
    elif plane == "YZ":
        vec = np.array([math.cos(alpha / 2), 1j * math.sin(alpha / 2)])
    elif plane in ("X", "Y", "Z"):
        a = int(Fraction(angle_pi) % 2)
        if plane == "X":
            vec = np.array([1, (-1) ** a], dtype=complex) / math.sqrt(2)
        elif plane == "Y":
            vec = np.array([1, 1j * (-1) ** a]) / math.sqrt(2)
        else:
            vec = np.array([1 - a, a], dtype=complex)
    else:
        raise ValueError(f"unknown label {plane!r}")
    return vec.conj()


def string_matrix(string: SignedPauliString, wire_order: Sequence) -> np.ndarray:
    m = np.array([[1]], dtype=complex)
    for q in wire_order:
        m = np.kron(m, _PAULI_MATS[string.letter(q)])
    return complex(string.phase) * m


def rotation_matrix(string: SignedPauliString, angle_pi: Fraction,
                    wire_order: Sequence) -> np.ndarray:
    """exp(i * angle/2 * string) with angle in units of pi."""
    half = float(angle_pi) * math.pi / 2
    n = len(wire_order)
    smat = string_matrix(string, wire_order)
    return math.cos(half) * np.eye(2 ** n) + 1j * math.sin(half) * smat


def _single_qubit_gate(name: str, angle_pi: Optional[Fraction]) -> np.ndarray:
    if name == "H":
        return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    if name == "X":
        return _PAULI_MATS["X"]
    if name == "Z":
        return _PAULI_MATS["Z"]
    if name == "S":
        return np.diag([1, 1j]).astype(complex)
    if name == "Sdg":
        return np.diag([1, -1j]).astype(complex)
    half = float(angle_pi) * math.pi / 2
    if name == "RZ":
        return np.diag([cmath.exp(-1j * half), cmath.exp(1j * half)])
    if name == "RX":
        return math.cos(half) * np.eye(2) - 1j * math.sin(half) * _PAULI_MATS["X"]
    raise ValueError(f"unknown single-qubit gate {name!r}")


def _apply_on_wire(mat: np.ndarray, gate2: np.ndarray, wire: int, n: int) -> np.ndarray:
    shaped = mat.reshape(2 ** wire, 2, -1)
    return np.einsum("ab,ibj->iaj", gate2, shaped).reshape(mat.shape)


def _apply_cz(mat: np.ndarray, a: int, b: int, n: int) -> np.ndarray:
    rows = np.arange(2 ** n)
    ba = (rows >> (n - 1 - a)) & 1
    bb = (rows >> (n - 1 - b)) & 1
    signs = np.where((ba & bb) == 1, -1.0, 1.0)
    return mat * signs[:, None]


# -- pattern semantics --------------------------------------------------------


def pattern_semantics(pattern: MeasurementPattern, cap: Optional[int] = None) -> DenseMap:
    """Dense linear map of the intended branch, trailing gates included."""
    g = pattern.graph
    cap = qubit_cap() if cap is None else cap
    if len(g.vertices) > cap:
        raise QubitCapExceeded(f"{len(g.vertices)} qubits exceeds cap {cap}")
    verts = sorted(g.vertices)
    inputs = sorted(g.inputs)
    # |+> on prepared vertices, identity wires on inputs.
    mat = np.array([[1]], dtype=complex)
    for v in verts:
        if v in g.inputs:
            mat = np.kron(mat, np.eye(2, dtype=complex))
        else:
            mat = np.kron(mat, _PLUS[:, None])
    n = len(verts)
    for a, b in sorted(g.edges):
        mat = _apply_cz(mat, verts.index(a), verts.index(b), n)
    live = list(verts)
    for v in sorted(g.measured):
        bra = measurement_bra(g.labels[v], pattern.angles[v])
        axis = live.index(v)
        shaped = mat.reshape(2 ** axis, 2, -1)
        mat = (bra[0] * shaped[:, 0, :] + bra[1] * shaped[:, 1, :]).reshape(
            2 ** (len(live) - 1), -1
        )
        live.remove(v)
    outputs = tuple(live)  # sorted order inherited from verts
    for tg in pattern.trailing:
        gate2 = _single_qubit_gate(tg.name, tg.angle)
        mat = _apply_on_wire(mat, gate2, live.index(tg.qubit), len(live))
    return DenseMap(mat, tuple(inputs), outputs)


def graph_state_matrix(pattern: MeasurementPattern) -> DenseMap:
    """E_G N applied to nothing else: the entangled resource as a map."""
    g = pattern.graph
    verts = sorted(g.vertices)
    mat = np.array([[1]], dtype=complex)
    for v in verts:
        if v in g.inputs:
            mat = np.kron(mat, np.eye(2, dtype=complex))
        else:
            mat = np.kron(mat, _PLUS[:, None])
    for a, b in sorted(g.edges):
        mat = _apply_cz(mat, verts.index(a), verts.index(b), len(verts))
    return DenseMap(mat, tuple(sorted(g.inputs)), tuple(verts))


# -- circuit and pddag semantics ----------------------------------------------


def circuit_semantics(circuit: Circuit, cap: Optional[int] = None) -> DenseMap:
    cap = qubit_cap() if cap is None else cap
    if circuit.n_wires > cap:
        raise QubitCapExceeded(f"{circuit.n_wires} wires exceeds cap {cap}")
    n = circuit.n_wires
    init = set(circuit.init_wires)
    mat = np.array([[1]], dtype=complex)
    for w in range(n):
        if w in init:
            mat = np.kron(mat, np.array([[1], [0]], dtype=complex))
        else:
            mat = np.kron(mat, np.eye(2, dtype=complex))
    seen_non_init = False
    for gate in circuit.gates:
        if gate.name == "INIT0":
            if seen_non_init:
                raise ValueError("INIT0 gates must come first")
            continue
        seen_non_init = True
        if gate.name in ("CZ", "CX"):
            a, b = gate.qubits
            mat = _apply_cz(mat, a, b, n) if gate.name == "CZ" else _apply_cx(mat, a, b, n)
        elif gate.name == "EXP":
            rot = rotation_matrix(gate.string, gate.angle, tuple(range(n)))
            mat = rot @ mat
        else:
            mat = _apply_on_wire(mat, _single_qubit_gate(gate.name, gate.angle), gate.qubits[0], n)
    return DenseMap(mat, tuple(w for w in range(n) if w not in init), tuple(range(n)))


def _apply_cx(mat: np.ndarray, c: int, t: int, n: int) -> np.ndarray:
    rows = np.arange(2 ** n)
    ctrl = (rows >> (n - 1 - c)) & 1
    flipped = rows ^ (ctrl << (n - 1 - t))
    return mat[flipped, :]


def pddag_semantics(pddag: Pddag, cap: Optional[int] = None) -> DenseMap:
    """Rotation product times the synthesized tableau Clifford."""
    outputs = list(pddag.tableau.outputs)
    n = len(outputs)
    cap = qubit_cap() if cap is None else cap
    if n > cap:
        raise QubitCapExceeded(f"{n} wires exceeds cap {cap}")
    m = len(pddag.tableau.inputs)
    z_out, x_out = _complete_tableau(pddag.tableau)
    tab_circuit = Circuit(
        n,
        tuple([Gate("INIT0", (w,)) for w in range(m, n)])
        + tuple(clifford_circuit_from_rows(z_out, x_out)),
    )
    mat = circuit_semantics(tab_circuit, cap).matrix
    for nid in pddag.node_ids:
        rot = pddag.nodes[nid]
        mat = rotation_matrix(rot.string, rot.angle, outputs) @ mat
    return DenseMap(mat, tuple(pddag.tableau.inputs), tuple(outputs))


# -- comparison ----------------------------------------------------------------


def equal_up_to_phase(a: DenseMap, b: DenseMap, tol: float = DEFAULT_TOL) -> bool:
    """True iff the matrices agree up to one global (complex) scalar.

    Normalization constants are ignored throughout the library, so the
    scalar is not constrained to unit modulus.
    """
    ma, mb = np.asarray(a.matrix), np.asarray(b.matrix)
    if ma.shape != mb.shape:
        raise ValueError(f"shape mismatch {ma.shape} vs {mb.shape}")
    idx = np.unravel_index(np.argmax(np.abs(mb)), mb.shape)
    pivot = mb[idx]
    if abs(pivot) <= tol:
        return bool(np.max(np.abs(ma)) <= tol)
    scale = ma[idx] / pivot
    if abs(scale) <= tol:
        return False
    return bool(np.max(np.abs(ma - scale * mb)) <= tol)


def maps_equal(a, b, tol: float = DEFAULT_TOL) -> bool:
    return equal_up_to_phase(a, b, tol)


def pauli_absorption_check(pattern: MeasurementPattern, u: str, p: str,
                           tol: float = DEFAULT_TOL) -> bool:
    """Densely confirm <+_{P,a pi}| == (-1)^a <+_{P,a pi}| P for vertex u."""
    label = pattern.graph.labels.get(u)
    if label != p:
        raise ValueError(f"vertex {u!r} has label {label!r}, not {p!r}")
    a = int(pattern.angles[u] % 2)
    bra = measurement_bra(p, pattern.angles[u])
    rhs = (-1) ** a * bra @ _PAULI_MATS[p]
    return bool(np.max(np.abs(bra - rhs)) <= tol)
