"""Exact algebra of signed Pauli strings and Pauli-exponential rotations.

Strings are tensor products of {I, X, Y, Z} over *named* qubits (graph
vertices or wire indices) with a global phase in {+1, -1, +i, -i}, stored
as a power of i.  Rotations ``(A, theta)`` denote the operator
``exp(i * theta/2 * A)``; angles are exact rational multiples of pi.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

LETTERS = ("I", "X", "Y", "Z")

# (p, q) -> (r, k) with P*Q = i^k * R for single-qubit Paulis.
_MUL = {
    ("X", "X"): ("I", 0), ("Y", "Y"): ("I", 0), ("Z", "Z"): ("I", 0),
    ("X", "Y"): ("Z", 1), ("Y", "X"): ("Z", 3),
    ("Y", "Z"): ("X", 1), ("Z", "Y"): ("X", 3),
    ("Z", "X"): ("Y", 1), ("X", "Z"): ("Y", 3),
}

_PHASE_STR = {0: "", 1: "i", 2: "-", 3: "-i"}
_PHASE_VAL = {0: 1, 1: 1j, 2: -1, 3: -1j}


@dataclass(frozen=True)
class SignedPauliString:
    """A Pauli tensor with a global phase i^phase_pow.

    ``letters`` maps qubit ids to non-identity letters; qubits absent from
    the map carry I.  Values are immutable.
    """

    letters: Mapping[str, str] = field(default_factory=dict)
    phase_pow: int = 0

    def __post_init__(self):
        clean = {q: l for q, l in self.letters.items() if l != "I"}
        for q, l in clean.items():
            if l not in ("X", "Y", "Z"):
                raise ValueError(f"bad Pauli letter {l!r} on qubit {q!r}")
        object.__setattr__(self, "letters", clean)
        object.__setattr__(self, "phase_pow", self.phase_pow % 4)

    # -- basic views ---------------------------------------------------

    @property
    def support(self) -> frozenset:
        return frozenset(self.letters)

    @property
    def phase(self) -> complex:
        return _PHASE_VAL[self.phase_pow]

    def letter(self, qubit) -> str:
        return self.letters.get(qubit, "I")

    def is_identity_string(self) -> bool:
        return not self.letters

    def is_hermitian(self) -> bool:
        return self.phase_pow in (0, 2)

    @property
    def sign(self) -> int:
        """+1/-1 for Hermitian strings."""
        if not self.is_hermitian():
            raise ValueError("string has imaginary phase, no real sign")
        return 1 if self.phase_pow == 0 else -1

    def unsigned(self) -> "SignedPauliString":
        return SignedPauliString(self.letters, 0)

    def __neg__(self) -> "SignedPauliString":
        return SignedPauliString(self.letters, self.phase_pow + 2)

    def times_i(self) -> "SignedPauliString":
        return SignedPauliString(self.letters, self.phase_pow + 1)

    def __hash__(self):
        return hash((frozenset(self.letters.items()), self.phase_pow))

    def __eq__(self, other):
        if not isinstance(other, SignedPauliString):
            return NotImplemented
        return self.letters == other.letters and self.phase_pow == other.phase_pow

    def __mul__(self, other: "SignedPauliString") -> "SignedPauliString":
        return multiply(self, other)

    # -- formatting ----------------------------------------------------

    def format(self, qubit_order: Optional[Sequence] = None) -> str:
        """Serialize as e.g. ``-iX(a)Z(o1)``; identity is ``I``."""
        qubits = qubit_order if qubit_order is not None else sorted(self.letters, key=str)
        body = "".join(
            f"{self.letters[q]}({q})" for q in qubits if q in self.letters
        )
        return _PHASE_STR[self.phase_pow] + (body or "I")

    def __str__(self):
        return self.format()

    def wire_string(self, wire_order: Sequence) -> str:
        """Dense letters in wire order, e.g. ``-YZ`` over two wires."""
        return _PHASE_STR[self.phase_pow] + "".join(self.letter(q) for q in wire_order)


def identity_string() -> SignedPauliString:
    return SignedPauliString({}, 0)


def single(qubit, letter: str, sign: int = 1) -> SignedPauliString:
    return SignedPauliString({qubit: letter}, 0 if sign == 1 else 2)


def from_letter_map(letters: Mapping, sign: int = 1) -> SignedPauliString:
    return SignedPauliString(letters, 0 if sign == 1 else 2)


def multiply(a: SignedPauliString, b: SignedPauliString) -> SignedPauliString:
    """Exact group product; qubits missing from either factor act as I."""
    letters = dict(a.letters)
    k = a.phase_pow + b.phase_pow
    for q, lb in b.letters.items():
        la = letters.pop(q, "I")
        if la == "I":
            letters[q] = lb
        else:
            r, dk = _MUL[(la, lb)]
            k += dk
            if r != "I":
                letters[q] = r
    return SignedPauliString(letters, k)


def commutes(a: SignedPauliString, b: SignedPauliString) -> bool:
    """True iff the number of qubits with differing non-I letters is even."""
    small, big = (a, b) if len(a.letters) <= len(b.letters) else (b, a)
    odd = 0
    for q, l in small.letters.items():
        m = big.letters.get(q, "I")
        if m != "I" and m != l:
            odd ^= 1
    return odd == 0


def parse_string(text: str) -> SignedPauliString:
    """Parse the ``-iX(a)Z(o1)`` serialization format."""
    s = text.strip()
    k = 0
    if s.startswith("-i"):
        k, s = 3, s[2:]
    elif s.startswith("i"):
        k, s = 1, s[1:]
    elif s.startswith("-"):
        k, s = 2, s[1:]
    elif s.startswith("+"):
        s = s[1:]
    if s == "I" or s == "":
        return SignedPauliString({}, k)
    letters = {}
    i = 0
    while i < len(s):
        l = s[i]
        if l not in ("X", "Y", "Z") or i + 1 >= len(s) or s[i + 1] != "(":
            raise ValueError(f"cannot parse Pauli string {text!r}")
        j = s.index(")", i + 2)
        q = s[i + 2 : j]
        if not q or q in letters:
            raise ValueError(f"bad qubit id in {text!r}")
        letters[q] = l
        i = j + 1
    return SignedPauliString(letters, k)


# -- rotations ----------------------------------------------------------


def _norm_angle(angle: Fraction, period: int) -> Fraction:
    return Fraction(angle) % period


@dataclass(frozen=True)
class Rotation:
    """``exp(i * angle/2 * string)`` with angle an exact multiple of pi.

    ``angle`` is stored in units of pi, normalized into [0, 4).  The string
    phase must be +-1 so the operator is unitary.
    """

    string: SignedPauliString
    angle: Fraction

    def __post_init__(self):
        if not self.string.is_hermitian():
            raise ValueError("rotation axis must have a +-1 phase")
        object.__setattr__(self, "angle", _norm_angle(self.angle, 4))

    def is_clifford(self) -> bool:
        """True iff the angle is a multiple of pi/2."""
        return (self.angle * 2).denominator == 1

    def is_identity(self) -> bool:
        return self.angle == 0 or self.string.is_identity_string()

    def equivalent(self, other: "Rotation") -> bool:
        """Operator equality: (-P, theta) == (P, -theta) exactly."""
        if self.string == other.string and self.angle == other.angle:
            return True
        return self.string == -other.string and self.angle == _norm_angle(-other.angle, 4)

    def __str__(self):
        return f"({self.string}, {self.angle}*pi)"


def reorder_push(quarter: Rotation, b: SignedPauliString) -> SignedPauliString:
    """Return b' with ``exp(i t/2 A) b = b' exp(i t/2 A)`` for Clifford t.

    For anticommuting A, b this is i*A*b at t = pi/2, -b at t = pi and
    -i*A*b at t = 3pi/2; commuting pairs pass through unchanged.
    """
    if not quarter.is_clifford():
        raise ValueError("reorder rules need a multiple of pi/2")
    a = quarter.string
    if commutes(a, b):
        return b
    t = _norm_angle(quarter.angle, 2)
    if t == 0:
        return b
    if t == 1:
        return -b
    prod = multiply(a, b).times_i()
    return prod if t == Fraction(1, 2) else -prod


def reorder_pull(quarter: Rotation, b: SignedPauliString) -> SignedPauliString:
    """Inverse of reorder_push: ``b exp(i t/2 A) = exp(i t/2 A) b'``."""
    return reorder_push(Rotation(quarter.string, -quarter.angle), b)


def product_rotation(rot: Rotation, stab: SignedPauliString) -> Rotation:
    """Multiply a rotation axis by a commuting stabilizer of its target.

    The equality ``exp(i t A) C = exp(i t A B) C`` holds only when B
    stabilizes the downstream map C; that part is the caller's obligation.
    """
    if not commutes(rot.string, stab):
        raise ValueError("axis and stabilizer anticommute")
    return Rotation(multiply(rot.string, stab), rot.angle)


_HALF = Fraction(1, 2)


def gate_to_exponentials(gate: str, qubits: Sequence, angle: Optional[Fraction] = None) -> list:
    """Decompose a named gate into rotations, in operator-product order.

    The returned list multiplies left-to-right to the gate up to global
    phase, i.e. the *last* element acts first on a state.  Angles are in
    units of pi.
    """
    gate = gate.upper()
    if gate == "CX":
        c, t = qubits
        return [
            Rotation(from_letter_map({c: "Z", t: "X"}), -_HALF),
            Rotation(single(c, "Z"), _HALF),
            Rotation(single(t, "X"), _HALF),
        ]
    if gate == "CZ":
        c, t = qubits
        return [
            Rotation(from_letter_map({c: "Z", t: "Z"}), -_HALF),
            Rotation(single(c, "Z"), _HALF),
            Rotation(single(t, "Z"), _HALF),
        ]
    if gate == "RZ":
        (q,) = qubits
        return [Rotation(single(q, "Z"), -Fraction(angle))]
    if gate == "RX":
        (q,) = qubits
        return [Rotation(single(q, "X"), -Fraction(angle))]
    if gate == "H":
        (q,) = qubits
        return [
            Rotation(single(q, "Z"), -_HALF),
            Rotation(single(q, "X"), -_HALF),
            Rotation(single(q, "Z"), -_HALF),
        ]
    if gate == "CCX":
        a, b, t = qubits
        q4 = Fraction(1, 4)
        return [
            Rotation(from_letter_map({a: "Z", b: "Z", t: "X"}), -q4),
            Rotation(from_letter_map({a: "Z", b: "Z"}), q4),
            Rotation(from_letter_map({a: "Z", t: "X"}), q4),
            Rotation(from_letter_map({b: "Z", t: "X"}), q4),
            Rotation(single(a, "Z"), -q4),
            Rotation(single(b, "Z"), -q4),
            Rotation(single(t, "X"), -q4),
        ]
    raise ValueError(f"unknown gate {gate!r}")


def conjugate_by_gate(gate: str, qubits: Sequence, string: SignedPauliString,
                      angle: Optional[Fraction] = None) -> SignedPauliString:
    """Exact Clifford conjugation G * string * G^dagger via the reorder rules."""
    rotations = gate_to_exponentials(gate, qubits, angle)
    out = string
    for rot in reversed(rotations):
        if not rot.is_clifford():
            raise ValueError("conjugation needs a Clifford gate")
        out = reorder_push(rot, out)
    return out
