"""Exact state-vector engine for the commitment protocol's quantum layer.

Everything here is deliberately small and exhaustive: registers hold at
most a handful of qubits, and measurements return the complete set of
outcome branches (outcome, probability, collapsed state) instead of a
sampled result, so higher layers can enumerate protocol executions
exactly rather than estimate them.

Conventions
-----------
* Qubit ``k`` of an ``n``-qubit register is bit ``k`` of the amplitude
  index read most-significant-first: amplitude index ``0b01`` of a
  two-qubit register is ``|01>`` with qubit 0 in ``|0>``.  ``tensor``
  assigns qubit indices left to right.
* Maximally entangled pair states carry two-bit labels ``(i, j)``:
  ``i`` is the relative sign, ``j`` the parity.

  ====== =======================  ========
  label  state                    symbol
  ====== =======================  ========
  (0,0)  (|00> + |11>) / sqrt(2)  Phi+
  (0,1)  (|01> + |10>) / sqrt(2)  Psi+
  (1,0)  (|00> - |11>) / sqrt(2)  Phi-
  (1,1)  (|01> - |10>) / sqrt(2)  Psi-
  ====== =======================  ========

  With this labelling ``B(i,j) = (Z^i X^j x I) B(0,0)`` holds exactly,
  so label arithmetic is XOR arithmetic.
* Pauli operators are labelled by exponent bits ``(z, x)`` meaning
  ``Z^z X^x``.  Composition XORs the exponents; the accumulated global
  phase is dropped, which is why all state comparisons in this package
  are up to phase.
* Probabilities are compared at ``PROB_ATOL``; measurement branches at
  or below that weight are dropped as numerically empty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "PROB_ATOL",
    "STATE_ATOL",
    "BellLabel",
    "PauliOp",
    "BasisStateSpec",
    "StateVector",
    "Branch",
    "BranchSet",
    "BELL_LABELS",
    "PAULI_OPS",
    "BASIS_STATES",
    "make_bell",
    "make_basis_state",
    "tensor",
    "apply_pauli",
    "bell_measure",
    "basis_measure",
    "compose_pauli",
    "teleport_correction",
    "swapped_label",
    "states_equal_up_to_phase",
    "fidelity",
]

PROB_ATOL = 1e-12
STATE_ATOL = 1e-9

_BIT_ERR = "label bits must be 0 or 1, got {!r}"


def _check_bit(value: int) -> int:
    if value not in (0, 1):
        raise ValueError(_BIT_ERR.format(value))
    return value


@dataclass(frozen=True)
class BellLabel:
    """Two-bit name ``(i, j)`` of a maximally entangled pair state.

    ``i`` is the sign bit, ``j`` the parity bit.  XOR of labels tracks
    both entanglement swapping and teleportation corrections, so the
    class supports ``^`` directly.
    """

    i: int
    j: int

    def __post_init__(self) -> None:
        _check_bit(self.i)
        _check_bit(self.j)

    def __xor__(self, other: "BellLabel") -> "BellLabel":
        return BellLabel(self.i ^ other.i, self.j ^ other.j)

    @property
    def bits(self) -> tuple[int, int]:
        return (self.i, self.j)

    @property
    def symbol(self) -> str:
        """Conventional state symbol: Phi+/Psi+/Phi-/Psi-."""
        return ("Phi+", "Psi+", "Phi-", "Psi-")[2 * self.i + self.j]

    def __str__(self) -> str:
        return f"{self.i}{self.j}"


BELL_LABELS: tuple[BellLabel, ...] = (
    BellLabel(0, 0),
    BellLabel(0, 1),
    BellLabel(1, 0),
    BellLabel(1, 1),
)


@dataclass(frozen=True)
class PauliOp:
    """Single-qubit Pauli with exponent bits ``(z, x)`` meaning ``Z^z X^x``.

    Only the exponents are tracked; composition discards the global
    phase that distinguishes ``ZX`` from ``XZ``.
    """

    z: int
    x: int

    def __post_init__(self) -> None:
        _check_bit(self.z)
        _check_bit(self.x)

    @property
    def matrix(self) -> np.ndarray:
        return _PAULI_MATRICES[(self.z, self.x)].copy()

    @property
    def name(self) -> str:
        return ("I", "X", "Z", "ZX")[2 * self.z + self.x]

    def __str__(self) -> str:
        return self.name


_PAULI_MATRICES = {
    (0, 0): np.eye(2, dtype=np.complex128),
    (0, 1): np.array([[0, 1], [1, 0]], dtype=np.complex128),
    (1, 0): np.array([[1, 0], [0, -1]], dtype=np.complex128),
    (1, 1): np.array([[0, 1], [-1, 0]], dtype=np.complex128),
}

PAULI_OPS: tuple[PauliOp, ...] = (
    PauliOp(0, 0),
    PauliOp(0, 1),
    PauliOp(1, 0),
    PauliOp(1, 1),
)


@dataclass(frozen=True)
class BasisStateSpec:
    """Named single-qubit basis state: ``basis`` in {Z, X}, ``value`` in {0, 1}.

    ``("Z", 0)`` is ``|0>``, ``("Z", 1)`` is ``|1>``, ``("X", 0)`` is
    ``|+>`` and ``("X", 1)`` is ``|->``.
    """

    basis: str
    value: int

    def __post_init__(self) -> None:
        if self.basis not in ("Z", "X"):
            raise ValueError(f"basis must be 'Z' or 'X', got {self.basis!r}")
        _check_bit(self.value)

    def __str__(self) -> str:
        return f"{self.basis}{self.value}"


BASIS_STATES: tuple[BasisStateSpec, ...] = (
    BasisStateSpec("Z", 0),
    BasisStateSpec("Z", 1),
    BasisStateSpec("X", 0),
    BasisStateSpec("X", 1),
)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state of ``n`` qubits as a complex amplitude vector.

    The amplitude array is copied on construction and frozen.  Equality
    of states is physical, not structural: use
    :func:`states_equal_up_to_phase`.
    """

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=np.complex128, copy=True).reshape(-1)
        if amps.size < 2 or amps.size & (amps.size - 1):
            raise ValueError(f"amplitude count must be a power of two >= 2, got {amps.size}")
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > PROB_ATOL:
            raise ValueError(f"state is not normalized: |psi|^2 = {norm_sq!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    @property
    def dim(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True, eq=False)
class Branch:
    """One measurement outcome: its label, weight, and collapsed state."""

    outcome: "BellLabel | int"
    probability: float
    post_state: StateVector

    def __post_init__(self) -> None:
        if not PROB_ATOL < self.probability <= 1.0 + PROB_ATOL:
            raise ValueError(f"branch probability out of range: {self.probability!r}")


@dataclass(frozen=True, eq=False)
class BranchSet:
    """Exhaustive, order-stable set of measurement branches.

    Branch probabilities must sum to 1 within ``PROB_ATOL``; branches of
    numerically zero weight are dropped before construction.
    """

    branches: tuple[Branch, ...]

    def __post_init__(self) -> None:
        total = math.fsum(b.probability for b in self.branches)
        if abs(total - 1.0) > PROB_ATOL:
            raise ValueError(f"branch probabilities sum to {total!r}, expected 1")

    def __iter__(self) -> Iterator[Branch]:
        return iter(self.branches)

    def __len__(self) -> int:
        return len(self.branches)

    def __getitem__(self, idx: int) -> Branch:
        return self.branches[idx]

    def probabilities(self) -> dict:
        return {b.outcome: b.probability for b in self.branches}


_INV_SQRT2 = 1.0 / math.sqrt(2.0)

_BELL_AMPLITUDES = {
    (0, 0): np.array([_INV_SQRT2, 0.0, 0.0, _INV_SQRT2], dtype=np.complex128),
    (0, 1): np.array([0.0, _INV_SQRT2, _INV_SQRT2, 0.0], dtype=np.complex128),
    (1, 0): np.array([_INV_SQRT2, 0.0, 0.0, -_INV_SQRT2], dtype=np.complex128),
    (1, 1): np.array([0.0, _INV_SQRT2, -_INV_SQRT2, 0.0], dtype=np.complex128),
}

_BASIS_KETS = {
    ("Z", 0): np.array([1.0, 0.0], dtype=np.complex128),
    ("Z", 1): np.array([0.0, 1.0], dtype=np.complex128),
    ("X", 0): np.array([_INV_SQRT2, _INV_SQRT2], dtype=np.complex128),
    ("X", 1): np.array([_INV_SQRT2, -_INV_SQRT2], dtype=np.complex128),
}


def make_bell(label: BellLabel) -> StateVector:
    """Two-qubit maximally entangled state named by ``label``."""
    return StateVector(_BELL_AMPLITUDES[label.bits])


def make_basis_state(spec: BasisStateSpec) -> StateVector:
    """Single-qubit computational or diagonal basis state."""
    return StateVector(_BASIS_KETS[(spec.basis, spec.value)])


def tensor(parts: Sequence[StateVector]) -> StateVector:
    """Tensor product of ``parts``; qubit indices grow left to right."""
    if not parts:
        raise ValueError("tensor requires at least one state")
    amps = parts[0].amplitudes
    for part in parts[1:]:
        amps = np.kron(amps, part.amplitudes)
    return StateVector(amps)


def apply_pauli(state: StateVector, qubit: int, op: PauliOp) -> StateVector:
    """Apply ``op`` to one qubit of ``state``."""
    n = state.n_qubits
    if not 0 <= qubit < n:
        raise IndexError(f"qubit {qubit} out of range for {n}-qubit state")
    psi = state.amplitudes.reshape((2,) * n)
    out = np.tensordot(_PAULI_MATRICES[(op.z, op.x)], psi, axes=([1], [qubit]))
    out = np.moveaxis(out, 0, qubit)
    return StateVector(out.reshape(-1))


def _project_branches(state, qubits, outcome_kets):
    """Exhaustive projective measurement onto the given orthonormal kets."""
    n = state.n_qubits
    psi = state.amplitudes.reshape((2,) * n)
    rest = tuple(ax for ax in range(n) if ax not in qubits)
    perm = (*qubits, *rest)
    inverse = tuple(np.argsort(perm))
    view = np.transpose(psi, perm).reshape(1 << len(qubits), -1)
    branches = []
    for outcome, ket in outcome_kets:
        residual = ket.conj() @ view
        prob = float(np.vdot(residual, residual).real)
        if prob <= PROB_ATOL:
            continue
        post = np.outer(ket, residual / math.sqrt(prob))
        post = np.transpose(post.reshape((2,) * n), inverse).reshape(-1)
        branches.append(Branch(outcome, prob, StateVector(post)))
    return BranchSet(tuple(branches))


def bell_measure(state: StateVector, qubit_a: int, qubit_b: int) -> BranchSet:
    """Measure two qubits in the entangled-pair basis.

    Returns all four possible labelled outcomes (minus numerically empty
    ones) with collapsed post-measurement states.  The projectors are
    symmetric under qubit exchange, so the order of ``qubit_a`` and
    ``qubit_b`` never changes the outcome statistics.
    """
    n = state.n_qubits
    if qubit_a == qubit_b:
        raise ValueError("bell_measure requires two distinct qubits")
    for q in (qubit_a, qubit_b):
        if not 0 <= q < n:
            raise IndexError(f"qubit {q} out of range for {n}-qubit state")
    kets = [(label, _BELL_AMPLITUDES[label.bits]) for label in BELL_LABELS]
    return _project_branches(state, (qubit_a, qubit_b), kets)


def basis_measure(state: StateVector, qubit: int, basis: str) -> BranchSet:
    """Measure one qubit in the Z or X basis; outcomes are bits 0/1."""
    if basis not in ("Z", "X"):
        raise ValueError(f"basis must be 'Z' or 'X', got {basis!r}")
    n = state.n_qubits
    if not 0 <= qubit < n:
        raise IndexError(f"qubit {qubit} out of range for {n}-qubit state")
    kets = [(value, _BASIS_KETS[(basis, value)]) for value in (0, 1)]
    return _project_branches(state, (qubit,), kets)


def compose_pauli(first: PauliOp, second: PauliOp) -> PauliOp:
    """Product of two Pauli frames, up to global phase.

    The exponent bits XOR; the resulting matrix equals the literal
    product ``first.matrix @ second.matrix`` up to a phase.
    """
    return PauliOp(first.z ^ second.z, first.x ^ second.x)


def teleport_correction(shared: BellLabel, outcome: BellLabel) -> PauliOp:
    """Pauli the teleportation receiver's half picked up, as a frame label.

    When a fresh qubit is jointly measured with one half of a ``shared``
    pair and the pair-basis outcome is ``outcome``, the remote half holds
    the input state rotated by this Pauli (up to phase).  Applying the
    same operator again therefore restores the input exactly.  The table
    coincides with XOR of the two labels; the test suite certifies that
    against direct state-vector enumeration rather than assuming it.
    """
    fused = shared ^ outcome
    return PauliOp(fused.i, fused.j)


def swapped_label(label_a: BellLabel, label_b: BellLabel, outcome: BellLabel) -> BellLabel:
    """Label of the outer pair after entanglement swapping.

    Two pairs labelled ``label_a`` and ``label_b`` share a joint
    pair-basis measurement on their inner qubits; outcome ``outcome``
    leaves the two outer qubits entangled with this label.  Pure XOR,
    certified against enumeration by the test suite.
    """
    return label_a ^ label_b ^ outcome


def states_equal_up_to_phase(state_a: StateVector, state_b: StateVector, tol: float = STATE_ATOL) -> bool:
    """Whether two states coincide after removing a global phase.

    The phase is fixed by aligning the largest amplitude of ``state_a``
    with the corresponding amplitude of ``state_b``; the states are equal
    when the aligned l2 distance is at most ``tol``.  Alignment keeps the
    residual at machine precision for true phase multiples, unlike overlap
    based metrics which amplify rounding near zero.
    """
    if state_a.dim != state_b.dim:
        raise ValueError(f"dimension mismatch: {state_a.dim} vs {state_b.dim}")
    a = state_a.amplitudes
    b = state_b.amplitudes
    pivot = int(np.argmax(np.abs(a)))
    ratio = complex(b[pivot] / a[pivot])
    if abs(ratio) > PROB_ATOL:
        a = a * (ratio / abs(ratio))
    return float(np.linalg.norm(a - b)) <= tol


def fidelity(state_a: StateVector, state_b: StateVector) -> float:
    """Squared overlap ``|<a|b>|^2`` of two pure states."""
    if state_a.dim != state_b.dim:
        raise ValueError(f"dimension mismatch: {state_a.dim} vs {state_b.dim}")
    return abs(complex(np.vdot(state_a.amplitudes, state_b.amplitudes))) ** 2
