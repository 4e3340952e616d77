"""
Teleportation and the Pauli correction table
============================================

Send a qubit through a shared Bell pair.  The receiver's half ends up
one known Pauli away from the input, and which Pauli is again pure XOR:
compose the shared pair's label with the measurement outcome.
"""

import numpy as np

from relcommit.quantum import (
    BASIS_STATES,
    BELL_LABELS,
    StateVector,
    apply_pauli,
    bell_measure,
    fidelity,
    make_basis_state,
    make_bell,
    teleport_correction,
    tensor,
)

# One concrete run first: teleport |+> over the (0,0) pair.
spec = BASIS_STATES[2]  # X0, the plus state
shared = BELL_LABELS[0]
source = make_basis_state(spec)
register = tensor([source, make_bell(shared)])  # qubits: source, near, far

print(f"teleporting {spec} over pair {shared}:")
for branch in bell_measure(register, 0, 1):
    # project out the measured pair to see what the far qubit holds
    psi = branch.post_state.amplitudes.reshape(2, 2, 2)
    bell = make_bell(branch.outcome).amplitudes.reshape(2, 2)
    residual = np.tensordot(bell.conj(), psi, axes=([0, 1], [0, 1]))
    far = StateVector(residual / np.linalg.norm(residual))

    correction = teleport_correction(shared, branch.outcome)
    fixed = apply_pauli(far, 0, correction)
    print(
        f"  outcome {branch.outcome}: apply {correction.name:>2}"
        f" -> fidelity with input {fidelity(fixed, source):.6f}"
    )

print()

# Now the full table: 4 shared pairs x 4 outcomes.  The correction is
# the Pauli with exponent bits shared XOR outcome, independent of the
# state being sent.
print("correction table (rows: shared pair, columns: outcome):")
header = "        " + "".join(f"{str(m):>6}" for m in BELL_LABELS)
print(header)
for shared in BELL_LABELS:
    row = [f"{teleport_correction(shared, m).name:>6}" for m in BELL_LABELS]
    print(f"  {shared}  " + "".join(row))

# And a brute-force check that the table is right for every input state.
worst = 1.0
for shared in BELL_LABELS:
    for spec in BASIS_STATES:
        source = make_basis_state(spec)
        register = tensor([source, make_bell(shared)])
        for branch in bell_measure(register, 0, 1):
            psi = branch.post_state.amplitudes.reshape(2, 2, 2)
            bell = make_bell(branch.outcome).amplitudes.reshape(2, 2)
            residual = np.tensordot(bell.conj(), psi, axes=([0, 1], [0, 1]))
            far = StateVector(residual / np.linalg.norm(residual))
            fixed = apply_pauli(far, 0, teleport_correction(shared, branch.outcome))
            worst = min(worst, fidelity(fixed, source))
print(f"\nworst-case fidelity over all 64 combinations: {worst:.12f}")
