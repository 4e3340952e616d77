"""
Bell pairs and entanglement swapping
====================================

Build the four Bell pairs, measure one half of each of two pairs in the
Bell basis, and watch the untouched halves collapse into a Bell state
whose two-bit label is just the XOR of the inputs and the outcome.
"""

import numpy as np

from relcommit.quantum import (
    BELL_LABELS,
    BellLabel,
    StateVector,
    bell_measure,
    make_bell,
    states_equal_up_to_phase,
    swapped_label,
    tensor,
)

# The four Bell pairs, addressed by two bits (i, j).  i flips the sign,
# j flips the second qubit, so (0,0) is the usual (|00> + |11>)/sqrt(2).
for label in BELL_LABELS:
    amps = np.round(make_bell(label).amplitudes.real, 6)
    print(f"pair {label} ({label.symbol:>4}):  amplitudes {amps}")

print()

# Prepare two pairs side by side: qubits 0,1 hold pair a, qubits 2,3
# hold pair b.  A Bell-state measurement on the inner qubits (1, 2)
# never reveals anything about a or b: all four outcomes are equally
# likely, no matter which pairs went in.
a, b = BellLabel(1, 1), BellLabel(1, 0)
register = tensor([make_bell(a), make_bell(b)])
branches = bell_measure(register, 1, 2)
print(f"measuring the inner halves of {a} and {b}:")
for branch in branches:
    print(f"  outcome {branch.outcome}: probability {branch.probability:.4f}")

print()

# The interesting part is what happens to the qubits nobody touched.
# Project out the measured pair and compare the leftover state on
# qubits (0, 3) with the label arithmetic a XOR b XOR outcome.
def outer_state(branch):
    psi = branch.post_state.amplitudes.reshape(2, 2, 2, 2)
    bell = make_bell(branch.outcome).amplitudes.reshape(2, 2)
    residual = np.tensordot(bell.conj(), psi, axes=([0, 1], [1, 2])).reshape(-1)
    return StateVector(residual / np.linalg.norm(residual))


print("the unmeasured halves land exactly on the XOR-predicted pair:")
for branch in branches:
    predicted = swapped_label(a, b, branch.outcome)
    match = states_equal_up_to_phase(outer_state(branch), make_bell(predicted))
    print(f"  outcome {branch.outcome} -> predicted pair {predicted}, matches: {match}")

# The same holds for all 16 input combinations; the test suite checks
# every one of the 64 (a, b, outcome) triples.
checked = 0
for a in BELL_LABELS:
    for b in BELL_LABELS:
        register = tensor([make_bell(a), make_bell(b)])
        for branch in bell_measure(register, 1, 2):
            assert states_equal_up_to_phase(
                outer_state(branch), make_bell(swapped_label(a, b, branch.outcome))
            )
            checked += 1
print(f"\nverified the swap law on all {checked} triples")
