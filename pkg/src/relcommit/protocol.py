"""Commitment scheme state machines over the exact quantum engine.

Three schemes share one quantum skeleton.  A committer (Alice) and a
receiver-side party each prepare an entangled pair and send one half to
a middle agent, whose joint pair-basis measurement swaps the
entanglement onto the retained halves.  The receiver teleports a probe
qubit through his own pair; Alice rotates her half by the Pauli frame
named by her pair label and returns it, and the agent stores its
measured bit.  At reveal, announcements let the verifier recompute what
that stored bit should have been.

* ``single``: one pair per party, one committed bit.
* ``multi``: two committers on opposite sides of a verifying center;
  the second committer also returns a rotated copy of the probe.
* ``string``: N independent single-scheme pairs committing an N-bit
  string, with the probe drawn per pair from all four basis states.

The committed bit of a pair label is its parity bit: labels with parity
0 encode 0, parity 1 encode 1.  Changing the announced parity is what
the validation check is designed to catch.

Validation knows two verifier models:

* ``R1``: the verifier reconstructs the teleportation correction from
  the announcement alone.  The announced label then cancels out of the
  comparison, so every announcement is accepted; the analyzer layer
  reports this as a finding rather than hiding it.
* ``R2`` (default): the verifier is granted the true correction (as if
  the sealed swap and teleport records carried it) and checks the
  announced frame against it.  Parity flips are then always caught,
  sign flips pass on parity-preserving announcements.

``run_*`` functions return exhaustive branch enumerations (transcripts
weighted by exact probabilities) or, in ``sample`` mode, a single
seeded draw from that distribution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .quantum import (
    BasisStateSpec,
    BellLabel,
    PauliOp,
    StateVector,
    apply_pauli,
    basis_measure,
    bell_measure,
    make_basis_state,
    make_bell,
    tensor,
)
from .spacetime import Schedule, standard_schedule

__all__ = [
    "VALIDATION_MODES",
    "RUN_MODES",
    "Z_FAMILY",
    "FULL_FAMILY",
    "SchemeParams",
    "Verdict",
    "Transcript",
    "committed_bit",
    "committed_string",
    "run_single",
    "run_multiparty",
    "run_string",
    "validate_single",
    "validate_multiparty",
    "validate_string",
]

VALIDATION_MODES = ("R1", "R2")
RUN_MODES = ("enumerate", "sample")

Z_FAMILY = (BasisStateSpec("Z", 0), BasisStateSpec("Z", 1))
FULL_FAMILY = (
    BasisStateSpec("Z", 0),
    BasisStateSpec("Z", 1),
    BasisStateSpec("X", 0),
    BasisStateSpec("X", 1),
)


def committed_bit(label: BellLabel) -> int:
    """Bit encoded by a pair label: its parity bit."""
    return label.j


def committed_string(labels: Sequence[BellLabel]) -> str:
    """Bit string encoded by a sequence of pair labels, one bit per pair."""
    return "".join(str(committed_bit(label)) for label in labels)


@dataclass(frozen=True)
class SchemeParams:
    """Public parameters of one commitment instance.

    ``phi_policy`` fixes the receiver-side probe state: a concrete
    :class:`BasisStateSpec` or ``"uniform"``, which draws from the Z
    family for single/multi and from all four basis states for string.
    ``bob_label`` is the receiver-side pair label (the second
    committer's label in the multi scheme, overridable per run).
    """

    scheme: str
    x: float = 1.0
    c: float = 1.0
    T: float | None = None
    n_pairs: int = 1
    phi_policy: BasisStateSpec | str = "default"
    bob_label: BellLabel = BellLabel(0, 0)
    validation_mode: str = "R2"

    def __post_init__(self) -> None:
        if self.scheme not in ("single", "multi", "string"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.n_pairs < 1:
            raise ValueError(f"n_pairs must be at least 1, got {self.n_pairs}")
        if self.scheme != "string" and self.n_pairs != 1:
            raise ValueError(f"scheme {self.scheme!r} uses exactly one pair")
        if self.validation_mode not in VALIDATION_MODES:
            raise ValueError(f"unknown validation mode {self.validation_mode!r}")
        policy = self.phi_policy
        if isinstance(policy, BasisStateSpec):
            if self.scheme != "string" and policy.basis != "Z":
                raise ValueError(
                    f"scheme {self.scheme!r} fixes the probe in the Z family, got {policy}"
                )
        elif policy not in ("uniform", "default"):
            raise ValueError(f"phi_policy must be a basis state or 'uniform', got {policy!r}")
        if self.x <= 0.0 or self.c <= 0.0:
            raise ValueError(
                f"separation and signal speed must be positive, got x={self.x}, c={self.c}"
            )
        # resolve T so the schedule constructor sees a concrete reveal time
        if self.T is None:
            object.__setattr__(self, "T", 10.0 * self.x / self.c)
        elif self.T < 2.0 * self.x / self.c:
            raise ValueError(
                f"reveal time {self.T!r} precedes the storage phase {2.0 * self.x / self.c!r}"
            )

    def phi_choices(self) -> tuple[tuple[BasisStateSpec, float], ...]:
        """Probe states with their draw weights under this policy."""
        policy = self.phi_policy
        if policy == "default":
            policy = "uniform" if self.scheme == "string" else BasisStateSpec("Z", 0)
        if isinstance(policy, BasisStateSpec):
            return ((policy, 1.0),)
        family = FULL_FAMILY if self.scheme == "string" else Z_FAMILY
        weight = 1.0 / len(family)
        return tuple((spec, weight) for spec in family)

    def schedule(self) -> Schedule:
        return standard_schedule(self.x, self.c, self.T, self.scheme)


@dataclass(frozen=True)
class Verdict:
    """Validation outcome with a machine-readable reason on abort."""

    accept: bool
    reason: str = ""

    @classmethod
    def accepted(cls) -> "Verdict":
        return cls(True)

    @classmethod
    def aborted(cls, reason: str) -> "Verdict":
        return cls(False, reason)


@dataclass(frozen=True)
class Transcript:
    """Classical record of one protocol branch.

    Quantum states never appear here; the transcript is exactly what the
    honest parties could write down.  ``probability`` is the exact
    weight of this branch within its run's enumeration.
    """

    scheme: str
    alice_label: BellLabel
    bob_label: BellLabel
    swap_outcome: BellLabel
    teleport_outcome: BellLabel
    phi: BasisStateSpec
    stored_alice_bit: int
    probability: float
    schedule: Schedule
    stored_bob_bit: int | None = None
    alice_mid_measurement: int | None = None
    announced_alice_label: BellLabel | None = None
    announced_bob_label: BellLabel | None = None
    announced_teleport_outcome: BellLabel | None = None
    pair_index: int | None = None
    verdict: Verdict | None = None

    def __post_init__(self) -> None:
        if self.stored_alice_bit not in (0, 1):
            raise ValueError(f"stored bit must be 0 or 1, got {self.stored_alice_bit!r}")
        if not 0.0 < self.probability <= 1.0 + 1e-12:
            raise ValueError(f"branch probability out of range: {self.probability!r}")


def _entropy(seed) -> tuple[int, ...]:
    if seed is None:
        return (0,)
    if isinstance(seed, int):
        return (seed,)
    return tuple(int(s) for s in seed)


def _draw(branches: Sequence[Transcript], rng: np.random.Generator) -> Transcript:
    weights = np.array([t.probability for t in branches])
    edges = np.cumsum(weights)
    idx = int(np.searchsorted(edges, rng.random() * edges[-1], side="right"))
    return branches[min(idx, len(branches) - 1)]


def _enumerate_pair(
    params: SchemeParams,
    alice_label: BellLabel,
    scheme_tag: str,
    schedule: Schedule,
    pair_index: int | None = None,
) -> list[Transcript]:
    """Exhaustive branches of one pair's commit/confirm/store phases.

    Register order: Alice's retained half, her flying half, the
    receiver's flying half, the receiver's retained half, the probe.
    The middle agent's joint measurement hits qubits 1 and 2; the
    receiver's teleportation measurement hits the probe and his retained
    half (4 and 3); the confirmation measurement reads qubit 0 in the
    probe's basis family.
    """
    alice_frame = PauliOp(alice_label.i, alice_label.j)
    out: list[Transcript] = []
    for phi, phi_weight in params.phi_choices():
        register = tensor([
            make_bell(alice_label),
            make_bell(params.bob_label),
            make_basis_state(phi),
        ])
        for swap in bell_measure(register, 1, 2):
            for tele in bell_measure(swap.post_state, 4, 3):
                confirmed = apply_pauli(tele.post_state, 0, alice_frame)
                for final in basis_measure(confirmed, 0, phi.basis):
                    out.append(
                        Transcript(
                            scheme=scheme_tag,
                            alice_label=alice_label,
                            bob_label=params.bob_label,
                            swap_outcome=swap.outcome,
                            teleport_outcome=tele.outcome,
                            phi=phi,
                            stored_alice_bit=final.outcome,
                            probability=phi_weight * swap.probability
                            * tele.probability * final.probability,
                            schedule=schedule,
                            announced_alice_label=alice_label,
                            pair_index=pair_index,
                        )
                    )
    return out


def run_single(
    params: SchemeParams,
    alice_label: BellLabel,
    mode: str = "enumerate",
    seed=None,
) -> list[Transcript]:
    """Execute the single-bit scheme.

    ``enumerate`` returns every classical branch with exact weights
    summing to 1; ``sample`` returns a one-element list drawn from that
    distribution with a seeded generator.
    """
    if params.scheme != "single":
        raise ValueError(f"run_single requires scheme 'single', got {params.scheme!r}")
    if mode not in RUN_MODES:
        raise ValueError(f"unknown run mode {mode!r}")
    branches = _enumerate_pair(params, alice_label, "single", params.schedule())
    if mode == "enumerate":
        return branches
    return [_draw(branches, np.random.default_rng(_entropy(seed)))]


def run_multiparty(
    params: SchemeParams,
    alice_label: BellLabel,
    bob_label: BellLabel,
    mode: str = "enumerate",
    seed=None,
) -> list[Transcript]:
    """Execute the two-committer scheme around a verifying center.

    Both committers learn the center's swap outcome.  Alice measures her
    retained qubit in the computational basis (recorded, announced only
    if the parties later choose to), then rotates and returns it.  Bob
    prepares a fresh copy of the probe rotated by his teleportation
    outcome and his own pair label and returns that; the center stores
    both measured bits.
    """
    if params.scheme != "multi":
        raise ValueError(f"run_multiparty requires scheme 'multi', got {params.scheme!r}")
    if mode not in RUN_MODES:
        raise ValueError(f"unknown run mode {mode!r}")
    schedule = params.schedule()
    alice_frame = PauliOp(alice_label.i, alice_label.j)
    bob_frame = PauliOp(bob_label.i, bob_label.j)
    out: list[Transcript] = []
    for phi, phi_weight in params.phi_choices():
        register = tensor([
            make_bell(alice_label),
            make_bell(bob_label),
            make_basis_state(phi),
        ])
        for swap in bell_measure(register, 1, 2):
            for tele in bell_measure(swap.post_state, 4, 3):
                for mid in basis_measure(tele.post_state, 0, "Z"):
                    confirmed = apply_pauli(mid.post_state, 0, alice_frame)
                    for final in basis_measure(confirmed, 0, phi.basis):
                        probe_copy = make_basis_state(phi)
                        probe_copy = apply_pauli(probe_copy, 0, bob_frame)
                        probe_copy = apply_pauli(
                            probe_copy, 0, PauliOp(tele.outcome.i, tele.outcome.j)
                        )
                        for bob_final in basis_measure(probe_copy, 0, phi.basis):
                            out.append(
                                Transcript(
                                    scheme="multi",
                                    alice_label=alice_label,
                                    bob_label=bob_label,
                                    swap_outcome=swap.outcome,
                                    teleport_outcome=tele.outcome,
                                    phi=phi,
                                    stored_alice_bit=final.outcome,
                                    stored_bob_bit=bob_final.outcome,
                                    alice_mid_measurement=mid.outcome,
                                    probability=phi_weight
                                    * swap.probability
                                    * tele.probability
                                    * mid.probability
                                    * final.probability
                                    * bob_final.probability,
                                    schedule=schedule,
                                    announced_alice_label=alice_label,
                                    announced_bob_label=bob_label,
                                    announced_teleport_outcome=tele.outcome,
                                )
                            )
    if mode == "enumerate":
        return out
    return [_draw(out, np.random.default_rng(_entropy(seed)))]


def run_string(
    params: SchemeParams,
    alice_labels: Sequence[BellLabel],
    mode: str = "enumerate",
    seed=None,
) -> list:
    """Execute the N-pair string scheme.

    Pairs are physically independent.  ``enumerate`` returns one branch
    list per pair; ``sample`` returns one drawn transcript per pair,
    each pair using its own seed-derived stream.
    """
    if params.scheme != "string":
        raise ValueError(f"run_string requires scheme 'string', got {params.scheme!r}")
    if mode not in RUN_MODES:
        raise ValueError(f"unknown run mode {mode!r}")
    if len(alice_labels) != params.n_pairs:
        raise ValueError(
            f"expected {params.n_pairs} committer labels, got {len(alice_labels)}"
        )
    schedule = params.schedule()
    base = _entropy(seed)
    out = []
    for k, label in enumerate(alice_labels):
        branches = _enumerate_pair(params, label, "string", schedule, pair_index=k)
        if mode == "enumerate":
            out.append(branches)
        else:
            out.append(_draw(branches, np.random.default_rng((*base, k))))
    return out


def _deterministic_bit(state: StateVector, basis: str) -> int:
    branches = basis_measure(state, 0, basis)
    if len(branches) != 1:
        raise AssertionError("expected a deterministic confirmation measurement")
    return int(branches[0].outcome)


def _expected_stored_bit(
    phi: BasisStateSpec, frame_label: BellLabel, correction: PauliOp
) -> int:
    """Bit the verifier predicts for the stored confirmation measurement.

    Reconstructs the probe, applies the teleportation correction and the
    announced Pauli frame, and reads the measurement in the probe's own
    basis family.  Deterministic because Pauli frames permute basis
    family members.
    """
    state = make_basis_state(phi)
    state = apply_pauli(state, 0, correction)
    state = apply_pauli(state, 0, PauliOp(frame_label.i, frame_label.j))
    return _deterministic_bit(state, phi.basis)


def _correction_for(transcript: Transcript, announced: BellLabel, mode: str) -> PauliOp:
    if mode == "R1":
        shared = announced ^ transcript.bob_label ^ transcript.swap_outcome
    else:
        shared = transcript.alice_label ^ transcript.bob_label ^ transcript.swap_outcome
    fused = shared ^ transcript.teleport_outcome
    return PauliOp(fused.i, fused.j)


def validate_single(transcript: Transcript, announced: BellLabel, mode: str = "R2") -> Verdict:
    """Check one announced label against the stored confirmation bit."""
    if mode not in VALIDATION_MODES:
        raise ValueError(f"unknown validation mode {mode!r}")
    expected = _expected_stored_bit(
        transcript.phi, announced, _correction_for(transcript, announced, mode)
    )
    if expected == transcript.stored_alice_bit:
        return Verdict.accepted()
    return Verdict.aborted(
        f"stored bit {transcript.stored_alice_bit} != expected {expected} "
        f"for announced label {announced}"
    )


def validate_multiparty(
    transcript: Transcript,
    alice_announced: BellLabel,
    bob_announced: tuple[BellLabel, BellLabel],
    mode: str = "R2",
) -> Verdict:
    """Check both committers' announcements against the stored bits.

    ``bob_announced`` is his claimed pair label and claimed teleportation
    outcome.  Bob's returned probe copy must reproduce the stored copy
    bit under his announced rotations; Alice's side follows the single
    scheme check, with Bob's announced teleportation outcome standing in
    for the sealed one in the R1 model.
    """
    if mode not in VALIDATION_MODES:
        raise ValueError(f"unknown validation mode {mode!r}")
    if transcript.stored_bob_bit is None:
        raise ValueError("transcript lacks the second committer's stored bit")
    bob_label_claim, bob_teleport_claim = bob_announced

    probe = make_basis_state(transcript.phi)
    probe = apply_pauli(probe, 0, PauliOp(bob_label_claim.i, bob_label_claim.j))
    probe = apply_pauli(probe, 0, PauliOp(bob_teleport_claim.i, bob_teleport_claim.j))
    bob_expected = _deterministic_bit(probe, transcript.phi.basis)
    failures = []
    if bob_expected != transcript.stored_bob_bit:
        failures.append(
            f"bob: stored probe copy bit {transcript.stored_bob_bit} != expected {bob_expected}"
        )

    if mode == "R1":
        shared = alice_announced ^ bob_label_claim ^ transcript.swap_outcome
        fused = shared ^ bob_teleport_claim
        correction = PauliOp(fused.i, fused.j)
    else:
        shared = transcript.alice_label ^ transcript.bob_label ^ transcript.swap_outcome
        fused = shared ^ transcript.teleport_outcome
        correction = PauliOp(fused.i, fused.j)
    alice_expected = _expected_stored_bit(transcript.phi, alice_announced, correction)
    if alice_expected != transcript.stored_alice_bit:
        failures.append(
            f"alice: stored bit {transcript.stored_alice_bit} != expected {alice_expected}"
        )
    if failures:
        return Verdict.aborted("; ".join(failures))
    return Verdict.accepted()


def validate_string(
    pair_transcripts: Sequence[Transcript],
    announced_labels: Sequence[BellLabel],
    mode: str = "R2",
) -> Verdict:
    """Accept a string reveal only when every pair's check passes."""
    if len(pair_transcripts) != len(announced_labels):
        raise ValueError(
            f"{len(pair_transcripts)} transcripts but {len(announced_labels)} announcements"
        )
    for k, (transcript, announced) in enumerate(zip(pair_transcripts, announced_labels)):
        verdict = validate_single(transcript, announced, mode)
        if not verdict.accept:
            return Verdict.aborted(f"pair {k}: {verdict.reason}")
    return Verdict.accepted()
