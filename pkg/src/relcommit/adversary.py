"""Security analyzer: cheating strategies, detection odds, and leakage.

Every probability this module reports is computed twice, by two routes
that share no code past the label arithmetic itself:

1. **enumeration**: run the full state-vector protocol, validate each
   branch, and sum weights;
2. **algebra**: fold the same scenario into XOR bookkeeping over pair
   labels, with no amplitudes anywhere.

The two must agree within 1e-12 or the analyzer raises
:class:`SelfCheckError` instead of returning a number.  This guards the
simulator and the closed-form analysis against each other.

Strategies
----------
Committer side (affect acceptance at reveal):

* ``honest``: announce the committed label.
* ``relabel_announce``: commit to a label, announce it XOR ``delta``.
* ``delayed_rechoice``: decide the label only at the confirmation
  phase.  The scheme is *designed* to allow this (it is the delayed
  choice), so acceptance is 1 and the effective label is the binding
  commitment.

Receiver side (attempt to learn the committed bit before reveal):

* ``early_extract``: measure the committer's flying half in Z, X, or
  jointly with the retained half in the pair basis.
* ``receiver_skip``: keep the flying half idle instead of forwarding
  it, then measure it jointly with the confirmation qubit at storage
  time.  Equivalent to the pair-basis extraction: the returned qubit
  arrives rotated by the very label that names the pair, so the joint
  outcome is the same fixed state for every commitment.

Reported numbers carry the protocol designers' claimed values where
the published security argument states one, with an ``agrees`` flag;
disagreements are findings, never silently reconciled.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .protocol import (
    SchemeParams,
    Transcript,
    committed_bit,
    run_multiparty,
    run_single,
    run_string,
    validate_multiparty,
    validate_single,
)
from .quantum import (
    BELL_LABELS,
    BasisStateSpec,
    BellLabel,
    PauliOp,
    apply_pauli,
    basis_measure,
    bell_measure,
    make_bell,
)

__all__ = [
    "AGREEMENT_ATOL",
    "COMMITTER_KINDS",
    "RECEIVER_KINDS",
    "SelfCheckError",
    "Strategy",
    "StrategyRow",
    "ExtractionRow",
    "SecurityReport",
    "detection_probability",
    "string_cheat_acceptance",
    "concealment_tv",
    "extraction_guess_probability",
    "build_report",
    "clear_caches",
]

AGREEMENT_ATOL = 1e-12

COMMITTER_KINDS = ("honest", "relabel_announce", "delayed_rechoice")
RECEIVER_KINDS = ("early_extract", "receiver_skip")

_ZERO = BellLabel(0, 0)


class SelfCheckError(RuntimeError):
    """The enumeration and algebra routes disagreed beyond tolerance."""


@dataclass(frozen=True)
class Strategy:
    """One adversarial (or honest) behaviour, by role and kind."""

    role: str
    kind: str
    delta: BellLabel | None = None
    basis: str | None = None

    def __post_init__(self) -> None:
        if self.role == "committer":
            if self.kind not in COMMITTER_KINDS:
                raise ValueError(f"unknown committer strategy {self.kind!r}")
            if self.kind == "honest" and self.delta not in (None, _ZERO):
                raise ValueError("honest strategy takes no announcement shift")
            if self.kind != "honest" and (self.delta is None or self.delta == _ZERO):
                raise ValueError(f"{self.kind} requires a non-zero label shift")
        elif self.role == "receiver":
            if self.kind not in RECEIVER_KINDS:
                raise ValueError(f"unknown receiver strategy {self.kind!r}")
            if self.kind == "early_extract" and self.basis not in ("Z", "X", "pair"):
                raise ValueError("early_extract requires basis 'Z', 'X' or 'pair'")
        else:
            raise ValueError(f"role must be committer or receiver, got {self.role!r}")

    @classmethod
    def honest(cls) -> "Strategy":
        return cls("committer", "honest")

    @classmethod
    def relabel_announce(cls, delta: BellLabel) -> "Strategy":
        return cls("committer", "relabel_announce", delta=delta)

    @classmethod
    def delayed_rechoice(cls, delta: BellLabel) -> "Strategy":
        return cls("committer", "delayed_rechoice", delta=delta)

    @classmethod
    def early_extract(cls, basis: str) -> "Strategy":
        return cls("receiver", "early_extract", basis=basis)

    @classmethod
    def receiver_skip(cls) -> "Strategy":
        return cls("receiver", "receiver_skip")

    def describe(self) -> str:
        if self.role == "committer":
            if self.kind == "honest":
                return "honest"
            return f"{self.kind}(delta={self.delta})"
        if self.kind == "receiver_skip":
            return "receiver_skip"
        return f"early_extract({self.basis})"


# --------------------------------------------------------------------------
# cached honest enumerations (pure functions of hashable params)
# --------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _branches(params: SchemeParams, alice_label: BellLabel, bob_label: BellLabel):
    params = dataclasses.replace(params, bob_label=bob_label)
    if params.scheme == "single":
        return tuple(run_single(params, alice_label))
    if params.scheme == "multi":
        return tuple(run_multiparty(params, alice_label, bob_label))
    pair_params = dataclasses.replace(params, n_pairs=1)
    return tuple(run_string(pair_params, [alice_label])[0])


def clear_caches() -> None:
    """Drop memoized enumerations (used by timing benchmarks)."""
    _branches.cache_clear()


def _validate(transcript: Transcript, announced: BellLabel, mode: str) -> bool:
    if transcript.scheme == "multi":
        return validate_multiparty(
            transcript,
            announced,
            (transcript.bob_label, transcript.teleport_outcome),
            mode,
        ).accept
    return validate_single(transcript, announced, mode).accept


def _committer_labels(strategy: Strategy, chosen: BellLabel) -> tuple[BellLabel, BellLabel]:
    """(label actually committed, label announced) for a chosen input."""
    if strategy.kind == "honest":
        return chosen, chosen
    if strategy.kind == "relabel_announce":
        return chosen, chosen ^ strategy.delta
    # delayed_rechoice: the late pick is the binding commitment
    effective = chosen ^ strategy.delta
    return effective, effective


# --------------------------------------------------------------------------
# acceptance, route 1: state-vector enumeration
# --------------------------------------------------------------------------


def _acceptance_by_label_enumerated(
    params: SchemeParams, strategy: Strategy, mode: str
) -> dict[BellLabel, float]:
    """Acceptance conditioned on each chosen committer label."""
    conditional = {}
    for chosen in BELL_LABELS:
        committed, announced = _committer_labels(strategy, chosen)
        accepted = []
        for bob in BELL_LABELS:
            for t in _branches(params, committed, bob):
                if _validate(t, announced, mode):
                    accepted.append(t.probability / 4.0)
        conditional[chosen] = math.fsum(accepted)
    return conditional


def _acceptance_enumerated(params: SchemeParams, strategy: Strategy, mode: str) -> float:
    conditional = _acceptance_by_label_enumerated(params, strategy, mode)
    return math.fsum(conditional.values()) / 4.0


# --------------------------------------------------------------------------
# acceptance, route 2: XOR label algebra, no amplitudes
# --------------------------------------------------------------------------


def _flip_bit(label: BellLabel, basis: str) -> int:
    """Which exponent of a Pauli frame flips this basis family's value."""
    return label.j if basis == "Z" else label.i


def _acceptance_by_label_algebraic(
    params: SchemeParams, strategy: Strategy, mode: str
) -> dict[BellLabel, float]:
    conditional = {}
    weight = 1.0 / (4.0 * 16.0)  # receiver label and both measurement outcomes
    for chosen in BELL_LABELS:
        committed, announced = _committer_labels(strategy, chosen)
        accepted = []
        for bob in BELL_LABELS:
            for swap in BELL_LABELS:
                for tele in BELL_LABELS:
                    for phi, phi_weight in params.phi_choices():
                        # stored bit: probe value xor the net frame picked up
                        net = bob ^ swap ^ tele
                        stored = phi.value ^ _flip_bit(net, phi.basis)
                        # verifier's recomputation
                        if mode == "R1":
                            correction = (announced ^ bob ^ swap) ^ tele
                        else:
                            correction = (committed ^ bob ^ swap) ^ tele
                        recomputed = announced ^ correction
                        expected = phi.value ^ _flip_bit(recomputed, phi.basis)
                        if stored == expected:
                            accepted.append(weight * phi_weight)
        conditional[chosen] = math.fsum(accepted)
    return conditional


def _acceptance_algebraic(params: SchemeParams, strategy: Strategy, mode: str) -> float:
    conditional = _acceptance_by_label_algebraic(params, strategy, mode)
    return math.fsum(conditional.values()) / 4.0


def _checked(value_enum: float, value_alg: float, what: str) -> float:
    if abs(value_enum - value_alg) > AGREEMENT_ATOL:
        raise SelfCheckError(
            f"{what}: enumeration gives {value_enum!r}, label algebra {value_alg!r}"
        )
    return value_enum


def _acceptance_profile(params: SchemeParams, strategy: Strategy, mode: str) -> tuple[float, float]:
    """(prior-averaged acceptance, worst-case acceptance over chosen labels).

    The worst case is the committer label most favourable to the
    strategy; binding claims should hold without leaning on the uniform
    label prior.  Each conditional value is dual-route checked.
    """
    enumerated = _acceptance_by_label_enumerated(params, strategy, mode)
    algebraic = _acceptance_by_label_algebraic(params, strategy, mode)
    conditional = {
        label: _checked(
            enumerated[label],
            algebraic[label],
            f"acceptance[{strategy.describe()}, mode={mode}, label={label}]",
        )
        for label in BELL_LABELS
    }
    average = math.fsum(conditional.values()) / 4.0
    return average, max(conditional.values())


def _acceptance(params: SchemeParams, strategy: Strategy, mode: str) -> float:
    return _acceptance_profile(params, strategy, mode)[0]


def detection_probability(params: SchemeParams, strategy: Strategy, mode: str | None = None) -> float:
    """Probability the reveal-phase check catches a committer strategy.

    Averages over uniformly chosen committer and receiver labels and the
    probe policy in ``params``.  Exactly ``1 - acceptance``.
    """
    if strategy.role != "committer":
        raise ValueError("detection_probability analyzes committer strategies")
    mode = params.validation_mode if mode is None else mode
    if params.scheme == "string":
        deltas = [strategy.delta or _ZERO] * params.n_pairs
        if strategy.kind == "delayed_rechoice":
            deltas = [_ZERO] * params.n_pairs
        return 1.0 - string_cheat_acceptance(params, deltas, mode)
    return 1.0 - _acceptance(params, strategy, mode)


def string_cheat_acceptance(
    params: SchemeParams, per_pair_delta: Sequence[BellLabel], mode: str | None = None
) -> float:
    """Acceptance odds when pair k's announcement is shifted by delta_k.

    Pairs are independent, so the result is the product of per-pair
    acceptances; each factor is dual-route checked.
    """
    if params.scheme != "string":
        raise ValueError("string_cheat_acceptance requires the string scheme")
    if len(per_pair_delta) != params.n_pairs:
        raise ValueError(
            f"expected {params.n_pairs} per-pair shifts, got {len(per_pair_delta)}"
        )
    mode = params.validation_mode if mode is None else mode
    return _string_profile(params, per_pair_delta, mode)[0]


def _string_profile(
    params: SchemeParams, per_pair_delta: Sequence[BellLabel], mode: str
) -> tuple[float, float]:
    """Joint (averaged, worst-case) acceptance over independent pairs."""
    average = 1.0
    worst = 1.0
    for delta in per_pair_delta:
        if delta == _ZERO:
            strategy = Strategy.honest()
        else:
            strategy = Strategy.relabel_announce(delta)
        pair_average, pair_worst = _acceptance_profile(params, strategy, mode)
        average *= pair_average
        worst *= pair_worst
    return average, worst


# --------------------------------------------------------------------------
# concealment: the receiver's pre-reveal view
# --------------------------------------------------------------------------


def _class_labels(bit: int) -> tuple[BellLabel, BellLabel]:
    return tuple(lbl for lbl in BELL_LABELS if committed_bit(lbl) == bit)


def _view_key(t: Transcript, upto: str):
    if t.scheme == "multi":
        view = (t.swap_outcome,)
        if upto == "storage":
            view += (t.stored_alice_bit, t.stored_bob_bit)
        return view
    view = (t.phi, t.swap_outcome, t.teleport_outcome)
    if upto == "storage":
        view += (t.stored_alice_bit,)
    return view


def _views_enumerated(params: SchemeParams, upto: str) -> dict:
    dists: dict[int, dict] = {0: {}, 1: {}}
    for bit in (0, 1):
        for alice in _class_labels(bit):
            if params.scheme == "multi":
                bobs = BELL_LABELS  # other committer's label is private too
            else:
                bobs = (params.bob_label,)
            for bob in bobs:
                for t in _branches(params, alice, bob):
                    key = _view_key(t, upto)
                    dists[bit][key] = dists[bit].get(key, 0.0) + (
                        t.probability / (2.0 * len(bobs))
                    )
    return dists


def _views_algebraic(params: SchemeParams, upto: str) -> dict:
    dists: dict[int, dict] = {0: {}, 1: {}}
    multi = params.scheme == "multi"
    for bit in (0, 1):
        for alice in _class_labels(bit):
            bobs = BELL_LABELS if multi else (params.bob_label,)
            for bob in bobs:
                for swap in BELL_LABELS:
                    for tele in BELL_LABELS:
                        for phi, phi_weight in params.phi_choices():
                            net = bob ^ swap ^ tele
                            stored = phi.value ^ _flip_bit(net, phi.basis)
                            if multi:
                                copy_net = bob ^ tele
                                copy_bit = phi.value ^ _flip_bit(copy_net, phi.basis)
                                key = (swap,)
                                if upto == "storage":
                                    key += (stored, copy_bit)
                            else:
                                key = (phi, swap, tele)
                                if upto == "storage":
                                    key += (stored,)
                            weight = phi_weight / (2.0 * len(bobs) * 16.0)
                            dists[bit][key] = dists[bit].get(key, 0.0) + weight
    return dists


def _tv(dists: dict) -> float:
    keys = set(dists[0]) | set(dists[1])
    return 0.5 * sum(abs(dists[0].get(k, 0.0) - dists[1].get(k, 0.0)) for k in keys)


def concealment_tv(params: SchemeParams, upto: str = "storage") -> float:
    """Total variation distance between the receiver views of the two bits.

    The view is everything receiver-side parties hold before reveal:
    probe choice, swap outcome, teleport outcome and (for
    ``upto="storage"``) the stored confirmation bits; the multi scheme
    center sees only the swap outcome and the stored bits.  Committed
    labels are drawn uniformly within each bit class.  0 means perfect
    concealment.
    """
    if upto not in ("confirmation", "storage"):
        raise ValueError(f"upto must be 'confirmation' or 'storage', got {upto!r}")
    return _checked(
        _tv(_views_enumerated(params, upto)),
        _tv(_views_algebraic(params, upto)),
        f"concealment[{params.scheme}, upto={upto}]",
    )


# --------------------------------------------------------------------------
# extraction: receiver measurements on the committer's pair
# --------------------------------------------------------------------------


def _extraction_views_enumerated(strategy: Strategy) -> dict:
    joint: dict = {}
    for alice in BELL_LABELS:
        prior = 0.25
        pair = make_bell(alice)
        if strategy.kind == "early_extract" and strategy.basis in ("Z", "X"):
            branches = basis_measure(pair, 1, strategy.basis)
        else:
            # skip/forward-less attack: the confirmation qubit comes back
            # rotated by the pair's own label, so measure both jointly
            returned = apply_pauli(pair, 0, PauliOp(alice.i, alice.j))
            branches = bell_measure(returned, 1, 0)
        d = committed_bit(alice)
        for branch in branches:
            key = (d, branch.outcome)
            joint[key] = joint.get(key, 0.0) + prior * branch.probability
    return joint


def _extraction_views_algebraic(strategy: Strategy) -> dict:
    joint: dict = {}
    for alice in BELL_LABELS:
        prior = 0.25
        d = committed_bit(alice)
        if strategy.kind == "early_extract" and strategy.basis in ("Z", "X"):
            # half of a maximally entangled pair: both outcomes equally likely
            for outcome in (0, 1):
                joint[(d, outcome)] = joint.get((d, outcome), 0.0) + prior * 0.5
        else:
            # rotating one half by the pair's own label lands on the
            # fixed reference pair regardless of the commitment
            outcome = alice ^ alice
            joint[(d, outcome)] = joint.get((d, outcome), 0.0) + prior
    return joint


def _map_guess(joint: dict) -> float:
    views = {view for _, view in joint}
    return sum(
        max(joint.get((0, view), 0.0), joint.get((1, view), 0.0)) for view in views
    )


def extraction_guess_probability(strategy: Strategy, params: SchemeParams | None = None) -> float:
    """Best-guess odds for the committed bit from an early measurement.

    Maximum a posteriori guessing over the measurement's outcome
    distribution with committed labels uniform.  0.5 means the attack
    learns nothing.
    """
    if strategy.role != "receiver":
        raise ValueError("extraction_guess_probability analyzes receiver strategies")
    return _checked(
        _map_guess(_extraction_views_enumerated(strategy)),
        _map_guess(_extraction_views_algebraic(strategy)),
        f"extraction[{strategy.describe()}]",
    )


# --------------------------------------------------------------------------
# report assembly
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class StrategyRow:
    strategy: Strategy
    acceptance_probability: float
    worst_case_acceptance: float
    detection_probability: float
    claimed_acceptance: float | None
    agrees: bool | None


@dataclass(frozen=True)
class ExtractionRow:
    strategy: Strategy
    guess_probability: float
    claimed_guess: float | None
    agrees: bool | None


@dataclass(frozen=True)
class SecurityReport:
    scheme: str
    mode: str
    phi_policy: str
    n_pairs: int
    strategy_rows: tuple[StrategyRow, ...]
    extraction_rows: tuple[ExtractionRow, ...]
    concealment_tv: float
    extraction_guess_probability: float | None


def _policy_name(params: SchemeParams) -> str:
    choices = params.phi_choices()
    if len(choices) == 1:
        return str(choices[0][0])
    return "uniform"


def _claimed_acceptance(params: SchemeParams, strategy: Strategy) -> float | None:
    """Acceptance asserted by the scheme's published security argument.

    Honest and delayed-choice commitments are claimed to always pass.
    For announcement shifts the claim depends on the probe policy: with
    a fixed computational probe, parity flips are claimed to always
    fail and pure sign flips to pass; with the four-state string
    policy, any shifted announcement is claimed to survive a pair with
    probability 1/2 (and a string with 1/2 per shifted pair).
    """
    if strategy.kind in ("honest", "delayed_rechoice"):
        return 1.0
    delta = strategy.delta
    choices = params.phi_choices()
    if len(choices) == 1 and choices[0][0].basis == "Z":
        return 1.0 if delta.j == 0 else 0.0
    if len(choices) == 4:
        per_pair = 0.5
        if params.scheme == "string":
            return per_pair ** params.n_pairs
        return per_pair
    # Z-family uniform probe: same claim as the fixed computational probe
    return 1.0 if delta.j == 0 else 0.0


_DEFAULT_COMMITTER = (
    Strategy.honest(),
    Strategy.relabel_announce(BellLabel(0, 1)),
    Strategy.relabel_announce(BellLabel(1, 0)),
    Strategy.relabel_announce(BellLabel(1, 1)),
    Strategy.delayed_rechoice(BellLabel(0, 1)),
)

_DEFAULT_RECEIVER = (
    Strategy.early_extract("Z"),
    Strategy.early_extract("X"),
    Strategy.early_extract("pair"),
    Strategy.receiver_skip(),
)


def build_report(
    params: SchemeParams,
    strategies: Sequence[Strategy] | None = None,
    mode: str | None = None,
) -> SecurityReport:
    """Full security scan for one scheme configuration.

    ``strategies`` defaults to the standard menu: honest, all three
    announcement shifts, a delayed re-choice, and the receiver
    extraction attacks.  An empty sequence scans concealment and the
    default extraction menu only.
    """
    mode = params.validation_mode if mode is None else mode
    if strategies is None:
        strategies = _DEFAULT_COMMITTER + _DEFAULT_RECEIVER
    committer = [s for s in strategies if s.role == "committer"]
    receiver = [s for s in strategies if s.role == "receiver"]
    if strategies == () or (not committer and not receiver):
        receiver = list(_DEFAULT_RECEIVER)

    strategy_rows = []
    for strategy in committer:
        if params.scheme == "string":
            deltas = [strategy.delta or _ZERO] * params.n_pairs
            if strategy.kind == "delayed_rechoice":
                deltas = [_ZERO] * params.n_pairs
            acceptance, worst = _string_profile(params, deltas, mode)
        else:
            acceptance, worst = _acceptance_profile(params, strategy, mode)
        claimed = _claimed_acceptance(params, strategy)
        agrees = None if claimed is None else abs(acceptance - claimed) <= AGREEMENT_ATOL
        strategy_rows.append(
            StrategyRow(strategy, acceptance, worst, 1.0 - acceptance, claimed, agrees)
        )

    extraction_rows = []
    for strategy in receiver:
        guess = extraction_guess_probability(strategy, params)
        extraction_rows.append(
            ExtractionRow(strategy, guess, 0.5, abs(guess - 0.5) <= AGREEMENT_ATOL)
        )

    return SecurityReport(
        scheme=params.scheme,
        mode=mode,
        phi_policy=_policy_name(params),
        n_pairs=params.n_pairs,
        strategy_rows=tuple(strategy_rows),
        extraction_rows=tuple(extraction_rows),
        concealment_tv=concealment_tv(params),
        extraction_guess_probability=(
            max(row.guess_probability for row in extraction_rows)
            if extraction_rows
            else None
        ),
    )
