"""JSON wire formats for transcripts, schedules, reports and statistics.

One transcript is one JSON object (one line in JSONL streams).  Field
names are part of the package contract:

* pair labels: ``{"i": 0, "j": 1}``
* probe states: ``{"basis": "Z", "value": 0}``
* stored bits: ``{"alice": 0, "bob": null, "alice_mid": null}``
* announcements: ``{"alice_label": ..., "bob_label": ..., "teleport_outcome": ...}``
* schedule events: ``{"actor", "time", "kind", "payload_ref", "deps"}``

Serialization is deterministic: keys sorted, compact separators, floats
in shortest round-trip form, so equal values serialize to equal bytes.
"""

from __future__ import annotations

import json
from typing import IO, Iterable, Sequence

from .adversary import ExtractionRow, SecurityReport, Strategy, StrategyRow
from .protocol import Transcript, Verdict
from .quantum import BasisStateSpec, BellLabel
from .spacetime import Message, PhaseTimes, Schedule, SpacetimeEvent

__all__ = [
    "TranscriptParseError",
    "serialize_transcript",
    "parse_transcript",
    "transcript_to_json",
    "transcript_from_json",
    "schedule_to_json",
    "schedule_from_json",
    "strategy_to_json",
    "strategy_from_json",
    "report_to_json",
    "write_transcripts",
    "read_transcripts",
    "dumps",
]


class TranscriptParseError(ValueError):
    """A transcript document is missing or mangling a required field."""


def dumps(doc) -> str:
    """Canonical JSON encoding used across the package."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), allow_nan=False)


def _label_to_json(label: BellLabel | None):
    if label is None:
        return None
    return {"i": label.i, "j": label.j}


def _label_from_json(doc, field: str) -> BellLabel:
    if not isinstance(doc, dict) or "i" not in doc or "j" not in doc:
        raise TranscriptParseError(f"field {field!r} must be a label object with i and j")
    try:
        return BellLabel(doc["i"], doc["j"])
    except ValueError as exc:
        raise TranscriptParseError(f"field {field!r}: {exc}") from exc


def _phi_to_json(spec: BasisStateSpec):
    return {"basis": spec.basis, "value": spec.value}


def _phi_from_json(doc, field: str) -> BasisStateSpec:
    if not isinstance(doc, dict) or "basis" not in doc or "value" not in doc:
        raise TranscriptParseError(f"field {field!r} must have basis and value")
    try:
        return BasisStateSpec(doc["basis"], doc["value"])
    except ValueError as exc:
        raise TranscriptParseError(f"field {field!r}: {exc}") from exc


def _require(doc: dict, field: str):
    if field not in doc:
        raise TranscriptParseError(f"missing field {field!r}")
    return doc[field]


def schedule_to_json(schedule: Schedule) -> dict:
    return {
        "scheme": schedule.scheme,
        "x": schedule.x,
        "c": schedule.c,
        "phase_times": {
            "commit": schedule.phase_times.commit,
            "confirm": schedule.phase_times.confirm,
            "store": schedule.phase_times.store,
            "reveal": schedule.phase_times.reveal,
        },
        "events": [
            {
                "actor": e.actor,
                "time": e.time,
                "kind": e.kind,
                "payload_ref": e.payload_ref,
                "deps": list(e.deps),
            }
            for e in schedule.events
        ],
        "messages": [
            {
                "sender": m.sender,
                "receiver": m.receiver,
                "send_time": m.send_time,
                "arrival_time": m.arrival_time,
                "channel": m.channel,
            }
            for m in schedule.messages
        ],
    }


def schedule_from_json(doc: dict) -> Schedule:
    try:
        phases = _require(doc, "phase_times")
        events = tuple(
            SpacetimeEvent(
                e["actor"], e["time"], e["kind"], e.get("payload_ref"),
                tuple(e.get("deps", ())),
            )
            for e in _require(doc, "events")
        )
        messages = tuple(
            Message(m["sender"], m["receiver"], m["send_time"], m["arrival_time"], m["channel"])
            for m in _require(doc, "messages")
        )
        return Schedule(
            _require(doc, "scheme"),
            _require(doc, "x"),
            _require(doc, "c"),
            PhaseTimes(phases["commit"], phases["confirm"], phases["store"], phases["reveal"]),
            events,
            messages,
        )
    except TranscriptParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise TranscriptParseError(f"bad schedule document: {exc}") from exc


def transcript_to_json(transcript: Transcript) -> dict:
    verdict = transcript.verdict
    return {
        "scheme": transcript.scheme,
        "alice_label": _label_to_json(transcript.alice_label),
        "bob_label": _label_to_json(transcript.bob_label),
        "swap_outcome": _label_to_json(transcript.swap_outcome),
        "teleport_outcome": _label_to_json(transcript.teleport_outcome),
        "phi": _phi_to_json(transcript.phi),
        "stored_bits": {
            "alice": transcript.stored_alice_bit,
            "bob": transcript.stored_bob_bit,
            "alice_mid": transcript.alice_mid_measurement,
        },
        "announcements": {
            "alice_label": _label_to_json(transcript.announced_alice_label),
            "bob_label": _label_to_json(transcript.announced_bob_label),
            "teleport_outcome": _label_to_json(transcript.announced_teleport_outcome),
        },
        "pair_index": transcript.pair_index,
        "probability": transcript.probability,
        "schedule": schedule_to_json(transcript.schedule),
        "verdict": None if verdict is None else {"accept": verdict.accept, "reason": verdict.reason},
    }


def transcript_from_json(doc: dict) -> Transcript:
    if not isinstance(doc, dict):
        raise TranscriptParseError(f"transcript must be an object, got {type(doc).__name__}")
    stored = _require(doc, "stored_bits")
    if not isinstance(stored, dict) or "alice" not in stored:
        raise TranscriptParseError("field 'stored_bits' must carry at least the alice bit")
    announcements = doc.get("announcements") or {}

    def opt_label(container: dict, field: str, qualified: str):
        value = container.get(field)
        return None if value is None else _label_from_json(value, qualified)

    verdict_doc = doc.get("verdict")
    verdict = None
    if verdict_doc is not None:
        if not isinstance(verdict_doc, dict) or "accept" not in verdict_doc:
            raise TranscriptParseError("field 'verdict' must carry an accept flag")
        verdict = Verdict(bool(verdict_doc["accept"]), verdict_doc.get("reason", ""))
    try:
        return Transcript(
            scheme=_require(doc, "scheme"),
            alice_label=_label_from_json(_require(doc, "alice_label"), "alice_label"),
            bob_label=_label_from_json(_require(doc, "bob_label"), "bob_label"),
            swap_outcome=_label_from_json(_require(doc, "swap_outcome"), "swap_outcome"),
            teleport_outcome=_label_from_json(
                _require(doc, "teleport_outcome"), "teleport_outcome"
            ),
            phi=_phi_from_json(_require(doc, "phi"), "phi"),
            stored_alice_bit=stored["alice"],
            stored_bob_bit=stored.get("bob"),
            alice_mid_measurement=stored.get("alice_mid"),
            announced_alice_label=opt_label(announcements, "alice_label", "announcements.alice_label"),
            announced_bob_label=opt_label(announcements, "bob_label", "announcements.bob_label"),
            announced_teleport_outcome=opt_label(
                announcements, "teleport_outcome", "announcements.teleport_outcome"
            ),
            pair_index=doc.get("pair_index"),
            probability=_require(doc, "probability"),
            schedule=schedule_from_json(_require(doc, "schedule")),
            verdict=verdict,
        )
    except TranscriptParseError:
        raise
    except (TypeError, ValueError) as exc:
        raise TranscriptParseError(f"bad transcript document: {exc}") from exc


def serialize_transcript(transcript: Transcript) -> str:
    """One transcript as one deterministic JSON line."""
    return dumps(transcript_to_json(transcript))


def parse_transcript(text: str) -> Transcript:
    """Inverse of :func:`serialize_transcript`; lossless round trip."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TranscriptParseError(f"not valid JSON: {exc}") from exc
    return transcript_from_json(doc)


def write_transcripts(stream: IO[str], transcripts: Iterable[Transcript]) -> int:
    """Write transcripts as JSONL; returns the number of lines."""
    count = 0
    for transcript in transcripts:
        stream.write(serialize_transcript(transcript))
        stream.write("\n")
        count += 1
    return count


def read_transcripts(stream: IO[str]) -> list[Transcript]:
    """Read a JSONL transcript stream, reporting the line of any error."""
    out = []
    for line_number, line in enumerate(stream, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            out.append(parse_transcript(line))
        except TranscriptParseError as exc:
            raise TranscriptParseError(f"line {line_number}: {exc}") from exc
    return out


def strategy_to_json(strategy: Strategy) -> dict:
    return {
        "role": strategy.role,
        "kind": strategy.kind,
        "delta": _label_to_json(strategy.delta),
        "basis": strategy.basis,
    }


def strategy_from_json(doc: dict) -> Strategy:
    if not isinstance(doc, dict):
        raise TranscriptParseError("strategy must be an object")
    delta = doc.get("delta")
    try:
        return Strategy(
            role=_require(doc, "role"),
            kind=_require(doc, "kind"),
            delta=None if delta is None else _label_from_json(delta, "delta"),
            basis=doc.get("basis"),
        )
    except ValueError as exc:
        raise TranscriptParseError(f"bad strategy document: {exc}") from exc


def report_to_json(report: SecurityReport) -> dict:
    def strategy_row(row: StrategyRow) -> dict:
        return {
            "strategy": strategy_to_json(row.strategy),
            "acceptance_probability": row.acceptance_probability,
            "worst_case_acceptance": row.worst_case_acceptance,
            "detection_probability": row.detection_probability,
            "claimed_acceptance": row.claimed_acceptance,
            "agrees": row.agrees,
        }

    def extraction_row(row: ExtractionRow) -> dict:
        return {
            "strategy": strategy_to_json(row.strategy),
            "guess_probability": row.guess_probability,
            "claimed_guess": row.claimed_guess,
            "agrees": row.agrees,
        }

    return {
        "scheme": report.scheme,
        "mode": report.mode,
        "phi_policy": report.phi_policy,
        "n_pairs": report.n_pairs,
        "strategy_rows": [strategy_row(r) for r in report.strategy_rows],
        "extraction_rows": [extraction_row(r) for r in report.extraction_rows],
        "concealment_tv": report.concealment_tv,
        "extraction_guess_probability": report.extraction_guess_probability,
    }
