"""Command line harness tests, driven in-process plus one subprocess smoke."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from relcommit.cli import cli_main, parse_label, render_report_table
from relcommit.quantum import BellLabel
from relcommit.serialize import parse_transcript, schedule_to_json
from relcommit.spacetime import standard_schedule

import dataclasses


def run_cli(capsys, *argv):
    code = cli_main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParseLabel:
    def test_accepts_two_bit_strings(self):
        assert parse_label("10") == BellLabel(1, 0)

    def test_rejects_garbage(self):
        for bad in ("2", "012", "ab", ""):
            with pytest.raises(ValueError):
                parse_label(bad)


class TestEnumerate:
    def test_single_enumeration_shape(self, capsys):
        code, out, _ = run_cli(capsys, "enumerate", "--scheme", "single", "--phi", "Z0")
        assert code == 0
        doc = json.loads(out)
        assert doc["branch_count"] == 16
        total = sum(b["probability"] for b in doc["branches"])
        assert abs(total - 1.0) <= 1e-9

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "branches.json"
        code, out, _ = run_cli(
            capsys, "enumerate", "--scheme", "multi", "--output", str(target)
        )
        assert code == 0
        assert out == ""
        doc = json.loads(target.read_text())
        assert doc["branch_count"] == 16

    def test_string_enumeration_covers_pairs(self, capsys):
        code, out, _ = run_cli(
            capsys, "enumerate", "--scheme", "string", "--n-pairs", "2"
        )
        doc = json.loads(out)
        assert code == 0
        assert {b["pair_index"] for b in doc["branches"]} == {0, 1}


class TestRun:
    def test_jsonl_parses_and_validates(self, capsys):
        code, out, _ = run_cli(
            capsys, "run", "--scheme", "single", "--trials", "5", "--seed", "42"
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 5
        for line in lines:
            transcript = parse_transcript(line)
            assert transcript.verdict is not None
            assert transcript.verdict.accept

    def test_bytes_deterministic_across_invocations(self, capsys):
        args = ("run", "--scheme", "string", "--n-pairs", "3", "--trials", "4", "--seed", "7")
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second

    def test_cheating_run_fails_strict(self, capsys):
        code, out, err = run_cli(
            capsys, "run", "--scheme", "single", "--phi", "Z0", "--trials", "3",
            "--announce-delta", "01", "--strict",
        )
        assert code == 2
        assert "failed validation" in err
        for line in out.strip().splitlines():
            assert not parse_transcript(line).verdict.accept

    def test_cheating_run_without_strict_reports_only(self, capsys):
        code, out, _ = run_cli(
            capsys, "run", "--scheme", "single", "--phi", "Z0", "--trials", "3",
            "--announce-delta", "01",
        )
        assert code == 0


class TestAttackScanAndReport:
    def test_scan_flags_parity_flip(self, capsys):
        code, out, _ = run_cli(
            capsys, "attack-scan", "--scheme", "single", "--mode", "R2", "--phi", "Z0"
        )
        assert code == 0
        doc = json.loads(out)
        rows = {
            (r["strategy"]["kind"], tuple(r["strategy"]["delta"].values())
             if r["strategy"]["delta"] else None): r
            for r in doc["strategy_rows"]
        }
        parity = rows[("relabel_announce", (0, 1))]
        assert parity["detection_probability"] == pytest.approx(1.0, abs=1e-12)
        assert doc["concealment_tv"] <= 1e-12

    def test_report_table_from_scan_file(self, capsys, tmp_path):
        scan = tmp_path / "scan.json"
        run_cli(capsys, "attack-scan", "--scheme", "single", "--output", str(scan))
        code, out, _ = run_cli(capsys, "report", "--input", str(scan))
        assert code == 0
        assert "committer strategy" in out
        assert "concealment TV distance" in out

    def test_report_computes_fresh_table(self, capsys):
        code, out, _ = run_cli(capsys, "report", "--scheme", "multi", "--mode", "R1")
        assert code == 0
        assert "NO" in out  # R1 scan must flag disagreements with the claims

    def test_render_table_smoke(self):
        from relcommit.adversary import build_report
        from relcommit.protocol import SchemeParams

        table = render_report_table(build_report(SchemeParams("single")))
        assert "honest" in table and "receiver" in table


class TestAudit:
    def test_canonical_schedule_passes(self, capsys):
        code, out, _ = run_cli(capsys, "audit", "--x", "1", "--c", "1", "--T", "10")
        assert code == 0
        assert json.loads(out)["ok"] is True

    def test_reveal_before_storage_rejected(self, capsys):
        code, _, err = run_cli(capsys, "audit", "--x", "1", "--c", "1", "--T", "1.5")
        assert code == 2
        assert "rejected" in err

    def test_tampered_schedule_file_flagged(self, capsys, tmp_path):
        schedule = standard_schedule(1.0, 1.0, 10.0, "single")
        messages = list(schedule.messages)
        messages[0] = dataclasses.replace(messages[0], arrival_time=0.25)
        doc = schedule_to_json(dataclasses.replace(schedule, messages=tuple(messages)))
        path = tmp_path / "sched.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run_cli(capsys, "audit", "--input", str(path))
        assert code == 2
        parsed = json.loads(out)
        assert parsed["ok"] is False
        assert parsed["violations"][0]["kind"] == "superluminal"


class TestStats:
    def test_stats_emits_rows(self, capsys):
        code, out, _ = run_cli(
            capsys, "stats", "--scheme", "single", "--trials", "5000", "--seed", "5"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["trials"] == 5000
        categories = {row["category"] for row in doc["rows"]}
        assert categories == {"swap_outcome", "teleport_outcome", "stored_bit", "acceptance"}


class TestConfigAndErrors:
    def test_config_file_provides_defaults(self, capsys, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"scheme": "string", "n_pairs": 2, "seed": 9}))
        code, out, _ = run_cli(capsys, "enumerate", "--config", str(config))
        assert code == 0
        assert {b["pair_index"] for b in json.loads(out)["branches"]} == {0, 1}

    def test_explicit_flag_beats_config(self, capsys, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"scheme": "string", "n_pairs": 3}))
        code, out, _ = run_cli(
            capsys, "enumerate", "--config", str(config), "--n-pairs", "1"
        )
        assert code == 0
        assert json.loads(out)["branch_count"] == 64

    def test_unknown_config_key(self, capsys, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"separation": 2.0}))
        code, _, err = run_cli(capsys, "enumerate", "--config", str(config))
        assert code == 1
        assert "separation" in err

    def test_unknown_subcommand(self, capsys):
        code, _, err = run_cli(capsys, "fnord")
        assert code == 1
        assert "error" in err

    def test_bad_label_flag(self, capsys):
        code, _, err = run_cli(capsys, "run", "--alice-label", "xy")
        assert code == 1

    def test_bad_phi_flag(self, capsys):
        code, _, err = run_cli(capsys, "enumerate", "--phi", "W3")
        assert code == 1
        assert "probe policy" in err

    def test_help_exits_zero(self, capsys):
        code, out, _ = run_cli(capsys, "--help")
        assert code == 0


def test_module_entry_point_subprocess():
    result = subprocess.run(
        [sys.executable, "-m", "relcommit", "enumerate", "--scheme", "single"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert result.returncode == 0
    assert json.loads(result.stdout)["branch_count"] == 16
