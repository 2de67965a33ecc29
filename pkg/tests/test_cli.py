"""Command line behavior: outputs, determinism, exit statuses."""

import json
import shutil
import subprocess
import sys

import pytest

from wordavoid import format_morphism, with_image_letter, word_to_text
from wordavoid.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_generate_matches_reference(capsys, registry):
    code, out, err = run_cli(capsys, "generate", "--morphism", "dekking_h",
                             "--length", "50")
    assert code == 0
    assert out.strip() == registry.reference_prefixes["dekking_core_50"]
    assert err.startswith("config: ")
    assert json.loads(err[len("config: "):])["subcommand"] == "generate"


def test_generate_json_format(capsys, registry):
    code, out, _ = run_cli(capsys, "generate", "--morphism", "pu_f",
                           "--length", "27", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["length"] == 27
    assert payload["word"] == registry.reference_prefixes["shuffle_base_27"]


def test_reruns_are_byte_identical(capsys):
    args = ("scenario", "counting", "--format", "json")
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2


def test_count_table_last_row(capsys):
    code, out, _ = run_cli(capsys, "count", "--spec", "dekking",
                           "--n-max", "17")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,count"
    assert lines[-1] == "17,414"


def test_count_respects_workers_env(capsys, monkeypatch):
    code, seq, _ = run_cli(capsys, "count", "--spec", "ejs3", "--n-max", "12")
    monkeypatch.setenv("WORDAVOID_WORKERS", "2")
    code2, par, _ = run_cli(capsys, "count", "--spec", "ejs3",
                            "--n-max", "12")
    assert code == code2 == 0
    assert seq == par
    monkeypatch.setenv("WORDAVOID_WORKERS", "zebra")
    code3, _, err = run_cli(capsys, "count", "--spec", "ejs3",
                            "--n-max", "4")
    assert code3 == 2
    assert "WORDAVOID_WORKERS" in err


def test_forbidden_growth_pipeline(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "forbidden", "--spec", "fraenkel-simpson",
                           "--max-len", "20")
    assert code == 0
    listing = tmp_path / "fs-derived-L20.txt"
    listing.write_text(out)
    assert len(out.strip().splitlines()) == 65

    code, out, _ = run_cli(capsys, "growth", "--forbidden", str(listing),
                           "--tol", "1e-9")
    assert code == 0
    payload = json.loads(out)
    assert payload["eigenvalue"] == pytest.approx(1.135, abs=0.005)
    assert payload["states"] == 326


def test_growth_needs_alphabet_for_empty_lists(capsys, tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n")
    code, _, err = run_cli(capsys, "growth", "--forbidden", str(empty))
    assert code == 2 and "--alphabet" in err
    code, out, _ = run_cli(capsys, "growth", "--forbidden", str(empty),
                           "--alphabet", "2")
    assert code == 0
    assert json.loads(out)["eigenvalue"] == pytest.approx(2.0, abs=1e-6)


def test_scan_reports_and_exit_codes(capsys, tmp_path, registry):
    clean = tmp_path / "clean.txt"
    clean.write_text(registry.reference_prefixes["dekking_core_50"])
    code, out, _ = run_cli(capsys, "scan", "--word", str(clean),
                           "--min-root", "1")
    assert code == 0 and "none" in out

    dirty = tmp_path / "dirty.txt"
    dirty.write_text("0101101101")
    code, out, _ = run_cli(capsys, "scan", "--word", str(dirty),
                           "--min-root", "2", "--cubes",
                           "--gap-pattern", "0,1,0", "--format", "json")
    assert code == 1
    payload = json.loads(out)
    assert payload["clean"] is False
    by_name = {c["name"]: c["finding"] for c in payload["checks"]}
    assert by_name["square with root >= 2"] == {"position": 0, "root": 2}
    assert by_name["cube"] == {"position": 1, "root": 3}
    assert by_name["gap pattern 0.1.0"]["occurrences"] == 1

    code, _, err = run_cli(capsys, "scan", "--word", str(dirty))
    assert code == 2 and "nothing to scan" in err


def test_verify_exit_codes_follow_completeness(capsys, tmp_path, registry):
    code, out, _ = run_cli(capsys, "verify", "--morphism", "dekking_h",
                           "--source", "dekking_h_source",
                           "--target", "squarefree4")
    assert code == 0
    assert "COMPLETE" in out and "no-right-extension" in out

    mutated = tmp_path / "mutated.txt"
    mutated.write_text(format_morphism(
        with_image_letter(registry.dekking_h, 3, 9, 2)))
    code, out, _ = run_cli(capsys, "verify", "--morphism", str(mutated),
                           "--source", "dekking_h_source",
                           "--target", "squarefree4")
    assert code == 1
    assert "INCOMPLETE" in out


def test_verify_substitution_files_are_detected(capsys):
    code, out, _ = run_cli(capsys, "verify", "--morphism", "fs_sub",
                           "--source", "fs_h_target",
                           "--target", "fs_g_source", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["complete"] is True
    assert payload["classes"] == [0, 1, 2, 3, 4, 0]


def test_verify_with_fixed_point_evidence(capsys):
    code, out, _ = run_cli(capsys, "verify", "--morphism", "dekking_g",
                           "--source", "dekking_g_source",
                           "--target", "dekking_binary",
                           "--fixed-point-morphism", "dekking_h",
                           "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["complete"] is True
    assert [e["kind"] for e in payload["gap_evidence"]] == ["descent"]


def test_corrupt_spec_file_reports_line(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("alphabet 2\nsquares min-root x\n")
    code, _, err = run_cli(capsys, "count", "--spec", str(bad), "--n-max", "4")
    assert code == 2
    assert "line 2" in err


def test_missing_file_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "count", "--spec", "/nope/missing.txt",
                           "--n-max", "4")
    assert code == 2 and "cannot read" in err


def test_bad_flags_are_usage_errors(capsys):
    assert main(["count", "--spec", "dekking"]) == 2  # missing --n-max
    assert main(["no-such-command"]) == 2


def test_shuffle_round_trip(capsys, tmp_path, registry):
    left = tmp_path / "left.txt"
    right = tmp_path / "right.txt"
    left.write_text(registry.reference_prefixes["shuffle_even_18"])
    right.write_text(registry.reference_prefixes["shuffle_odd_18"])
    code, out, _ = run_cli(capsys, "shuffle", "--left", str(left),
                           "--right", str(right))
    assert code == 0
    expected = registry.reference_prefixes["shuffle_base_2000"][:36]
    assert out.strip() == expected

    right.write_text("01")
    code, _, err = run_cli(capsys, "shuffle", "--left", str(left),
                           "--right", str(right))
    assert code == 2 and "equal length" in err


def test_family_subcommand(capsys):
    code, out, _ = run_cli(capsys, "family", "--sub", "dekking_sub",
                           "--outer", "dekking_g",
                           "--seed-word", "0310201023",
                           "--target", "dekking", "--denominator", "300")
    assert code == 0
    payload = json.loads(out)
    assert payload["family_size"] == 4
    assert payload["verified_count"] == 4


def test_scenario_subcommand_exit_codes(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "scenario", "pu-shuffle",
                           "--prefix-length", "2000")
    assert code == 0
    assert "scenario pu-shuffle: PASS" in out
    code, _, err = run_cli(capsys, "scenario", "not-a-scenario")
    assert code == 2 and "unknown scenario" in err
    code, _, err = run_cli(capsys, "scenario")
    assert code == 2 and "--all" in err


def test_console_script_is_installed():
    exe = shutil.which("wordavoid")
    if exe is None:
        pytest.skip("console script not on PATH")
    proc = subprocess.run([exe, "generate", "--morphism", "pu_f",
                           "--length", "27"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "001001110001001110110110001"


def test_scenario_all_passes_quickly(capsys):
    code, out, _ = run_cli(capsys, "scenario", "--all",
                           "--prefix-length", "2000")
    assert code == 0
    assert out.count("PASS") == 6
