import subprocess
import sys

from bellproto.cli import (
    EXIT_CONFIG,
    EXIT_IDENTITY,
    EXIT_IO,
    EXIT_OK,
    EXIT_REJECT,
    main,
)


def run_cli(*argv, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "bellproto", *argv],
        capture_output=True, text=True, cwd=cwd,
    )


def test_identities_pass(tmp_path):
    out_file = tmp_path / "identities.txt"
    proc = run_cli("identities", "--out", str(out_file))
    assert proc.returncode == EXIT_OK
    assert "PASS" in proc.stdout and "FAIL" not in proc.stdout
    assert out_file.read_text().startswith("PWV1 identities")


def test_identities_fault_injection_fails_decompositions():
    proc = run_cli("identities", "--fault", "omega-sign")
    assert proc.returncode == EXIT_IDENTITY
    assert "chain-decomposition      FAIL" in proc.stdout


def test_identities_unknown_fault_is_config_error():
    proc = run_cli("identities", "--fault", "gremlins")
    assert proc.returncode == EXIT_CONFIG


def test_run_bc_writes_replayable_transcript(tmp_path):
    proc = run_cli("run", "--protocol", "bc", "--secret", "1", "--seed", "7",
                   cwd=tmp_path)
    assert proc.returncode == EXIT_OK
    assert "verdict=accept value=1" in proc.stdout
    transcript = tmp_path / "bc-seed7.pwv1"
    assert transcript.exists()
    replay = run_cli("replay", str(transcript))
    assert replay.returncode == EXIT_OK
    assert "replay identical" in replay.stdout


def test_run_outputs_are_byte_identical_for_equal_configs(tmp_path):
    a = tmp_path / "a.pwv1"
    b = tmp_path / "b.pwv1"
    for path in (a, b):
        proc = run_cli("run", "--protocol", "qds", "--secret", "1011",
                       "--seed", "23", "--out", str(path), cwd=tmp_path)
        assert proc.returncode == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_run_ct_enumerate_prints_coin_table(tmp_path):
    proc = run_cli("run", "--protocol", "ct", "--secret", "0", "--seed", "1",
                   "--mode", "enumerate", cwd=tmp_path)
    assert proc.returncode == EXIT_OK
    rows = [line for line in proc.stdout.splitlines() if line.startswith("aa=")]
    assert len(rows) == 16
    for row in rows:
        aa = row.split(" ")[0].split("=")[1]
        assert f"coin={int(aa[1])}" in row  # coin column equals the x bit


def test_run_mpsc_enumerate(tmp_path):
    proc = run_cli("run", "--protocol", "mpsc", "--inputs", "10,01,11",
                   "--secret", "1", "--seed", "3", "--mode", "enumerate",
                   cwd=tmp_path)
    assert proc.returncode == EXIT_OK
    rows = [line for line in proc.stdout.splitlines() if line.startswith("aa=")]
    assert len(rows) == 32  # relay input pinned, sender outcomes x masks
    assert all("verdict=accept" in row for row in rows)


def test_run_config_errors(tmp_path):
    proc = run_cli("run", "--protocol", "bc", "--secret", "7", "--seed", "1",
                   cwd=tmp_path)
    assert proc.returncode == EXIT_CONFIG
    proc = run_cli("run", "--protocol", "tpsc", "--secret", "1", "--seed", "1",
                   "--inputs", "abc", cwd=tmp_path)
    assert proc.returncode == EXIT_CONFIG
    proc = run_cli("run", "--protocol", "nonsense", "--secret", "1", "--seed", "1")
    assert proc.returncode == EXIT_CONFIG  # argparse choice failure


def test_attack_binding_gate(tmp_path):
    proc = run_cli("attack", "--protocol", "bc", "--strategy", "reveal-flip",
                   "--mode", "enumerate", cwd=tmp_path)
    assert proc.returncode == EXIT_OK
    assert "detection 16/16 = 1.000000" in proc.stdout


def test_attack_capture_distance(tmp_path):
    proc = run_cli("attack", "--protocol", "qss", "--strategy", "charlie-skip-bsm",
                   "--secret", "q", cwd=tmp_path)
    assert proc.returncode == EXIT_OK
    line = next(l for l in proc.stdout.splitlines() if l.startswith("state_distance"))
    assert float(line.split(" ")[1]) <= 1e-12


def test_attack_unknown_strategy_is_usage_error():
    proc = run_cli("attack", "--protocol", "bc", "--strategy", "made-up")
    assert proc.returncode == EXIT_CONFIG
    assert "unknown strategy" in proc.stderr


def test_replay_detects_edited_payload(tmp_path):
    run_cli("run", "--protocol", "ct", "--secret", "1", "--seed", "5", cwd=tmp_path)
    transcript = tmp_path / "ct-seed5.pwv1"
    text = transcript.read_text()
    lines = text.splitlines()
    idx = next(i for i, line in enumerate(lines) if line.startswith("event "))
    idx += 2
    fields = lines[idx].split(" ")
    fields[5] = ("0" if fields[5][0] != "0" else "1") + fields[5][1:]
    lines[idx] = " ".join(fields)
    transcript.write_text("\n".join(lines) + "\n")
    proc = run_cli("replay", str(transcript))
    assert proc.returncode == EXIT_REJECT
    assert "mismatch at event 2" in proc.stdout


def test_replay_missing_file_is_io_error(tmp_path):
    proc = run_cli("replay", str(tmp_path / "nope.pwv1"))
    assert proc.returncode == EXIT_IO


def test_replay_garbage_file_is_io_error(tmp_path):
    bad = tmp_path / "bad.pwv1"
    bad.write_text("hello world\n")
    proc = run_cli("replay", str(bad))
    assert proc.returncode == EXIT_IO


def test_reject_exit_code_on_cheating_run():
    # in-process call: a strategy run is driven through the attack gate,
    # while run with an accepted verdict exits zero (covered above); here
    # the bound-violation path: expect a fabricated bound mismatch
    assert main(["attack", "--protocol", "bc", "--strategy", "null"]) == EXIT_OK


def test_main_in_process_identities():
    assert main(["identities"]) == EXIT_OK
