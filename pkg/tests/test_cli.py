import json

import pytest

from tileforge.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_count_chessboard_2x2(capsys):
    rc, out, err = run(capsys, "tile", "fill", "--set", "chessboard", "--w", "2", "--h", "2", "--count")
    assert rc == 0 and out.strip() == "2"
    assert json.loads(err.strip().splitlines()[-1])["subcommand"] == "tile fill"


def test_lemma_prints_pass(capsys):
    rc, out, _ = run(capsys, "subst", "lemma", "--n", "12")
    assert rc == 0 and out.strip() == "PASS"


def test_rs_roundtrip_ok(capsys):
    rc, out, _ = run(capsys, "rs", "roundtrip", "--t", "8", "--n", "20", "--D", "6", "--trials", "200", "--seed", "5")
    assert rc == 0 and out.strip() == "OK"


@pytest.mark.parametrize("argv", [["bogus"], ["tile", "fill", "--w", "two"], []])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_unknown_tileset_is_domain_error(capsys):
    rc, _, err = run(capsys, "tile", "fill", "--set", "nosuch", "--w", "2", "--h", "2")
    assert rc == 1 and "nosuch" in err


def test_global_flags_after_subcommand(capsys):
    a = run(capsys, "--seed", "3", "subst", "lemma", "--n", "6")
    b = run(capsys, "subst", "lemma", "--n", "6", "--seed", "3")
    assert a == b


def test_manifest_written_next_to_output(tmp_path, capsys):
    out = tmp_path / "run.json"
    rc, _, _ = run(capsys, "zoom", "values", "--kmax", "4", "--out", str(out))
    assert rc == 0 and out.exists()
    man = json.loads((tmp_path / "run.json.manifest.json").read_text())
    assert man["subcommand"] == "zoom values" and man["seed"] == 0
    assert "run.json" in man["outputs"]
    assert "jobs" not in man["flags"] and "out" not in man["flags"]


def test_jobs_does_not_change_bytes(tmp_path, capsys):
    blobs = []
    for jobs in ("1", "8"):
        d = tmp_path / jobs
        d.mkdir()
        run(capsys, "islands", "mc", "--eps", "0.0005", "--size", "128", "--trials", "4",
            "--seed", "7", "--jobs", jobs, "--out", str(d / "mc.json"))
        blobs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
    assert blobs[0] == blobs[1]
