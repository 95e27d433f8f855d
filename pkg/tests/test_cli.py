import json

import numpy as np
import pytest

from opradius import load_matrix, registry, save_matrix
from opradius.cli import EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, main


@pytest.fixture
def pair_files(tmp_path, jordan):
    b = tmp_path / "B.json"
    c = tmp_path / "C.json"
    save_matrix(b, jordan)
    save_matrix(c, jordan.conj().T)
    return str(b), str(c)


def test_radius_pair_hs(pair_files, capsys):
    code = main(["radius", "--pair", *pair_files, "--norm", "hs"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert out.startswith("w_Ne[hs] = 1")


def test_radius_single_text_format(pair_files, capsys):
    code = main(["radius", "--single", pair_files[0], "--norm", "op", "--norm", "hs"])
    out = capsys.readouterr().out.splitlines()
    assert code == EXIT_OK
    assert out[0].startswith("w_N[op] = 0.5")
    assert "0.707106781187" in out[1]  # 12 significant digits


def test_radius_single_normal_matrix(tmp_path, capsys):
    path = tmp_path / "T.json"
    save_matrix(path, np.diag([1.0, 1.0j]))
    code = main(["radius", "--single", str(path), "--norm", "op"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert out.startswith("w_N[op] = 1 ")


def test_radius_json(pair_files, capsys):
    code = main(["radius", "--single", pair_files[0], "--norm", "op", "--out", "json"])
    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["kind"] == "w_N" and payload["norm"] == "op"
    assert payload["value"] == pytest.approx(0.5, abs=1e-9)
    assert set(payload["argmax"]) == {"theta", "t", "phi"}


def test_verify_json_lines(pair_files, capsys):
    code = main([
        "verify", "--pair", *pair_files, "--norm", "op", "--norm", "hs",
        "--theta-grid", "64", "--t-grid", "17", "--phi-grid", "32", "--out", "json",
    ])
    out = capsys.readouterr().out.strip().splitlines()
    assert code == EXIT_OK
    assert len(out) == len(registry()) * 2  # includes skipped verdicts
    for line in out:
        payload = json.loads(line)
        assert set(payload) == {"check", "norm", "lhs", "rhs", "slack", "status"}
    statuses = [json.loads(line)["status"] for line in out]
    assert "violation" not in statuses
    assert statuses.count("sharp") >= 2


def test_verify_text_summary(pair_files, capsys):
    code = main([
        "verify", "--pair", *pair_files, "--norm", "op",
        "--theta-grid", "64", "--t-grid", "17", "--phi-grid", "32",
    ])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "violations: 0" in out


def test_oracle(pair_files, capsys):
    code = main(["oracle", "--pair", *pair_files, "--samples", "2000", "--seed", "5",
                 "--polish", "50", "--theta-grid", "64", "--t-grid", "17",
                 "--phi-grid", "32"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "w_e oracle" in out and "w_Ne[op]" in out


def test_search(capsys):
    code = main([
        "search", "--check", "thm24.upper", "--norm", "op",
        "--family", "nilpotent-pairs:2", "--samples", "5", "--seed", "3",
        "--theta-grid", "64", "--t-grid", "17", "--phi-grid", "32", "--out", "json",
    ])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["check"] == "thm24.upper"
    assert payload["min_relative_slack"] <= 1e-6


def test_gen_round_trip(tmp_path, capsys):
    code = main(["gen", "--family", "ginibre:3:42", "--out-dir", str(tmp_path)])
    out = capsys.readouterr().out.strip()
    assert code == EXIT_OK
    first = load_matrix(out)
    code = main(["gen", "--family", "ginibre:3:42", "--out-dir", str(tmp_path)])
    capsys.readouterr()
    assert np.array_equal(first, load_matrix(out))


def test_gen_pair_files(tmp_path, capsys):
    code = main(["gen", "--family", "nilpotent-pairs:2:7", "--out-dir", str(tmp_path)])
    out = capsys.readouterr().out.strip().splitlines()
    assert code == EXIT_OK and len(out) == 2
    T = load_matrix(out[0])
    Ts = load_matrix(out[1])
    assert np.array_equal(Ts, T.conj().T)


def test_gen_seed_flag(tmp_path, capsys):
    code = main(["gen", "--family", "ginibre:2", "--seed", "9", "--out-dir", str(tmp_path)])
    capsys.readouterr()
    assert code == EXIT_OK
    code = main(["gen", "--family", "ginibre:2", "--out-dir", str(tmp_path)])
    assert code == EXIT_USAGE


def test_usage_errors(tmp_path, capsys, pair_files):
    assert main([]) == EXIT_USAGE
    assert main(["radius"]) == EXIT_USAGE
    assert main(["radius", "--single", str(tmp_path / "missing.json")]) == EXIT_USAGE
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    assert main(["radius", "--single", str(bad)]) == EXIT_USAGE
    assert main(["radius", "--single", pair_files[0], "--norm", "nuclear"]) == EXIT_USAGE
    # randomized verbs demand a seed
    assert main(["oracle", "--pair", *pair_files, "--samples", "10"]) == EXIT_USAGE
    assert main(["search", "--check", "id.w2", "--family", "ginibre"]) == EXIT_USAGE


def test_numerical_failure_exit(pair_files, monkeypatch, capsys):
    from opradius.matrices import ConvergenceError

    def boom(*args, **kwargs):
        raise ConvergenceError("jacobi eigensolver did not converge", 1e-3)

    monkeypatch.setattr("opradius.cli.w_N", boom)
    code = main(["radius", "--single", pair_files[0], "--norm", "op"])
    assert code == EXIT_NUMERICAL
    assert "numerical failure" in capsys.readouterr().err


def test_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_NUMERICAL}) == 4
