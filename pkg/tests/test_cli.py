import json

import numpy as np
import pytest

from gaussimag import cli
from gaussimag.gaussian import (
    GaussianChannel,
    GaussianSuperchannel,
    sample_random_superchannel,
    to_document,
)


def write_doc(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(to_document(obj)))
    return str(path)


@pytest.fixture
def amplifying_doc(tmp_path):
    c = GaussianChannel.amplifying(1, tau=2.0, d=np.array([0.5, 1.5]))
    return write_doc(tmp_path, "amp.json", c)


@pytest.fixture
def invalid_channel_doc(tmp_path):
    c = GaussianChannel.identity()
    c.T = 2.0 * np.eye(2)
    c.N = np.zeros((2, 2))
    return write_doc(tmp_path, "bad.json", c)


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

def test_validate_ok(amplifying_doc, capsys):
    assert cli.main(["validate", amplifying_doc]) == cli.EXIT_OK
    assert "valid: True" in capsys.readouterr().out


def test_validate_invalid(invalid_channel_doc, capsys):
    assert cli.main(["--json", "validate", invalid_channel_doc]) == cli.EXIT_INVALID
    report = json.loads(capsys.readouterr().out)
    assert report["results"]["valid"] is False
    assert report["results"]["violated_constraint"] == "N+iDelta-iTDeltaT^T"
    assert len(report["input"]["sha256"]) == 64


def test_validate_malformed(tmp_path, capsys):
    path = tmp_path / "garbage.json"
    path.write_text("{not json")
    assert cli.main(["validate", str(path)]) == cli.EXIT_USAGE
    path.write_text('{"kind": "nonsense"}')
    assert cli.main(["validate", str(path)]) == cli.EXIT_USAGE
    assert cli.main(["validate", str(tmp_path / "missing.json")]) == cli.EXIT_USAGE


def test_no_subcommand_is_usage_error(capsys):
    assert cli.main([]) == cli.EXIT_USAGE


# ---------------------------------------------------------------------------
# measure
# ---------------------------------------------------------------------------

def test_measure_ic(amplifying_doc, capsys):
    assert cli.main(["--json", "measure", amplifying_doc, "--which", "ic"]) == cli.EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["results"]["value"] == pytest.approx(1.5, abs=1e-12)
    assert report["results"]["breakdown"]["displacement"] == pytest.approx(1.5)


def test_measure_is_with_budget(amplifying_doc, capsys):
    code = cli.main([
        "--json", "measure", amplifying_doc, "--which", "is",
        "--restarts", "2", "--iterations", "10", "--seed", "3",
    ])
    assert code == cli.EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["results"]["value"] == pytest.approx(1.0, abs=1e-9)
    assert report["results"]["search"]["restarts"] == 2


def test_measure_kind_mismatch(amplifying_doc, tmp_path, capsys):
    assert cli.main(["measure", amplifying_doc, "--which", "ign"]) == cli.EXIT_USAGE
    sup_doc = write_doc(tmp_path, "sup.json", GaussianSuperchannel.identity())
    assert cli.main(["measure", sup_doc, "--which", "ic"]) == cli.EXIT_USAGE


def test_measure_rejects_invalid_object(invalid_channel_doc):
    assert cli.main(["measure", invalid_channel_doc, "--which", "ic"]) == cli.EXIT_INVALID


# ---------------------------------------------------------------------------
# check-super
# ---------------------------------------------------------------------------

def test_check_super_identity(tmp_path, capsys):
    doc = write_doc(tmp_path, "ident.json", GaussianSuperchannel.identity())
    assert cli.main(["--json", "check-super", doc]) == cli.EXIT_OK
    results = json.loads(capsys.readouterr().out)["results"]
    assert results["isReal"] is True
    assert results["isImaginarityBreaking"] is False
    assert results["inFO"] is True
    assert results["inFO1"] is True
    assert results["diagnostics"]["spectral_norm_A"] == pytest.approx(1.0)


def test_check_super_breaking_sample(tmp_path, capsys):
    sup = sample_random_superchannel(1, 11, "breaking")
    doc = write_doc(tmp_path, "breaking.json", sup)
    assert cli.main(["--json", "check-super", doc]) == cli.EXIT_OK
    results = json.loads(capsys.readouterr().out)["results"]
    assert results["isImaginarityBreaking"] is True
    assert results["diagnostics"]["A_erases_momentum"] is True


def test_check_super_wrong_kind(amplifying_doc):
    assert cli.main(["check-super", amplifying_doc]) == cli.EXIT_USAGE


# ---------------------------------------------------------------------------
# qbm
# ---------------------------------------------------------------------------

def test_qbm_writes_csv(tmp_path, capsys):
    out = tmp_path / "traj.csv"
    code = cli.main([
        "--json", "qbm", "--alpha", "0.03", "--x", "0.5", "--theta", "100",
        "--horizon", "5", "--out", str(out),
    ])
    assert code == cli.EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["results"]["rows"] == 501
    lines = out.read_text().splitlines()
    assert lines[0] == "tau,Ic,Gamma,N12,term_T21,term_T12T22"
    assert len(lines) == 502


def test_qbm_window_summary(tmp_path, capsys):
    out = tmp_path / "traj.csv"
    code = cli.main([
        "--json", "qbm", "--alpha", "0.03", "--x", "0.5", "--theta", "100",
        "--horizon", "20", "--step", "0.02", "--out", str(out),
    ])
    assert code == cli.EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert "window_mean_Ic" in report["results"]
    assert report["results"]["window_mean_Ic"] > 0


def test_qbm_bad_parameters(tmp_path):
    base = ["qbm", "--alpha", "0.03", "--x", "0.5", "--theta", "100",
            "--out", str(tmp_path / "t.csv")]
    assert cli.main(base + ["--horizon", "0"]) == cli.EXIT_USAGE
    assert cli.main(base + ["--horizon", "5", "--step", "-1"]) == cli.EXIT_USAGE
    assert cli.main([
        "qbm", "--alpha", "-1", "--x", "0.5", "--theta", "100",
        "--horizon", "5", "--out", str(tmp_path / "t.csv"),
    ]) == cli.EXIT_USAGE


# ---------------------------------------------------------------------------
# audit
# ---------------------------------------------------------------------------

def test_audit_passes(capsys):
    code = cli.main(["--json", "audit", "--modes", "1", "--trials", "50", "--seed", "7"])
    assert code == cli.EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["results"]["passed"] is True
    assert report["results"]["counterexamples"] == []


def test_audit_zero_trials(capsys):
    assert cli.main(["audit", "--trials", "0"]) == cli.EXIT_USAGE


def test_audit_deterministic_report(capsys):
    args = ["--json", "audit", "--modes", "2", "--trials", "25", "--seed", "13"]
    assert cli.main(args) == cli.EXIT_OK
    first = capsys.readouterr().out
    assert cli.main(args) == cli.EXIT_OK
    second = capsys.readouterr().out
    assert first == second
