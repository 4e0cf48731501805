"""Tests for the command-line interface."""
import json

import pytest

from qkz_forge.cli import build_parser, run, to_config


def _report(capsys):
    return json.loads(capsys.readouterr().out)


def test_relations_pass(capsys):
    """Test that the relation checks at N=2 exit cleanly."""
    assert run(["relations", "--N", "2"]) == 0
    report = _report(capsys)
    assert report["command"] == "relations"
    assert report["checks"]
    assert all(check["holds"] for check in report["checks"])


def test_admissible_with_graph(capsys):
    """Test the admissibility summary and graph payload."""
    assert run(["admissible", "--N", "3", "--graph"]) == 0
    report = _report(capsys)
    relations = {check["relation"] for check in report["checks"]}
    assert relations == {"count=2^N", "graph-iso", "edges=D_N"}
    assert report["payload"]["admissible"] == 8
    assert len(report["payload"]["graph"]["vertices"]) == 8
    assert {"from", "to", "label"} <= set(report["payload"]["graph"]["edges"][0])


def test_kl_vectors(capsys):
    """Test the KL command for the BII basis at N=2."""
    assert run(["kl", "--N", "2", "--basis", "BII"]) == 0
    vectors = _report(capsys)["payload"]["vectors"]
    assert [v["epsilon"] for v in vectors] == ["++", "+-", "-+", "--"]
    assert set(vectors[3]["expansion"]) == {"--", "-+", "+-", "++"}


def test_bad_basis_is_usage_error():
    """Test that an unknown basis exits with code 2."""
    assert run(["kl", "--basis", "BX"]) == 2


def test_version(capsys):
    """Test that --version prints the configured name and version."""
    assert run(["--version"]) == 0
    assert capsys.readouterr().out.strip() == "qkz-forge 0.1.0"


def test_unknown_command():
    """Test that an unknown command exits with code 2."""
    assert run(["frobnicate"]) == 2


def test_size_guard():
    """Test that N above the supported range exits with code 2."""
    assert run(["relations", "--N", "9"]) == 2


def test_odd_only_family():
    """Test that xi1 at even N is rejected."""
    assert run(["admissible", "--N", "2", "--family", "xi1", "--case", "one"]) == 2


def test_output_is_deterministic(tmp_path):
    """Test that two identical runs write identical reports."""
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["kl", "--N", "3", "--basis", "BIII", "--out", str(first)]) == run(
        ["kl", "--N", "3", "--basis", "BIII", "--out", str(second)]
    )
    assert first.read_text() == second.read_text()


def test_config_from_arguments():
    """Test the mapping from parsed arguments to the validated config."""
    args = build_parser().parse_args(["koornwinder", "--case", "one-boundary", "--lambda", "1", "0", "--omega", "-1"])
    config = to_config(args)
    assert config.case == "one"
    assert config.weight == [1, 0]
    assert config.omega == -1


@pytest.mark.slow
def test_qkz_solve(capsys):
    """Test solving the two-boundary system at N=2."""
    assert run(["qkz-solve", "--N", "2"]) == 0
    payload = _report(capsys)["payload"]
    assert payload["case"] == "two"
    assert set(payload["components"]) == {"--", "-+", "+-", "++"}


@pytest.mark.slow
def test_qkz_verify_reports_leading_weights(capsys):
    """Test that verification at N=2 carries the leading-weight checks and passes."""
    assert run(["qkz-verify", "--N", "2"]) == 0
    checks = _report(capsys)["checks"]
    relations = {check["relation"] for check in checks}
    assert {"leading[--]", "leading[++]", "T[0]Psi0"} <= relations
    assert all(check["holds"] for check in checks)
