"""The command-line surface: outputs, exit codes, certificates, schemas."""

from __future__ import annotations

import json
import subprocess
import sys
from importlib import resources

import pytest

import jsonschema

from mskw.cli import main

Z5 = '{"type":"cyclic","n":5}'


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    return code, json.loads(out), err


def _schema(name: str) -> dict:
    text = resources.files("mskw").joinpath("schemas.json").read_text()
    return json.loads(text)[name]


def test_cycles_matches_documented_example(capsys):
    code, doc, _ = run_json(
        capsys, "cycles", "--group", Z5, "--gens", "[1,2]",
        "--vertex", "0", "--format", "json",
    )
    assert code == 0
    assert doc["cycles"] == [[0, 1, 3], [0, 2, 4]]
    assert doc["kind"] == "cycle-system"
    jsonschema.validate(doc, _schema("cycles"))


def test_kappa_v_matches_documented_example(capsys):
    code, out, _ = run_cli(
        capsys, "kappa-v", "--group", Z5, "--gens", "[0,1,2]", "--vertex", "0"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc == {"kappa_v": 2, "K_v": [0]}
    jsonschema.validate(doc, _schema("kappa-v"))


def test_missing_spec_file_is_a_usage_error(capsys):
    code, out, err = run_cli(capsys, "verify", "--spec", "missing.json")
    assert code == 1
    assert not out
    assert "error" in err


def test_byte_identical_repeat_invocations():
    argv = [sys.executable, "-m", "mskw.cli", "kappa-v", "--group", Z5,
            "--gens", "[0,1]", "--vertex", "3"]
    first = subprocess.run(argv, capture_output=True)
    second = subprocess.run(argv, capture_output=True)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout


def test_verify_campaign_output_is_byte_identical_and_excludes_wall_time(tmp_path):
    spec = {
        "campaign": "structure",
        "family": "explicit-list",
        "groups": [],
        "checks": ["submodularity", "duality", "partition"],
        "random_graphs": {"count": 6, "min_vertices": 5, "max_vertices": 7,
                          "edge_probability": 0.4},
        "seed": 9,
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    argv = [sys.executable, "-m", "mskw.cli", "verify", "--spec", str(path)]
    first = subprocess.run(argv, capture_output=True)
    second = subprocess.run(argv, capture_output=True)
    assert first.returncode == 0
    assert first.stdout == second.stdout
    doc = json.loads(first.stdout)
    assert "wall_time_s" not in doc
    assert "wall_time_s" in first.stderr.decode()
    jsonschema.validate(doc, _schema("verify"))


def test_group_subcommand_and_table_errors(capsys):
    code, doc, _ = run_json(capsys, "group", "--group", '{"type":"quaternion"}')
    assert code == 0
    assert doc["order"] == 8
    assert doc["labels"][2] == "i"
    jsonschema.validate(doc, _schema("group"))

    code, out, err = run_cli(
        capsys, "group", "--group", '{"type":"table","table":[[0,1],[1,1]]}'
    )
    assert code == 1
    assert "no inverse for element 1" in err


def test_cayley_output_feeds_back_as_graph_input(capsys, tmp_path):
    code, doc, _ = run_json(capsys, "cayley", "--group", Z5, "--gens", "[0,1]")
    assert code == 0
    jsonschema.validate(doc, _schema("cayley"))
    graph_file = tmp_path / "graph.json"
    graph_file.write_text(json.dumps(doc))
    code, bdoc, _ = run_json(
        capsys, "boundary", "--graph", str(graph_file), "--set", "[0]"
    )
    assert code == 0
    assert bdoc == {"set": [0], "image": [0, 1], "boundary": [1], "exterior": [2, 3, 4]}
    jsonschema.validate(bdoc, _schema("boundary"))


def test_spheres_interval_growth(capsys):
    code, doc, _ = run_json(
        capsys, "spheres", "--group", '{"type":"cyclic","n":9}', "--gens", "[1]"
    )
    assert code == 0
    jsonschema.validate(doc, _schema("spheres"))
    applicable = [s for s in doc["steps"] if s["applicable"]]
    assert applicable and all(s["margin"] == 0 for s in applicable)
    assert applicable[0] == {
        "j": 1, "previous_size": 1, "size": 2, "applicable": True, "margin": 0
    }


def test_atoms_subcommand(capsys):
    code, doc, _ = run_json(
        capsys, "atoms", "--group", '{"type":"cyclic","n":6}', "--gens", "[2]"
    )
    assert code == 0
    assert doc["kappa"] == 0
    assert doc["variant"] == "proper-subset"
    assert doc["atoms"] == [[0, 2, 4], [1, 3, 5]]
    jsonschema.validate(doc, _schema("atoms"))


def test_generators_are_augmented_with_the_identity(capsys):
    code, with_id, _ = run_json(
        capsys, "kappa-v", "--group", Z5, "--gens", "[0,1,2]", "--vertex", "0"
    )
    code2, without_id, _ = run_json(
        capsys, "kappa-v", "--group", Z5, "--gens", "[1,2]", "--vertex", "0"
    )
    assert code == code2 == 0
    assert with_id == without_id


def test_identity_free_subcommands_reject_the_identity(capsys):
    code, out, err = run_cli(
        capsys, "cycles", "--group", Z5, "--gens", "[0,1]", "--vertex", "0"
    )
    assert code == 1 and "identity-free" in err
    code, out, err = run_cli(capsys, "shepherdson", "--group", Z5, "--gens", "[0,1]")
    assert code == 1 and "identity-free" in err


def test_fragment_subcommand(capsys):
    code, doc, _ = run_json(
        capsys, "fragment", "--group", Z5, "--gens", "[0,1,2]",
        "--vertex", "0", "--method", "both-agree",
    )
    assert code == 0
    assert doc["kappa_v"] == 2 and doc["K_v"] == [0]
    assert doc["method"] == "both-agree"
    assert [0] in doc["fragments_sample"]
    jsonschema.validate(doc, _schema("fragment"))


def test_theta_psi_subcommand(capsys):
    code, doc, _ = run_json(capsys, "theta-psi", "--group", Z5, "--gens", "[0,1]")
    assert code == 0
    assert doc["mader_lemma_holds"] is True
    assert doc["psi"] == [[v] for v in range(5)]
    assert doc["theta"]["edges"] == [[v, v] for v in range(5)]
    jsonschema.validate(doc, _schema("theta-psi"))


def test_mskw_check_subcommand(capsys):
    code, doc, _ = run_json(
        capsys, "mskw-check", "--group", '{"type":"cyclic","n":7}',
        "--gens", "[1,2]", "--set", "[0,1,2]",
    )
    assert code == 0
    assert doc["holds"] is True
    assert doc["bound"] == 2
    assert doc["finite"]["margin"] == 0
    assert doc["cofinite"]["margin"] == 0
    jsonschema.validate(doc, _schema("mskw-check"))
    # precondition: F must avoid the rest of S-inverse
    code, out, err = run_cli(
        capsys, "mskw-check", "--group", '{"type":"cyclic","n":7}',
        "--gens", "[1,2]", "--set", "[0,5]",
    )
    assert code == 1 and "identity" in err


@pytest.mark.parametrize(
    "command,build_args,tamper",
    [
        (
            "sigma",
            ["--group", Z5, "--set", "[1,2]"],
            lambda doc: doc.update(sigma=[[1, 1], [2, 2]]),
        ),
        (
            "cycles",
            ["--group", Z5, "--gens", "[1,2]", "--vertex", "0"],
            lambda doc: doc.update(cycles=doc["cycles"][:1]),
        ),
        (
            "shepherdson",
            ["--group", '{"type":"cyclic","n":6}', "--gens", "[2,3]"],
            lambda doc: doc.update(sequence=[2, 3]),
        ),
    ],
    ids=["sigma", "cycles", "shepherdson"],
)
def test_certificates_round_trip_through_check_certificate(
    capsys, tmp_path, command, build_args, tamper
):
    code, doc, _ = run_json(capsys, command, *build_args)
    assert code == 0
    cert_file = tmp_path / "cert.json"
    cert_file.write_text(json.dumps(doc))
    code, verdict, _ = run_json(
        capsys, command, "--check-certificate", str(cert_file)
    )
    assert code == 0
    assert verdict == {"valid": True, "reason": None}

    tamper(doc)
    code, verdict, _ = run_json(
        capsys, command, "--check-certificate", json.dumps(doc)
    )
    assert code == 2
    assert verdict["valid"] is False and verdict["reason"]


def test_certificate_kind_mismatch_is_rejected(capsys):
    cert = {"kind": "zero-product", "group": json.loads(Z5), "gens": [1],
            "sequence": [1] * 5}
    code, out, err = run_cli(capsys, "sigma", "--check-certificate", json.dumps(cert))
    assert code == 1 and "does not match" in err


def test_text_format_renders_flat_lines(capsys):
    code, out, err = run_cli(
        capsys, "kappa-v", "--group", Z5, "--gens", "[0,1]",
        "--vertex", "0", "--format", "text",
    )
    assert code == 0
    assert "kappa_v: 1" in out
    assert "K_v: [0]" in out


def test_missing_required_inputs_are_usage_errors(capsys):
    code, out, err = run_cli(capsys, "boundary", "--group", Z5)
    assert code == 1
    code, out, err = run_cli(capsys, "sigma", "--group", Z5)
    assert code == 1
    code, out, err = run_cli(capsys, "kappa-v", "--graph", '{"n":1,"edges":[[0,0]]}',
                             "--vertex", "5")
    assert code == 1


def test_verify_exit_code_two_on_counterexample(tmp_path):
    # a campaign seeded with a poisoned corpus record reports exit code 2
    corpus = tmp_path / "corpus.jsonl"
    corpus.write_text(
        json.dumps({"check": "mskw-finite", "group": {"type": "cyclic", "n": 7},
                    "s": [0, 1, 2], "f": [0, 2]}) + "\n"
    )
    spec = {
        "campaign": "mskw",
        "family": "cyclic-range", "lo": 5, "hi": 5,
        "checks": ["mskw-finite"],
        "corpus": str(corpus),
    }
    proc = subprocess.run(
        [sys.executable, "-m", "mskw.cli", "verify", "--spec", json.dumps(spec)],
        capture_output=True,
    )
    assert proc.returncode == 2
    doc = json.loads(proc.stdout)
    assert doc["counterexample"]
