"""Tests for report emission and the command-line interface."""

import json

import jsonschema
import pytest

from maskrecon.cli import main, preset
from maskrecon.report import REPORT_SCHEMA, dumps_canonical


def run_cli(tmp_path, *argv, name="out"):
    json_path = tmp_path / f"{name}.json"
    md_path = tmp_path / f"{name}.md"
    code = main([*argv, "--out-json", str(json_path), "--out-md", str(md_path)])
    return code, json_path.read_text(), md_path.read_text()


class TestPresets:
    def test_values(self):
        assert preset("ml-kem") == (3329, 16, 28)
        assert preset("ml-dsa") == (8380417, 23, 56)
        assert preset("demo-q5") == (5, 2, 4)
        assert preset("demo-q7") == (7, 3, 5)

    def test_unknown(self):
        with pytest.raises(ValueError):
            preset("ml-unknown")

    def test_preset_and_explicit_are_exclusive(self, capsys):
        assert main(["gadget-recon", "--preset", "demo-q5", "--q", "7",
                     "--gadget", "identity"]) == 2
        assert "mutually exclusive" in capsys.readouterr().err


class TestGadgetRecon:
    def test_identity_demo(self, tmp_path):
        code, js, md = run_cli(tmp_path, "gadget-recon", "--preset", "demo-q5",
                               "--gadget", "identity", "--canonical")
        assert code == 0
        data = json.loads(js)
        rep = data["results"][0]
        assert rep["global_max"] == 1
        assert rep["pairs_scanned"] == 25
        assert "## Max multiplicity" in md
        assert "## Witness" in md

    def test_lossy_declared_override_fails(self, tmp_path):
        code, js, _ = run_cli(tmp_path, "gadget-recon", "--preset", "demo-q7",
                              "--gadget", "lossy", "--t", "3",
                              "--declared-max-mult", "2", "--canonical")
        assert code == 1
        data = json.loads(js)
        assert data["results"][0]["global_max"] == 3
        verdicts = {v["name"]: v["verdict"] for v in data["verdicts"]}
        assert verdicts["declared_bound"] == "fail"

    def test_montgomery_includes_cross_check(self, tmp_path):
        code, js, _ = run_cli(tmp_path, "gadget-recon", "--q", "17", "--s", "5",
                              "--w", "10", "--gadget", "montgomery",
                              "--canonical")
        assert code == 0
        data = json.loads(js)
        types = [r["type"] for r in data["results"]]
        assert types == ["multiplicity_report", "cross_check"]
        assert data["results"][1]["agree"] is True

    def test_stratified_mode_inferred_when_budget_small(self, tmp_path):
        code, js, _ = run_cli(tmp_path, "gadget-recon", "--q", "1009", "--gadget",
                              "identity", "--budget", "500000", "--seed", "3",
                              "--strata", "5,4,4,4,5", "--canonical")
        assert code == 0
        data = json.loads(js)
        rep = data["results"][0]
        assert rep["mode"] == "stratified"
        assert data["seed"] == 3
        assert rep["strata"]["requested"] == 17

    def test_missing_gadget_is_config_error(self):
        assert main(["gadget-recon", "--preset", "demo-q5"]) == 2


class TestPipelineRecon:
    def test_barrett_pair(self, tmp_path):
        code, js, md = run_cli(tmp_path, "pipeline-recon", "--preset", "demo-q5",
                               "--stages", "barrett,barrett", "--canonical")
        assert code == 0
        data = json.loads(js)
        check = data["results"][0]
        assert check["type"] == "bound_check"
        assert check["observed_max"] <= 50
        assert check["verdicts"]["capstone"] == "pass"
        assert "## Composition bound check" in md

    def test_lossy_last_stage(self, tmp_path):
        code, js, _ = run_cli(tmp_path, "pipeline-recon", "--preset", "demo-q7",
                              "--stages", "barrett,lossy:3", "--canonical")
        assert code == 0
        data = json.loads(js)
        by_type = {r["type"]: r for r in data["results"]}
        assert by_type["bound_check"]["capstone_bound"] is None
        assert by_type["bound_check"]["verdicts"]["capstone"] == "inapplicable"
        assert by_type["bound_check"]["verdicts"]["last_stage"] == "pass"
        assert by_type["hypothesis_check"]["passed"] is False
        assert by_type["hypothesis_check"]["stage_index"] == 1
        assert by_type["hypothesis_check"]["max_mult"] == 3

    def test_identity_triple_uniform(self, tmp_path):
        code, js, _ = run_cli(tmp_path, "pipeline-recon", "--preset", "demo-q5",
                              "--stages", "identity,identity,identity",
                              "--canonical")
        assert code == 0
        data = json.loads(js)
        by_type = {r["type"]: r for r in data["results"]}
        assert by_type["uniformity"]["uniform"] is True
        assert by_type["uniformity"]["expected_count"] == 625

    def test_gadget_with_k_replicates(self, tmp_path):
        code, js, _ = run_cli(tmp_path, "pipeline-recon", "--preset", "demo-q5",
                              "--gadget", "barrett", "--k", "2", "--canonical")
        assert code == 0
        stages = json.loads(js)["results"][0]["pipeline"]["stages"]
        assert [g["kind"] for g in stages] == ["barrett", "barrett"]

    def test_k_mismatch_rejected(self):
        assert main(["pipeline-recon", "--preset", "demo-q5", "--stages",
                     "barrett,barrett", "--k", "3"]) == 2


class TestTightness:
    def test_mlkem(self, tmp_path):
        code, js, md = run_cli(tmp_path, "tightness", "--preset", "ml-kem",
                               "--canonical")
        assert code == 0
        rec = json.loads(js)["results"][0]
        assert rec["collision_offset"] == 767
        assert rec["preimage_count"] == 2
        assert "## Tightness witness" in md

    def test_offset_zero(self, tmp_path):
        code, js, _ = run_cli(tmp_path, "tightness", "--q", "2", "--s", "1",
                              "--w", "2", "--canonical")
        assert code == 0
        rec = json.loads(js)["results"][0]
        assert rec["witness"] is None
        assert rec["reason"] == "offset zero"


class TestSemanticsCommand:
    def test_depth_independent_output(self, tmp_path):
        code, js, md = run_cli(tmp_path, "semantics", "--preset", "ml-kem",
                               "--gadget", "montgomery", "--k", "4",
                               "--canonical")
        assert code == 0
        by_type = {r["type"]: r for r in json.loads(js)["results"]}
        assert by_type["semantic_summary"]["probability_bound"] == {
            "numerator": 2, "denominator": 3329}
        assert "note" in by_type["semantic_summary"]
        assert "## Probability / min-entropy reading" in md


class TestDeterminismAndSchema:
    def test_byte_identical_reruns_and_workers(self, tmp_path):
        outputs = []
        for i, workers in enumerate(("1", "2", "1")):
            _, js, md = run_cli(tmp_path, "gadget-recon", "--q", "97", "--s",
                                "4", "--w", "12", "--gadget", "montgomery",
                                "--workers", workers, "--canonical",
                                name=f"run{i}")
            outputs.append((js, md))
        assert outputs[0] == outputs[1] == outputs[2]

    def test_without_canonical_timing_present(self, tmp_path):
        _, js, _ = run_cli(tmp_path, "gadget-recon", "--preset", "demo-q5",
                           "--gadget", "identity")
        data = json.loads(js)
        assert "timing" in data
        assert data["timing"]["workers"] == 1

    @pytest.mark.parametrize("argv", [
        ("gadget-recon", "--preset", "demo-q7", "--gadget", "barrett"),
        ("pipeline-recon", "--preset", "demo-q5", "--stages", "barrett,identity"),
        ("tightness", "--preset", "demo-q7"),
        ("semantics", "--preset", "demo-q5", "--stages", "identity,barrett"),
    ])
    def test_schema_and_roundtrip(self, tmp_path, argv):
        _, js, _ = run_cli(tmp_path, *argv, "--canonical")
        data = json.loads(js)
        jsonschema.validate(data, REPORT_SCHEMA)
        assert dumps_canonical(data) == js

    def test_exit_status_matches_verdicts(self, tmp_path):
        code, js, _ = run_cli(tmp_path, "gadget-recon", "--preset", "demo-q7",
                              "--gadget", "montgomery", "--canonical")
        data = json.loads(js)
        has_fail = any(v["verdict"] == "fail" for v in data["verdicts"])
        assert (code != 0) == has_fail
