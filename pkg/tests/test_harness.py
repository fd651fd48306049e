"""Suite orchestration: determinism, report formats, CLI surfaces."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from repverify.cli import bl_main, genericdim_main, main, oppenheim_main, proj_exp_main
from repverify.harness import (
    SuiteConfig,
    UsageError,
    derive_seed,
    emit_report,
    run_suite,
)


class TestSeeds:
    def test_stable_derivation(self):
        a = derive_seed(42, "generic", "intersection", 3)
        b = derive_seed(42, "generic", "intersection", 3)
        assert a == b

    def test_independent_streams(self):
        assert derive_seed(42, "generic", "intersection", 0) != derive_seed(42, "bl", "intersection", 0)
        assert derive_seed(42, "generic", "a", 0) != derive_seed(43, "generic", "a", 0)


class TestSuites:
    def test_unknown_suite(self):
        with pytest.raises(UsageError):
            SuiteConfig("nonsense")

    def test_hypotheses_deterministic_hash(self):
        a = run_suite(SuiteConfig("hypotheses", master_seed=5))
        b = run_suite(SuiteConfig("hypotheses", master_seed=5))
        assert a.content_hash() == b.content_hash()
        assert a.all_passed

    def test_oppenheim_suite_small(self):
        rep = run_suite(SuiteConfig("oppenheim", master_seed=5, scale=0.2))
        assert rep.all_passed

    def test_summary_counts(self):
        rep = run_suite(SuiteConfig("hypotheses", master_seed=1))
        assert rep.passes + rep.failures == len(rep.results)

    def test_all_suite_composes_with_identical_hash(self):
        a = run_suite(SuiteConfig("all", master_seed=6, scale=0.05))
        b = run_suite(SuiteConfig("all", master_seed=6, scale=0.05))
        assert a.content_hash() == b.content_hash()
        names = {r["name"].split("/")[0] for r in a.results}
        assert {"hypotheses", "generic-dim", "bl", "discretized", "oppenheim"} <= names


class TestEmit:
    def test_json_round_trip(self):
        rep = run_suite(SuiteConfig("hypotheses", master_seed=2))
        doc = json.loads(emit_report(rep, "json"))
        assert doc["suite"] == "hypotheses"
        assert doc["passes"] == rep.passes
        assert doc["hash"] == rep.content_hash()

    def test_csv_rows(self):
        rep = run_suite(SuiteConfig("hypotheses", master_seed=2))
        csv = emit_report(rep, "csv")
        assert len(csv.strip().splitlines()) == len(rep.results) + 1

    def test_markdown_table(self):
        rep = run_suite(SuiteConfig("hypotheses", master_seed=2))
        md = emit_report(rep, "markdown-summary")
        assert "| check | result |" in md

    def test_unknown_format(self):
        rep = run_suite(SuiteConfig("hypotheses", master_seed=2))
        with pytest.raises(UsageError):
            emit_report(rep, "xml")


class TestCLI:
    def test_suite_exit_code(self, tmp_path):
        out = tmp_path / "rep.json"
        code = main(["hypotheses", "--seed", "3", "--out", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["failures"] == 0

    def test_config_file_override(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"suite": "hypotheses", "master_seed": 9}))
        out = tmp_path / "rep.json"
        code = main(["oppenheim", "--config", str(cfg), "--out", str(out)])
        assert code == 0
        assert json.loads(out.read_text())["suite"] == "hypotheses"

    def test_bad_config_file(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("{not json")
        assert main(["hypotheses", "--config", str(cfg)]) == 2

    def test_genericdim(self, tmp_path):
        out = tmp_path / "g.json"
        code = genericdim_main(
            ["--config", "so_pq:2,1", "--w", "flag:1", "--wprime", "flag:0",
             "--trials", "20", "--seed", "42", "--out", str(out)]
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["trials"] == 20 and doc["passes"] == 20
        assert doc["failures"] == []

    def test_genericdim_bad_config(self):
        assert genericdim_main(["--config", "bogus:1", "--w", "full", "--wprime", "full"]) == 2

    def test_bl_check_and_estimate(self, tmp_path):
        from repverify.brascamp_lieb import datum_to_json, loomis_whitney_datum

        datum_path = tmp_path / "lw.json"
        datum_path.write_text(json.dumps(datum_to_json(loomis_whitney_datum())))
        out = tmp_path / "cert.json"
        assert bl_main(["check", "--datum", str(datum_path), "--out", str(out)]) == 0
        assert json.loads(out.read_text())["status"] == "passed_lattice"
        out2 = tmp_path / "est.json"
        assert bl_main(["estimate", "--datum", str(datum_path), "--budget", "100",
                        "--seed", "1", "--out", str(out2)]) == 0
        assert json.loads(out2.read_text())["lower_bound_gaussian"] >= 0.999

    def test_proj_exp(self, tmp_path):
        out = tmp_path / "p.json"
        csv = tmp_path / "p.csv"
        code = proj_exp_main(
            ["--config", "so_pq:2,1", "--fractal", "weight_aligned:1,0.5,0.5,0,0",
             "--mu", "0", "--delta", "6", "--epsilon", "0.05", "--num-u", "10",
             "--seed", "3", "--mode", "subcritical", "--out", str(out), "--csv", str(csv)]
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["within_bound"] is True
        assert len(csv.read_text().strip().splitlines()) == 11  # header + one row per u

    def test_oppenheim_cli(self, tmp_path):
        out = tmp_path / "o.json"
        code = oppenheim_main(["--form", "x1^2+x2^2-sqrt2*x3^2", "--s", "0", "--T", "50",
                               "--out", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["best_value"] > 0

    def test_oppenheim_bad_form(self):
        assert oppenheim_main(["--form", "x1^3", "--T", "10"]) == 2

    def test_installed_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "repverify.cli"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 2


def test_report_csv_trial_rows():
    rep = run_suite(SuiteConfig("generic-dim", master_seed=4, scale=0.1))
    csv = emit_report(rep, "csv")
    assert csv.splitlines()[0] == "name,passed"
