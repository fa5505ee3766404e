"""Command-line driver: report schema, determinism, and usage errors."""

import json

import pytest

from projcalc.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestRun:
    def test_report_schema_and_exit_code(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(
            [
                "run", "--suite", "space-identities", "--n", "6", "--p", "3.0",
                "--seed", "5", "--out", str(out),
            ]
        )
        capsys.readouterr()
        assert code == 0
        doc = json.loads(out.read_text())
        assert list(doc.keys()) == ["suite", "timestamp", "config", "cases", "summary"]
        assert doc["summary"]["failed"] == 0
        assert doc["summary"]["passed"] + doc["summary"]["failed"] + doc[
            "summary"
        ]["undetermined"] == doc["summary"]["total"]
        ids = [c["id"] for c in doc["cases"]]
        assert ids == sorted(ids)
        for case in doc["cases"]:
            assert case["repro"].startswith("projcalc run --suite")

    def test_full_run_covers_every_operation(self, tmp_path, capsys):
        out = tmp_path / "all.json"
        code = main(["run", "--suite", "all", "--n", "6", "--p", "2.0", "--seed", "3",
                     "--samples", "40", "--out", str(out)])
        capsys.readouterr()
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["summary"]["coverage_complete"] is True
        assert doc["summary"]["ops_missing"] == []

    def test_hilbert_ball_suite_includes_the_parallel_grid(self, tmp_path, capsys):
        out = tmp_path / "ball.json"
        code = main(["run", "--suite", "coderiv-ball", "--p", "2.0", "--n", "4",
                     "--seed", "4", "--out", str(out)])
        capsys.readouterr()
        assert code == 0
        doc = json.loads(out.read_text())
        ids = [c["id"] for c in doc["cases"]]
        assert "coderiv-ball/hilbert-grid" in ids
        assert doc["summary"]["failed"] == 0

    def test_determinism_modulo_timestamp(self, tmp_path, capsys):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for path in paths:
            code = main(
                ["run", "--suite", "all", "--n", "6", "--p", "3.0", "--seed", "11",
                 "--samples", "40", "--out", str(path)]
            )
            assert code == 0
        capsys.readouterr()
        a = [ln for ln in paths[0].read_text().splitlines() if '"timestamp"' not in ln]
        b = [ln for ln in paths[1].read_text().splitlines() if '"timestamp"' not in ln]
        assert a == b

    def test_case_filter(self, tmp_path, capsys):
        out = tmp_path / "one.json"
        code = main(
            ["run", "--suite", "space-identities", "--seed", "1",
             "--case", "space/duality-identity", "--out", str(out)]
        )
        capsys.readouterr()
        assert code == 0
        doc = json.loads(out.read_text())
        assert [c["id"] for c in doc["cases"]] == ["space/duality-identity"]

    def test_csv_flattening(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        csv = tmp_path / "r.csv"
        main(["run", "--suite", "decomposition", "--seed", "2", "--out", str(out),
              "--csv", str(csv)])
        capsys.readouterr()
        lines = csv.read_text().splitlines()
        assert lines[0] == "case_id,status,metric,value"
        assert len(lines) > 1

    def test_rejects_out_of_range_exponent(self, capsys):
        with pytest.raises(SystemExit):
            main(["run", "--suite", "all", "--p", "0.9"])
        capsys.readouterr()

    def test_rejects_unknown_suite(self, capsys):
        with pytest.raises(SystemExit):
            main(["run", "--suite", "nonsense"])
        capsys.readouterr()

    def test_env_seed_override(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("PROJCALC_SEED", "77")
        out = tmp_path / "env.json"
        main(["run", "--suite", "space-identities", "--out", str(out)])
        capsys.readouterr()
        assert json.loads(out.read_text())["config"]["seed"] == 77


class TestOracle:
    def test_rejected_query_prints_witness(self, capsys):
        code, out, _ = run_cli(
            ["oracle", "--set", "ball", "--point", "[1, 0]", "--xstar", "[0, 0]",
             "--ystar", "[0, 1]", "--p", "2.0", "--r", "1.0", "--directions", "32"],
            capsys,
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["verdict"] == "rejected"
        assert doc["witness_quotient"] >= 1e-2
        assert len(doc["witness_u"]) == 2

    def test_member_query_not_rejected(self, capsys):
        code, out, _ = run_cli(
            ["oracle", "--set", "ball", "--point", "[1, 0]", "--xstar", "[0, 0]",
             "--ystar", "[-1, 0]", "--p", "2.0", "--directions", "32"],
            capsys,
        )
        doc = json.loads(out)
        assert doc["verdict"] == "not_rejected"
        assert doc["max_quotient_per_radius"][-1] <= 1e-3

    def test_cylinder_with_mask(self, capsys):
        code, out, _ = run_cli(
            ["oracle", "--set", "cylinder", "--point", "[3, 4, 7]", "--mask", "0,1",
             "--xstar", "[0, 0, 5]", "--ystar", "[0, 0, 5]", "--p", "2.0",
             "--directions", "32"],
            capsys,
        )
        doc = json.loads(out)
        assert doc["verdict"] == "not_rejected"

    def test_bad_vector_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit):
            main(["oracle", "--set", "ball", "--point", "oops", "--xstar", "[0]",
                  "--ystar", "[0]"])
        capsys.readouterr()


class TestWitness:
    def test_ball_boundary(self, capsys):
        code, out, _ = run_cli(
            ["witness", "--set", "ball", "--point", "[1, 0]", "--p", "2.0"], capsys
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["found"] is True
        assert doc["relative_defect"] >= 0.1

    def test_interior_point_is_an_error(self, capsys):
        with pytest.raises(SystemExit):
            main(["witness", "--set", "ball", "--point", "[0.2, 0]", "--p", "2.0"])
        capsys.readouterr()
