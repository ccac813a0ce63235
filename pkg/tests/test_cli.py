import json

import pytest

from phaseclone.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    return header, rows


class TestCompute:
    def test_uqcm_qubit_row(self, capsys):
        code, out, _ = run(capsys, "compute", "--machine", "uqcm", "--dmin", "2", "--dmax", "2")
        assert code == 0
        header, rows = parse_csv(out)
        row = dict(zip(header, rows[0]))
        assert float(row["f_diag"]) == pytest.approx(4 / 9, abs=1e-12)
        assert row["attainable"] == "true"

    def test_pure_d4_total_variance(self, capsys):
        code, out, _ = run(capsys, "compute", "--machine", "pure", "--dmin", "4", "--dmax", "4")
        assert code == 0
        _, rows = parse_csv(out)
        assert float(rows[0][6]) == 6.0

    def test_shrink_requires_eta(self, capsys):
        code, _, err = run(capsys, "compute", "--machine", "shrink", "--dmin", "2", "--dmax", "4")
        assert code == 2
        assert "eta" in err

    def test_eta_rejected_for_other_machines(self, capsys):
        code, _, _ = run(capsys, "compute", "--machine", "pure", "--eta", "0.5")
        assert code == 2

    def test_invalid_dimension_range(self, capsys):
        code, _, _ = run(capsys, "compute", "--machine", "uqcm", "--dmin", "5", "--dmax", "3")
        assert code == 2

    def test_machine_required(self, capsys):
        code, _, err = run(capsys, "compute")
        assert code == 2
        assert "machine" in err

    def test_byte_identical_for_fixed_seed(self, tmp_path, capsys):
        args = ["compute", "--machine", "pqcm", "--dmax", "8", "--seed", "777"]
        f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(f1)]) == 0
        assert main(args + ["--out", str(f2)]) == 0
        assert f1.read_bytes() == f2.read_bytes()
        assert b"# seed=777" in f1.read_bytes()
        assert f1.read_bytes().count(b"\r") == 0

    def test_json_format(self, capsys):
        code, out, _ = run(
            capsys, "compute", "--machine", "shrink", "--eta", "0.5",
            "--dmin", "3", "--dmax", "3", "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        row = payload["rows"][0]
        assert row["d"] == 3
        assert row["eta"] == 0.5
        assert row["attainable"] is True
        assert row["f_diag"] == pytest.approx(4 * 2 * 0.25 / (3 * 2.5))

    def test_json_is_strict_at_d2(self, capsys):
        # no second eigenvalue exists at d=2; JSON must stay parseable
        code, out, _ = run(
            capsys, "compute", "--machine", "pure",
            "--dmin", "2", "--dmax", "2", "--format", "json",
        )
        assert code == 0
        row = json.loads(out)["rows"][0]
        assert row["lambda2"] is None

    def test_explicit_phases(self, capsys):
        code, out, _ = run(
            capsys, "compute", "--machine", "uqcm",
            "--dmin", "3", "--dmax", "3", "--phases", "0.3,1.1",
        )
        assert code == 0
        assert out.startswith("# phases=")

    def test_phases_need_matching_dimension(self, capsys):
        code, _, _ = run(
            capsys, "compute", "--machine", "uqcm",
            "--dmin", "2", "--dmax", "3", "--phases", "0.3",
        )
        assert code == 2
        code, _, _ = run(
            capsys, "compute", "--machine", "uqcm",
            "--dmin", "3", "--dmax", "3", "--phases", "0.3",
        )
        assert code == 2

    def test_config_file_with_flag_override(self, tmp_path, capsys):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text("machine = shrink\neta = 0.4\ndmin = 2\ndmax = 2\n")
        code, out, _ = run(capsys, "compute", "--config", str(cfg))
        assert code == 0
        _, rows = parse_csv(out)
        assert float(rows[0][1]) == 0.4
        # the flag wins over the file value
        code, out, _ = run(capsys, "compute", "--config", str(cfg), "--eta", "0.9")
        assert code == 0
        _, rows = parse_csv(out)
        assert float(rows[0][1]) == 0.9

    def test_missing_config_file(self, capsys):
        code, _, _ = run(capsys, "compute", "--machine", "pure", "--config", "/no/such/file.cfg")
        assert code == 1


class TestFigure:
    def test_fig1_inequality_rows(self, capsys):
        code, out, _ = run(capsys, "figure", "1", "--dmax", "20")
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["d", "f_in_diag", "scaled_bound", "f_out_diag"]
        for row in rows:
            _, f_in, bound, f_out = map(float, row)
            assert f_out <= bound <= f_in

    def test_fig2_ordering_and_shrinking_gap(self, capsys):
        code, out, _ = run(capsys, "figure", "2", "--dmax", "20")
        assert code == 0
        _, rows = parse_csv(out)
        gaps = {}
        for row in rows:
            d, fu, fp = int(row[0]), float(row[1]), float(row[2])
            assert fp >= fu
            gaps[d] = fp - fu
        for d in range(10, 20):
            assert gaps[d + 1] < gaps[d]

    def test_fig2_qubit_values(self, capsys):
        code, out, _ = run(capsys, "figure", "2", "--dmax", "3")
        _, rows = parse_csv(out)
        assert float(rows[0][1]) == pytest.approx(4 / 9, abs=1e-12)
        assert float(rows[0][2]) == pytest.approx(0.5, abs=1e-12)

    def test_fig3_orderings(self, capsys):
        code, out, _ = run(capsys, "figure", "3", "--dmax", "20")
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["d", "e_in", "e_uqcm", "e_pqcm"]
        for row in rows:
            _, e_in, e_u, e_p = map(float, row)
            assert e_u > e_p > e_in

    def test_fig_columns_reduce_to_pure_at_eta_one(self, capsys):
        # cross-file consistency: the eta=1 columns equal the pure sweep values
        _, fig1, _ = run(capsys, "figure", "1", "--dmax", "6")
        _, fig3, _ = run(capsys, "figure", "3", "--dmax", "6")
        _, pure, _ = run(capsys, "compute", "--machine", "pure", "--dmin", "2", "--dmax", "6")
        _, fig1_rows = parse_csv(fig1)
        _, fig3_rows = parse_csv(fig3)
        _, pure_rows = parse_csv(pure)
        for r1, r3, rp in zip(fig1_rows, fig3_rows, pure_rows):
            assert float(r1[1]) == float(rp[2])  # pure diagonal entry
            assert float(r3[1]) == float(rp[6])  # pure total variance

    def test_small_dmax_rejected(self, capsys):
        code, _, _ = run(capsys, "figure", "2", "--dmax", "2")
        assert code == 2

    def test_invalid_selector_rejected(self, capsys):
        assert main(["figure", "4"]) == 2

    def test_unwritable_path(self, capsys):
        code, _, err = run(capsys, "figure", "2", "--out", "/nonexistent-dir/fig.csv")
        assert code == 1


class TestVerify:
    def test_default_subset_passes(self, tmp_path, capsys):
        report_path = tmp_path / "report.json"
        code, _, err = run(capsys, "verify", "--dmax", "3", "--out", str(report_path))
        assert code == 0
        report = json.loads(report_path.read_text())
        assert all(set(item) == {"name", "pass", "max_error", "tolerance"} for item in report)
        assert all(item["pass"] for item in report)
        names = {item["name"] for item in report}
        assert "uqcm_diagonal_term_sums" in names
        assert "scaling_form_uqcm" in names

    def test_mutation_mode_fails_scaling_check(self, tmp_path, capsys):
        report_path = tmp_path / "report.json"
        code, _, _ = run(capsys, "verify", "--dmax", "3", "--mutate", "--out", str(report_path))
        assert code == 3
        report = json.loads(report_path.read_text())
        failed = [item["name"] for item in report if not item["pass"]]
        assert failed == ["scaling_form_uqcm"]

    def test_tolerance_override_from_config(self, tmp_path, capsys):
        cfg = tmp_path / "verify.cfg"
        cfg.write_text("tol_scaling_form_uqcm = 1.0\n")
        code, _, _ = run(capsys, "verify", "--dmax", "3", "--mutate", "--config", str(cfg))
        assert code == 0  # loosened tolerance masks the injected fault


def test_version_flag(capsys):
    assert main(["--version"]) == 0
