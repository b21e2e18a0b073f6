"""CLI behaviors: exit codes, formats, determinism, round-trips."""

import csv
import io
import json
import math

import pytest

from qsinc import cli, qpoch_inf, default_policy


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestVerifyCommand:
    def test_pass_exit_zero(self, capsys):
        code, out, _ = run(capsys, "verify", "--identity", "main",
                           "--a", "0.2", "--b", "0.3", "--z", "1",
                           "--q", "0.6", "--p", "0.3")
        assert code == 0
        doc = json.loads(out)
        assert doc["pass"] is True
        assert doc["identity"] == "main"
        assert abs(doc["lhs"]["re"] - 1.2693625769161287) < 1e-9

    def test_invalid_params_exit_two(self, capsys):
        code, out, err = run(capsys, "verify", "--identity", "main",
                             "--a", "0.2", "--b", "0.3", "--z", "1",
                             "--q", "0.6", "--p", "0.7")
        assert code == 2
        assert out == ""
        assert "invalid parameters" in err

    def test_base_integral_closed_form(self, capsys):
        code, out, _ = run(capsys, "verify", "--identity", "base-integral",
                           "--q", "0.5")
        assert code == 0
        doc = json.loads(out)
        expected = qpoch_inf(0.5, 0.5, default_policy()) * math.log(2.0)
        assert abs(doc["rhs"]["re"] - expected) < 1e-12

    def test_unknown_identity_usage_error(self, capsys):
        code, _, err = run(capsys, "verify", "--identity", "nope", "--q",
                           "0.5")
        assert code == 64
        assert "unknown identity" in err

    def test_unknown_flag_usage_error(self, capsys):
        code, _, _ = run(capsys, "verify", "--identity", "main", "--bogus",
                         "1")
        assert code == 64

    def test_complex_flag_syntax(self, capsys):
        code, out, _ = run(capsys, "verify", "--identity", "main",
                           "--a", "0.2", "--b", "0.3", "--z", "0.5+0.5i",
                           "--q", "0.6", "--p", "0.3")
        assert code == 0
        assert json.loads(out)["params"]["z"] == "0.5+0.5i"

    def test_inconclusive_exit_three(self, capsys, monkeypatch):
        monkeypatch.setenv("QSINC_MAX_TERMS", "10")
        code, _, _ = run(capsys, "verify", "--identity", "main",
                         "--a", "0.2", "--b", "0.3", "--z", "1",
                         "--q", "0.6", "--p", "0.3")
        assert code == 3


class TestJsonFormat:
    def test_round_trip_byte_identical(self, capsys):
        _, out, _ = run(capsys, "verify", "--identity", "symmetric",
                        "--a", "0.1", "--b", "0.2", "--z", "1",
                        "--q", "0.5", "--p", "0.2")
        parsed = json.loads(out)
        assert cli._json_dump(parsed) + "\n" == out

    def test_elapsed_zeroed_without_timing(self, capsys):
        _, out, _ = run(capsys, "verify", "--identity", "triple-product",
                        "--z", "0.8", "--q", "0.5")
        assert json.loads(out)["elapsed_ms"] == 0


class TestSweepCommand:
    _FLAGS = ("sweep", "--identity", "symmetric", "--q", "0.3:0.9:4",
              "--ratio", "0.2:0.6:3", "--z", "1", "--a", "0.1", "--b", "0.2")

    def test_grid_cardinality(self, capsys):
        code, out, _ = run(capsys, *self._FLAGS)
        assert code == 0
        doc = json.loads(out)
        assert len(doc["reports"]) == 12
        assert doc["summary"]["total"] == 12
        assert doc["summary"]["passed"] == 12

    def test_empty_range_usage_error(self, capsys):
        code, _, _ = run(capsys, "sweep", "--identity", "symmetric",
                         "--q", "0.3:0.9:0", "--z", "1")
        assert code == 64

    def test_no_grid_usage_error(self, capsys):
        code, _, _ = run(capsys, "sweep", "--identity", "symmetric")
        assert code == 64

    def test_rerun_byte_identical_across_threads(self, capsys):
        _, out1, _ = run(capsys, *self._FLAGS, "--threads", "1")
        _, out2, _ = run(capsys, *self._FLAGS, "--threads", "4")
        assert out1 == out2

    def test_failing_point_sets_exit_one(self, capsys):
        code, out, _ = run(capsys, "sweep", "--identity", "main",
                           "--a", "0.2", "--b", "0.3", "--z", "1",
                           "--q", "0.6", "--p", "0.3,0.7")
        assert code == 1
        doc = json.loads(out)
        assert doc["summary"]["passed"] == 1

    def test_csv_columns(self, capsys):
        code, out, _ = run(capsys, *self._FLAGS, "--format", "csv")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        header = rows[0]
        assert header[0] == "identity"
        assert header[-8:] == ["lhs_re", "lhs_im", "rhs_re", "rhs_im",
                               "abs_err", "rel_err", "pass", "elapsed_ms"]
        assert header[1:-8] == sorted(header[1:-8])
        assert len(rows) == 13

    def test_fourier_grid_with_near_vanishing_point(self, capsys):
        code, out, _ = run(capsys, "sweep", "--identity", "fourier",
                           "--y", "0.5,1,2", "--a", "0.1", "--b", "0.2",
                           "--q", "0.5", "--p", "0.2")
        assert code == 0
        assert json.loads(out)["summary"]["total"] == 3


class TestLimitCommand:
    def test_osler_ladder(self, capsys):
        code, out, _ = run(capsys, "limit", "--identity", "osler",
                           "--a", "2", "--alpha", "0.5", "--theta", "0")
        assert code == 0
        rows = json.loads(out)
        assert rows[-1]["error"] <= 1e-6

    def test_qgamma_ladder_monotone(self, capsys):
        code, out, _ = run(capsys, "limit", "--identity", "qgamma",
                           "--x", "1.5")
        assert code == 0
        errors = [r["error"] for r in json.loads(out)]
        assert errors == sorted(errors, reverse=True)

    def test_classical_boundary_case(self, capsys):
        code, out, _ = run(capsys, "limit", "--identity",
                           "classical-sum-int", "--a", "2", "--l", "2",
                           "--alpha", "1")
        assert code == 0
        assert json.loads(out)[-1]["error"] <= 1e-6

    def test_unsupported_identity(self, capsys):
        code, _, _ = run(capsys, "limit", "--identity", "main")
        assert code == 64


class TestCatalogCommand:
    def test_lists_all_identities(self, capsys):
        code, out, _ = run(capsys, "catalog")
        doc = json.loads(out)
        assert code == 0
        assert len(doc) == 17
        assert "main" in doc and "poisson" in doc

    def test_text_format(self, capsys):
        code, out, _ = run(capsys, "catalog", "--format", "text")
        assert code == 0
        assert len(out.strip().splitlines()) == 17


class TestOutputFile:
    def test_output_path(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = run(capsys, "verify", "--identity", "base-integral",
                           "--q", "0.5", "--output", str(target))
        assert code == 0
        assert out == ""
        assert json.loads(target.read_text())["pass"] is True
