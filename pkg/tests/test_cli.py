from __future__ import annotations

import csv
import io
import json

import pytest

from quatrestrict.cli import main


def run(capsys, tmp_path, *argv):
    code = main([*argv, "--cache-dir", str(tmp_path)])
    return code, capsys.readouterr().out


def run_json(capsys, tmp_path, *argv):
    code, out = run(capsys, tmp_path, *argv, "--format", "json")
    return code, json.loads(out)


def test_p2_is_usage_error(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["classset", "--p", "2", "--cache-dir", str(tmp_path)])
    assert exc.value.code == 2


def test_dims(capsys, tmp_path):
    code, out = run_json(capsys, tmp_path, "dims", "--N", "27", "--k", "4")
    assert code == 0 and (out["dim_cusp"], out["dim_new"]) == (6, 4)


def test_classset_p11(capsys, tmp_path):
    code, out = run_json(capsys, tmp_path, "classset", "--p", "11")
    assert code == 0 and out["h"] == 2 and out["mass"] == "5/12"
    assert sorted(r["units"] for r in out["rows"]) == [4, 6]


def test_classset_csv(capsys, tmp_path):
    code, out = run(capsys, tmp_path, "classset", "--p", "3", "--N", "27", "--ext", "M", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 2 and set(rows[0]) == {"index", "nrd", "units"}


def test_brandt(capsys, tmp_path):
    code, out = run_json(capsys, tmp_path, "brandt", "--p", "11", "--n", "2")
    assert code == 0 and out["row_sums"] == ["3", "3"] and out["self_adjoint"]


def test_brandt_bad_n(capsys, tmp_path):
    assert main(["brandt", "--p", "11", "--n", "11", "--cache-dir", str(tmp_path)]) == 2
    assert "coprime" in capsys.readouterr().err


def test_epsilon_rows(capsys, tmp_path):
    code, out = run_json(capsys, tmp_path, "epsilon", "--p", "3", "--kappa-conductor", "2", "--ext", "K")
    assert code == 0 and out["rows"]
    for row in out["rows"]:
        assert row["ratio"] == (1 if row["twist"] == row["inducing"] else -1)


def test_dichotomy(capsys, tmp_path):
    code, out = run_json(capsys, tmp_path, "dichotomy", "--p", "3", "--conductor", "3")
    assert code == 0 and all(r["pass"] for r in out["rows"])


def test_local_table_reports_mismatches(capsys, tmp_path):
    code, out = run_json(capsys, tmp_path, "local-table", "--p", "3", "--max-conductor", "3")
    bad = [r for r in out["rows"] if not r["match"]]
    assert code == (0 if not bad else 1)
    assert all(r["conductor"] % 2 == 0 for r in bad)


def test_verify_json_round_trip(capsys, tmp_path):
    code, out = run(capsys, tmp_path, "verify", "--p", "11", "--max-level", "11", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["all_pass"]
    assert json.dumps(data, sort_keys=True, separators=(",", ":")) == out.strip()


def test_text_format(capsys, tmp_path):
    code, out = run(capsys, tmp_path, "dims", "--N", "11", "--format", "text")
    assert code == 0 and "dim_new: 1" in out


def test_threads_do_not_change_output(capsys, tmp_path):
    _, one = run(capsys, tmp_path / "a", "verify", "--p", "3", "--max-level", "27", "--threads", "1", "--format", "json")
    _, two = run(capsys, tmp_path / "b", "verify", "--p", "3", "--max-level", "27", "--threads", "2", "--format", "json")
    assert one == two
