import csv
import io
import json

from isecode import load_family, max_family
from isecode.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv, "--format", "json")
    return code, (json.loads(out) if out.strip() else None), err


def test_bound_product_only(capsys):
    code, report, _ = run_json(capsys, "bound", "-n", "5", "-s", "3", "-t", "3,0,0")
    assert code == 0
    assert report["power_bound"]["applicable"] is False
    assert report["product_bound"] == {
        "applicable": True,
        "count": 11,
        "density": "11/243",
        "windows": [5, 0, 0],
    }


def test_bound_both(capsys):
    code, report, _ = run_json(capsys, "bound", "-n", "3", "-s", "3", "-t", "1,1,0")
    assert code == 0
    assert report["power_bound"]["count"] == 3
    assert report["product_bound"]["count"] == 3


def test_bound_refusal(capsys):
    code, report, err = run_json(capsys, "bound", "-n", "2", "-s", "3", "-t", "3,0,0")
    assert code == 2
    assert report["product_bound"]["deficit"] == 3
    assert "refusal" in err


def test_bound_bad_params_exit_2(capsys):
    code, _, err = run_cli(capsys, "bound", "-n", "3", "-s", "1", "-t", "1")
    assert code == 2
    assert "refusal" in err


def test_construct_verify_round_trip(capsys, tmp_path):
    fam_path = str(tmp_path / "f.fam")
    code, built, _ = run_json(
        capsys, "construct", "product", "-n", "5", "-s", "3", "-t", "3,0,0", "-o", fam_path
    )
    assert code == 0
    assert built["size"] == 11
    assert built["density"] == "11/243"
    assert built["blocks"][0]["radius"] == 1

    code, report, _ = run_json(capsys, "verify", fam_path, "-t", "3,0,0")
    assert code == 0
    # the verify report reproduces the construct-time metadata
    assert report["size"] == built["size"]
    assert report["density"] == built["density"]
    assert report["s"] == 3 and report["n"] == 5
    assert report["intersecting"] is True
    assert report["complete_for"] == {"1": True, "2": False, "3": False}
    assert report["product_bound"]["size_within"] is True

    assert load_family(fam_path) == max_family(5, 3, (3, 0, 0)).witness | load_family(fam_path)


def test_construct_density_only(capsys):
    code, out, _ = run_cli(
        capsys, "construct", "product", "-n", "5", "-s", "3", "-t", "3,0,0", "--density-only"
    )
    assert code == 0
    assert out.strip() == "11/243"


def test_construct_binary_majority(capsys, tmp_path):
    fam_path = str(tmp_path / "k.fam")
    code, report, _ = run_json(
        capsys,
        "construct",
        "binary-majority",
        "-n",
        "4",
        "-t",
        "1,1",
        "--x1",
        "1,2,3",
        "--x2",
        "4",
        "-o",
        fam_path,
    )
    assert code == 0
    assert report["size"] == 4
    assert report["density"] == "1/4"
    assert len(load_family(fam_path)) == 4


def test_construct_symbol_majority(capsys):
    code, report, _ = run_json(
        capsys, "construct", "symbol-majority", "-n", "3", "-s", "3", "-t", "1", "--x", "1,2,3"
    )
    assert code == 0
    assert report["size"] == 7


def test_construct_window(capsys):
    code, report, _ = run_json(
        capsys, "construct", "window", "-n", "3", "-t", "1", "-r", "1"
    )
    assert code == 0
    assert report["size"] == 4
    assert report["density"] == "1/2"


def test_search_json_contract(capsys, tmp_path):
    witness = str(tmp_path / "w.fam")
    code, report, _ = run_json(
        capsys, "search", "-n", "4", "-s", "2", "-t", "1,1", "-o", witness
    )
    assert code == 0
    for key in ("n", "s", "t", "max", "witness_file", "nodes", "ms"):
        assert key in report
    assert report["max"] == 4
    assert report["witness_file"] == witness
    fam = load_family(witness)
    assert len(fam) == 4 and fam.is_t_intersecting((1, 1))


def test_search_threads_flag(capsys):
    code, report, _ = run_json(
        capsys, "search", "-n", "5", "-s", "3", "-t", "1,1,1", "--threads", "4"
    )
    assert code == 0
    assert report["max"] == 9


def test_verify_empty_family(capsys, tmp_path):
    path = tmp_path / "empty.fam"
    path.write_text("3 2\n")
    code, report, _ = run_json(capsys, "verify", str(path), "-t", "1,0,0")
    assert code == 0
    assert report["size"] == 0
    assert report["intersecting"] is True


def test_verify_parse_error_exit_4(capsys, tmp_path):
    path = tmp_path / "bad.fam"
    path.write_text("3 2\n12\n12\n")
    code, _, err = run_cli(capsys, "verify", str(path))
    assert code == 4
    assert "line 3" in err


def test_verify_missing_file_exit_4(capsys, tmp_path):
    code, _, err = run_cli(capsys, "verify", str(tmp_path / "nope.fam"))
    assert code == 4


def test_correlate_random(capsys):
    code, report, _ = run_json(
        capsys,
        "correlate",
        "-s",
        "3",
        "-n",
        "2",
        "--pins-a",
        "1",
        "--pins-b",
        "2,3",
        "--trials",
        "30",
    )
    assert code == 0
    assert report["violations"] == 0
    assert report["min_slack"] >= 0
    assert len(report["trials"]) == 30
    assert [row["seed"] for row in report["trials"]] == sorted(
        row["seed"] for row in report["trials"]
    )


def test_correlate_exhaustive(capsys):
    code, report, _ = run_json(
        capsys, "correlate", "-s", "3", "--pins-a", "1", "--pins-b", "2", "--exhaustive"
    )
    assert code == 0
    assert report["checks"] == 9
    assert report["violations"] == 0
    assert report["min_slack"] == 0


def test_table_bounds_csv(capsys):
    code, out, _ = run_cli(capsys, "table", "--what", "bounds", "-s", "3", "--n-max", "2")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    # demand sweeps with sum <= n: 4 rows for n=1 plus 10 for n=2
    assert len(rows) == 14
    row = next(r for r in rows if r["n"] == "2" and r["t"] == "1,1,0")
    assert row["power_bound"] == "1"
    assert row["product_count"] == "1"


def test_table_oracle(capsys):
    code, out, _ = run_cli(capsys, "table", "--what", "oracle", "-s", "2", "--n-max", "2")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    for row in rows:
        n, t = int(row["n"]), tuple(int(x) for x in row["t"].split(","))
        assert int(row["oracle_max"]) == max_family(n, 2, t).max_size


def test_table_measures(capsys):
    code, out, _ = run_cli(
        capsys, "table", "--what", "measures", "-n", "9", "-s", "3", "--t-max", "4"
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["t"] for r in rows] == ["0", "1", "2", "3", "4"]
    assert rows[3]["value"] == "11/243"
    assert rows[3]["radius"] == "1"


def test_table_output_file(capsys, tmp_path):
    out_path = tmp_path / "t.csv"
    code, out, _ = run_cli(
        capsys, "table", "--what", "bounds", "-s", "3", "--n-max", "1", "-o", str(out_path)
    )
    assert code == 0 and out == ""
    assert out_path.read_text().startswith("n,s,t,")


def test_text_format_appends_decimal(capsys):
    code, out, _ = run_cli(capsys, "bound", "-n", "3", "-s", "3", "-t", "1,1,0")
    assert code == 0
    assert "product_bound.density: 1/9 (~0.111111)" in out
