import hashlib
import json

import pytest

from orthogrids.cli import (
    EXIT_BUDGET,
    EXIT_CONFIG,
    EXIT_OK,
    load_grid_batch,
    main,
)
from orthogrids.equistats import sample_batch


def run_main(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def csv_rows(text):
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    return lines[0].split(","), [ln.split(",") for ln in lines[1:]]


# ---------------------------------------------------------------- enumerate


def test_enumerate_twelve_rows(capsys):
    code, out, _ = run_main(capsys, "enumerate", "--d", "3", "--D", "2")
    assert code == EXIT_OK
    header, rows = csv_rows(out)
    assert header == ["d", "D", "x1", "x2", "x3", "orbit_id", "stab_size", "admissible"]
    assert len(rows) == 12
    for row in rows:
        v = tuple(int(c) for c in row[2:5])
        assert sum(c * c for c in v) == 2
        assert row[5] == "0" and row[6] == "2" and row[7] == "1"


def test_enumerate_inadmissible_warns(capsys):
    code, out, err = run_main(capsys, "enumerate", "--d", "3", "--D", "7")
    assert code == EXIT_OK
    _, rows = csv_rows(out)
    assert rows == []
    assert "inadmissible" in err

    code, out, err = run_main(capsys, "enumerate", "--d", "4", "--D", "8")
    assert code == EXIT_OK
    assert csv_rows(out)[1] == []
    assert "inadmissible" in err


def test_enumerate_p_flag_marks_rows(capsys):
    # sphere nonempty but flagged inadmissible once the odd prime divides D
    code, out, err = run_main(capsys, "enumerate", "--d", "4", "--D", "12", "--p", "3")
    assert code == EXIT_OK
    _, rows = csv_rows(out)
    assert rows and all(row[-1] == "0" for row in rows)
    assert "inadmissible" in err


def test_content_hash_covers_body(capsys):
    _, out, _ = run_main(capsys, "enumerate", "--d", "3", "--D", "5")
    lines = out.split("\n")
    assert lines[0].startswith("# run_config: ")
    assert lines[1].startswith("# content_hash: sha256:")
    stated = lines[1].split("sha256:")[1]
    body = "\n".join(lines[2:])
    assert hashlib.sha256(body.encode()).hexdigest() == stated


# ------------------------------------------------------------ shapes/grids


def test_grids_golden_row(capsys):
    code, out, _ = run_main(capsys, "grids", "--d", "3", "--D", "3")
    assert code == EXIT_OK
    header, rows = csv_rows(out)
    assert header[-4:] == ["g22", "t1", "t2", "t_orbit"]
    assert rows == [
        ["3", "3", "1", "1", "1", "8", "2", "1", "2", "1", "1", "2",
         "1/3", "1/3", "1/3:1/3|2/3:2/3"]
    ]


def test_shapes_empty_sphere_header_only(capsys):
    code, out, _ = run_main(capsys, "shapes", "--d", "3", "--D", "7")
    assert code == EXIT_OK
    header, rows = csv_rows(out)
    assert header[:2] == ["d", "D"]
    assert rows == []


def test_grids_weights_cover_sphere(capsys):
    code, out, _ = run_main(capsys, "grids", "--d", "3", "--D", "50")
    _, rows = csv_rows(out)
    from orthogrids.sphere import enumerate_sphere_coords

    assert sum(int(r[5]) for r in rows) == len(enumerate_sphere_coords(3, 50))


def test_raw_mode_rows_per_vector(capsys):
    code, out, _ = run_main(capsys, "shapes", "--d", "3", "--D", "5", "--mode", "raw")
    _, rows = csv_rows(out)
    assert len(rows) == 24
    assert all(r[5] == "1" for r in rows)


# ------------------------------------------------------------- determinism


def test_reruns_byte_identical(capsys, tmp_path):
    paths = []
    for name in ("a.csv", "b.csv"):
        p = tmp_path / name
        code = main(["grids", "--d", "3", "--D-seq", "2,3,5", "--out", str(p)])
        assert code == EXIT_OK
        paths.append(p.read_bytes())
    capsys.readouterr()
    assert paths[0] == paths[1]

    s1 = main(["stats", "--d", "3", "--D", "101", "--out", str(tmp_path / "s1.json")])
    s2 = main(["stats", "--d", "3", "--D", "101", "--out", str(tmp_path / "s2.json")])
    assert s1 == s2 == EXIT_OK
    assert (tmp_path / "s1.json").read_bytes() == (tmp_path / "s2.json").read_bytes()


def test_pipeline_composes(capsys, tmp_path):
    gpath = tmp_path / "grids.csv"
    assert main(["grids", "--d", "3", "--D", "101", "--out", str(gpath)]) == EXIT_OK
    piped = tmp_path / "piped.json"
    fused = tmp_path / "fused.json"
    assert main(["stats", "--d", "3", "--D", "101", "--in", str(gpath),
                 "--out", str(piped)]) == EXIT_OK
    assert main(["stats", "--d", "3", "--D", "101", "--out", str(fused)]) == EXIT_OK
    capsys.readouterr()
    assert piped.read_bytes() == fused.read_bytes()


def test_grid_batch_roundtrip(capsys, tmp_path):
    gpath = tmp_path / "grids.csv"
    assert main(["grids", "--d", "4", "--D", "18", "--out", str(gpath)]) == EXIT_OK
    capsys.readouterr()
    loaded = load_grid_batch(str(gpath))
    direct = sample_batch(4, 18)
    assert loaded.reps == direct.reps
    assert loaded.weights == direct.weights
    assert loaded.grids == direct.grids
    assert loaded.n_points == direct.n_points


# ------------------------------------------------------------- genus-check


def test_genus_check_clean_and_controls(capsys):
    code, out, _ = run_main(
        capsys, "genus-check", "--d", "4", "--p", "3", "--D-seq", "5,7,10,12,14"
    )
    assert code == EXIT_OK
    doc = json.loads(out)
    payload = doc["payload"]
    assert payload["violations"] == 0
    assert payload["skipped"] == [{"D": 12, "reason": "p divides D"}]
    assert all(r["hasse"] == 1 and r["isotropic"] for r in payload["rows"])
    ctrl = {c["form"]: c for c in payload["controls"]}
    assert ctrl["diag(1,1,1,p)"]["isotropic"] is True
    assert ctrl["diag(1,1,p,p)"]["hasse"] == -1
    assert ctrl["diag(1,1,p,p)"]["isotropic"] is False
    assert all(c["control"] for c in payload["controls"])


# ------------------------------------------------------------------ report


def test_report_trend_verdict(capsys):
    code, out, _ = run_main(
        capsys, "report", "--d", "3", "--D-seq", "101,1009,10009"
    )
    assert code == EXIT_OK
    doc = json.loads(out)
    payload = doc["payload"]
    assert len(payload["reports"]) == 3
    assert payload["trend"]["verdict"] == "decreasing"
    assert payload["trend"]["cap_discrepancy"]["strictly_decreasing"]
    stated = doc["content_hash"].split("sha256:")[1]
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    assert hashlib.sha256(canonical.encode()).hexdigest() == stated


# ------------------------------------------------------------- exit codes


def test_exit_codes(capsys):
    assert main(["stats", "--d", "3", "--D", "2"]) == EXIT_CONFIG
    assert main(["enumerate", "--d", "6", "--D", "10001"]) == EXIT_BUDGET
    assert main(["enumerate", "--d", "3"]) == EXIT_CONFIG
    assert main(["enumerate", "--d", "2", "--D", "5"]) == EXIT_CONFIG
    assert main(["enumerate", "--d", "3", "--D", "5", "--D-seq", "7"]) == EXIT_CONFIG
    assert main(["enumerate", "--d", "3", "--D-seq", "5,x"]) == EXIT_CONFIG
    assert main(["genus-check", "--d", "4", "--D", "5", "--p", "4"]) == EXIT_CONFIG
    assert main(["enumerate", "--d", "3", "--D", "5", "--budget", "-1"]) == EXIT_CONFIG
    assert main(["nonsense", "--d", "3", "--D", "5"]) == EXIT_CONFIG
    capsys.readouterr()


def test_explicit_budget_allows_run(capsys):
    code, out, _ = run_main(
        capsys, "enumerate", "--d", "3", "--D", "11", "--budget", "1e12"
    )
    assert code == EXIT_OK
    assert len(csv_rows(out)[1]) == 24
