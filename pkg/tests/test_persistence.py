import csv
import json

import numpy as np
import pytest

from src.models.branch import BranchPoint
from src.models.fourier import FourierSeries, Grid, COSINE
from src.models.sheet import SheetState
from src.numerics.functional import assemble_residual
from src.utils.persistence import (
    BranchWriter,
    SolutionRecord,
    export_branch,
    export_solution,
    load_seed,
    load_solution,
    read_branch,
    record_from_solve,
    save_diagnostics,
    save_solution,
)

STATE = SheetState(
    2.1 + 1e-13,
    FourierSeries.from_modes(COSINE, {1: 0.1 / 3, 2: -1e-5}),
    FourierSeries.from_modes(COSINE, {1: 0.05, 4: 2.0 / 7.0 * 1e-4}),
)


def _record(grid, n_modes=6):
    return record_from_solve(STATE, assemble_residual(STATE, grid), grid, n_modes, 7, 1e-5)


def test_solution_round_trip_reproduces_residual(tmp_path, grid):
    path = save_solution(tmp_path / "s.json", _record(grid))
    loaded = load_solution(path)
    assert loaded.n_modes == 6
    assert loaded.n_theta == grid.n_points
    assert loaded.iterations == 7
    np.testing.assert_array_equal(loaded.state.coefficient_vector(6), STATE.coefficient_vector(6))
    recomputed = assemble_residual(loaded.state, Grid(loaded.n_theta)).sup_norm
    assert recomputed == pytest.approx(loaded.residual_sup, abs=1e-12)


def test_solution_file_schema(tmp_path, grid):
    path = save_solution(tmp_path / "s.json", _record(grid, n_modes=4))
    data = json.loads(path.read_text())
    assert set(data) == {
        "version", "b", "omega", "N", "N_theta", "gamma_coeffs", "r_coeffs",
        "residual_sup", "residual_l2", "solver",
    }
    assert len(data["gamma_coeffs"]) == 5
    assert len(data["r_coeffs"]) == 4
    assert data["gamma_coeffs"][0] == data["b"]
    assert data["solver"] == {"iterations": 7, "lambda_final": 1e-5}


def test_inconsistent_b_is_rejected(tmp_path, grid):
    data = _record(grid).to_dict()
    data["b"] = 3.0
    with pytest.raises(ValueError, match="disagrees"):
        SolutionRecord.from_dict(data)


def test_load_solution_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_solution(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text('{"b": 2.0}')
    with pytest.raises(ValueError, match="Malformed"):
        load_solution(bad)


def test_branch_writer_appends_exact_rows(tmp_path, grid):
    writer = BranchWriter(tmp_path / "branch.csv", tmp_path / "solutions", grid, 6)
    r1 = 0.1 + 0.2
    writer.append(BranchPoint(0, r1, STATE.b, STATE, 3e-11))
    writer.append(BranchPoint(1, r1 + 1e-3, STATE.b, STATE, 4e-11))

    rows = read_branch(tmp_path / "branch.csv")
    assert [row["step_index"] for row in rows] == [0, 1]
    assert rows[0]["r1"] == r1
    assert rows[1]["residual_sup"] == 4e-11
    assert rows[1]["solution_path"] == "solutions/point_00001.json"
    assert (tmp_path / "solutions" / "point_00000.json").exists()

    with open(tmp_path / "branch.csv", newline="") as f:
        header = next(csv.reader(f))
    assert header == ["step_index", "r1", "b", "residual_sup", "solution_path", "parameter"]
    assert rows[0]["parameter"] == "r1"


def test_branch_rows_record_the_continuation_parameter(tmp_path, grid):
    path = tmp_path / "b_branch.csv"
    BranchWriter(path, None, grid, 6, parameter="b").append(BranchPoint(0, 0.02, 2.04, STATE, 1e-11))
    assert read_branch(path)[0]["parameter"] == "b"


def test_branch_without_parameter_column_reads_blank(tmp_path):
    path = tmp_path / "old.csv"
    path.write_text("step_index,r1,b,residual_sup,solution_path\n0,0.1,2.2,1e-11,\n")
    assert read_branch(path)[0]["parameter"] == ""


def test_branch_writer_keeps_existing_rows(tmp_path, grid):
    path = tmp_path / "branch.csv"
    BranchWriter(path, None, grid, 6).append(BranchPoint(0, 0.1, 2.2, STATE, 1e-11))
    BranchWriter(path, None, grid, 6).append(BranchPoint(1, 0.2, 2.4, STATE, 1e-11))
    rows = read_branch(path)
    assert len(rows) == 2
    assert rows[0]["solution_path"] == ""


def test_load_seed_from_branch_and_solution(tmp_path, grid):
    writer = BranchWriter(tmp_path / "branch.csv", tmp_path / "solutions", grid, 6)
    writer.append(BranchPoint(0, STATE.r1, STATE.b, STATE, 1e-11))
    from_branch = load_seed(tmp_path / "branch.csv")
    from_json = load_seed(tmp_path / "solutions" / "point_00000.json")
    np.testing.assert_array_equal(from_branch.coefficient_vector(6), STATE.coefficient_vector(6))
    np.testing.assert_array_equal(from_json.coefficient_vector(6), STATE.coefficient_vector(6))


def test_load_seed_needs_a_stored_solution(tmp_path, grid):
    BranchWriter(tmp_path / "empty.csv", None, grid, 6)
    with pytest.raises(ValueError, match="no points"):
        load_seed(tmp_path / "empty.csv")
    BranchWriter(tmp_path / "bare.csv", None, grid, 6).append(BranchPoint(0, 0.1, 2.2, STATE, 1e-11))
    with pytest.raises(ValueError, match="no stored solution"):
        load_seed(tmp_path / "bare.csv")


def test_export_branch_with_linear_theory(tmp_path):
    rows = [
        {"step_index": 0, "r1": 0.1, "b": 2.21, "residual_sup": 1e-11},
        {"step_index": 1, "r1": 0.2, "b": 2.45, "residual_sup": 2e-11},
    ]
    diagram, linear = export_branch(rows, tmp_path / "diagram.csv", "csv")
    assert linear.name == "diagram_linear.csv"
    with open(diagram, newline="") as f:
        table = list(csv.reader(f))
    assert table[0] == ["r1", "b", "residual_sup"]
    assert float(table[2][1]) == 2.45
    with open(linear, newline="") as f:
        table = list(csv.reader(f))
    assert table[0] == ["r1", "b_upper", "b_lower"]
    assert float(table[1][1]) == pytest.approx(2.2)
    assert float(table[1][2]) == pytest.approx(1.8)


def test_export_empty_branch_writes_header_only(tmp_path):
    diagram, _ = export_branch([], tmp_path / "diagram.csv", "csv")
    assert diagram.read_text().strip() == "r1,b,residual_sup"
    as_json, _ = export_branch([], tmp_path / "diagram.json", "json")
    assert json.loads(as_json.read_text()) == {"r1": [], "b": [], "residual_sup": []}


def test_export_rejects_unknown_format(tmp_path):
    with pytest.raises(ValueError, match="format"):
        export_branch([], tmp_path / "d.txt", "txt")


def test_export_solution_samples_full_period(tmp_path, grid):
    path = export_solution(_record(grid), tmp_path / "curve.json", "json")
    table = json.loads(path.read_text())
    assert len(table["theta"]) == 2 * grid.n_points
    theta = np.array(table["theta"])
    radius = np.hypot(table["x"], table["y"])
    expected = 1.0 + 0.05 * np.cos(2 * theta) + 2.0 / 7.0 * 1e-4 * np.cos(8 * theta)
    np.testing.assert_allclose(radius, expected, atol=1e-14)
    np.testing.assert_allclose(
        table["gamma"],
        STATE.b + 0.1 / 3 * np.cos(2 * theta) - 1e-5 * np.cos(4 * theta),
        atol=1e-14,
    )


def test_save_diagnostics(tmp_path):
    path = save_diagnostics(tmp_path / "out" / "d.json", {"message": "collapsed", "node": 4})
    assert json.loads(path.read_text())["node"] == 4
