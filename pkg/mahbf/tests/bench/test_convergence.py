import json

from mahbf.bench import run_convergence
from mahbf.bench.convergence import (
    ConvergencePoint,
    ConvergenceReport,
    convergence_points,
    run_convergence_point,
    trace_rows,
)
from mahbf.bench.writers import read_csv
from mahbf.madrl import AblationCase


def test_convergence_points(small_spec):
    points = convergence_points(small_spec)
    assert [p.case for p in points] == list(AblationCase)
    assert points[1] == ConvergencePoint(1, AblationCase.CASE2, 0, 0)


def test_cases_share_channel_and_start(small_spec):
    rows = {
        case: run_convergence_point(small_spec, ConvergencePoint(0, case, 0, 0))[0]
        for case in (AblationCase.CASE1, AblationCase.CASE2, AblationCase.CASE3)
    }
    first = {row["first_rate"] for row in rows.values()}
    assert len(first) == 1


def test_convergence_point_trace_is_running_best(small_spec):
    row, trace, result = run_convergence_point(
        small_spec, ConvergencePoint(0, AblationCase.SINGLE, 0, 0)
    )
    assert row["case"] == "single"
    assert len(trace) == row["iterations"] == result.iterations
    assert trace[0] == row["first_rate"]
    assert all(a <= b for a, b in zip(trace, trace[1:]))


def test_trace_rows_pad_stopped_runs(small_spec):
    spec = small_spec.model_copy(
        update={"cases": [AblationCase.CASE1, AblationCase.SINGLE]}
    )
    traces = {("case1", 0, 0): [1.0, 2.0], ("single", 0, 0): [3.0]}
    assert trace_rows(spec, traces) == [
        {"seed": 0, "realization": 0, "iter": 1, "case1": 1.0, "single": 3.0},
        {"seed": 0, "realization": 0, "iter": 2, "case1": 2.0, "single": None},
    ]


def test_median_iterations_ignore_failures():
    report = ConvergenceReport(
        rows=[
            {"case": "case3", "status": "converged", "iterations_to_level": 2},
            {"case": "case3", "status": "max_iters", "iterations_to_level": 4},
            {"case": "case1", "status": "failed"},
        ],
        traces={},
    )
    assert report.median_iterations() == {"case3": 3.0, "case1": None}
    assert report.failures == 1 and not report.ok


def test_run_convergence_writes_files(small_spec):
    report = run_convergence(small_spec)
    assert report.ok
    assert [p.name for p in report.paths] == [
        "resolved_config.json",
        "traces.csv",
        "convergence.csv",
        "episodes.json",
    ]
    _, rows = read_csv(small_spec.output_dir / "convergence.csv")
    assert [row["case"] for row in rows] == ["case1", "case2", "case3", "single"]
    _, traces = read_csv(small_spec.output_dir / "traces.csv")
    cases = [c.value for c in AblationCase]
    assert list(traces[0]) == ["seed", "realization", "iter", *cases]
    assert list(report.median_iterations()) == cases

    data = json.loads((small_spec.output_dir / "episodes.json").read_text())
    assert [entry["case"] for entry in data["episodes"]] == cases
    assert all(entry["episode"]["solution"] for entry in data["episodes"])


def test_run_convergence_times_cases_to_a_shared_level(small_spec):
    spec = small_spec.model_copy(
        update={
            "trainer": small_spec.trainer.model_copy(update={"max_iters": 20}),
            "cases": [AblationCase.CASE3, AblationCase.SINGLE],
        }
    )
    report = run_convergence(spec)
    lowest = min(trace[-1] for trace in report.traces.values())
    level = (1.0 - spec.trainer.settle_tolerance) * lowest
    for row in report.rows:
        trace = report.traces[(row["case"], 0, 0)]
        reached = row["iterations_to_level"]
        assert 1 <= reached <= len(trace)
        assert trace[reached - 1] >= level
        assert all(rate < level for rate in trace[: reached - 1])
