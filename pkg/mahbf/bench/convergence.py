"""
Convergence traces of the ablation cases on shared channels.

Runs of one (seed, realization) are timed against a common level: each run's
iterations-to-level is the first iteration at which its running-best rate comes within
the trainer's ``settle_tolerance`` of the lowest final rate among those runs.
"""

from dataclasses import dataclass, field
from functools import partial
from itertools import product
from pathlib import Path
from typing import Any, Optional

import numpy as np

from mahbf.bench.runner import (
    OK_STATUSES,
    episode_entry,
    point_channel,
    run_episode,
    run_points,
    shared_level_iterations,
)
from mahbf.bench.spec import ExperimentSpec
from mahbf.bench.writers import (
    prepare_output_dir,
    write_csv,
    write_episodes,
    write_resolved_config,
)
from mahbf.lib.exceptions import WorkbenchException
from mahbf.log import logger
from mahbf.madrl import AblationCase, EpisodeResult

CONVERGENCE_FIELDS = [
    "case",
    "seed",
    "realization",
    "status",
    "iterations",
    "iterations_to_convergence",
    "iterations_to_level",
    "first_rate",
    "final_rate",
    "error",
]

TraceKey = tuple[str, int, int]


@dataclass(frozen=True)
class ConvergencePoint:
    index: int
    case: AblationCase
    seed: int
    realization: int


@dataclass
class ConvergenceReport:
    rows: list[dict[str, Any]]
    traces: dict[TraceKey, list[float]]
    paths: list[Path] = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(1 for row in self.rows if row["status"] not in OK_STATUSES)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def median_iterations(self) -> dict[str, Optional[float]]:
        """Median iterations-to-level per case over the successful runs."""
        medians: dict[str, Optional[float]] = {}
        for case in dict.fromkeys(row["case"] for row in self.rows):
            values = [
                row["iterations_to_level"]
                for row in self.rows
                if row["case"] == case
                and row["status"] in OK_STATUSES
                and row.get("iterations_to_level") is not None
            ]
            medians[case] = float(np.median(values)) if values else None
        return medians


def convergence_points(spec: ExperimentSpec) -> list[ConvergencePoint]:
    grid = product(spec.cases, spec.seeds, range(spec.realizations))
    return [
        ConvergencePoint(index, AblationCase(case), seed, r)
        for index, (case, seed, r) in enumerate(grid)
    ]


def run_convergence_point(
    spec: ExperimentSpec, point: ConvergencePoint
) -> tuple[dict[str, Any], list[float], Optional[EpisodeResult]]:
    """
    :return: the summary row, the running-best rate per iteration and the episode (None
        when the run could not start).
    """
    row: dict[str, Any] = {
        "case": point.case.value,
        "seed": point.seed,
        "realization": point.realization,
    }
    try:
        h = point_channel(spec, point.seed, point.realization)
        trainer = spec.trainer.for_case(point.case)
        result = run_episode(
            spec, h, spec.system.snr_db, point.seed, point.realization, trainer
        )
    except WorkbenchException as e:
        logger.warning(f"Convergence run {point.index} failed: {e}")
        return {**row, "status": "failed", "error": str(e)}, [], None

    trace = [record.best_so_far for record in result.trace]
    return (
        {
            **row,
            "status": result.status.value,
            "iterations": result.iterations,
            "iterations_to_convergence": result.iterations_to_convergence,
            "first_rate": result.first_rate,
            "final_rate": result.final_rate,
            "error": result.error,
        },
        trace,
        result,
    )


def trace_rows(
    spec: ExperimentSpec, traces: dict[TraceKey, list[float]]
) -> list[dict[str, Any]]:
    """
    One row per (seed, realization, iteration) and one column per case holding the best
    rate reached so far; a column is empty once its run has stopped.
    """
    cases = [AblationCase(case).value for case in spec.cases]
    rows = []
    for seed, r in product(spec.seeds, range(spec.realizations)):
        length = max(len(traces.get((case, seed, r), [])) for case in cases)
        for t in range(length):
            row: dict[str, Any] = {"seed": seed, "realization": r, "iter": t + 1}
            for case in cases:
                trace = traces.get((case, seed, r), [])
                row[case] = trace[t] if t < len(trace) else None
            rows.append(row)
    return rows


def run_convergence(spec: ExperimentSpec) -> ConvergenceReport:
    """
    Train every ablation case on the same channels and write ``traces.csv``,
    ``convergence.csv`` and ``episodes.json``.
    """
    out = prepare_output_dir(spec.output_dir)
    points = convergence_points(spec)
    logger.info(f"Running {len(points)} convergence episodes")
    results = run_points(partial(run_convergence_point, spec), points, spec.workers)

    traces = {
        (point.case.value, point.seed, point.realization): trace
        for point, (_, trace, _) in zip(points, results)
    }
    to_level = shared_level_iterations(
        traces, lambda key: key[1:], spec.trainer.settle_tolerance
    )
    rows = [
        {**row, "iterations_to_level": to_level[key]}
        for (row, _, _), key in zip(results, traces)
    ]
    report = ConvergenceReport(rows=rows, traces=traces)

    report.paths.append(write_resolved_config(out, spec))
    if spec.emit.trace_csv:
        cases = [AblationCase(case).value for case in spec.cases]
        report.paths.append(
            write_csv(
                out / "traces.csv",
                ["seed", "realization", "iter", *cases],
                trace_rows(spec, traces),
                spec,
            )
        )
    report.paths.append(
        write_csv(out / "convergence.csv", CONVERGENCE_FIELDS, rows, spec)
    )
    if spec.emit.episodes_json:
        keys = ("case", "seed", "realization")
        entries = [
            episode_entry({key: row[key] for key in keys}, result)
            for row, (_, _, result) in zip(rows, results)
        ]
        report.paths.append(write_episodes(out, entries, spec))
    for case, median in report.median_iterations().items():
        logger.info(f"{case}: median iterations to the shared level {median}")
    return report
