"""
Sum-rate sweep over SNR, agent count and ablation case, with the random-phase and
full-digital references computed on the same channel as each trained point.
"""

from dataclasses import dataclass, field
from functools import partial
from itertools import product
from pathlib import Path
from typing import Any, Optional

import numpy as np

from mahbf.bench.runner import (
    OK_STATUSES,
    baseline_rng,
    episode_entry,
    point_channel,
    run_episode,
    run_points,
)
from mahbf.bench.spec import ExperimentSpec
from mahbf.bench.writers import (
    prepare_output_dir,
    write_csv,
    write_episodes,
    write_resolved_config,
)
from mahbf.lib.exceptions import DegenerateGeometryError, WorkbenchException
from mahbf.log import logger
from mahbf.madrl import AblationCase, EpisodeResult
from mahbf.precoding import full_digital_zf_rate, random_phase_mean_rate

RATE_FIELDS = [
    "point",
    "snr_db",
    "n_agents",
    "case",
    "seed",
    "realization",
    "status",
    "mahbf_rate",
    "first_rate",
    "random_phase_rate",
    "full_digital_rate",
    "iterations",
    "iterations_to_convergence",
    "error",
]
POINT_KEYS = ["point", "snr_db", "n_agents", "case", "seed", "realization"]
SUMMARY_FIELDS = [
    "snr_db",
    "n_agents",
    "case",
    "points",
    "failed",
    "mahbf_mean",
    "mahbf_std",
    "random_phase_mean",
    "random_phase_std",
    "full_digital_mean",
    "full_digital_std",
]


@dataclass(frozen=True)
class SweepPoint:
    index: int
    snr_db: float
    n_agents: int
    case: AblationCase
    seed: int
    realization: int


@dataclass
class SweepReport:
    rows: list[dict[str, Any]]
    summary: list[dict[str, Any]]
    paths: list[Path] = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(1 for row in self.rows if row["status"] not in OK_STATUSES)

    @property
    def ok(self) -> bool:
        return self.failures == 0


def sweep_points(spec: ExperimentSpec) -> list[SweepPoint]:
    grid = product(
        spec.snr_grid,
        spec.agent_counts,
        spec.sweep_cases,
        spec.seeds,
        range(spec.realizations),
    )
    return [
        SweepPoint(index, float(snr), y, AblationCase(case), seed, r)
        for index, (snr, y, case, seed, r) in enumerate(grid)
    ]


def run_sweep_point(
    spec: ExperimentSpec, point: SweepPoint
) -> tuple[dict[str, Any], Optional[EpisodeResult]]:
    row: dict[str, Any] = {
        "point": point.index,
        "snr_db": point.snr_db,
        "n_agents": point.n_agents,
        "case": point.case.value,
        "seed": point.seed,
        "realization": point.realization,
    }
    try:
        h = point_channel(spec, point.seed, point.realization)
        system = spec.system.model_copy(update={"snr_db": point.snr_db})
        trainer = spec.trainer.model_copy(update={"n_agents": point.n_agents})
        result = run_episode(
            spec,
            h,
            point.snr_db,
            point.seed,
            point.realization,
            trainer.for_case(point.case),
        )
        try:
            full = full_digital_zf_rate(
                h, system.noise_powers(h.n_users), system.p_total
            )
        except DegenerateGeometryError:
            full = None
        random_phase = random_phase_mean_rate(
            h, system, baseline_rng(point.seed, point.realization), spec.baseline_draws
        )
    except WorkbenchException as e:
        logger.warning(f"Sweep point {point.index} failed: {e}")
        return {**row, "status": "failed", "error": str(e)}, None

    return {
        **row,
        "status": result.status.value,
        "mahbf_rate": result.final_rate,
        "first_rate": result.first_rate,
        "random_phase_rate": random_phase,
        "full_digital_rate": full,
        "iterations": result.iterations,
        "iterations_to_convergence": result.iterations_to_convergence,
        "error": result.error,
    }, result


def _mean_std(values: list[float]) -> tuple[Optional[float], Optional[float]]:
    if not values:
        return None, None
    return float(np.mean(values)), float(np.std(values))


def summarize(spec: ExperimentSpec, rows: list[dict[str, Any]]) -> list[dict[str, Any]]:
    """Mean and standard deviation per (SNR, agent count, case) over successful rows."""
    summary = []
    for snr, y, case in product(spec.snr_grid, spec.agent_counts, spec.sweep_cases):
        case = AblationCase(case).value
        group = [
            r
            for r in rows
            if r["snr_db"] == float(snr) and r["n_agents"] == y and r["case"] == case
        ]
        good = [r for r in group if r["status"] in OK_STATUSES]
        entry: dict[str, Any] = {
            "snr_db": float(snr),
            "n_agents": y,
            "case": case,
            "points": len(group),
            "failed": len(group) - len(good),
        }
        for column, key in (
            ("mahbf", "mahbf_rate"),
            ("random_phase", "random_phase_rate"),
            ("full_digital", "full_digital_rate"),
        ):
            values = [r[key] for r in good if r.get(key) is not None]
            entry[f"{column}_mean"], entry[f"{column}_std"] = _mean_std(values)
        summary.append(entry)
    return summary


def run_sweep(spec: ExperimentSpec) -> SweepReport:
    """
    Train one episode per (SNR, agent count, case, seed, realization) and write
    ``rates.csv``, ``rates_summary.csv`` and ``episodes.json``. Failed points become
    rows with status ``failed`` or ``diverged``; the sweep carries on.

    :raises OutputError: if the output directory is unusable, before any training.
    """
    out = prepare_output_dir(spec.output_dir)
    points = sweep_points(spec)
    logger.info(f"Sweeping {len(points)} points with {spec.workers} worker(s)")
    results = run_points(partial(run_sweep_point, spec), points, spec.workers)
    rows = [row for row, _ in results]
    report = SweepReport(rows=rows, summary=summarize(spec, rows))

    report.paths.append(write_resolved_config(out, spec))
    if spec.emit.rates_csv:
        report.paths.append(write_csv(out / "rates.csv", RATE_FIELDS, rows, spec))
        report.paths.append(
            write_csv(out / "rates_summary.csv", SUMMARY_FIELDS, report.summary, spec)
        )
    if spec.emit.episodes_json:
        entries = [
            episode_entry({key: row[key] for key in POINT_KEYS}, result)
            for row, result in results
        ]
        report.paths.append(write_episodes(out, entries, spec))
    logger.info(f"Sweep finished: {len(rows) - report.failures}/{len(rows)} points ok")
    return report

