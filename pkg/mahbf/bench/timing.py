"""
Wall-clock cost of training per agent count, split into the act, env and update phases.
"""

import os
import platform
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pydantic
import scipy

from mahbf.bench.runner import (
    OK_STATUSES,
    point_channel,
    run_episode,
    shared_level_iterations,
)
from mahbf.bench.spec import ExperimentSpec
from mahbf.bench.writers import prepare_output_dir, write_json, write_resolved_config
from mahbf.lib.exceptions import WorkbenchException
from mahbf.log import logger

DISCLAIMER = (
    "Wall-clock figures depend on this machine and this implementation; they are not "
    "comparable to absolute timings reported elsewhere."
)
PHASES = ("act", "env", "update", "total")


def hardware_descriptor() -> str:
    return (
        f"{platform.platform()}; {platform.machine()} {platform.processor() or 'cpu'}; "
        f"{os.cpu_count()} cores; python {platform.python_version()}; "
        f"numpy {np.__version__}; scipy {scipy.__version__}; "
        f"pydantic {pydantic.VERSION}"
    )


@dataclass
class TimingReport:
    runs: list[dict[str, Any]]
    medians: list[dict[str, Any]]
    hardware: str
    paths: list[Path] = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(1 for run in self.runs if run["status"] not in OK_STATUSES)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def median_iterations(self, n_agents: int) -> Optional[float]:
        for entry in self.medians:
            if entry["n_agents"] == n_agents:
                return entry["iterations_to_level"]
        return None


def _median(values: list[float]) -> Optional[float]:
    return float(np.median(values)) if values else None


def median_rows(
    spec: ExperimentSpec, runs: list[dict[str, Any]]
) -> list[dict[str, Any]]:
    medians = []
    for y in spec.agent_counts:
        good = [r for r in runs if r["n_agents"] == y and r["status"] in OK_STATUSES]
        entry: dict[str, Any] = {"n_agents": y, "runs": len(good)}
        for phase in PHASES:
            entry[f"{phase}_s"] = _median([r[f"{phase}_s"] for r in good])
        for key in ("iterations", "iterations_to_convergence", "iterations_to_level"):
            entry[key] = _median([r[key] for r in good if r.get(key) is not None])
        medians.append(entry)
    return medians


def run_timing(spec: ExperimentSpec) -> TimingReport:
    """
    Time one episode per (agent count, seed, realization) at ``timing_snr_db`` and write
    ``timing.json`` with the per-run phases and per-agent-count medians. Runs are always
    sequential so that they do not compete for the processor.

    Agent counts are compared on iterations-to-level: for each (seed, realization), the
    first iteration at which a run's running-best rate comes within ``settle_tolerance``
    of the lowest final rate over the agent counts.
    """
    out = prepare_output_dir(spec.output_dir)
    if spec.workers > 1:
        logger.info("Timing runs are sequential; the worker setting is ignored")

    runs = []
    traces: dict[tuple[int, int, int], list[float]] = {}
    for y, seed, r in product(spec.agent_counts, spec.seeds, range(spec.realizations)):
        run: dict[str, Any] = {"n_agents": y, "seed": seed, "realization": r}
        traces[(y, seed, r)] = []
        try:
            h = point_channel(spec, seed, r)
            trainer = spec.trainer.model_copy(update={"n_agents": y})
            result = run_episode(spec, h, spec.timing_snr_db, seed, r, trainer)
        except WorkbenchException as e:
            logger.warning(f"Timing run (Y={y}, seed={seed}) failed: {e}")
            runs.append({**run, "status": "failed", "error": str(e)})
            continue
        traces[(y, seed, r)] = [record.best_so_far for record in result.trace]
        runs.append(
            {
                **run,
                "status": result.status.value,
                "iterations": result.iterations,
                "iterations_to_convergence": result.iterations_to_convergence,
                **{f"{phase}_s": result.timing[phase] for phase in PHASES},
            }
        )

    to_level = shared_level_iterations(
        traces, lambda key: key[1:], spec.trainer.settle_tolerance
    )
    runs = [
        {**run, "iterations_to_level": to_level[key]} for run, key in zip(runs, traces)
    ]
    report = TimingReport(
        runs=runs, medians=median_rows(spec, runs), hardware=hardware_descriptor()
    )
    report.paths.append(write_resolved_config(out, spec))
    if spec.emit.timing_json:
        payload = {
            "hardware": report.hardware,
            "disclaimer": DISCLAIMER,
            "snr_db": spec.timing_snr_db,
            "runs": runs,
            "medians": report.medians,
        }
        report.paths.append(write_json(out / "timing.json", payload, spec))
    return report
