"""
Shared plumbing of the experiments: per-point random streams, one training episode per
point, and an optional process pool whose results come back in point order.
"""

from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import (
    Any,
    Callable,
    Hashable,
    Mapping,
    Optional,
    Protocol,
    Sequence,
    TypeVar,
)

from mahbf.bench.spec import ExperimentSpec
from mahbf.channel import ChannelMatrix, draw_channel
from mahbf.log import logger
from mahbf.madrl import (
    EpisodeResult,
    EpisodeStatus,
    TrainerConfig,
    iterations_to_level,
    train_episode,
)
from mahbf.numerics import RngHandle

CHANNEL_STREAM, TRAIN_STREAM, BASELINE_STREAM = 0, 1, 2
OK_STATUSES = (EpisodeStatus.CONVERGED.value, EpisodeStatus.MAX_ITERS.value)


class Point(Protocol):
    index: int


P = TypeVar("P", bound=Point)
R = TypeVar("R")
K = TypeVar("K", bound=Hashable)


def point_channel(spec: ExperimentSpec, seed: int, realization: int) -> ChannelMatrix:
    """
    The channel of (seed, realization); identical across SNRs, agent counts and cases.
    """
    rng = RngHandle(seed).derive(CHANNEL_STREAM, realization)
    return draw_channel(spec.channel, rng)


def baseline_rng(seed: int, realization: int) -> RngHandle:
    return RngHandle(seed).derive(BASELINE_STREAM, realization)


def run_episode(
    spec: ExperimentSpec,
    h: ChannelMatrix,
    snr_db: float,
    seed: int,
    realization: int,
    trainer: Optional[TrainerConfig] = None,
) -> EpisodeResult:
    trainer = trainer or spec.trainer
    system = spec.system.model_copy(update={"snr_db": snr_db})
    rng = RngHandle(seed).derive(TRAIN_STREAM, realization, trainer.n_agents)
    return train_episode(h, system, trainer, rng)


def run_points(
    fn: Callable[[P], R], points: Sequence[P], workers: int = 1
) -> list[R]:
    """
    Evaluate ``fn`` on every point. With more than one worker the points run in separate
    processes; results are always returned sorted by point index.
    """
    if workers <= 1 or len(points) <= 1:
        return [fn(point) for point in points]

    results: dict[int, R] = {}
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(fn, point): point.index for point in points}
        for done, future in enumerate(as_completed(futures), start=1):
            results[futures[future]] = future.result()
            logger.debug(f"{done}/{len(points)} points complete")
    return [results[index] for index in sorted(results)]


def shared_level_iterations(
    traces: Mapping[K, Sequence[float]],
    group_of: Callable[[K], Hashable],
    tolerance: float,
) -> dict[K, Optional[int]]:
    """
    Iterations each run needs to come within ``tolerance`` of the lowest final rate in
    its group, so that runs compared with each other are timed against one common level.
    ``traces`` hold running-best rates; empty traces map to None.
    """
    finals: dict[Hashable, float] = {}
    for key, trace in traces.items():
        if trace:
            group = group_of(key)
            finals[group] = min(finals.get(group, float("inf")), trace[-1])
    return {
        key: (
            iterations_to_level(trace, (1.0 - tolerance) * finals[group_of(key)])
            if trace
            else None
        )
        for key, trace in traces.items()
    }


def episode_entry(
    fields: Mapping[str, Any], result: Optional[EpisodeResult]
) -> dict[str, Any]:
    return {**fields, "episode": result.to_dict() if result is not None else None}
