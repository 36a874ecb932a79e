"""
Brute-force verification suites for the numerical kernels.

Each suite returns a ``SuiteResult``; ``scale`` shrinks the instance counts (used by the
unit tests) without changing what is checked.
"""

import time
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.stats import chisquare

from mahbf.channel import ChannelConfig, generate_channel
from mahbf.lib.exceptions import DegenerateGeometryError
from mahbf.log import logger
from mahbf.madrl.updates import (
    AgentSample,
    actor_objective_grad,
    critic_loss_grad,
    predictive_loss_grad,
)
from mahbf.neural import MlpParams, init_params
from mahbf.numerics import RngHandle
from mahbf.precoding import (
    AnalogPrecoder,
    SystemConfig,
    general_sum_rate,
    precode,
    water_filling,
    zf_digital,
)
from mahbf.replay import SumTree, Transition

ZF_TOLERANCE = 1e-8
WATER_FILLING_TOLERANCE = 1e-9
GRADIENT_TOLERANCE = 1e-6
CHI_SQUARE_MIN_P = 1e-3
FD_STEP = 1e-6


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str
    elapsed: float = 0.0


def _scaled(count: int, scale: float) -> int:
    return max(1, int(round(count * scale)))


def zero_forcing_suite(rng: RngHandle, scale: float = 1.0) -> SuiteResult:
    """H F_RF F̃_D = I and interference-free rate equals the full SINR rate."""
    cfg = ChannelConfig(n_tx=16, n_users=4)
    system = SystemConfig(n_rf=4, snr_db=5.0)
    worst_residual, worst_rate_gap, skipped = 0.0, 0.0, 0
    instances = _scaled(500, scale)
    for _ in range(instances):
        h = generate_channel(cfg, rng)
        phases = -np.pi + 2.0 * np.pi * rng.uniform_open((cfg.n_tx, system.n_rf))
        analog = AnalogPrecoder(phases)
        try:
            f_tilde = zf_digital(h, analog)
            solution = precode(h, analog, system)
        except DegenerateGeometryError:
            skipped += 1
            continue
        residual = h.matrix @ analog.matrix @ f_tilde - np.eye(h.n_users)
        worst_residual = max(worst_residual, float(np.linalg.norm(residual)))
        rate = general_sum_rate(
            h, analog, solution.digital, system.noise_powers(h.n_users)
        )
        worst_rate_gap = max(worst_rate_gap, abs(rate - solution.sum_rate))
    passed = worst_residual < ZF_TOLERANCE and worst_rate_gap < ZF_TOLERANCE
    return SuiteResult(
        "zero_forcing",
        passed,
        f"{instances} instances ({skipped} degenerate); max residual "
        f"{worst_residual:.2e}, max rate gap {worst_rate_gap:.2e}",
    )


def bisection_water_level(
    gains: np.ndarray, noise: np.ndarray, p_total: float, steps: int = 200
) -> float:
    """μ solving Σ (μ - y σ²)^+ = P_t by bisection."""
    costs = gains * noise
    lo, hi = 0.0, p_total + float(costs.max())
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if np.sum(np.maximum(mid - costs, 0.0)) < p_total:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _rate(powers: np.ndarray, noise: np.ndarray) -> float:
    return float(np.sum(np.log2(1.0 + powers / noise)))


def water_filling_suite(rng: RngHandle, scale: float = 1.0) -> SuiteResult:
    """Closed form vs bisection, and no random feasible allocation does better."""
    instances = _scaled(200, scale)
    draws = _scaled(1000, scale)
    worst_gap, beaten = 0.0, 0
    for _ in range(instances):
        k = int(rng.integers(1, 9))
        gains = 0.1 + 9.9 * rng.uniform_open(k)
        noise = 0.1 + 1.9 * rng.uniform_open(k)
        p_total = 0.1 + 19.9 * float(rng.uniform_open(1)[0])

        allocation = water_filling(gains, noise, p_total)
        mu = bisection_water_level(gains, noise, p_total)
        reference = np.maximum(mu / gains - noise, 0.0)
        worst_gap = max(worst_gap, float(np.max(np.abs(allocation.powers - reference))))

        best = _rate(allocation.powers, noise)
        weights = rng.uniform_open((draws, k))
        fill = rng.uniform_open(draws)
        budget = (weights * gains).sum(axis=1)
        candidates = weights * (fill * p_total / budget)[:, None]
        rates = np.sum(np.log2(1.0 + candidates / noise), axis=1)
        beaten += int(np.sum(rates > best + 1e-12))
    passed = worst_gap < WATER_FILLING_TOLERANCE and beaten == 0
    return SuiteResult(
        "water_filling",
        passed,
        f"{instances} instances; max gap to bisection {worst_gap:.2e}; "
        f"{beaten} random allocations did better",
    )


def _numeric_gradient(
    params: MlpParams, objective: Callable[[MlpParams], float]
) -> np.ndarray:
    flat = params.flat()
    grads = np.empty_like(flat)
    shapes = [a.shape for a in params.arrays()]
    sizes = [a.size for a in params.arrays()]

    def rebuild(vector: np.ndarray) -> MlpParams:
        parts = np.split(vector, np.cumsum(sizes)[:-1])
        return params.with_arrays(p.reshape(s) for p, s in zip(parts, shapes))

    for i in range(flat.size):
        step = np.zeros_like(flat)
        step[i] = FD_STEP
        grads[i] = (
            objective(rebuild(flat + step)) - objective(rebuild(flat - step))
        ) / (2.0 * FD_STEP)
    return grads


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    scale = max(np.linalg.norm(analytic), np.linalg.norm(numeric), 1e-12)
    return float(np.linalg.norm(analytic - numeric) / scale)


def _tiny_sample(rng: RngHandle, n: int, rows: int) -> AgentSample:
    states = np.pi * (2.0 * rng.uniform((rows, n)) - 1.0)
    actions = np.pi * (2.0 * rng.uniform((rows, n)) - 1.0)
    return AgentSample(
        agent_index=0,
        slots=list(range(rows)),
        transitions=[],
        states=states,
        actions=actions,
        rewards=rng.uniform(rows),
        next_states=actions,
    )


def gradient_suite(rng: RngHandle, scale: float = 1.0) -> SuiteResult:
    """
    Critic, predictive and composed actor-through-critic gradients against central
    differences on tiny networks.
    """
    n = 2
    nets = _scaled(20, scale)
    worst = {"critic": 0.0, "predictive": 0.0, "coupled": 0.0, "actor": 0.0}
    for _ in range(nets):
        critic = init_params((2 * n, 3, 3, 1), rng)
        predictive = init_params((2 * n, 3, 3, 1), rng)
        actor = init_params((n, 3, 3, n), rng)
        sample = _tiny_sample(rng, n, rows=3)
        q = [0.7]
        targets = [rng.uniform(3)]

        _, g = critic_loss_grad(critic, [sample], q, targets)
        fd = _numeric_gradient(
            critic, lambda p: critic_loss_grad(p, [sample], q, targets)[0]
        )
        worst["critic"] = max(worst["critic"], relative_error(g.flat(), fd))

        _, gp, gc = predictive_loss_grad(predictive, critic, [sample], q)
        fd = _numeric_gradient(
            predictive, lambda p: predictive_loss_grad(p, critic, [sample], q)[0]
        )
        worst["predictive"] = max(worst["predictive"], relative_error(gp.flat(), fd))
        fd = _numeric_gradient(
            critic, lambda p: predictive_loss_grad(predictive, p, [sample], q)[0]
        )
        worst["coupled"] = max(worst["coupled"], relative_error(gc.flat(), fd))

        _, ga = actor_objective_grad(actor, critic, sample.states, q[0])
        fd = _numeric_gradient(
            actor, lambda p: actor_objective_grad(p, critic, sample.states, q[0])[0]
        )
        worst["actor"] = max(worst["actor"], relative_error(ga.flat(), fd))

    passed = all(error < GRADIENT_TOLERANCE for error in worst.values())
    detail = ", ".join(f"{name} {error:.1e}" for name, error in worst.items())
    return SuiteResult("gradients", passed, f"{nets} nets; max relative error {detail}")


def _transition(priority: float, width: int = 2) -> Transition:
    zeros = np.zeros(width)
    return Transition(zeros, zeros, 0.0, zeros, priority)


def _tree_consistent(tree: SumTree) -> bool:
    for i in tree.internal_nodes():
        if tree.node(i) != tree.node(2 * i) + tree.node(2 * i + 1):
            return False
    total = float(np.sum(tree.priorities()))
    return abs(tree.root - total) <= 1e-9 * max(total, 1.0)


def sum_tree_suite(rng: RngHandle, scale: float = 1.0) -> SuiteResult:
    """Random push/update/sample sequences keep every node a sum of its children, and
    sampling frequencies fit the priorities."""
    operations = _scaled(10_000, scale)
    tree = SumTree(50)
    broken = 0
    for _ in range(operations):
        op = int(rng.integers(0, 3))
        if op == 0 or len(tree) == 0:
            tree.push(_transition(0.01 + 10.0 * float(rng.uniform_open(1)[0])))
        elif op == 1:
            slot = int(rng.integers(0, len(tree)))
            tree.update(slot, 0.01 + 10.0 * float(rng.uniform_open(1)[0]))
        else:
            tree.sample(int(rng.integers(1, 5)), rng)
        broken += int(not _tree_consistent(tree))

    draws = _scaled(100_000, scale)
    fixed = SumTree(16)
    for p in np.arange(1.0, 17.0):
        fixed.push(_transition(float(p)))
    counts = np.bincount(
        [slot for slot, _ in fixed.sample(draws, rng)], minlength=fixed.capacity
    )
    expected = draws * fixed.priorities() / fixed.priorities().sum()
    p_value = float(chisquare(counts, expected).pvalue)

    passed = broken == 0 and p_value > CHI_SQUARE_MIN_P
    return SuiteResult(
        "sum_tree",
        passed,
        f"{operations} operations, {broken} inconsistent states; "
        f"chi-square p = {p_value:.3g} over {draws} draws",
    )


SUITES: dict[str, Callable[[RngHandle, float], SuiteResult]] = {
    "zero_forcing": zero_forcing_suite,
    "water_filling": water_filling_suite,
    "gradients": gradient_suite,
    "sum_tree": sum_tree_suite,
}


def run_oracles(
    seed: int = 0, scale: float = 1.0, names: Optional[Sequence[str]] = None
) -> list[SuiteResult]:
    """Run the named suites (all by default), each on its own derived stream."""
    results = []
    for index, (name, suite) in enumerate(SUITES.items()):
        if names is not None and name not in names:
            continue
        start = time.perf_counter()
        result = suite(RngHandle(seed).derive(index), scale)
        result.elapsed = time.perf_counter() - start
        logger.debug(f"{name}: {'PASS' if result.passed else 'FAIL'} {result.detail}")
        results.append(result)
    return results
