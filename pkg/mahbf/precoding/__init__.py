from mahbf.precoding.baselines import (
    degenerate_solution,
    full_digital_zf_rate,
    precode,
    random_phase_baseline,
    random_phase_mean_rate,
)
from mahbf.precoding.rates import general_sum_rate, raw_reward, zf_sum_rate
from mahbf.precoding.types import (
    AnalogPrecoder,
    HybridSolution,
    PowerAllocation,
    RewardForm,
    SystemConfig,
)
from mahbf.precoding.water_filling import water_filling
from mahbf.precoding.zero_forcing import assemble_digital, effective_gains, zf_digital

__all__ = [
    "AnalogPrecoder",
    "HybridSolution",
    "PowerAllocation",
    "RewardForm",
    "SystemConfig",
    "assemble_digital",
    "degenerate_solution",
    "effective_gains",
    "full_digital_zf_rate",
    "general_sum_rate",
    "precode",
    "random_phase_baseline",
    "random_phase_mean_rate",
    "raw_reward",
    "water_filling",
    "zf_digital",
    "zf_sum_rate",
]
