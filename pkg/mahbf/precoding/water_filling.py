import numpy as np
import numpy.typing as npt

from mahbf.lib.exceptions import ContractViolation
from mahbf.precoding.types import PowerAllocation


def water_filling(
    effective_gains: npt.ArrayLike, noise_powers: npt.ArrayLike, p_total: float
) -> PowerAllocation:
    """
    Maximize Σ log2(1 + p_k / σ_k²) subject to Σ y_k p_k ≤ P_t.

    KKT gives p_k = (μ / y_k - σ_k²)^+. A user is active iff μ > y_k σ_k², so the active set
    is a prefix of the users sorted by y_k σ_k²; for a prefix of size n the budget fixes
    μ = (P_t + Σ_{active} y_k σ_k²) / n. The largest consistent prefix is the solution.

    :param effective_gains: y_k > 0, the power cost of one unit of received power for user k.
    :param noise_powers: σ_k² > 0.
    :param p_total: P_t > 0.
    """
    y = np.asarray(effective_gains, dtype=float)
    sigma2 = np.asarray(noise_powers, dtype=float)
    if y.shape != sigma2.shape or y.ndim != 1:
        raise ContractViolation("gains and noise powers must be equal-length vectors")
    if np.any(y <= 0) or np.any(sigma2 <= 0) or p_total <= 0:
        raise ContractViolation("gains, noise powers and budget must be positive")

    costs = y * sigma2
    order = np.argsort(costs, kind="stable")
    sorted_costs = costs[order]
    prefix = np.cumsum(sorted_costs)

    mu = 0.0
    for n in range(len(y), 0, -1):
        candidate = (p_total + prefix[n - 1]) / n
        if candidate > sorted_costs[n - 1]:
            mu = candidate
            break

    powers = np.maximum(mu / y - sigma2, 0.0)
    return PowerAllocation(
        powers=powers,
        mu=float(mu),
        effective_gains=y,
        noise_powers=sigma2,
        p_total=float(p_total),
    )
