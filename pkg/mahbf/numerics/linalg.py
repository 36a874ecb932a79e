"""
Dense complex linear algebra in double precision.

Matrices are plain ``numpy.ndarray`` values (complex128 for CMatrix); every exported
operation validates shapes and finiteness and raises ``ContractViolation`` otherwise.
"""

from typing import Sequence

import numpy as np
import numpy.typing as npt
import scipy.linalg

from mahbf.lib.exceptions import (
    ContractViolation,
    RankDeficiencyError,
    SingularSystemError,
)
from mahbf.log import logger

CMatrix = npt.NDArray[np.complex128]

MAX_CONDITION = 1e12
RANK_TOLERANCE = 1e-12


def as_cmatrix(a: npt.ArrayLike, name: str = "matrix") -> CMatrix:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ContractViolation(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ContractViolation(f"{name} has non-finite entries")
    return m


def matmul(a: npt.ArrayLike, b: npt.ArrayLike) -> CMatrix:
    a = as_cmatrix(a, "a")
    b = as_cmatrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ContractViolation(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def solve_hermitian(a: npt.ArrayLike, b: npt.ArrayLike) -> CMatrix:
    """
    Solve ``a X = b`` for Hermitian positive definite ``a``.

    Cholesky first; if the factorization fails the pivoted (Bunch-Kaufman LDL) solver is
    used instead. The inverse is never formed.

    :raises SingularSystemError: when cond(a) exceeds 1e12 or the result is non-finite.
    """
    try:
        a = as_cmatrix(a, "a")
        b = as_cmatrix(b, "b")
    except ContractViolation as e:
        raise SingularSystemError(str(e)) from e
    if a.shape[0] != a.shape[1] or a.shape[0] != b.shape[0]:
        raise ContractViolation(f"cannot solve {a.shape} system for {b.shape}")

    condition = np.linalg.cond(a)
    if not np.isfinite(condition) or condition > MAX_CONDITION:
        raise SingularSystemError(f"condition number {condition:.3e} exceeds limit")

    try:
        factor = scipy.linalg.cho_factor(a, lower=True, check_finite=False)
        x = scipy.linalg.cho_solve(factor, b, check_finite=False)
    except np.linalg.LinAlgError:
        logger.debug("Cholesky failed; falling back to pivoted LDL solve")
        x = scipy.linalg.solve(a, b, assume_a="her", check_finite=False)

    if not np.all(np.isfinite(x)):
        raise SingularSystemError("solution has non-finite entries")
    return x


def right_pseudo_inverse(g: npt.ArrayLike) -> CMatrix:
    """
    Minimum-norm right inverse G^H (G G^H)^{-1} of a wide, full-row-rank ``g``.

    Taken from the economic QR factorization G^H = Q R as Q R^{-H}; the Gram matrix
    G G^H is never formed, so accuracy follows cond(G) and not its square.

    :raises SingularSystemError: when cond(g) exceeds 1e12 or the result is non-finite.
    """
    try:
        g = as_cmatrix(g, "g")
    except ContractViolation as e:
        raise SingularSystemError(str(e)) from e
    k, n = g.shape
    if k > n:
        raise ContractViolation(f"a right inverse needs a wide matrix, got {g.shape}")

    condition = np.linalg.cond(g)
    if not np.isfinite(condition) or condition > MAX_CONDITION:
        raise SingularSystemError(f"condition number {condition:.3e} exceeds limit")

    q, r = scipy.linalg.qr(g.conj().T, mode="economic", check_finite=False)
    # R^H Y = I, then X = Q Y
    y = scipy.linalg.solve_triangular(
        r, np.eye(k), trans="C", check_finite=False
    )
    x = q @ y
    if not np.all(np.isfinite(x)):
        raise SingularSystemError("solution has non-finite entries")
    return x


def gram_schmidt_orthogonalize(
    vectors: Sequence[npt.ArrayLike],
) -> list[npt.NDArray[np.complex128]]:
    """
    Modified Gram-Schmidt with one re-orthogonalization pass.

    Output vectors keep the norm of their residual (orthogonal, not normalized), so the
    first vector is returned unchanged.

    :raises RankDeficiencyError: if a residual norm drops below 1e-12.
    """
    basis: list[np.ndarray] = []
    if not vectors:
        return basis
    length = np.asarray(vectors[0]).shape[0]
    if len(vectors) > length:
        raise ContractViolation(
            f"cannot orthogonalize {len(vectors)} vectors of length {length}"
        )

    for index, v in enumerate(vectors):
        w = np.asarray(v, dtype=np.complex128).copy()
        if w.shape != (length,):
            raise ContractViolation(f"vector {index} has shape {w.shape}")
        for _ in range(2):
            for u in basis:
                w -= (np.vdot(u, w) / np.vdot(u, u)) * u
        if np.linalg.norm(w) < RANK_TOLERANCE * max(1.0, np.linalg.norm(v)):
            raise RankDeficiencyError(f"vector {index} is linearly dependent")
        basis.append(w)
    return basis


def frob_norm_diff(a: npt.ArrayLike, b: npt.ArrayLike) -> float:
    a = as_cmatrix(a, "a")
    b = as_cmatrix(b, "b")
    if a.shape != b.shape:
        raise ContractViolation(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b, "fro"))
