import numpy as np
import numpy.typing as npt


def wrap_phase(x: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Map angles onto (-π, π]."""
    x = np.asarray(x, dtype=float)
    return np.pi - np.mod(np.pi - x, 2.0 * np.pi)


def vec(matrix: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(matrix).reshape(-1, order="F")


def unvec(vector: np.ndarray, rows: int, cols: int) -> np.ndarray:
    return np.asarray(vector).reshape((rows, cols), order="F")
