from mahbf.numerics.linalg import (
    CMatrix,
    as_cmatrix,
    frob_norm_diff,
    gram_schmidt_orthogonalize,
    matmul,
    right_pseudo_inverse,
    solve_hermitian,
)
from mahbf.numerics.phases import unvec, vec, wrap_phase
from mahbf.numerics.rng import RNG_ALGORITHM, RngHandle

__all__ = [
    "CMatrix",
    "RNG_ALGORITHM",
    "RngHandle",
    "as_cmatrix",
    "frob_norm_diff",
    "gram_schmidt_orthogonalize",
    "matmul",
    "right_pseudo_inverse",
    "solve_hermitian",
    "unvec",
    "vec",
    "wrap_phase",
]
