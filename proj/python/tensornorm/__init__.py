"""Projective tensor norms and maximal singular vectors of nonnegative tensors."""

from ._core import (
    IterationRecord,
    SolveResult,
    SolveStatus,
    SparseTensor,
    StructureReport,
    TensorNormError,
    analyze,
    check_partial_symmetry,
    evaluate,
    grad_mode,
    is_irreducible,
    is_weakly_irreducible,
    oracle_matrix_2norm,
    oracle_norm,
    quotient_q,
    read_tensor_file,
    residual_check,
    solve_eigenproblem,
    solve_hgpm,
    solve_pm,
    spectrum_upper_bound,
)

__all__ = [
    "IterationRecord",
    "SolveResult",
    "SolveStatus",
    "SparseTensor",
    "StructureReport",
    "TensorNormError",
    "analyze",
    "check_partial_symmetry",
    "evaluate",
    "grad_mode",
    "is_irreducible",
    "is_weakly_irreducible",
    "oracle_matrix_2norm",
    "oracle_norm",
    "quotient_q",
    "read_tensor_file",
    "residual_check",
    "solve_eigenproblem",
    "solve_hgpm",
    "solve_pm",
    "spectrum_upper_bound",
]
