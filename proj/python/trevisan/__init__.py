"""Trevisan randomness extractor: weak designs composed with one-bit extractors."""

from ._core import (
    BudgetExceeded,
    DomainError,
    Error,
    ExtractorParams,
    FormatError,
    InfeasibleError,
    InsufficientData,
    InvalidParameters,
    IoError,
    WeakDesign,
    apply_design,
    binary_entropy,
    binary_entropy_inv,
    design_d,
    extract,
    lu_params,
    make_design,
    max_output_len,
    monobit,
    naive_extract,
    overlap_check,
    rsh_params,
    run_cli,
    solve_w,
    with_output_len,
    xor_params,
)

__all__ = [
    "BudgetExceeded",
    "DomainError",
    "Error",
    "ExtractorParams",
    "FormatError",
    "InfeasibleError",
    "InsufficientData",
    "InvalidParameters",
    "IoError",
    "WeakDesign",
    "apply_design",
    "binary_entropy",
    "binary_entropy_inv",
    "design_d",
    "extract",
    "lu_params",
    "make_design",
    "max_output_len",
    "monobit",
    "naive_extract",
    "overlap_check",
    "rsh_params",
    "run_cli",
    "solve_w",
    "with_output_len",
    "xor_params",
]
