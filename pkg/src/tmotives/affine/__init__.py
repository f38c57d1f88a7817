"""Affine equations: S_0 bases, minimal chains, smallness certificates and dimensions."""
from .certificate import (
    NOT_SMALL, SMALL, UNKNOWN, Certificate, OrdFit, SmallnessVerdict, classify_chain, fit_ords, recheck,
    strict_head_dominance,
)
from .combination import (
    DimensionResult, SeparationFails, SeparationReport, combination_analysis, dimension, monotone_bound,
    single_tail_ords, single_tail_verdict,
)
from .equation import AffineEq, ChainRecord, ChainStep, InvalidEquation
from .solver import (
    FieldTooSmall, SolverConfig, is_simple_at, is_simple_chain, minimal_chain, refine_root,
    s0_basis, s0_field, solve_step, summand_ords, tail_value,
)

__all__ = [
    "AffineEq", "ChainRecord", "ChainStep", "InvalidEquation",
    "FieldTooSmall", "SolverConfig", "is_simple_at", "is_simple_chain", "minimal_chain", "refine_root",
    "s0_basis", "s0_field", "solve_step", "summand_ords", "tail_value",
    "SMALL", "NOT_SMALL", "UNKNOWN", "Certificate", "OrdFit", "SmallnessVerdict", "classify_chain",
    "fit_ords", "recheck", "strict_head_dominance",
    "DimensionResult", "SeparationFails", "SeparationReport", "combination_analysis", "dimension",
    "monotone_bound", "single_tail_ords", "single_tail_verdict",
]
