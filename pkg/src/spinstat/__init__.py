"""Spin-statistics analysis of SU(2) x C x T invariant free fields."""
from .field_model import CanonicalField, FieldSpec, SpecError, build, m_matrix, verify_symmetries
from .ratfunc import RationalFunc1, RationalFunc2, parse_expr
from .quantization import decide_statistics, solve_lambda
from .analytic import branch_points, verify_corollary

__all__ = [
    "CanonicalField",
    "FieldSpec",
    "SpecError",
    "RationalFunc1",
    "RationalFunc2",
    "branch_points",
    "build",
    "decide_statistics",
    "m_matrix",
    "parse_expr",
    "solve_lambda",
    "verify_corollary",
    "verify_symmetries",
]
