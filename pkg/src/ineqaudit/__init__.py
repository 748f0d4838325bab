"""Numerical audit of trapezoid-gap bounds, special means and their propositions."""

from .audit import AuditReport, SearchSpec, run_named_suite, run_suite, search
from .bounds import (BoundId, Case, Verdict, first_failure, lhs_gap, proof_chain_audit, rhs,
                     verdict)
from .expr import DomainError, Expr, ParseError, differentiate, evaluate, parse, to_string
from .means import MeanKind, chain_check, mean
from .propositions import PropCase, prop_crosscheck, prop_verdict
from .quadrature import QuadConfig, QuadResult, integrate, integrate_endpoint_singular

__all__ = [
    "AuditReport", "SearchSpec", "run_named_suite", "run_suite", "search",
    "BoundId", "Case", "Verdict", "first_failure", "lhs_gap", "proof_chain_audit", "rhs", "verdict",
    "DomainError", "Expr", "ParseError", "differentiate", "evaluate", "parse", "to_string",
    "MeanKind", "chain_check", "mean",
    "PropCase", "prop_crosscheck", "prop_verdict",
    "QuadConfig", "QuadResult", "integrate", "integrate_endpoint_singular",
]
__version__ = "0.1.0"
