"""Defining relations, their residuals and the q=0 degeneration."""
from .ncpoly import Coef, Letter, NCPoly, Relation, parse_poly, parse_relation
from .presentation import (FAMILIES, RHO_EPS_FREE, PresentationParams, build_presentation,
                           eval_residual, family_residuals)
from .qzero import compare_q0, normal_form, normalized_set, q_zero_presentation, sphere_presentation

__all__ = [
    "Coef", "Letter", "NCPoly", "Relation", "parse_poly", "parse_relation", "FAMILIES",
    "RHO_EPS_FREE", "PresentationParams", "build_presentation", "eval_residual",
    "family_residuals", "compare_q0", "normal_form", "normalized_set",
    "q_zero_presentation", "sphere_presentation",
]
