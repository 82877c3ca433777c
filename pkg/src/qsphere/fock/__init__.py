"""Operator calculus on truncated tensor products of l2(N) and l2(Z)."""
from .expr import OperatorExpr, parse_word, single, tensor, word_text
from .primitives import (CoShift, Diag, DiagDomainError, Ge, Id, Proj, QPow,
                         Shift, Sq1m, power, word_adjoint)
from .space import IntTrunc, NatTrunc, SpaceSpec, nat_space
from .trunc import (TruncOp, ess_norm_est, interior_mask, interior_residual,
                    materialize, op_norm, restrict)
from .words import SymbolLimitError, normalize_word, symbol_value, word_action

S = Shift()
Sd = CoShift()
P0 = Proj(0)


def nat(*prims) -> OperatorExpr:
    """Half-line single-factor expression."""
    return single(*prims, kind="N")


def bil(*prims) -> OperatorExpr:
    """Bilateral single-factor expression."""
    return single(*prims, kind="Z")


def one(kind: str = "N") -> OperatorExpr:
    return OperatorExpr.identity((kind,))


__all__ = [
    "OperatorExpr", "TruncOp", "SpaceSpec", "NatTrunc", "IntTrunc", "nat_space",
    "Shift", "CoShift", "Proj", "Diag", "Id", "QPow", "Sq1m", "Ge", "power",
    "materialize", "op_norm", "interior_residual", "interior_mask", "ess_norm_est",
    "restrict", "normalize_word", "word_action", "symbol_value", "word_adjoint",
    "tensor", "single", "nat", "bil", "one", "parse_word", "word_text",
    "DiagDomainError", "SymbolLimitError", "S", "Sd", "P0",
]
