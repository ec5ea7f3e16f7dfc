"""Argument structures, reductions and reducibility validity."""

from .checker import CheckReport, check_nd, is_closed_derivation
from .reductions import (
    AND_DETOUR,
    IMP_DETOUR,
    OR_DETOUR,
    ORL_REDUCTION,
    STANDARD,
    WK_REDUCTION,
    Justification,
    Reduction,
    SearchResult,
    first_reduct,
    inflating_reduction,
    is_canonical,
    justification,
    normalize,
    oracle_reduction,
    reduce_step,
    reduces_to,
)
from .structure import (
    ArgumentStructure,
    assume,
    axiom_leaf,
    dumps,
    freshen,
    infer,
    loads,
    substitute,
)
from .validity import INVALID, UNKNOWN, VALID, Bounds, ValidityChecker, Verdict, check_validity
from .witness import derive_star, efq, from_atomic_derivation, synthesize_witness

NAMED_REDUCTIONS = {
    "standard": STANDARD,
    "and": justification(AND_DETOUR),
    "imp": justification(IMP_DETOUR),
    "or": justification(OR_DETOUR),
    "wk": justification(WK_REDUCTION),
    "orl": justification(ORL_REDUCTION),
    "none": justification(),
}


def named_justification(spec: str) -> Justification:
    """Union of comma-separated names from ``NAMED_REDUCTIONS``."""
    out = justification()
    for name in filter(None, (s.strip() for s in spec.split(","))):
        try:
            out = out | NAMED_REDUCTIONS[name]
        except KeyError:
            known = ", ".join(sorted(NAMED_REDUCTIONS))
            raise ValueError(f"unknown reduction set {name!r}; known: {known}") from None
    return out
