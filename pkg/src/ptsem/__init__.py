"""Executable proof-theoretic semantics over finite universes of atomic rules."""

from .derive import AtomicDerivation, Deriver, check_derivation, derive_witness, derives
from .errors import (
    ConclusionMismatchError,
    ContractViolation,
    DischargeScopeError,
    IllFormedDerivation,
    LevelBoundError,
    NonAtomicError,
    NotDerivable,
    OverlapError,
    ParseError,
    PTSError,
    ReservedNameError,
    UniverseMismatchError,
)
from .ipc import (
    KripkeModel,
    Prover,
    countermodel_il,
    extended_context,
    prove_extended,
    prove_il,
    prove_il_proof,
)
from .rules import (
    Base,
    RuleScheme,
    Universe,
    load_base,
    load_rules,
    load_universe,
    make_base,
    make_universe,
    rule_level,
)
from .semantics import (
    SANDQVIST,
    STANDARD,
    EvalContext,
    NaiveEvaluator,
    alpha_consequence,
    consequence,
    logical_consequence,
    valid,
)
from .syntax import (
    BOT,
    Atom,
    AtomicRule,
    Conj,
    Disj,
    Formula,
    Imp,
    Premise,
    parse_formula,
    parse_rule,
    parse_sequent,
    print_formula,
    print_rule,
)
from .translate import circ, sharp, star, star_base

__version__ = "0.1.0"
