"""Three-valued validity of argument structures relative to a base.

Closed structures with an atomic conclusion are valid when they reduce to a
closed derivation in the base.  Closed structures with a compound conclusion
are valid when they reduce to an introduction whose immediate
substructures are valid.  An open structure is valid when, at every
extension where its assumptions are valid, substituting closed witnesses
for the assumptions yields a valid closed structure.

Two finite stand-ins keep this decidable on small inputs.  The extensions
are those of the universe.  The substituted witnesses are the ones
``synthesize_witness`` builds, not every valid closed structure.  Searches
that hit a limit answer ``unknown``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from ..errors import NotDerivable
from ..ipc import Prover
from ..semantics import STANDARD as STANDARD_SEL, EvalContext
from ..syntax import Atom, Formula, print_formula
from .checker import check_nd, is_closed_derivation
from .reductions import STANDARD, Justification, first_reduct, is_canonical, reduces_to
from .structure import ArgumentStructure, substitute
from .witness import synthesize_witness

VALID, INVALID, UNKNOWN = "valid", "invalid", "unknown"


@dataclass(frozen=True)
class Bounds:
    max_steps: int = 10_000
    max_states: int = 2_000
    max_size: int = 1_000

    def __post_init__(self):
        if min(self.max_steps, self.max_states, self.max_size) <= 0:
            raise ValueError("bounds must be positive")

    def to_dict(self) -> dict:
        return {"max_steps": self.max_steps, "max_states": self.max_states, "max_size": self.max_size}


@dataclass(frozen=True)
class Verdict:
    status: str
    reason: str = ""
    steps: int = 0
    extensions: int = 0
    constructive: bool = True

    @property
    def valid(self) -> bool:
        return self.status == VALID

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "reason": self.reason,
            "reduction_steps": self.steps,
            "extensions_checked": self.extensions,
            "constructive": self.constructive,
        }


def _combine(parts: List[Verdict]) -> Verdict:
    steps = sum(p.steps for p in parts)
    ext = sum(p.extensions for p in parts)
    for p in parts:
        if p.status == INVALID:
            return Verdict(INVALID, p.reason, steps, ext)
    for p in parts:
        if p.status == UNKNOWN:
            return Verdict(UNKNOWN, p.reason, steps, ext)
    return Verdict(VALID, "", steps, ext)


@dataclass
class LoggedVerdict:
    mask: int
    assumptions: FrozenSet[Formula]
    conclusion: Formula
    status: str


class ValidityChecker:
    """Checks structures against bases of one universe; caches per structure and base."""

    def __init__(self, ctx: EvalContext, bounds: Bounds = Bounds()):
        self.ctx = ctx
        self.universe = ctx.universe
        self.bounds = bounds
        self.prover = Prover()
        self.log: List[LoggedVerdict] = []
        self._closed_memo: Dict[Tuple[str, int, Tuple[str, ...]], Verdict] = {}
        self._witness_memo: Dict[Tuple[Formula, int], Optional[ArgumentStructure]] = {}

    # -- entry point ----------------------------------------------------------
    def check(self, d: ArgumentStructure, j: Justification, b=0, gamma=()) -> Verdict:
        """Validity of ``d`` as an argument from ``gamma`` (plus its own open assumptions)."""
        check_nd(d, allow_custom=True)
        for f in gamma:
            self.ctx.check_atoms(f)
        self.ctx.check_atoms(d.formula)
        m = self.ctx.mask(b)
        jp = j | STANDARD
        gamma = frozenset(gamma) | d.assumptions()
        if gamma:
            out = self._open(d, m, jp, gamma)
        else:
            out = self._closed(d, m, jp)
        if not jp.constructive:
            out = Verdict(out.status, out.reason, out.steps, out.extensions, constructive=False)
        self.log.append(LoggedVerdict(m, gamma, d.formula, out.status))
        return out

    # -- witnesses ------------------------------------------------------------
    def witness(self, f: Formula, m: int) -> Optional[ArgumentStructure]:
        key = (f, m)
        if key not in self._witness_memo:
            try:
                w, _ = synthesize_witness((), f, self.universe.base_of(m), prover=self.prover)
            except NotDerivable:
                w = None
            self._witness_memo[key] = w
        return self._witness_memo[key]

    # -- clauses ----------------------------------------------------------------
    def _open(self, d, m, j, gamma) -> Verdict:
        parts = []
        present = d.assumptions()
        for c in self.universe.superset_masks(m):
            if not all(self.ctx.valid(STANDARD_SEL, c, g) for g in gamma):
                continue
            sigma = {}
            for g in present:
                w = self.witness(g, c)
                if w is None:
                    parts.append(Verdict(UNKNOWN, f"no closed witness for {print_formula(g)} at base {c}", 0, 1))
                    break
                sigma[g] = w
            else:
                v = self._closed(substitute(d, sigma), c, j)
                parts.append(Verdict(v.status, v.reason, v.steps, v.extensions + 1))
                if v.status == INVALID:
                    break
        return _combine(parts)

    def _closed(self, d, m, j) -> Verdict:
        key = (d.key(), m, j.names)
        hit = self._closed_memo.get(key)
        if hit is not None:
            return hit
        self._closed_memo[key] = Verdict(UNKNOWN, "cyclic dependency")
        if isinstance(d.formula, Atom):
            out = self._closed_atomic(d, m, j)
        else:
            out = self._closed_compound(d, m, j)
        self._closed_memo[key] = out
        return out

    def _closed_atomic(self, d, m, j) -> Verdict:
        base = self.universe.base_of(m)

        def is_der(x):
            return is_closed_derivation(x, base)

        cur, steps = d, 0
        while steps < self.bounds.max_steps:
            if is_der(cur):
                return Verdict(VALID, "", steps)
            nxt = first_reduct(cur, j)
            if nxt is None or nxt.size() > self.bounds.max_size:
                break
            cur, steps = nxt, steps + 1
        res = reduces_to(d, j, is_der, self.bounds.max_states, self.bounds.max_size)
        if res.found:
            return Verdict(VALID, "", len(res.path) - 1)
        if res.status == "exhausted":
            return Verdict(INVALID, f"no reduct is a closed derivation of {print_formula(d.formula)} in base {m}", steps)
        return Verdict(UNKNOWN, "reduction search hit its bound", steps)

    def _closed_compound(self, d, m, j) -> Verdict:
        cur, steps = d, 0
        while not is_canonical(cur) and steps < self.bounds.max_steps:
            nxt = first_reduct(cur, j)
            if nxt is None or nxt.size() > self.bounds.max_size:
                break
            cur, steps = nxt, steps + 1
        if is_canonical(cur):
            v = self._subs(cur, m, j)
            if v.status == VALID:
                return Verdict(VALID, "", steps + v.steps, v.extensions)
        sub_verdicts: Dict[str, Verdict] = {}

        def good(x):
            if not is_canonical(x):
                return False
            v = self._subs(x, m, j)
            sub_verdicts[x.key()] = v
            return v.status == VALID

        res = reduces_to(d, j, good, self.bounds.max_states, self.bounds.max_size)
        if res.found:
            return Verdict(VALID, "", len(res.path) - 1)
        if res.status == "bound":
            return Verdict(UNKNOWN, "reduction search hit its bound", steps)
        unknown = [v for v in sub_verdicts.values() if v.status == UNKNOWN]
        if unknown:
            return Verdict(UNKNOWN, unknown[0].reason, steps)
        bad = [v for v in sub_verdicts.values() if v.status == INVALID]
        reason = bad[0].reason if bad else f"no reduct ends in an introduction of {print_formula(d.formula)}"
        return Verdict(INVALID, reason, steps)

    def _subs(self, d, m, j) -> Verdict:
        if d.rule == "andI":
            return _combine([self._closed(c, m, j) for c in d.children])
        if d.rule in ("orI1", "orI2"):
            return self._closed(d.children[0], m, j)
        body = d.children[0]
        gamma = body.assumptions() | {d.formula.left}
        return self._open(body, m, j, gamma)


def check_validity(
    d: ArgumentStructure,
    j: Justification,
    b,
    ctx: EvalContext,
    bounds: Bounds = Bounds(),
) -> Verdict:
    return ValidityChecker(ctx, bounds).check(d, j, b)
