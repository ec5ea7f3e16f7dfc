"""Schema checking for natural-deduction argument structures.

``check_nd`` verifies every node against its inference schema and reports
what the structure depends on: the formulas of open assumption leaves, and
the atomic rules used without being in the base or discharged.  With no
base, every undischarged atomic rule counts as an open rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Optional, Tuple

from ..errors import DischargeScopeError, IllFormedDerivation
from ..rules import Base, is_atexp
from ..syntax import Atom, AtomicRule, Conj, Disj, Formula, Imp, print_formula
from .structure import ArgumentStructure


@dataclass(frozen=True)
class CheckReport:
    assumptions: FrozenSet[Formula]
    open_rules: FrozenSet[AtomicRule]
    conclusion: Formula
    base_rules_used: FrozenSet[AtomicRule]

    @property
    def is_closed(self) -> bool:
        return not self.assumptions and not self.open_rules


def _fail(msg: str, node: ArgumentStructure):
    raise IllFormedDerivation(msg, node)


def _show(f: Formula) -> str:
    return print_formula(f)


def check_nd(
    d: ArgumentStructure,
    base: Optional[Base] = None,
    allow_custom: bool = False,
) -> CheckReport:
    """Check ``d`` rule by rule; raise ``IllFormedDerivation`` at the first bad node."""
    d.check_wellformed()
    assumptions = set()
    open_rules = set()
    used_base = set()

    # env: label -> (binder, the formula an assumption must have or the rules it may discharge)
    def go(n: ArgumentStructure, env: Dict[int, Tuple[ArgumentStructure, object]]):
        r = n.rule
        kids = n.children
        f = n.formula

        def need(count):
            if len(kids) != count:
                _fail(f"{r} needs {count} premise(s), got {len(kids)}", n)

        if r == "assume":
            need(0)
            if n.label is not None and n.label in env:
                binder, allowed = env[n.label]
                if allowed is not None and (isinstance(allowed, frozenset) or allowed != f):
                    raise DischargeScopeError(
                        f"{binder.rule} cannot discharge the assumption {_show(f)}", n
                    )
            else:
                assumptions.add(f)
            return
        if r == "axiom":
            need(0)
            if not isinstance(f, Atom):
                _fail("an axiom leaf must be atomic", n)
            _use_rule(n, AtomicRule((), f), env)
            return

        new_env = env
        if r == "andI":
            need(2)
            if f != Conj(kids[0].formula, kids[1].formula):
                _fail(f"andI cannot conclude {_show(f)}", n)
        elif r in ("andE1", "andE2"):
            need(1)
            c = kids[0].formula
            if not isinstance(c, Conj) or (c.left if r == "andE1" else c.right) != f:
                _fail(f"{r} cannot conclude {_show(f)} from {_show(c)}", n)
        elif r in ("orI1", "orI2"):
            need(1)
            if not isinstance(f, Disj) or (f.left if r == "orI1" else f.right) != kids[0].formula:
                _fail(f"{r} cannot conclude {_show(f)}", n)
        elif r == "orL":
            need(1)
            c = kids[0].formula
            if not isinstance(c, Disj) or c.left != f:
                _fail(f"orL cannot conclude {_show(f)} from {_show(c)}", n)
        elif r == "impE":
            need(2)
            major, minor = kids[0].formula, kids[1].formula
            if major != Imp(minor, f):
                _fail(f"impE needs {_show(Imp(minor, f))}, got {_show(major)}", n)
        elif r == "Wk":
            need(1)
            c = kids[0].formula
            ok = (
                isinstance(c, Imp)
                and isinstance(f, Imp)
                and isinstance(f.left, Conj)
                and f.left.left == c.left
                and f.right == c.right
            )
            if not ok:
                _fail(f"Wk cannot conclude {_show(f)} from {_show(c)}", n)
        elif r == "impI":
            need(1)
            if not isinstance(f, Imp) or kids[0].formula != f.right:
                _fail(f"impI cannot conclude {_show(f)}", n)
            new_env = dict(env)
            for lab in n.discharges:
                new_env[lab] = (n, f.left)
        elif r == "orE":
            need(3)
            major = kids[0].formula
            if not isinstance(major, Disj) or kids[1].formula != f or kids[2].formula != f:
                _fail(f"orE cannot conclude {_show(f)}", n)
            go(kids[0], env)
            for i, side in ((1, major.left), (2, major.right)):
                sub = dict(env)
                for lab in n.discharges:
                    sub[lab] = (n, side)
                go(kids[i], sub)
            return
        elif r == "atomic":
            ar = n.atomic
            if ar is None:
                _fail("atomic inference without a rule", n)
            if ar.conclusion != f:
                _fail(f"{ar.text()} does not conclude {_show(f)}", n)
            need(len(ar.premises))
            for kid, p in zip(kids, ar.premises):
                if kid.formula != p.atom:
                    _fail(f"premise of {ar.text()} should be {p.atom.name}", kid)
            _use_rule(n, ar, env)
            for kid, p in zip(kids, ar.premises):
                sub = dict(env)
                for lab in n.discharges:
                    sub[lab] = (n, p.discharged)
                go(kid, sub)
            return
        elif not allow_custom:
            _fail(f"unknown inference {r!r}", n)
        elif n.discharges:
            # a custom inference may discharge anything
            new_env = dict(env)
            for lab in n.discharges:
                new_env[lab] = (n, None)
        for k in kids:
            go(k, new_env)

    def _use_rule(n, ar: AtomicRule, env):
        if n.label is not None and n.label in env:
            binder, allowed = env[n.label]
            if allowed is not None and (not isinstance(allowed, frozenset) or ar not in allowed):
                raise DischargeScopeError(f"{ar.text()} is not discharged by the enclosing inference", n)
            return
        if is_atexp(ar):
            return
        if base is not None and ar in base.rules:
            used_base.add(ar)
            return
        open_rules.add(ar)

    go(d, {})
    return CheckReport(frozenset(assumptions), frozenset(open_rules), d.formula, frozenset(used_base))


def is_closed_derivation(d: ArgumentStructure, base: Base) -> bool:
    """True when ``d`` is a closed derivation in the base using atomic rules only."""
    if any(n.rule not in ("atomic", "axiom") for _, n in d.walk()):
        return False
    try:
        rep = check_nd(d, base)
    except IllFormedDerivation:
        return False
    return rep.is_closed
