"""Building argument structures from proofs.

``derive_star`` proves the formula translation of an atomic rule by a single
application of that rule: each premise ``[D] a`` is obtained from the
matching conjunct of the hypothesis, fed with the rules of ``D`` as
discharged rule uses.  ``synthesize_witness`` replays a sequent proof from
the prover as a natural-deduction structure, with the base's rules entering
through ``derive_star``.  The result uses only the standard introduction and
elimination inferences plus atomic rules, so the standard reductions justify
it.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from ..derive import AtomicDerivation
from ..errors import NotDerivable
from ..ipc import Prover, SeqProof, extended_context
from ..rules import Base, atexp_rule
from ..syntax import BOT, Atom, AtomicRule, Conj, Disj, Formula, Imp
from ..translate import ordered_premises, star
from .reductions import STANDARD, Justification
from .structure import ArgumentStructure, assume, axiom_leaf, fresh_label, freshen, infer


# -- small builders -------------------------------------------------------------


def and_intro(parts: List[ArgumentStructure]) -> ArgumentStructure:
    """Left-nested conjunction introduction, matching ``conj_all``."""
    out = parts[0]
    for p in parts[1:]:
        out = infer("andI", Conj(out.formula, p.formula), out, p)
    return out


def project(node: ArgumentStructure, n: int, i: int) -> ArgumentStructure:
    """Component ``i`` of a left-nested ``n``-fold conjunction."""
    while n > 1:
        c = node.formula
        if i == n - 1:
            return infer("andE2", c.right, node)
        node = infer("andE1", c.left, node)
        n -= 1
    return node


def efq(d: ArgumentStructure, goal: Formula) -> ArgumentStructure:
    """From a structure concluding ``bot``, one concluding ``goal``."""
    if goal == BOT:
        return d
    if isinstance(goal, Atom):
        return infer("atomic", goal, d, atomic=atexp_rule(goal))
    if isinstance(goal, Conj):
        return infer("andI", goal, efq(d, goal.left), efq(freshen(d), goal.right))
    if isinstance(goal, Disj):
        return infer("orI1", goal, efq(d, goal.left))
    return infer("impI", goal, efq(d, goal.right), discharges=(fresh_label(),))


# -- rules as formulas ----------------------------------------------------------


def _apply_rule(r: AtomicRule, hyp: ArgumentStructure, label: Optional[int]) -> ArgumentStructure:
    """Apply ``r`` to premises read off ``hyp``, which concludes the antecedent of ``star(r)``."""
    slots = ordered_premises(r)
    n = len(slots)
    by_slot = {}
    disc = []
    for i, p in enumerate(slots):
        comp = project(hyp if i == 0 else freshen(hyp), n, i)
        if p.discharged:
            uses = []
            for delta in sorted(p.discharged):
                lab = fresh_label()
                disc.append(lab)
                uses.append(_rule_use(delta, lab))
            comp = infer("impE", p.atom, comp, and_intro(uses))
        by_slot.setdefault(p, []).append(comp)
    kids = [by_slot[p].pop(0) for p in r.premises]
    return infer("atomic", r.conclusion, *kids, atomic=r, label=label, discharges=disc)


def _rule_use(r: AtomicRule, label: Optional[int]) -> ArgumentStructure:
    """A structure concluding ``star(r)`` through one (possibly labelled) use of ``r``."""
    if r.is_axiom:
        return axiom_leaf(r.conclusion, label)
    f = star(r)
    x = fresh_label()
    return infer("impI", f, _apply_rule(r, assume(f.left, x), label), discharges=(x,))


def derive_star(r: AtomicRule) -> ArgumentStructure:
    """Closed structure concluding ``star(r)`` from the rule ``r`` itself."""
    return _rule_use(r, None)


def from_atomic_derivation(d: AtomicDerivation) -> ArgumentStructure:
    """The argument structure of an atomic derivation tree."""

    def go(node: AtomicDerivation, env: Mapping[AtomicRule, int]) -> ArgumentStructure:
        r = node.rule
        label = env.get(r) if node.origin == "discharged" else None
        disc = []
        kids = []
        for child, p in zip(node.children, r.premises):
            inner = dict(env)
            for delta in sorted(p.discharged):
                lab = fresh_label()
                disc.append(lab)
                inner[delta] = lab
            kids.append(go(child, inner))
        if r.is_axiom:
            return axiom_leaf(r.conclusion, label)
        return infer("atomic", node.conclusion, *kids, atomic=r, label=label, discharges=disc)

    return go(d, {})


# -- sequent proofs to natural deduction -------------------------------------------


def _replay(p: SeqProof, env: Dict[Formula, ArgumentStructure]) -> ArgumentStructure:
    rule = p.rule
    f = p.principal

    def use(g):
        return freshen(env[g])

    if rule == "ax":
        return use(p.goal)
    if rule == "botL":
        return efq(use(BOT), p.goal)
    if rule == "andL":
        d = env[f]
        return _replay(p.premises[0], {**env, f.left: infer("andE1", f.left, d), f.right: infer("andE2", f.right, d)})
    if rule == "orL":
        l1, l2 = fresh_label(), fresh_label()
        left = _replay(p.premises[0], {**env, f.left: assume(f.left, l1)})
        right = _replay(p.premises[1], {**env, f.right: assume(f.right, l2)})
        return infer("orE", p.goal, use(f), left, right, discharges=(l1, l2))
    if rule == "drop":
        return _replay(p.premises[0], env)
    if rule == "impL_atom":
        b = infer("impE", f.right, env[f], env[f.left])
        return _replay(p.premises[0], {**env, f.right: b})
    if rule == "impL_and":
        c, d, b = f.left.left, f.left.right, f.right
        l1, l2 = fresh_label(), fresh_label()
        body = infer("impE", b, env[f], infer("andI", f.left, assume(c, l1), assume(d, l2)))
        curried = infer("impI", Imp(c, Imp(d, b)), infer("impI", Imp(d, b), body, discharges=(l2,)), discharges=(l1,))
        return _replay(p.premises[0], {**env, curried.formula: curried})
    if rule == "impL_or":
        c, d, b = f.left.left, f.left.right, f.right
        l1, l2 = fresh_label(), fresh_label()
        cb = infer("impI", Imp(c, b), infer("impE", b, env[f], infer("orI1", f.left, assume(c, l1))), discharges=(l1,))
        db = infer("impI", Imp(d, b), infer("impE", b, env[f], infer("orI2", f.left, assume(d, l2))), discharges=(l2,))
        return _replay(p.premises[0], {**env, cb.formula: cb, db.formula: db})
    if rule == "andR":
        return infer("andI", p.goal, _replay(p.premises[0], env), _replay(p.premises[1], env))
    if rule == "impR":
        lab = fresh_label()
        body = _replay(p.premises[0], {**env, p.goal.left: assume(p.goal.left, lab)})
        return infer("impI", p.goal, body, discharges=(lab,))
    if rule in ("orR1", "orR2"):
        return infer(rule.replace("R", "I"), p.goal, _replay(p.premises[0], env))
    if rule == "impL_imp":
        c, d, b = f.left.left, f.left.right, f.right
        ld = fresh_label()
        cd = infer("impI", Imp(c, d), assume(d, ld), discharges=(fresh_label(),))
        db = infer("impI", Imp(d, b), infer("impE", b, env[f], cd), discharges=(ld,))
        got_cd = _replay(p.premises[0], {**env, db.formula: db})
        got_b = infer("impE", b, env[f], got_cd)
        return _replay(p.premises[1], {**env, b: got_b})
    raise ValueError(f"unknown sequent rule {rule!r}")


def synthesize_witness(
    gamma: Iterable[Formula],
    goal: Formula,
    b: Base,
    assumed: Iterable[AtomicRule] = (),
    prover: Optional[Prover] = None,
) -> Tuple[ArgumentStructure, Justification]:
    """A structure concluding ``goal`` from ``gamma``, paired with the standard reductions.

    The structure uses the base's rules and ``assumed``.  Its open
    assumptions are a subset of ``gamma``, and the rules it uses outside the
    base are a subset of ``assumed``.  Raises ``NotDerivable`` when no proof
    exists.
    """
    gamma = frozenset(gamma)
    assumed = frozenset(assumed)
    ctx = extended_context(gamma, assumed, b)
    proof = (prover or Prover()).prove(ctx, goal)
    if proof is None:
        raise NotDerivable("no proof of the goal from the given context")
    env: Dict[Formula, ArgumentStructure] = {g: assume(g) for g in gamma}
    for r in sorted(assumed | b.rules):
        env[star(r)] = derive_star(r)
    return _replay(proof, env), STANDARD
