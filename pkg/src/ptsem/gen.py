"""Formula and rule generators for sweeps and randomized checks."""

from __future__ import annotations

import random
from typing import Iterable, List, Sequence

from .rules import Universe, make_universe, rule_level
from .syntax import BOT, Atom, AtomicRule, Conj, Disj, Formula, Imp, Premise

CONNECTIVES = (Conj, Disj, Imp)


def atoms(*names: str) -> List[Atom]:
    return [Atom(n) for n in names]


def enumerate_formulas(letters: Sequence[Atom], max_depth: int, connectives=CONNECTIVES) -> List[Formula]:
    """Every formula of depth at most ``max_depth`` (atoms have depth 1), shallow first."""
    by_depth = [list(letters)]
    upto = list(letters)
    for _ in range(1, max_depth):
        new = []
        prev = by_depth[-1]
        prev_set = set(prev)
        for con in connectives:
            for a in upto:
                for b in upto:
                    if a in prev_set or b in prev_set:
                        new.append(con(a, b))
        by_depth.append(new)
        upto = upto + new
    return upto


def random_formula(
    rng: random.Random,
    letters: Sequence[Atom],
    max_depth: int,
    connectives=CONNECTIVES,
    leaf_bias: float = 0.3,
) -> Formula:
    if max_depth <= 1 or rng.random() < leaf_bias:
        return rng.choice(list(letters))
    con = rng.choice(list(connectives))
    return con(
        random_formula(rng, letters, max_depth - 1, connectives, leaf_bias),
        random_formula(rng, letters, max_depth - 1, connectives, leaf_bias),
    )


def random_rule(rng: random.Random, letters: Sequence[Atom], max_level: int, max_premises: int = 3) -> AtomicRule:
    """A random rule of level at most ``max_level``; never concludes ``bot`` unless ``bot`` is in ``letters``."""
    letters = list(letters)
    if max_level == 0 or rng.random() < 0.2:
        return AtomicRule((), rng.choice(letters))
    n = rng.randint(1, max_premises)
    premises = []
    for _ in range(n):
        discharged = frozenset()
        if max_level >= 2 and rng.random() < 0.4:
            k = rng.randint(1, 2)
            discharged = frozenset(random_rule(rng, letters, max_level - 2, 2) for _ in range(k))
        premises.append(Premise(discharged, rng.choice(letters)))
    return AtomicRule(tuple(premises), rng.choice(letters))


def random_universe(
    rng: random.Random,
    letters: Sequence[Atom],
    n_candidates: int,
    max_level: int = 2,
    with_axioms: bool = False,
) -> Universe:
    cands: List[AtomicRule] = []
    if with_axioms:
        cands.extend(AtomicRule((), a) for a in letters)
    guard = 0
    while len(cands) < n_candidates and guard < 1000:
        guard += 1
        r = random_rule(rng, letters, max_level)
        if r not in cands and rule_level(r) <= max_level:
            cands.append(r)
    return make_universe(letters, cands, max_level)


def closed_universe(
    letters: Sequence[Atom],
    rules: Iterable[AtomicRule],
    level_bound=None,
    extra: Iterable[AtomicRule] = (),
) -> Universe:
    """Universe holding ``rules``, every rule they discharge, and an axiom per letter."""
    cands: List[AtomicRule] = []

    def add(r):
        if r not in cands:
            cands.append(r)

    for a in letters:
        if a != BOT:
            add(AtomicRule((), a))
    for r in list(rules) + list(extra):
        add(r)
        for s in sorted(r.subrules()):
            add(s)
    return make_universe([a for a in letters if a != BOT], cands, level_bound)
