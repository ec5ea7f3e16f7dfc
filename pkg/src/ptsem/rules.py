"""Rule levels, bases, rule schemes and finite universes of candidate rules.

A universe fixes the finite set of rules that extension quantifiers range
over.  A base inside a universe is identified with a bit mask over the
candidate list; bit ``i`` set means candidate ``i`` is in the base.  The
explosion rules ``bot => A`` are implicit in every base and never stored.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, Optional, Tuple

from .errors import LevelBoundError, UniverseMismatchError
from .syntax import (
    BOT,
    Atom,
    AtomicRule,
    Premise,
    parse_rules_file,
    substitute_atoms,
)


def rule_level(r: AtomicRule) -> int:
    if not r.premises:
        return 0
    discharged = [d for p in r.premises for d in p.discharged]
    if not discharged:
        return 1
    return 2 + max(rule_level(d) for d in discharged)


def is_atexp(r: AtomicRule) -> bool:
    return (
        len(r.premises) == 1
        and not r.premises[0].discharged
        and r.premises[0].atom == BOT
    )


def atexp_rule(a: Atom) -> AtomicRule:
    return AtomicRule((Premise(frozenset(), BOT),), a)


def _sorted_atoms(atoms: Iterable[Atom]) -> Tuple[Atom, ...]:
    return tuple(sorted(set(atoms) - {BOT}, key=lambda a: a.name))


@dataclass(frozen=True)
class Base:
    """A finite atomic base.  ``rules`` never contains explosion rules."""

    rules: FrozenSet[AtomicRule]
    alphabet: FrozenSet[Atom]

    @property
    def level(self) -> int:
        return max((rule_level(r) for r in self.rules), default=0)

    @property
    def atoms(self) -> FrozenSet[Atom]:
        return self.alphabet | {BOT}

    def atexp(self) -> FrozenSet[AtomicRule]:
        return frozenset(atexp_rule(a) for a in self.alphabet)

    def all_rules(self) -> FrozenSet[AtomicRule]:
        return self.rules | self.atexp()

    def __contains__(self, r: AtomicRule) -> bool:
        return r in self.rules or (is_atexp(r) and r.conclusion in self.atoms)

    def text(self) -> str:
        return "{" + ", ".join(sorted(r.text() for r in self.rules)) + "}"


def make_base(rules: Iterable[AtomicRule], alphabet: Iterable[Atom] = (), bound: Optional[int] = None) -> Base:
    rs = frozenset(r for r in rules if not is_atexp(r))
    alpha = set(alphabet)
    for r in rs:
        alpha |= r.atoms()
    b = Base(rs, frozenset(alpha - {BOT}))
    if bound is not None and b.level > bound:
        raise LevelBoundError(f"base level {b.level} exceeds declared bound {bound}")
    return b


@dataclass(frozen=True)
class RuleScheme:
    """A rule template whose placeholder atoms range over an alphabet (``bot`` included)."""

    name: str
    template: AtomicRule
    placeholders: Tuple[Atom, ...]

    def instantiate(self, atoms: Iterable[Atom]) -> Tuple[AtomicRule, ...]:
        pool = sorted(set(atoms) | {BOT}, key=lambda a: (a == BOT, a.name))
        out = []
        for combo in itertools.product(pool, repeat=len(self.placeholders)):
            r = substitute_atoms(self.template, dict(zip(self.placeholders, combo)))
            if r not in out:
                out.append(r)
        return tuple(out)


def _popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class Universe:
    """Finite carrier: an alphabet, an ordered candidate list and a level bound."""

    alphabet: FrozenSet[Atom]
    candidates: Tuple[AtomicRule, ...]
    level_bound: int
    schemes: Tuple[Tuple[str, FrozenSet[int]], ...] = ()
    scheme_defs: Tuple[RuleScheme, ...] = field(default=(), compare=False)
    _index: Dict[AtomicRule, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {r: i for i, r in enumerate(self.candidates)})

    def __hash__(self):
        return hash((self.alphabet, self.candidates, self.level_bound))

    @property
    def k(self) -> int:
        return len(self.candidates)

    @property
    def full_mask(self) -> int:
        return (1 << self.k) - 1

    @property
    def atoms(self) -> Tuple[Atom, ...]:
        """Alphabet atoms in name order, followed by ``bot``."""
        return _sorted_atoms(self.alphabet) + (BOT,)

    def index(self, r: AtomicRule) -> int:
        try:
            return self._index[r]
        except KeyError:
            raise UniverseMismatchError(f"rule {r.text()} is not a candidate of the universe") from None

    def mask_of(self, b) -> int:
        """Bit mask of a base (or of any iterable of rules)."""
        rules = b.rules if isinstance(b, Base) else b
        m = 0
        for r in rules:
            if is_atexp(r):
                continue
            m |= 1 << self.index(r)
        return m

    def rules_of(self, mask: int) -> FrozenSet[AtomicRule]:
        return frozenset(r for i, r in enumerate(self.candidates) if mask >> i & 1)

    def base_of(self, mask: int) -> Base:
        return Base(self.rules_of(mask), self.alphabet)

    @property
    def empty_base(self) -> Base:
        return Base(frozenset(), self.alphabet)

    def superset_masks(self, mask: int) -> Iterator[int]:
        """Every mask containing ``mask``, smaller sets first."""
        free = [i for i in range(self.k) if not mask >> i & 1]
        extras = []
        for bits in itertools.product((0, 1), repeat=len(free)):
            m = mask
            for i, bit in zip(free, bits):
                if bit:
                    m |= 1 << i
            extras.append(m)
        extras.sort(key=lambda m: (_popcount(m), m))
        return iter(extras)

    def scheme_instances(self) -> Dict[str, FrozenSet[AtomicRule]]:
        return {name: frozenset(self.candidates[i] for i in idx) for name, idx in self.schemes}

    def describe(self) -> dict:
        return {
            "alphabet": [a.name for a in _sorted_atoms(self.alphabet)],
            "level_bound": self.level_bound,
            "candidates": [r.text() for r in self.candidates],
        }


def make_universe(
    alphabet: Iterable[Atom] = (),
    candidates: Iterable[AtomicRule] = (),
    level_bound: Optional[int] = None,
    schemes: Iterable[RuleScheme] = (),
) -> Universe:
    declared = set(alphabet) - {BOT}
    cands = []
    for r in candidates:
        if not is_atexp(r) and r not in cands:
            cands.append(r)
    alpha = set(declared)
    if not declared:
        for r in cands:
            alpha |= r.atoms()
        for s in schemes:
            alpha |= s.template.atoms() - set(s.placeholders)
        alpha -= {BOT}
    provenance = []
    for s in schemes:
        idx = set()
        for r in s.instantiate(alpha):
            if r not in cands:
                cands.append(r)
            idx.add(cands.index(r))
        provenance.append((s.name, frozenset(idx)))
    allowed = alpha | {BOT}
    for r in cands:
        stray = r.atoms() - allowed
        if stray:
            names = ", ".join(sorted(a.name for a in stray))
            raise UniverseMismatchError(f"candidate {r.text()} mentions atoms outside the alphabet: {names}")
    top = max((rule_level(r) for r in cands), default=0)
    bound = top if level_bound is None else level_bound
    for r in cands:
        if rule_level(r) > bound:
            raise LevelBoundError(f"candidate {r.text()} has level {rule_level(r)} > bound {bound}")
    return Universe(frozenset(alpha), tuple(cands), bound, tuple(provenance), tuple(schemes))


def enumerate_extensions(u: Universe, b: Base) -> Iterator[Base]:
    mask = u.mask_of(b)
    for m in u.superset_masks(mask):
        yield u.base_of(m)


# ---------------------------------------------------------------------------
# files


def _text(src) -> str:
    if isinstance(src, Path) or (isinstance(src, str) and "\n" not in src and Path(src).is_file()):
        return Path(src).read_text(encoding="utf-8")
    return src


def _schemes(spec) -> list:
    return [RuleScheme(s.name, s.template, s.placeholders) for s in spec]


def load_universe(src) -> Universe:
    """Universe from a file path or file text."""
    spec = parse_rules_file(_text(src))
    return make_universe(spec.alphabet, spec.rules, spec.level, _schemes(spec.schemes))


def load_base(src, universe: Optional[Universe] = None) -> Base:
    """Base from a file path or file text; schemes instantiate over the base's alphabet."""
    spec = parse_rules_file(_text(src))
    alpha = set(spec.alphabet)
    if universe is not None:
        alpha |= universe.alphabet
    for r in spec.rules:
        alpha |= r.atoms()
    rules = list(spec.rules)
    for s in _schemes(spec.schemes):
        scheme_alpha = alpha | (s.template.atoms() - set(s.placeholders))
        rules.extend(s.instantiate(scheme_alpha - {BOT}))
    b = make_base(rules, alpha, spec.level)
    if universe is not None:
        universe.mask_of(b)
        b = Base(b.rules, universe.alphabet)
    return b


def load_rules(src) -> FrozenSet[AtomicRule]:
    """A plain rule set (used for assumed-rule files)."""
    return frozenset(parse_rules_file(_text(src)).rules)
