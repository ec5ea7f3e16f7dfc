"""Base-extension validity and consequence over a finite universe.

Two evaluators implement the same clauses.

``EvalContext`` computes, for a formula, a boolean table indexed by every base
mask of the universe at once.  The extension quantifier "for every c above b,
P(c) implies Q(c)" becomes: no superset of b lies in ``P & ~Q``.  That is
one superset-OR transform over the subset lattice.  Tables are memoized per
(selector, formula).

``NaiveEvaluator`` walks the clauses base by base, enumerating extensions
explicitly.  It exists to cross-check the table engine.
"""

from __future__ import annotations

from collections import Counter
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np

from .derive import Deriver
from .errors import UniverseMismatchError
from .rules import Universe, make_universe, rule_level
from .syntax import BOT, Atom, Conj, Disj, Formula, Imp, atoms_of

STANDARD = "standard"
SANDQVIST = "sandqvist"
_ALIASES = {
    "standard": STANDARD,
    "std": STANDARD,
    "alpha": STANDARD,
    "sandqvist": SANDQVIST,
    "sand": SANDQVIST,
}


def selector(name: str) -> str:
    try:
        return _ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown semantics {name!r}; use standard or sandqvist") from None


def restrict_level(u: Universe, n: int) -> Universe:
    """The sub-universe of candidates whose level is at most ``n``."""
    keep = [r for r in u.candidates if rule_level(r) <= n]
    return make_universe(u.alphabet, keep, n)


class EvalContext:
    def __init__(self, universe: Universe, deriver: Optional[Deriver] = None):
        self.universe = universe
        self.deriver = deriver or Deriver()
        self.stats: Counter = Counter()
        self._tables: Dict[Tuple[str, Formula], np.ndarray] = {}
        self._atoms: Optional[Dict[Atom, np.ndarray]] = None
        self._allowed = frozenset(universe.atoms)

    # -- plumbing ---------------------------------------------------------
    @property
    def n_bases(self) -> int:
        return 1 << self.universe.k

    def mask(self, b) -> int:
        if isinstance(b, int):
            if not 0 <= b < self.n_bases:
                raise UniverseMismatchError(f"mask {b} outside the universe")
            return b
        return self.universe.mask_of(b)

    def check_atoms(self, f: Formula):
        stray = atoms_of(f) - self._allowed
        if stray:
            names = ", ".join(sorted(a.name for a in stray))
            raise UniverseMismatchError(f"atoms outside the universe alphabet: {names}")

    def exists_superset(self, bad: np.ndarray) -> np.ndarray:
        """``out[m]`` is true when some superset of ``m`` (``m`` included) is in ``bad``."""
        k = self.universe.k
        self.stats["superset_sweeps"] += 1
        self.stats["extensions_visited"] += k * (1 << max(k - 1, 0))
        if k == 0:
            return bad.copy()
        x = bad.reshape((2,) * k).copy()
        for ax in range(k):
            lo = [slice(None)] * k
            hi = [slice(None)] * k
            lo[ax], hi[ax] = 0, 1
            x[tuple(lo)] |= x[tuple(hi)]
        return x.reshape(-1)

    def derivable_sets(self) -> List[FrozenSet[Atom]]:
        if self._atoms is None:
            self._build_atom_tables()
        return self._derivable

    def _build_atom_tables(self):
        u = self.universe
        letters = u.atoms
        tables = {a: np.zeros(self.n_bases, dtype=bool) for a in letters}
        derivable = []
        everything = frozenset(letters)
        for m in range(self.n_bases):
            got = self.deriver.derivable_atoms(u.rules_of(m))
            if BOT in got:
                got = everything
            derivable.append(got & everything)
            for a in got:
                if a in tables:
                    tables[a][m] = True
        self._derivable = derivable
        self._atoms = tables
        self.stats["derivability_checks"] += self.n_bases

    # -- tables -----------------------------------------------------------
    def table(self, sel: str, f: Formula) -> np.ndarray:
        sel = selector(sel)
        key = (sel, f) if _mentions_disjunction(f) else (STANDARD, f)
        hit = self._tables.get(key)
        if hit is not None:
            self.stats["cache_hits"] += 1
            return hit
        self.check_atoms(f)
        self.stats["tables_built"] += 1
        if isinstance(f, Atom):
            if self._atoms is None:
                self._build_atom_tables()
            out = self._atoms[f]
        elif isinstance(f, Conj):
            out = self.table(sel, f.left) & self.table(sel, f.right)
        elif isinstance(f, Imp):
            out = self.consequence_table(sel, [f.left], f.right)
        elif sel == STANDARD:
            out = self.table(sel, f.left) | self.table(sel, f.right)
        else:
            bad = np.zeros(self.n_bases, dtype=bool)
            for d in self.universe.atoms:
                bad |= (
                    self.table(sel, Imp(f.left, d))
                    & self.table(sel, Imp(f.right, d))
                    & ~self.table(sel, d)
                )
            out = ~self.exists_superset(bad)
        out.setflags(write=False)
        self._tables[key] = out
        return out

    def consequence_table(self, sel: str, gamma: Iterable[Formula], a: Formula) -> np.ndarray:
        gamma = list(gamma)
        if not gamma:
            return self.table(sel, a)
        prem = np.ones(self.n_bases, dtype=bool)
        for g in gamma:
            prem &= self.table(sel, g)
        return ~self.exists_superset(prem & ~self.table(sel, a))

    # -- queries ----------------------------------------------------------
    def valid(self, sel: str, b, a: Formula) -> bool:
        return bool(self.table(sel, a)[self.mask(b)])

    def consequence(self, sel: str, b, gamma: Iterable[Formula], a: Formula) -> bool:
        return bool(self.consequence_table(sel, gamma, a)[self.mask(b)])

    def logical_consequence(self, sel: str, gamma: Iterable[Formula], a: Formula) -> bool:
        return self.consequence(sel, 0, gamma, a)

    def frontier(self, table: np.ndarray) -> List[int]:
        """Minimal masks at which a monotone table is true."""
        out = []
        for m in np.flatnonzero(table):
            m = int(m)
            if all(not table[m & ~(1 << i)] for i in range(self.universe.k) if m >> i & 1):
                out.append(m)
        return out


def _mentions_disjunction(f: Formula) -> bool:
    if isinstance(f, Atom):
        return False
    if isinstance(f, Disj):
        return True
    return _mentions_disjunction(f.left) or _mentions_disjunction(f.right)


# module-level API -----------------------------------------------------------


def valid(ctx: EvalContext, sel: str, b, a: Formula) -> bool:
    return ctx.valid(sel, b, a)


def consequence(ctx: EvalContext, sel: str, b, gamma: Iterable[Formula], a: Formula) -> bool:
    return ctx.consequence(sel, b, gamma, a)


def logical_consequence(ctx: EvalContext, sel: str, gamma: Iterable[Formula], a: Formula) -> bool:
    return ctx.logical_consequence(sel, gamma, a)


def alpha_consequence(ctx: EvalContext, b, gamma: Iterable[Formula], a: Formula) -> bool:
    """Consequence in the reducibility dialect; coincides with the standard relation."""
    return ctx.consequence(STANDARD, b, gamma, a)


class NaiveEvaluator:
    """Clause-by-clause evaluation at one base at a time.

    ``memo=False`` disables every cache except derivability.
    """

    def __init__(self, universe: Universe, memo: bool = True, deriver: Optional[Deriver] = None):
        self.universe = universe
        self.deriver = deriver or Deriver()
        self.memo = {} if memo else None
        self.visits = 0
        self._ext: Dict[int, List[int]] = {}

    def _extensions(self, m: int) -> List[int]:
        hit = self._ext.get(m)
        if hit is None:
            hit = list(self.universe.superset_masks(m))
            self._ext[m] = hit
        return hit

    def derivable(self, m: int, a: Atom) -> bool:
        got = self.deriver.derivable_atoms(self.universe.rules_of(m))
        return a in got or BOT in got

    def valid(self, sel: str, m: int, f: Formula) -> bool:
        sel = selector(sel)
        if self.memo is not None:
            key = (sel, m, f)
            if key in self.memo:
                return self.memo[key]
        if isinstance(f, Atom):
            out = self.derivable(m, f)
        elif isinstance(f, Conj):
            out = self.valid(sel, m, f.left) and self.valid(sel, m, f.right)
        elif isinstance(f, Imp):
            out = self.consequence(sel, m, [f.left], f.right)
        elif sel == STANDARD:
            out = self.valid(sel, m, f.left) or self.valid(sel, m, f.right)
        else:
            out = True
            for c in self._extensions(m):
                self.visits += 1
                for d in self.universe.atoms:
                    if (
                        self.consequence(sel, c, [f.left], d)
                        and self.consequence(sel, c, [f.right], d)
                        and not self.valid(sel, c, d)
                    ):
                        out = False
                        break
                if not out:
                    break
        if self.memo is not None:
            self.memo[(sel, m, f)] = out
        return out

    def consequence(self, sel: str, m: int, gamma: Iterable[Formula], a: Formula) -> bool:
        gamma = list(gamma)
        if not gamma:
            return self.valid(sel, m, a)
        for c in self._extensions(m):
            self.visits += 1
            if all(self.valid(sel, c, g) for g in gamma) and not self.valid(sel, c, a):
                return False
        return True
