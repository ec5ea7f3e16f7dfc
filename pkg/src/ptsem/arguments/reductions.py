"""Reductions on argument structures and reduction search.

A reduction is a partial map from structures to structures.  It must keep
the conclusion and must not introduce open assumptions; ``reduce_step``
checks both on every application and raises ``ContractViolation``
otherwise.  A justification is a set of reductions.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

from ..errors import ContractViolation
from ..syntax import Conj, print_formula
from .structure import INTRO_RULES, ArgumentStructure, assume, fresh_label, infer, replace_label

# counts every application whose contract was checked; read by reports
STATS: Counter = Counter()


@dataclass(frozen=True)
class Reduction:
    name: str
    applies: Callable[[ArgumentStructure], bool] = field(compare=False)
    transform: Callable[[ArgumentStructure], ArgumentStructure] = field(compare=False)
    constructive: bool = True

    def __call__(self, node: ArgumentStructure) -> Optional[ArgumentStructure]:
        return self.transform(node) if self.applies(node) else None


@dataclass(frozen=True)
class Justification:
    reductions: Tuple[Reduction, ...] = ()

    def __post_init__(self):
        seen = {}
        for r in self.reductions:
            seen.setdefault(r.name, r)
        object.__setattr__(self, "reductions", tuple(seen[k] for k in sorted(seen)))

    def __or__(self, other: "Justification") -> "Justification":
        return Justification(self.reductions + other.reductions)

    def __iter__(self):
        return iter(self.reductions)

    def __len__(self):
        return len(self.reductions)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(r.name for r in self.reductions)

    @property
    def constructive(self) -> bool:
        return all(r.constructive for r in self.reductions)


# -- standard detour reductions -----------------------------------------------


def _and_applies(n):
    return n.rule in ("andE1", "andE2") and n.children[0].rule == "andI"


def _and_transform(n):
    return n.children[0].children[0 if n.rule == "andE1" else 1]


def _imp_applies(n):
    return n.rule == "impE" and n.children[0].rule == "impI"


def _imp_transform(n):
    intro, arg = n.children
    body = intro.children[0]
    for lab in intro.discharges:
        body = replace_label(body, lab, arg)
    return body


def _or_applies(n):
    return n.rule == "orE" and n.children[0].rule in ("orI1", "orI2")


def _or_transform(n):
    intro = n.children[0]
    minor = n.children[1] if intro.rule == "orI1" else n.children[2]
    arg = intro.children[0]
    for lab in n.discharges:
        minor = replace_label(minor, lab, arg)
    return minor


AND_DETOUR = Reduction("and-detour", _and_applies, _and_transform)
IMP_DETOUR = Reduction("imp-detour", _imp_applies, _imp_transform)
OR_DETOUR = Reduction("or-detour", _or_applies, _or_transform)
STANDARD = Justification((AND_DETOUR, IMP_DETOUR, OR_DETOUR))


# -- reductions for the two extra inferences --------------------------------------


def _wk_applies(n):
    return n.rule == "Wk" and n.children[0].rule == "impI"


def _wk_transform(n):
    intro = n.children[0]
    strong = n.formula.left  # A /\ C
    lab = fresh_label()
    body = intro.children[0]
    for old in intro.discharges:
        body = replace_label(body, old, infer("andE1", strong.left, assume(strong, lab)))
    return infer("impI", n.formula, body, discharges=(lab,))


def _orl_applies(n):
    return n.rule == "orL" and n.children[0].rule == "orI1"


def _orl_transform(n):
    return n.children[0].children[0]


WK_REDUCTION = Reduction("wk", _wk_applies, _wk_transform)
ORL_REDUCTION = Reduction("orl", _orl_applies, _orl_transform)


def oracle_reduction(source: ArgumentStructure, target: ArgumentStructure, name: str = "oracle") -> Reduction:
    """Rewrite one fixed structure (up to relabelling) to another; not constructive."""
    key = source.key()
    return Reduction(name, lambda n: n.key() == key, lambda n: target, constructive=False)


def inflating_reduction(rule_name: str) -> Reduction:
    """Wraps every ``rule_name`` node in an and-detour; generates unboundedly many reducts."""

    def transform(n):
        return infer("andE1", n.formula, infer("andI", Conj(n.formula, n.formula), n, n))

    return Reduction(f"inflate-{rule_name}", lambda n: n.rule == rule_name, transform)


def justification(*reductions: Reduction) -> Justification:
    return Justification(tuple(reductions))


# -- stepping and search -------------------------------------------------------------


def _check_contract(phi: Reduction, before: ArgumentStructure, after: ArgumentStructure):
    STATS["contract_checks"] += 1
    if after.formula != before.formula:
        raise ContractViolation(
            f"{phi.name} changed the conclusion from {print_formula(before.formula)} to {print_formula(after.formula)}"
        )
    extra = after.assumptions() - before.assumptions()
    if extra:
        shown = ", ".join(sorted(print_formula(f) for f in extra))
        raise ContractViolation(f"{phi.name} introduced open assumptions: {shown}")


def _apply_at(d, addr, node, phi):
    out = phi.transform(node)
    _check_contract(phi, node, out)
    return d.replace_at(addr, out)


def reduce_step(d: ArgumentStructure, j: Justification) -> List[ArgumentStructure]:
    """Every one-step reduct, in pre-order of the redex position, without duplicates."""
    out = []
    seen = set()
    for addr, node in d.walk():
        for phi in j:
            if phi.applies(node):
                new = _apply_at(d, addr, node, phi)
                k = new.key()
                if k not in seen:
                    seen.add(k)
                    out.append(new)
    return out


def first_reduct(d: ArgumentStructure, j: Justification) -> Optional[ArgumentStructure]:
    """The leftmost-outermost one-step reduct, or ``None`` in normal form."""
    for addr, node in d.walk():
        for phi in j:
            if phi.applies(node):
                return _apply_at(d, addr, node, phi)
    return None


def is_canonical(d: ArgumentStructure) -> bool:
    return d.rule in INTRO_RULES


@dataclass(frozen=True)
class SearchResult:
    status: str  # found, exhausted or bound
    path: Tuple[ArgumentStructure, ...] = ()
    explored: int = 0

    @property
    def found(self) -> bool:
        return self.status == "found"

    @property
    def target(self) -> Optional[ArgumentStructure]:
        return self.path[-1] if self.path else None


def reduces_to(
    d: ArgumentStructure,
    j: Justification,
    predicate: Callable[[ArgumentStructure], bool],
    max_states: int = 2000,
    max_size: int = 400,
) -> SearchResult:
    """Breadth-first search for a reduct (``d`` itself included) satisfying ``predicate``.

    ``exhausted`` means every reduct was examined; ``bound`` means the search
    stopped at a limit with reducts left unexamined.
    """
    parent = {d.key(): None}
    nodes = {d.key(): d}
    frontier = [d]
    explored = 0
    truncated = False
    while frontier:
        nxt = []
        for cur in frontier:
            explored += 1
            if predicate(cur):
                path = [cur]
                k = parent[cur.key()]
                while k is not None:
                    path.append(nodes[k])
                    k = parent[k]
                return SearchResult("found", tuple(reversed(path)), explored)
            if explored >= max_states:
                return SearchResult("bound", (), explored)
            for red in reduce_step(cur, j):
                k = red.key()
                if k in parent:
                    continue
                if red.size() > max_size:
                    truncated = True
                    continue
                parent[k] = cur.key()
                nodes[k] = red
                nxt.append(red)
        frontier = sorted(nxt, key=lambda x: (x.size(), x.key()))
    return SearchResult("bound" if truncated else "exhausted", (), explored)


def normalize(d: ArgumentStructure, j: Justification, max_steps: int = 10_000) -> Tuple[ArgumentStructure, int, bool]:
    """Leftmost-outermost reduction; returns (result, steps, reached_normal_form)."""
    cur = d
    for steps in range(max_steps):
        nxt = first_reduct(cur, j)
        if nxt is None:
            return cur, steps, True
        cur = nxt
    return cur, max_steps, False
