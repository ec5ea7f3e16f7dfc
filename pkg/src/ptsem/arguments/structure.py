"""Argument structures: formula-labelled trees with discharge links.

Each node carries the name of the inference that produced it.  Leaves are
either assumptions (``assume``) or axioms (``axiom``, an atom used as a
level-0 rule).  Discharge is expressed with integer labels: a labelled leaf,
or a labelled atomic-rule application, is discharged by the nearest ancestor
whose ``discharges`` set contains the label.  A label with no such ancestor
is open.  ``discharge_maps`` turns the labels into the three address maps
(assumptions, axioms, rule applications to discharging node).

Text format, one node per line, children indented by two spaces::

    (impI "p -> p" :discharge (1)
      (assume "p" :label 1))

Keys: ``:label N``, ``:discharge (N ...)``, ``:rule "RULE"`` (the atomic rule
applied at an ``atomic`` node).  Formulas and rules use the ordinary text
syntax inside double quotes.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Tuple

from ..errors import ConclusionMismatchError, IllFormedDerivation, ParseError
from ..syntax import Atom, AtomicRule, Formula, parse_formula, parse_rule, print_formula

LEAF_RULES = ("assume", "axiom")
INTRO_RULES = ("andI", "orI1", "orI2", "impI")
KNOWN_RULES = LEAF_RULES + INTRO_RULES + (
    "andE1", "andE2", "orE", "impE", "atomic", "Wk", "orL",
)

_fresh = itertools.count(1_000_000)


def fresh_label() -> int:
    return next(_fresh)


Address = Tuple[int, ...]


@dataclass(frozen=True)
class ArgumentStructure:
    formula: Formula
    rule: str
    children: Tuple["ArgumentStructure", ...] = ()
    label: Optional[int] = None
    discharges: FrozenSet[int] = frozenset()
    atomic: Optional[AtomicRule] = None
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        object.__setattr__(self, "discharges", frozenset(self.discharges))
        object.__setattr__(
            self,
            "_hash",
            hash((self.formula, self.rule, self.children, self.label, self.discharges, self.atomic)),
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"<{self.rule} {print_formula(self.formula)}>"

    # -- basic views ------------------------------------------------------
    @property
    def conclusion(self) -> Formula:
        return self.formula

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def walk(self, addr: Address = ()) -> Iterator[Tuple[Address, "ArgumentStructure"]]:
        """Pre-order traversal with tree addresses."""
        yield addr, self
        for i, c in enumerate(self.children):
            yield from c.walk(addr + (i,))

    def at(self, addr: Address) -> "ArgumentStructure":
        node = self
        for i in addr:
            node = node.children[i]
        return node

    def replace_at(self, addr: Address, new: "ArgumentStructure") -> "ArgumentStructure":
        if not addr:
            return new
        i = addr[0]
        kids = list(self.children)
        kids[i] = kids[i].replace_at(addr[1:], new)
        return _with(self, children=tuple(kids))

    # -- discharge bookkeeping --------------------------------------------
    def _labelled(self, bound: FrozenSet[int]) -> Iterator[Tuple["ArgumentStructure", bool]]:
        """Yield (labelled node, is_bound) pairs for leaves and rule applications."""
        if self.label is not None:
            yield self, self.label in bound
        inner = bound | self.discharges
        for c in self.children:
            yield from c._labelled(inner)

    def open_assumption_nodes(self) -> List["ArgumentStructure"]:
        out = []
        stack = [(self, frozenset())]
        while stack:
            node, bound = stack.pop()
            if node.rule == "assume" and (node.label is None or node.label not in bound):
                out.append(node)
            inner = bound | node.discharges
            stack.extend((c, inner) for c in node.children)
        return out

    def assumptions(self) -> FrozenSet[Formula]:
        """Formulas of undischarged assumption leaves."""
        return frozenset(n.formula for n in self.open_assumption_nodes())

    @property
    def is_closed(self) -> bool:
        return not self.open_assumption_nodes()

    def free_labels(self) -> FrozenSet[int]:
        return frozenset(n.label for n, ok in self._labelled(frozenset()) if not ok)

    def discharge_maps(self):
        """Address maps for assumption leaves, axiom leaves and rule applications."""
        f: Dict[Address, Address] = {}
        h: Dict[Address, Address] = {}
        g: Dict[Address, Address] = {}

        def go(node, addr, env):
            if node.label is not None and node.label in env:
                target = env[node.label]
                if node.rule == "assume":
                    f[addr] = target
                elif node.rule == "axiom":
                    h[addr] = target
                else:
                    g[addr] = target
            inner = dict(env)
            for lab in node.discharges:
                inner[lab] = addr
            for i, c in enumerate(node.children):
                go(c, addr + (i,), inner)

        go(self, (), {})
        return f, h, g

    def check_wellformed(self) -> None:
        """Structural conditions on the discharge maps (raise on violation)."""
        f, h, g = self.discharge_maps()
        for src, dst in itertools.chain(f.items(), h.items(), g.items()):
            if not (len(dst) < len(src) and src[: len(dst)] == dst):
                raise IllFormedDerivation(f"discharge target {dst} is not below {src}", self.at(src))
        rule_targets = set(h.values()) | set(g.values())
        for src in itertools.chain(h, g):
            node = self.at(src)
            if not isinstance(node.formula, Atom):
                raise IllFormedDerivation("discharged rule use must be atom-labelled", node)
            if any(not isinstance(c.formula, Atom) for c in node.children):
                raise IllFormedDerivation("discharged rule application must have atomic premises", node)
        for dst in rule_targets:
            node = self.at(dst)
            if not isinstance(node.formula, Atom) or any(not isinstance(c.formula, Atom) for c in node.children):
                raise IllFormedDerivation("rule discharge must happen at an atomic inference", node)
        if rule_targets & set(f.values()):
            raise IllFormedDerivation("a node discharges both assumptions and rules", None)
        for addr, node in self.walk():
            if node.rule in LEAF_RULES and node.children:
                raise IllFormedDerivation(f"{node.rule} node has children", node)
            if node.label is not None and node.rule not in ("assume", "axiom", "atomic"):
                raise IllFormedDerivation("only leaves and atomic applications carry labels", node)

    # -- identity up to renaming of labels --------------------------------
    def canonical(self) -> "ArgumentStructure":
        cached = self.__dict__.get("_canon")
        if cached is not None:
            return cached
        out = _canonicalize(self)
        object.__setattr__(self, "_canon", out)
        return out

    def key(self) -> str:
        cached = self.__dict__.get("_key")
        if cached is None:
            cached = dumps(self.canonical(), indent=None)
            object.__setattr__(self, "_key", cached)
        return cached

    def same_as(self, other: "ArgumentStructure") -> bool:
        return self.key() == other.key()


def _with(node: ArgumentStructure, **changes) -> ArgumentStructure:
    data = dict(
        formula=node.formula,
        rule=node.rule,
        children=node.children,
        label=node.label,
        discharges=node.discharges,
        atomic=node.atomic,
    )
    data.update(changes)
    return ArgumentStructure(**data)


# -- constructors ------------------------------------------------------------


def assume(f: Formula, label: Optional[int] = None) -> ArgumentStructure:
    return ArgumentStructure(f, "assume", (), label)


def axiom_leaf(a: Atom, label: Optional[int] = None) -> ArgumentStructure:
    return ArgumentStructure(a, "axiom", (), label, frozenset(), AtomicRule((), a))


def infer(rule: str, f: Formula, *children, discharges=(), atomic=None, label=None) -> ArgumentStructure:
    return ArgumentStructure(f, rule, tuple(children), label, frozenset(discharges), atomic)


# -- relabelling and grafting ------------------------------------------------


def freshen(node: ArgumentStructure) -> ArgumentStructure:
    """Rename every label bound inside ``node``; free labels are untouched."""

    def go(n, env):
        inner = env
        disc = n.discharges
        if disc:
            inner = dict(env)
            new = []
            for lab in sorted(disc):
                inner[lab] = fresh_label()
                new.append(inner[lab])
            disc = frozenset(new)
        lab = env.get(n.label, n.label) if n.label is not None else None
        kids = tuple(go(c, inner) for c in n.children)
        if kids == n.children and disc == n.discharges and lab == n.label:
            return n
        return _with(n, children=kids, discharges=disc, label=lab)

    return go(node, {})


def replace_label(node: ArgumentStructure, label: int, graft: ArgumentStructure) -> ArgumentStructure:
    """Put a fresh copy of ``graft`` at every assumption leaf carrying ``label``."""

    def go(n):
        if n.rule == "assume" and n.label == label:
            return freshen(graft)
        if label in n.discharges:
            return n
        if not n.children:
            return n
        kids = tuple(go(c) for c in n.children)
        if all(a is b for a, b in zip(kids, n.children)):
            return n
        return _with(n, children=kids)

    return go(node)


def substitute(d: ArgumentStructure, sigma: Mapping[Formula, ArgumentStructure]) -> ArgumentStructure:
    """Replace every open assumption leaf whose formula is in ``sigma``."""
    for mu, rep in sigma.items():
        if rep.formula != mu:
            raise ConclusionMismatchError(
                f"replacement concludes {print_formula(rep.formula)}, expected {print_formula(mu)}"
            )
    if not sigma:
        return d

    def go(n, bound):
        if n.rule == "assume" and n.formula in sigma and (n.label is None or n.label not in bound):
            return freshen(sigma[n.formula])
        if not n.children:
            return n
        inner = bound | n.discharges
        kids = tuple(go(c, inner) for c in n.children)
        if all(a is b for a, b in zip(kids, n.children)):
            return n
        return _with(n, children=kids)

    return go(d, frozenset())


def _canonicalize(node: ArgumentStructure) -> ArgumentStructure:
    # number bound labels by first reference in pre-order; free labels keep a
    # separate numbering; unused discharge labels vanish
    binder_of: Dict[Tuple[Address, int], int] = {}
    free_of: Dict[int, int] = {}
    order = []

    def scan(n, addr, env):
        if n.label is not None:
            if n.label in env:
                k = (env[n.label], n.label)
                if k not in binder_of:
                    binder_of[k] = len(binder_of) + 1
                    order.append(k)
            elif n.label not in free_of:
                free_of[n.label] = -(len(free_of) + 1)
        inner = dict(env)
        for lab in n.discharges:
            inner[lab] = addr
        for i, c in enumerate(n.children):
            scan(c, addr + (i,), inner)

    scan(node, (), {})

    def build(n, addr, env):
        lab = None
        if n.label is not None:
            lab = binder_of[(env[n.label], n.label)] if n.label in env else free_of[n.label]
        inner = dict(env)
        for l in n.discharges:
            inner[l] = addr
        disc = frozenset(binder_of[(addr, l)] for l in n.discharges if (addr, l) in binder_of)
        kids = tuple(build(c, addr + (i,), inner) for i, c in enumerate(n.children))
        return ArgumentStructure(n.formula, n.rule, kids, lab, disc, n.atomic)

    return build(node, (), {})


# -- text format ---------------------------------------------------------------


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def dumps(node: ArgumentStructure, indent: Optional[int] = 2) -> str:
    def head(n):
        parts = [n.rule, _quote(print_formula(n.formula))]
        if n.rule == "atomic" and n.atomic is not None:
            parts += [":rule", _quote(n.atomic.text())]
        if n.label is not None:
            parts += [":label", str(n.label)]
        if n.discharges:
            parts += [":discharge", "(" + " ".join(str(x) for x in sorted(n.discharges)) + ")"]
        return " ".join(parts)

    if indent is None:
        def flat(n):
            inner = " ".join([head(n)] + [flat(c) for c in n.children])
            return f"({inner})"
        return flat(node)

    lines = []

    def go(n, depth):
        pad = " " * (indent * depth)
        if not n.children:
            lines.append(f"{pad}({head(n)})")
            return
        lines.append(f"{pad}({head(n)}")
        for c in n.children:
            go(c, depth + 1)
        lines[-1] += ")"

    go(node, 0)
    return "\n".join(lines)


_TOKEN = re.compile(r'\s*(?:(\()|(\))|"((?:[^"\\]|\\.)*)"|(:[A-Za-z_]+)|(-?\d+)|([A-Za-z][A-Za-z0-9_]*))')


def _sexpr_tokens(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        if text[pos] == "#":
            nl = text.find("\n", pos)
            pos = len(text) if nl < 0 else nl + 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ParseError("unreadable structure text", text, pos + 1)
        kinds = ("LP", "RP", "STR", "KEY", "INT", "NAME")
        for kind, val in zip(kinds, m.groups()):
            if val is not None:
                if kind == "STR":
                    val = re.sub(r"\\(.)", r"\1", val)
                out.append((kind, val, m.start(0) + 1))
                break
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def loads(text: str) -> ArgumentStructure:
    toks = _sexpr_tokens(text)
    i = 0

    def expect(kind):
        nonlocal i
        if i >= len(toks) or toks[i][0] != kind:
            where = toks[i][2] if i < len(toks) else len(text) + 1
            raise ParseError(f"expected {kind}", text, where)
        i += 1
        return toks[i - 1][1]

    def node():
        nonlocal i
        expect("LP")
        rule = expect("NAME")
        formula = parse_formula(expect("STR"))
        label, disc, atomic = None, frozenset(), None
        while i < len(toks) and toks[i][0] == "KEY":
            key = toks[i][1]
            i += 1
            if key == ":label":
                label = int(expect("INT"))
            elif key == ":rule":
                atomic = parse_rule(expect("STR"))
            elif key == ":discharge":
                expect("LP")
                labs = []
                while i < len(toks) and toks[i][0] == "INT":
                    labs.append(int(toks[i][1]))
                    i += 1
                expect("RP")
                disc = frozenset(labs)
            else:
                raise ParseError(f"unknown key {key}", text, toks[i - 1][2])
        kids = []
        while i < len(toks) and toks[i][0] == "LP":
            kids.append(node())
        expect("RP")
        if rule == "axiom" and atomic is None and isinstance(formula, Atom):
            atomic = AtomicRule((), formula)
        return ArgumentStructure(formula, rule, tuple(kids), label, disc, atomic)

    out = node()
    if i != len(toks):
        raise ParseError("trailing text after structure", text, toks[i][2])
    return out
