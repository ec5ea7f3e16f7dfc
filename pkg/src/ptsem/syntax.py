"""Formulas, atomic rules, and their concrete text formats.

Formula text uses ASCII connectives ``/\\``, ``\\/``, ``->``, ``~`` and the
constant ``bot``.  Precedence from tightest to loosest is negation,
conjunction, disjunction, implication; implication associates to the right,
conjunction and disjunction to the left.  ``~A`` is sugar for ``A -> bot``
and never survives parsing.  The Unicode spellings are accepted on input.

Rules are written ``(premise, ..., premise => conclusion)`` where a premise
is an atom optionally preceded by a bracketed, ``;``-separated list of
discharged rules: ``(a, [b] d, [c] d => d)``.  A bare atom is an axiom.
"""

from __future__ import annotations

import re
import zlib
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Iterator, Optional, Tuple, Union

from .errors import NonAtomicError, ParseError, ReservedNameError

BOT_NAME = "bot"
_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


# ---------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True, repr=False)
class Atom:
    name: str
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", zlib.crc32(self.name.encode("utf-8")))

    def __hash__(self):
        return self._hash

    def __str__(self):
        return print_formula(self)

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True, repr=False)
class _Binary:
    left: "Formula"
    right: "Formula"
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self._tag, self.left, self.right)))

    def __hash__(self):
        return self._hash

    def __str__(self):
        return print_formula(self)

    def __repr__(self):
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Conj(_Binary):
    _tag = 1
    __hash__ = _Binary.__hash__


@dataclass(frozen=True, eq=True, repr=False)
class Disj(_Binary):
    _tag = 2
    __hash__ = _Binary.__hash__


@dataclass(frozen=True, eq=True, repr=False)
class Imp(_Binary):
    _tag = 3
    __hash__ = _Binary.__hash__


Formula = Union[Atom, Conj, Disj, Imp]
BOT = Atom(BOT_NAME)


def neg(f: Formula) -> Imp:
    return Imp(f, BOT)


def conj_all(parts: Iterable[Formula]) -> Formula:
    """Left-nested conjunction of a non-empty sequence."""
    it = iter(parts)
    acc = next(it)
    for p in it:
        acc = Conj(acc, p)
    return acc


def conjuncts(f: Formula) -> list:
    """Flatten nested conjunctions, left to right."""
    if isinstance(f, Conj):
        return conjuncts(f.left) + conjuncts(f.right)
    return [f]


def atoms_of(f: Formula) -> FrozenSet[Atom]:
    if isinstance(f, Atom):
        return frozenset([f])
    return atoms_of(f.left) | atoms_of(f.right)


def size(f: Formula) -> int:
    if isinstance(f, Atom):
        return 1
    return 1 + size(f.left) + size(f.right)


def depth(f: Formula) -> int:
    """Tree height counting an atom as depth 1."""
    if isinstance(f, Atom):
        return 1
    return 1 + max(depth(f.left), depth(f.right))


def has_disjunction(f: Formula) -> bool:
    if isinstance(f, Atom):
        return False
    if isinstance(f, Disj):
        return True
    return has_disjunction(f.left) or has_disjunction(f.right)


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if not isinstance(f, Atom):
        yield from subformulas(f.left)
        yield from subformulas(f.right)


# ---------------------------------------------------------------------------
# Atomic rules


@dataclass(frozen=True)
class Premise:
    """One premise slot: derive ``atom`` with ``discharged`` rules available."""

    discharged: FrozenSet["AtomicRule"]
    atom: Atom

    def text(self) -> str:
        if not self.discharged:
            return self.atom.name
        inner = "; ".join(sorted(r.text() for r in self.discharged))
        return f"[{inner}] {self.atom.name}"

    @property
    def key(self) -> str:
        """Canonical text, independent of premise order at every depth."""
        if not self.discharged:
            return self.atom.name
        inner = "; ".join(sorted(r.key for r in self.discharged))
        return f"[{inner}] {self.atom.name}"


@dataclass(frozen=True, eq=False)
class AtomicRule:
    """An atomic rule; equality ignores the order of premises."""

    premises: Tuple[Premise, ...]
    conclusion: Atom
    _key: str = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))
        parts = sorted(p.key for p in self.premises)
        key = self.conclusion.name if not parts else f"({', '.join(parts)} => {self.conclusion.name})"
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", zlib.crc32(key.encode("utf-8")))

    def __eq__(self, other):
        return isinstance(other, AtomicRule) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._key < other._key

    def __repr__(self):
        return f"AtomicRule({self.text()!r})"

    @property
    def key(self) -> str:
        """Canonical text, identical for rules that differ only in premise order."""
        return self._key

    @property
    def is_axiom(self) -> bool:
        return not self.premises

    def text(self) -> str:
        if not self.premises:
            return self.conclusion.name
        return f"({', '.join(p.text() for p in self.premises)} => {self.conclusion.name})"

    def __str__(self):
        return self.text()

    def atoms(self) -> FrozenSet[Atom]:
        out = {self.conclusion}
        for p in self.premises:
            out.add(p.atom)
            for r in p.discharged:
                out |= r.atoms()
        return frozenset(out)

    def subrules(self) -> FrozenSet["AtomicRule"]:
        """All rules discharged anywhere inside this one, transitively."""
        out = set()
        for p in self.premises:
            for r in p.discharged:
                out.add(r)
                out |= r.subrules()
        return frozenset(out)


def axiom(name: Union[str, Atom]) -> AtomicRule:
    return AtomicRule((), name if isinstance(name, Atom) else Atom(name))


def rule(premises, conclusion) -> AtomicRule:
    """Convenience constructor: premises are atoms/names or ``(discharged, atom)`` pairs."""
    ps = []
    for p in premises:
        if isinstance(p, Premise):
            ps.append(p)
        elif isinstance(p, tuple):
            disc, a = p
            disc = frozenset(d if isinstance(d, AtomicRule) else axiom(d) for d in disc)
            ps.append(Premise(disc, a if isinstance(a, Atom) else Atom(a)))
        else:
            ps.append(Premise(frozenset(), p if isinstance(p, Atom) else Atom(p)))
    c = conclusion if isinstance(conclusion, Atom) else Atom(conclusion)
    return AtomicRule(tuple(ps), c)


def substitute_atoms(r: AtomicRule, mapping) -> AtomicRule:
    def a(x: Atom) -> Atom:
        return mapping.get(x, x)

    return AtomicRule(
        tuple(
            Premise(frozenset(substitute_atoms(d, mapping) for d in p.discharged), a(p.atom))
            for p in r.premises
        ),
        a(r.conclusion),
    )


# ---------------------------------------------------------------------------
# Printing

_ASCII = {"and": "/\\", "or": "\\/", "imp": "->", "not": "~"}
_UNICODE = {"and": "∧", "or": "∨", "imp": "→", "not": "¬"}
_PREC = {Imp: 1, Disj: 2, Conj: 3}


def _is_neg(f: Formula) -> bool:
    return isinstance(f, Imp) and f.right == BOT


def print_formula(f: Formula, unicode: bool = False, full_parens: bool = False) -> str:
    ops = _UNICODE if unicode else _ASCII

    def prec(g):
        if isinstance(g, Atom) or _is_neg(g):
            return 4
        return _PREC[type(g)]

    def go(g, ctx):
        if isinstance(g, Atom):
            return "⊥" if unicode and g == BOT else g.name
        if _is_neg(g):
            s = ops["not"] + go(g.left, 4)
            return f"({s})" if full_parens and ctx > 0 else s
        p = prec(g)
        if isinstance(g, Imp):
            s = f"{go(g.left, p + 1)} {ops['imp']} {go(g.right, p)}"
        else:
            op = ops["and"] if isinstance(g, Conj) else ops["or"]
            s = f"{go(g.left, p)} {op} {go(g.right, p + 1)}"
        if full_parens and ctx > 0:
            return f"({s})"
        return f"({s})" if p < ctx else s

    return go(f, 0)


def print_rule(r: AtomicRule) -> str:
    return r.text()


# ---------------------------------------------------------------------------
# Tokenizer and parsers


@dataclass(frozen=True)
class _Tok:
    kind: str
    value: str
    col: int


_SYMBOLS = [
    ("/\\", "AND"), ("\\/", "OR"), ("->", "IMP"), ("=>", "ARROW"), ("|-", "TURN"),
    ("|=", "TURN"), ("∧", "AND"), ("&", "AND"), ("∨", "OR"), ("→", "IMP"),
    ("~", "NOT"), ("¬", "NOT"), ("(", "LP"), (")", "RP"), ("[", "LB"), ("]", "RB"),
    (",", "COMMA"), (";", "SEMI"), ("⊢", "TURN"), ("⊨", "TURN"), ("⊥", "BOTSYM"),
]


def _tokenize(text: str) -> list:
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        m = _NAME_RE.match(text, i)
        if m:
            toks.append(_Tok("ID", m.group(0), i + 1))
            i = m.end()
            continue
        for sym, kind in _SYMBOLS:
            if text.startswith(sym, i):
                if kind == "BOTSYM":
                    toks.append(_Tok("ID", BOT_NAME, i + 1))
                else:
                    toks.append(_Tok(kind, sym, i + 1))
                i += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", text, i + 1)
    toks.append(_Tok("EOF", "", n + 1))
    return toks


class _Parser:
    def __init__(self, text):
        if isinstance(text, (bytes, bytearray)):
            try:
                text = text.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise ParseError("input is not valid UTF-8", "", exc.start + 1) from None
        if not isinstance(text, str):
            raise ParseError("input must be text", "", 1)
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str, what: str) -> _Tok:
        t = self.tok
        if t.kind != kind:
            got = "end of input" if t.kind == "EOF" else repr(t.value)
            raise ParseError(f"expected {what}, found {got}", self.text, t.col)
        self.i += 1
        return t

    def end(self):
        if self.tok.kind != "EOF":
            raise ParseError(f"unexpected {self.tok.value!r}", self.text, self.tok.col)

    # formulas
    def formula(self) -> Formula:
        left = self.disj()
        if self.tok.kind == "IMP":
            self.i += 1
            return Imp(left, self.formula())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.tok.kind == "OR":
            self.i += 1
            f = Disj(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.tok.kind == "AND":
            self.i += 1
            f = Conj(f, self.unary())
        return f

    def unary(self) -> Formula:
        t = self.tok
        if t.kind == "NOT":
            self.i += 1
            return neg(self.unary())
        if t.kind == "ID":
            self.i += 1
            return Atom(t.value)
        if t.kind == "LP":
            self.i += 1
            f = self.formula()
            self.take("RP", "')'")
            return f
        got = "end of input" if t.kind == "EOF" else repr(t.value)
        raise ParseError(f"expected a formula, found {got}", self.text, t.col)

    # rules
    def label(self) -> Atom:
        t = self.tok
        if t.kind == "ID":
            nxt = self.toks[self.i + 1]
            if nxt.kind in ("AND", "OR", "IMP"):
                raise NonAtomicError("rule labels must be atoms", self.text, t.col)
            self.i += 1
            return Atom(t.value)
        if t.kind in ("NOT", "LP"):
            raise NonAtomicError("rule labels must be atoms", self.text, t.col)
        got = "end of input" if t.kind == "EOF" else repr(t.value)
        raise ParseError(f"expected an atom, found {got}", self.text, t.col)

    def rule(self) -> AtomicRule:
        if self.tok.kind == "ID":
            return AtomicRule((), self.label())
        self.take("LP", "'(' or an atom")
        premises = []
        if self.tok.kind != "ARROW":
            premises.append(self.premise())
            while self.tok.kind == "COMMA":
                self.i += 1
                premises.append(self.premise())
        self.take("ARROW", "'=>'")
        concl = self.label()
        self.take("RP", "')'")
        return AtomicRule(tuple(premises), concl)

    def premise(self) -> Premise:
        discharged = []
        if self.tok.kind == "LB":
            self.i += 1
            if self.tok.kind != "RB":
                discharged.append(self.rule())
                while self.tok.kind == "SEMI":
                    self.i += 1
                    discharged.append(self.rule())
            self.take("RB", "']'")
        return Premise(frozenset(discharged), self.label())

    def sequent(self):
        gamma = []
        if self.tok.kind != "TURN":
            gamma.append(self.formula())
            while self.tok.kind == "COMMA":
                self.i += 1
                gamma.append(self.formula())
        self.take("TURN", "'|-' or '|='")
        goal = self.formula()
        return frozenset(gamma), goal


def parse_formula(text) -> Formula:
    p = _Parser(text)
    f = p.formula()
    p.end()
    return f


def parse_rule(text) -> AtomicRule:
    p = _Parser(text)
    r = p.rule()
    p.end()
    return r


def parse_sequent(text):
    """``"A, B |- C"`` (or ``|=``) to ``(frozenset({A, B}), C)``."""
    p = _Parser(text)
    s = p.sequent()
    p.end()
    return s


# ---------------------------------------------------------------------------
# Base, universe and pool files


@dataclass(frozen=True)
class SchemeSpec:
    name: str
    placeholders: Tuple[Atom, ...]
    template: AtomicRule


@dataclass(frozen=True)
class BaseText:
    rules: Tuple[AtomicRule, ...]
    alphabet: Tuple[Atom, ...]
    level: Optional[int]
    schemes: Tuple[SchemeSpec, ...] = ()


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _relocate(exc: ParseError, text: str, no: int, offset: int) -> ParseError:
    out = type(exc)(exc.msg, text, exc.column + offset, no)
    return out


def _parse_scheme(body: str, no: int, offset: int) -> SchemeSpec:
    if ":" not in body:
        raise ParseError("@scheme needs 'NAME VAR... : RULE'", body, offset + 1, no)
    head, template = body.split(":", 1)
    words = head.split()
    if len(words) < 2:
        raise ParseError("@scheme needs a name and at least one placeholder", body, offset + 1, no)
    for w in words:
        if not _NAME_RE.fullmatch(w):
            raise ParseError(f"bad identifier {w!r}", body, offset + 1, no)
    if BOT_NAME in words[1:]:
        raise ReservedNameError("'bot' cannot be a scheme placeholder", body, offset + 1, no)
    try:
        tmpl = parse_rule(template)
    except ParseError as exc:
        raise _relocate(exc, body, no, offset + len(head) + 1) from None
    return SchemeSpec(words[0], tuple(Atom(w) for w in words[1:]), tmpl)


def parse_rules_file(text: str) -> BaseText:
    """Parse a base or universe file.

    Recognised pragmas: ``@level n``, ``@alphabet a b c``, ``@candidates``
    (a section marker, optional) and ``@scheme NAME VAR... : RULE``.
    Every other non-comment line is a rule.
    """
    rules, alphabet, schemes = [], [], []
    level = None
    for no, line in _lines(text):
        offset = len(text.splitlines()[no - 1]) - len(text.splitlines()[no - 1].lstrip())
        if line.startswith("@"):
            word, _, rest = line.partition(" ")
            rest = rest.strip()
            if word == "@level":
                if not rest.isdigit():
                    raise ParseError("@level needs a natural number", line, offset + 8, no)
                level = int(rest)
            elif word == "@alphabet":
                for w in rest.split():
                    if not _NAME_RE.fullmatch(w):
                        raise ParseError(f"bad atom name {w!r}", line, offset + 1, no)
                    alphabet.append(Atom(w))
            elif word == "@candidates":
                pass
            elif word == "@scheme":
                schemes.append(_parse_scheme(rest, no, offset + len(word) + 1))
            else:
                raise ParseError(f"unknown pragma {word}", line, offset + 1, no)
            continue
        try:
            rules.append(parse_rule(line))
        except ParseError as exc:
            raise _relocate(exc, line, no, offset) from None
    return BaseText(tuple(rules), tuple(alphabet), level, tuple(schemes))


def parse_pool(text: str) -> list:
    """One sequent per line; returns a list of ``(gamma, goal)`` pairs."""
    out = []
    for no, line in _lines(text):
        try:
            out.append(parse_sequent(line))
        except ParseError as exc:
            raise _relocate(exc, line, no, 0) from None
    return out


def format_sequent(gamma, goal, turnstile: str = "|-") -> str:
    left = ", ".join(sorted(print_formula(g) for g in gamma))
    return f"{left} {turnstile} {print_formula(goal)}".strip()
