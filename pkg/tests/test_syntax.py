import pytest
from hypothesis import given

from ptsem.errors import NonAtomicError, ParseError, ReservedNameError
from ptsem.syntax import (
    BOT,
    Atom,
    Conj,
    Disj,
    Imp,
    atoms_of,
    depth,
    neg,
    parse_formula,
    parse_pool,
    parse_rule,
    parse_rules_file,
    parse_sequent,
    print_formula,
    rule,
)

from .conftest import formulas, rules

p, q, r = Atom("p"), Atom("q"), Atom("r")


@given(formulas())
def test_print_parse_roundtrip(f):
    assert parse_formula(print_formula(f)) == f


@given(formulas())
def test_unicode_and_full_parens_roundtrip(f):
    assert parse_formula(print_formula(f, unicode=True)) == f
    assert parse_formula(print_formula(f, full_parens=True)) == f


@given(rules())
def test_rule_text_roundtrip(x):
    assert parse_rule(x.text()) == x
    assert parse_rule(x.key) == x


@given(formulas())
def test_hash_is_structural(f):
    g = parse_formula(print_formula(f))
    assert hash(g) == hash(f)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("p -> q -> r", Imp(p, Imp(q, r))),
        ("p /\\ q \\/ r", Disj(Conj(p, q), r)),
        ("p \\/ q /\\ r", Disj(p, Conj(q, r))),
        ("~p /\\ q", Conj(neg(p), q)),
        ("~~p", neg(neg(p))),
        ("p ∧ q → ⊥", Imp(Conj(p, q), BOT)),
        ("p & q", Conj(p, q)),
        ("(p -> q) -> r", Imp(Imp(p, q), r)),
        ("p /\\ q /\\ r", Conj(Conj(p, q), r)),
    ],
)
def test_precedence_and_associativity(text, expected):
    assert parse_formula(text) == expected


def test_negation_is_sugar():
    assert parse_formula("~p") == Imp(p, BOT)
    assert print_formula(Imp(p, BOT)) == "~p"


def test_minimal_parentheses():
    assert print_formula(parse_formula("(p -> q) -> (r -> p)")) == "(p -> q) -> r -> p"
    assert print_formula(parse_formula("p /\\ (q /\\ r)")) == "p /\\ (q /\\ r)"


@pytest.mark.parametrize("text", ["", "p ->", "(p", "p q", "p $ q", "->", "p)"])
def test_malformed_formulas_raise_with_column(text):
    with pytest.raises(ParseError) as info:
        parse_formula(text)
    assert 1 <= info.value.column <= len(text) + 1


def test_error_column_points_at_offender():
    with pytest.raises(ParseError) as info:
        parse_formula("p /\\ $")
    assert info.value.column == 6


def test_rules_ignore_premise_order():
    assert parse_rule("(a, [b] d, [c] d => d)") == parse_rule("([c] d, a, [b] d => d)")
    assert hash(parse_rule("(a, b => c)")) == hash(parse_rule("(b, a => c)"))


def test_rule_structure():
    x = parse_rule("([s] u, v => q)")
    assert x.conclusion == Atom("q")
    assert [pr.atom.name for pr in x.premises] == ["u", "v"]
    assert x.premises[0].discharged == frozenset({parse_rule("s")})
    assert x.atoms() == frozenset(map(Atom, "squv"))
    assert parse_rule("([(p, w => t)] z => y)").subrules() == frozenset({parse_rule("(p, w => t)")})


def test_rule_constructor_matches_parser():
    assert rule(["a", (["b"], "d")], "d") == parse_rule("(a, [b] d => d)")


@pytest.mark.parametrize("text", ["(p /\\ q => r)", "(p => q -> r)", "(~p => q)"])
def test_non_atomic_labels(text):
    with pytest.raises(NonAtomicError):
        parse_rule(text)


def test_sequents():
    gamma, goal = parse_sequent("p, p -> q |- q")
    assert gamma == frozenset({p, Imp(p, q)})
    assert goal == q
    assert parse_sequent("|= p") == (frozenset(), p)
    with pytest.raises(ParseError):
        parse_sequent("p, q")


def test_rules_file_pragmas():
    spec = parse_rules_file("# comment\n@level 2\n@alphabet a b\na\n(a => b)  # trailing\n@scheme R D : (a => D)\n")
    assert spec.level == 2
    assert spec.alphabet == (Atom("a"), Atom("b"))
    assert [x.text() for x in spec.rules] == ["a", "(a => b)"]
    assert spec.schemes[0].name == "R"


def test_rules_file_errors_carry_line_numbers():
    with pytest.raises(ParseError) as info:
        parse_rules_file("a\n(a => )\n")
    assert info.value.lineno == 2
    with pytest.raises(ParseError):
        parse_rules_file("@frobnicate\n")
    with pytest.raises(ReservedNameError):
        parse_rules_file("@scheme R bot : (a => bot)\n")


def test_pool_file():
    pool = parse_pool("a |= b \\/ c\n\n# skip\n|= a -> a\n")
    assert len(pool) == 2


@given(formulas())
def test_depth_and_atoms_are_consistent(f):
    assert depth(f) >= 1
    assert atoms_of(f) <= frozenset({p, q, r, BOT})


def test_nested_premise_order_is_ignored():
    a = parse_rule("([(q, p => p)] p => p)")
    b = parse_rule("([(p, q => p)] p => p)")
    assert a == b and hash(a) == hash(b)
    assert a.key == b.key
