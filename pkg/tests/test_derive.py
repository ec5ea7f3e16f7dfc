import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptsem.derive import AtomicDerivation, Deriver, check_derivation, derive_witness, derives
from ptsem.errors import DischargeScopeError, IllFormedDerivation
from ptsem.gen import atoms, random_universe
from ptsem.ipc import Prover
from ptsem.rules import atexp_rule, load_base, make_base
from ptsem.syntax import BOT, Atom, parse_rule
from ptsem.translate import star

from .conftest import DATA, rules

WORKED_BASE = load_base(DATA / "worked.base")
WORKED_ASSUMED = [parse_rule(t) for t in ["q", "(t, q => z)", "(s => t)", "(q => r)"]]


def test_worked_derivation():
    w = derive_witness(WORKED_BASE, WORKED_ASSUMED, Atom("y"))
    assert w is not None
    used, concl = check_derivation(WORKED_BASE, w, WORKED_ASSUMED)
    assert concl == Atom("y")
    assert used == frozenset(WORKED_ASSUMED)


@pytest.mark.parametrize("drop", [1, 2, 3])
def test_worked_derivation_needs_the_assumed_rules(drop):
    assumed = WORKED_ASSUMED[:drop] + WORKED_ASSUMED[drop + 1 :]
    assert not derives(WORKED_BASE, assumed, Atom("y"))


def test_assumed_q_is_redundant():
    # the base already derives q from p and p => q
    assert derives(WORKED_BASE, WORKED_ASSUMED[1:], Atom("y"))


def test_discharged_rules_are_local():
    b = make_base([parse_rule("([s] t => u)")])
    assert not derives(b, [], Atom("u"))
    assert derives(b, [parse_rule("(s => t)")], Atom("u"))
    assert not derives(b, [parse_rule("(s => t)")], Atom("t"))


def test_level_three_discharge():
    b = make_base([parse_rule("([(p => q)] r => s)"), parse_rule("p")])
    assert derives(b, [parse_rule("(q => r)")], Atom("s"))
    # p => q is available only above the discharging premise
    assert not derives(b, [parse_rule("(q => r)")], Atom("r"))
    assert not derives(make_base([parse_rule("([(p => q)] r => s)")]), [parse_rule("(q => r)")], Atom("s"))


def test_bot_derives_everything():
    b = make_base([parse_rule("bot")], [Atom("a")])
    w = derive_witness(b, [], Atom("a"))
    assert w.rule == atexp_rule(Atom("a"))
    assert check_derivation(b, w)[1] == Atom("a")


def test_witness_is_shallowest_and_deterministic():
    b = make_base([parse_rule(t) for t in ["a", "(a => b)", "(a => c)", "(c => b)"]])
    w1 = derive_witness(b, [], Atom("b"))
    w2 = Deriver().witness(b, [], Atom("b"))
    assert w1 == w2
    assert w1.height() == 2


def test_checker_rejects_bad_trees():
    b = make_base([parse_rule("(a => b)")], [Atom("a")])
    leaf = AtomicDerivation(Atom("a"), parse_rule("a"), (), "base")
    with pytest.raises(IllFormedDerivation):
        check_derivation(b, AtomicDerivation(Atom("b"), parse_rule("(a => b)"), (leaf,), "base"))
    ok_leaf = AtomicDerivation(Atom("a"), parse_rule("a"), (), "assumed")
    with pytest.raises(DischargeScopeError):
        check_derivation(b, AtomicDerivation(Atom("b"), parse_rule("(a => b)"), (ok_leaf,), "base"), [])
    with pytest.raises(DischargeScopeError):
        check_derivation(b, AtomicDerivation(Atom("a"), parse_rule("a"), (), "discharged"))
    with pytest.raises(IllFormedDerivation):
        check_derivation(b, AtomicDerivation(Atom("c"), parse_rule("(a => b)"), (ok_leaf,), "base"))


LETTERS6 = atoms(*"abcdef")


def _oracle(prover, available, goal):
    return prover.prove(frozenset(star(r) for r in available), goal) is not None


@given(st.integers(0, 10_000))
def test_search_agrees_with_translation_oracle(seed):
    rng = random.Random(seed)
    u = random_universe(rng, LETTERS6, 8, 2)
    d, pr = Deriver(), Prover()
    m = rng.randrange(1 << u.k)
    b = u.base_of(m)
    assumed = [r for r in u.candidates if not m >> u.index(r) & 1 and rng.random() < 0.5]
    for g in u.atoms:
        assert d.derives(b, assumed, g) == _oracle(pr, b.rules | frozenset(assumed), g)


@given(st.lists(rules(max_level=2), max_size=6), st.lists(rules(max_level=2), max_size=3), st.sampled_from(atoms("p", "q", "r")))
def test_monotone_and_checkable(base_rules, assumed, goal):
    b = make_base(base_rules, atoms("p", "q", "r"))
    got = derives(b, assumed, goal)
    bigger = make_base(base_rules + [parse_rule("(p => q)"), parse_rule("r")], atoms("p", "q", "r"))
    if got:
        assert derives(bigger, assumed, goal)
        w = derive_witness(b, assumed, goal)
        used, concl = check_derivation(b, w, assumed)
        assert concl == goal
        assert used <= frozenset(assumed)


def test_bot_as_assumption():
    b = make_base([], atoms("a", "b"))
    for g in atoms("a", "b") + [BOT]:
        assert derives(b, [parse_rule("bot")], g)
