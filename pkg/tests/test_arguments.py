import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptsem.arguments import (
    INVALID,
    STANDARD,
    UNKNOWN,
    VALID,
    Bounds,
    ValidityChecker,
    assume,
    axiom_leaf,
    check_nd,
    dumps,
    first_reduct,
    from_atomic_derivation,
    inflating_reduction,
    infer,
    is_canonical,
    justification,
    loads,
    named_justification,
    normalize,
    oracle_reduction,
    reduce_step,
    reduces_to,
    substitute,
    synthesize_witness,
)
from ptsem.arguments.reductions import STATS, Reduction
from ptsem.derive import derive_witness
from ptsem.errors import ConclusionMismatchError, ContractViolation, IllFormedDerivation, NotDerivable
from ptsem.gen import atoms, enumerate_formulas
from ptsem.ipc import prove_extended
from ptsem.rules import load_base, load_universe, make_base
from ptsem.semantics import STANDARD as STANDARD_SEL
from ptsem.semantics import EvalContext
from ptsem.syntax import BOT, Atom, Disj, parse_formula, parse_rule, parse_sequent

from .conftest import DATA
from .redexes import SAMPLERS, substitution

F = parse_formula
a, b = atoms("a", "b")


def load(name):
    return loads((DATA / name).read_text())


TWO = load_universe(DATA / "two.univ")
TWO_CTX = EvalContext(TWO)
CHECKER = ValidityChecker(TWO_CTX)
NOT_B = load_base(DATA / "not-b.base", TWO)
B = load_base(DATA / "b.base", TWO)


# -- text format and well-formedness ---------------------------------------


@pytest.mark.parametrize("name", ["or-detour.arg", "weakening.arg", "extended.arg", "open.arg", "or-left.arg"])
def test_sexpr_roundtrip(name):
    d = load(name)
    assert loads(dumps(d)) == d
    assert loads(dumps(d, indent=None)) == d


@pytest.mark.parametrize(
    "text",
    [
        '(impI "p -> p" :discharge (1) (assume "q" :label 1))',
        '(andI "p /\\\\ q" (assume "p"))',
        '(assume "p" (assume "p"))',
        '(andE1 "p" (assume "q /\\\\ p"))',
    ],
)
def test_ill_formed_structures_are_rejected(text):
    with pytest.raises(IllFormedDerivation):
        check_nd(loads(text))


def test_open_example_dependencies():
    rep = check_nd(load("open.arg"), allow_custom=True)
    assert rep.assumptions == {F("s"), F("~~p \\/ r")}
    assert not rep.is_closed


def test_canonical_roots():
    assert is_canonical(infer("andI", F("p /\\ q"), assume(F("p")), assume(F("q"))))
    assert not is_canonical(assume(F("p")))
    assert not is_canonical(load("weakening.arg"))


# -- reductions ----------------------------------------------------------------


def test_or_detour_golden():
    (red,) = reduce_step(load("or-detour.arg"), STANDARD)
    expect = loads(
        '(impI "a -> d" :discharge (1) (d2 "d" (d1 "b" (assume "a" :label 1)) (d1 "b" (assume "a" :label 1))))'
    )
    assert red.same_as(expect)


def test_weakening_golden():
    (red,) = reduce_step(load("weakening.arg"), named_justification("wk"))
    expect = loads('(impI "a /\\\\ c -> b" :discharge (7) (dd "b" (andE1 "a" (assume "a /\\\\ c" :label 7))))')
    assert red.same_as(expect)
    assert check_nd(red, allow_custom=True).assumptions == frozenset()


def test_or_left_reaches_the_bare_subproof():
    sub = infer("dd", a)
    d = infer("orL", a, infer("orI1", Disj(a, b), sub))
    res = reduces_to(d, named_justification("orl"), lambda x: x.same_as(sub))
    assert res.found and len(res.path) == 2


def test_no_redex_means_no_reducts():
    d = loads('(impI "a -> a" :discharge (1) (assume "a" :label 1))')
    assert reduce_step(d, STANDARD) == []
    assert first_reduct(d, STANDARD) is None
    assert normalize(d, STANDARD) == (d, 0, True)


def test_reflexive_search_needs_no_steps():
    d = load("or-detour.arg")
    res = reduces_to(d, STANDARD, lambda x: True)
    assert res.found and res.path == (d,)


def test_inflating_justification_stops_at_the_bound():
    d = infer("dd", a)
    res = reduces_to(d, justification(inflating_reduction("dd")), lambda x: False, max_states=50)
    assert res.status == "bound"
    _, steps, done = normalize(d, justification(inflating_reduction("dd")), max_steps=20)
    assert steps == 20 and not done


def test_contract_violations_are_raised():
    renamed = Reduction("rename", lambda n: n.rule == "dd", lambda n: infer("dd", b))
    with pytest.raises(ContractViolation, match="conclusion"):
        reduce_step(infer("dd", a), justification(renamed))
    opening = Reduction("open", lambda n: n.rule == "dd", lambda n: assume(n.formula))
    with pytest.raises(ContractViolation, match="open assumptions"):
        reduce_step(infer("dd", a), justification(opening))


def test_contract_is_checked_on_every_application():
    before = STATS["contract_checks"]
    normalize(load("or-detour.arg"), STANDARD)
    reduce_step(load("weakening.arg"), named_justification("wk"))
    assert STATS["contract_checks"] == before + 2


def test_named_justifications():
    assert named_justification("standard,wk").names == ("and-detour", "imp-detour", "or-detour", "wk")
    assert len(named_justification("")) == 0
    with pytest.raises(ValueError):
        named_justification("beta")


# -- substitution ---------------------------------------------------------------


def test_substitution_basics():
    d = load("open.arg")
    assert substitute(d, {}) is d
    with pytest.raises(ConclusionMismatchError):
        substitute(d, {F("s"): axiom_leaf(Atom("t"))})
    closed = substitute(d, {F("s"): axiom_leaf(Atom("s")), F("~~p \\/ r"): infer("w", F("~~p \\/ r"))})
    assert check_nd(closed, allow_custom=True).assumptions == frozenset()


def commutes(phi, d, sigma):
    """Reducing then substituting gives the same structure as substituting then reducing."""
    check_nd(d, allow_custom=True)
    instance = substitute(d, sigma)
    return phi.applies(d) and phi.applies(instance) and phi.transform(instance).same_as(substitute(phi.transform(d), sigma))


@pytest.mark.parametrize("name", sorted(SAMPLERS))
@settings(max_examples=100)
@given(rng=st.randoms(use_true_random=False))
def test_reductions_commute_with_substitution(name, rng):
    phi, sample = SAMPLERS[name]
    assert commutes(phi, sample(rng), substitution(rng))


def test_commutation_check_catches_a_reduction_that_peeks_at_assumptions():
    peek = Reduction(
        "peek",
        lambda n: n.rule == "andE1" and n.children[0].rule == "andI",
        lambda n: n.children[0].children[0] if n.assumptions() else n,
    )
    d = infer("andE1", a, infer("andI", F("a /\\ b"), assume(a), infer("d1", b)))
    assert not commutes(peek, d, {a: axiom_leaf(a)})


# -- validity -------------------------------------------------------------------


def test_atomic_derivation_is_valid_without_reductions():
    u = load_universe(DATA / "harrop.univ")
    checker = ValidityChecker(EvalContext(u))
    m = u.full_mask
    goal = next(x for x in u.atoms if x != BOT and derive_witness(u.base_of(m), (), x) is not None)
    d = from_atomic_derivation(derive_witness(u.base_of(m), (), goal))
    v = checker.check(d, justification(), m)
    assert v.status == VALID and v.steps == 0


def test_weakening_argument_is_valid():
    assert CHECKER.check(load("wk-valid.arg"), named_justification("wk"), 0).status == VALID


def test_or_left_depends_on_the_base():
    d = load("or-left.arg")
    assert CHECKER.check(d, named_justification("orl"), NOT_B).status == VALID
    bad = CHECKER.check(d, named_justification("orl"), B)
    assert bad.status == INVALID
    assert not TWO_CTX.consequence(STANDARD_SEL, TWO_CTX.mask(B), [Disj(a, b)], a)


def test_oracle_reduction_is_flagged_non_constructive():
    src = infer("dd", a)
    target = axiom_leaf(a)
    phi = oracle_reduction(src, target)
    assert not phi.constructive
    v = CHECKER.check(src, justification(phi), TWO.base_of(0b00001))
    assert v.status == VALID and not v.constructive


def test_witness_for_identity():
    d, j = synthesize_witness([], F("p -> p"), make_base([]))
    assert d.rule == "impI" and len(d.discharges) == 1 and d.size() == 2
    assert j == STANDARD


def test_witness_embeds_the_extended_derivation():
    gamma, goal = parse_sequent("w -> bot |- ((q \\/ (t -> u)) -> z) /\\ (w -> bot)")
    assumed = [parse_rule("(s => t)"), parse_rule("r")]
    base = load_base(DATA / "ext.base")
    d, _ = synthesize_witness(gamma, goal, base, assumed)
    rep = check_nd(d, base)
    assert rep.conclusion == goal
    assert rep.assumptions <= gamma
    assert rep.open_rules <= set(assumed)


def test_harrop_sequent_has_no_witness():
    with pytest.raises(NotDerivable):
        synthesize_witness([], F("(~a -> b \\/ c) -> (~a -> b) \\/ (~a -> c)"), make_base([]))


def closed_witnesses():
    """Synthesized closed witnesses over the two-atom universe, one per provable (formula, base)."""
    out = []
    for f in enumerate_formulas([a, b, BOT], 2):
        for m in range(0, TWO_CTX.n_bases, 3):
            base = TWO.base_of(m)
            if prove_extended([], [], base, f):
                out.append((synthesize_witness([], f, base)[0], m))
    return out


WITNESSES = closed_witnesses()


def test_witnesses_are_valid_and_normalize_to_canonical_form():
    assert len(WITNESSES) > 50
    for d, m in WITNESSES:
        v = CHECKER.check(d, STANDARD, m)
        assert v.status in (VALID, UNKNOWN), (dumps(d), m, v)
        if v.status == VALID and not isinstance(d.formula, Atom):
            nf, _, done = normalize(d, STANDARD)
            assert done and is_canonical(nf)


def test_open_witnesses_are_valid():
    checker = ValidityChecker(TWO_CTX, Bounds(max_states=500))
    for text in ["a |- a \\/ b", "a, a -> b |- b", "a /\\ b |- b /\\ a", "~a |- a -> b"]:
        gamma, goal = parse_sequent(text)
        d, j = synthesize_witness(gamma, goal, TWO.base_of(0))
        assert checker.check(d, j, 0, gamma).status == VALID
    CHECKER.log.extend(checker.log)


def test_every_valid_verdict_is_confirmed_by_the_oracle():
    # runs last in this module so the shared log covers the checks above
    valid = [e for e in CHECKER.log if e.status == VALID]
    assert valid
    for e in valid:
        assert TWO_CTX.consequence(STANDARD_SEL, e.mask, e.assumptions, e.conclusion)
