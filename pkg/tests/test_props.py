import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptsem.gen import atoms, enumerate_formulas, random_universe
from ptsem.ipc import prove_extended
from ptsem.props import (
    FAILS,
    HOLDS,
    HOLDS_ON_SWEEP,
    check_base_completeness,
    check_base_soundness,
    check_compact_export,
    check_gdp,
    check_harrop,
    check_separation,
    exhaustive_disjunction_pool,
    fresh_atom_universe,
    harrop_formula,
    probe_export_fresh_atom,
    replay,
)
from ptsem.rules import load_base, load_universe, make_universe
from ptsem.semantics import EvalContext
from ptsem.syntax import AtomicRule, Conj, Imp, parse_formula, parse_rule, parse_sequent

from .conftest import DATA

ABC = atoms("a", "b", "c")
R = load_universe(DATA / "R.univ")
R_CTX = EvalContext(R)
R_BASE = R_CTX.mask(load_base(DATA / "R.base", R))
R_POOL = [parse_sequent("a |= b \\/ c")]
HARROP_INSTANCE = [tuple(ABC)]


def test_gdp_fails_for_sandqvist_at_the_R_base():
    rep = check_gdp(R_CTX, "sand", R_BASE, R_POOL)
    assert rep.verdict == FAILS
    assert (rep.counterexample["gamma"], rep.counterexample["goal"]) == (["a"], "b \\/ c")
    assert replay(rep, R_CTX)
    assert check_gdp(R_CTX, "std", R_BASE, R_POOL).verdict == HOLDS_ON_SWEEP


def test_gdp_holds_for_standard_at_the_empty_base():
    rep = check_gdp(R_CTX, "std", 0, exhaustive_disjunction_pool(ABC))
    assert rep.verdict == HOLDS_ON_SWEEP and len(rep.entries) == 9


def test_gdp_entry_without_disjunctive_consequence_is_vacuous():
    ctx = EvalContext(make_universe(ABC, [parse_rule("a")]))
    rep = check_gdp(ctx, "std", 0, [parse_sequent("a |= b \\/ c")])
    assert rep.verdict == HOLDS_ON_SWEEP and rep.entries[0]["disjunction"] is False


def test_gdp_rejects_bad_pools():
    with pytest.raises(ValueError):
        check_gdp(R_CTX, "std", 0, [parse_sequent("a |= b")])
    with pytest.raises(ValueError):
        check_gdp(R_CTX, "std", 0, [parse_sequent("a \\/ b |= b \\/ c")])


def test_harrop_standard_and_sandqvist():
    h = EvalContext(load_universe(DATA / "harrop.univ"))
    assert check_harrop(h, "std", HARROP_INSTANCE).verdict == HOLDS_ON_SWEEP
    s = EvalContext(load_universe(DATA / "harrop-sand.univ"))
    assert check_harrop(s, "std", HARROP_INSTANCE).verdict == HOLDS_ON_SWEEP
    rep = check_harrop(s, "sand", HARROP_INSTANCE)
    assert rep.verdict == FAILS and replay(rep, s)
    empty = EvalContext(make_universe(ABC, []))
    assert check_harrop(empty, "std", HARROP_INSTANCE).verdict == HOLDS_ON_SWEEP


def test_export_on_the_R_base_holds_literally():
    # on this finite carrier the consequence holds at the empty base, so no Delta is needed
    rep = check_compact_export(R_CTX, "sand", R_BASE, R_POOL)
    assert rep.verdict == HOLDS_ON_SWEEP
    assert rep.entries[0]["at_base"] and rep.entries[0]["delta"] == []


def test_export_fails_once_an_unused_atom_is_added():
    rep = probe_export_fresh_atom(R, "sand", R_BASE, R_POOL)
    assert rep.verdict == FAILS
    assert rep.counterexample["fresh_atom"] == "e"
    assert replay(rep, EvalContext(fresh_atom_universe(R, R_BASE)[0]))


def test_export_small_base_both_directions():
    u = make_universe(atoms("p", "q"), [parse_rule("(p => q)"), parse_rule("p")])
    ctx = EvalContext(u)
    rep = check_compact_export(ctx, "std", u.mask_of([parse_rule("(p => q)")]), [parse_sequent("p |= q")])
    assert rep.verdict == HOLDS_ON_SWEEP
    assert rep.entries[0]["delta"] == ["p -> q"]
    empty = check_compact_export(ctx, "sand", 0, [parse_sequent("p |= p /\\ p")])
    assert empty.entries[0]["delta"] == []


def test_export_standard_at_empty_base_shows_both_directions():
    rep = check_compact_export(R_CTX, "std", 0, exhaustive_disjunction_pool(ABC))
    assert rep.verdict == HOLDS_ON_SWEEP
    assert all(e["at_base"] == e["exported"] for e in rep.entries)


def test_base_completeness_witnesses():
    h = EvalContext(load_universe(DATA / "harrop.univ"))
    rep = check_base_completeness(h, "std", [(frozenset(), harrop_formula(*ABC))])
    assert rep.verdict == FAILS and rep.counterexample["base"] == [] and replay(rep, h)
    rep = check_base_completeness(R_CTX, "sand", R_POOL, [R_BASE])
    assert rep.verdict == FAILS and replay(rep, R_CTX)


def test_derivable_pool_never_witnesses_incompleteness():
    pool = [parse_sequent(t) for t in ["a |= a \\/ b", "a, a -> b |= b", "a /\\ b |= b"]]
    for sel in ("std", "sand"):
        assert check_base_completeness(R_CTX, sel, pool).verdict == HOLDS_ON_SWEEP


@pytest.mark.parametrize("sel", ["std", "sand"])
def test_base_soundness_on_300_samples(sel):
    ctx = EvalContext(random_universe(random.Random(11), ABC, 6, 2, with_axioms=True))
    rep = check_base_soundness(ctx, sel, 300, seed=3)
    assert rep.swept["samples"] == 300
    assert rep.verdict == HOLDS_ON_SWEEP


def test_base_soundness_of_the_extended_sequent():
    gamma, goal = parse_sequent("w -> bot |- ((q \\/ (t -> u)) -> z) /\\ (w -> bot)")
    base = load_base(DATA / "ext.base").rules | {parse_rule("(s => t)"), parse_rule("r")}
    letters = atoms(*"pqrstuvwz")
    # axioms for every letter supply the extensions that make hypotheses derivable
    u = make_universe(letters, sorted(base | {AtomicRule((), x) for x in letters}))
    m = u.mask_of(base)
    assert prove_extended(gamma, (), u.base_of(m), goal)
    ctx = EvalContext(u)
    for sel in ("std", "sand"):
        assert ctx.consequence(sel, m, gamma, goal)


def test_base_soundness_needs_extensions_that_add_hypotheses():
    # without them s -> u is vacuously valid yet u is not derivable from s
    base = [parse_rule("([s] u => q)")]
    u = make_universe(atoms("q", "s", "u"), base)
    ctx = EvalContext(u)
    goal = parse_formula("(s -> u) -> q")
    assert prove_extended((), (), u.base_of(u.full_mask), goal)
    assert not ctx.valid("std", u.full_mask, goal)


def test_empty_sample_holds_vacuously():
    assert check_base_soundness(R_CTX, "std", 0).verdict == HOLDS


def test_separation_on_the_R_base():
    rep = check_separation(R_CTX, R_POOL, [R_BASE])
    (std_only, snd_only) = rep.entries
    assert std_only["witness"] is None
    assert snd_only["witness"]["gamma"] == ["a"] and snd_only["witness"]["goal"] == "b \\/ c"
    assert rep.verdict == HOLDS_ON_SWEEP and rep.notes


def test_conjunctive_pool_has_no_separation_witnesses():
    fs = enumerate_formulas(ABC, 2, (Conj, Imp))[:40]
    pool = [(frozenset([g]), f) for g in fs[:6] for f in fs]
    rep = check_separation(R_CTX, pool, range(0, 1 << R.k, 9))
    assert all(e["witness"] is None for e in rep.entries)


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_gdp_implies_harrop(seed):
    ctx = EvalContext(random_universe(random.Random(seed), ABC, 6, 2, with_axioms=False))
    if check_gdp(ctx, "std", 0, exhaustive_disjunction_pool(ABC)).verdict != FAILS:
        assert check_harrop(ctx, "std", HARROP_INSTANCE).verdict != FAILS


def test_reports_serialize_deterministically():
    a = check_gdp(R_CTX, "sand", R_BASE, R_POOL).to_dict()
    b = check_gdp(R_CTX, "sand", R_BASE, R_POOL).to_dict()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["schema"] == "ptsem.report/1"
