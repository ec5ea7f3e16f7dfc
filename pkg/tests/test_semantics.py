import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptsem.derive import Deriver
from ptsem.errors import UniverseMismatchError
from ptsem.gen import atoms, enumerate_formulas, random_universe
from ptsem.rules import load_base, load_universe, make_universe
from ptsem.semantics import (
    SANDQVIST,
    STANDARD,
    EvalContext,
    NaiveEvaluator,
    alpha_consequence,
    restrict_level,
    selector,
)
from ptsem.syntax import BOT, Conj, Disj, Imp, parse_formula, parse_rule, parse_sequent

from .conftest import DATA, formulas

AB = atoms("a", "b")
ABC = atoms("a", "b", "c")
SELECTORS = [STANDARD, SANDQVIST]


def universe_from_seed(seed, letters=ABC, k=5):
    return random_universe(random.Random(seed), letters, k, 2, with_axioms=False)


universes = st.integers(0, 10**6).map(universe_from_seed)


def test_selector_aliases():
    assert selector("std") == selector("alpha") == STANDARD
    assert selector("sand") == SANDQVIST
    with pytest.raises(ValueError):
        selector("classical")


def test_R_separation_instance():
    u = load_universe(DATA / "R.univ")
    ctx = EvalContext(u)
    b = load_base(DATA / "R.base", u)
    gamma, goal = parse_sequent("a |= b \\/ c")
    assert ctx.consequence(SANDQVIST, b, gamma, goal)
    assert not ctx.consequence(STANDARD, b, gamma, goal)
    assert alpha_consequence(ctx, b, gamma, goal) is False


def test_atoms_outside_universe_are_rejected():
    ctx = EvalContext(make_universe(AB, [parse_rule("a")]))
    with pytest.raises(UniverseMismatchError):
        ctx.valid(STANDARD, 0, parse_formula("z"))
    with pytest.raises(UniverseMismatchError):
        ctx.valid(STANDARD, 5, parse_formula("a"))


def test_empty_universe_collapses_to_derivability():
    ctx = EvalContext(make_universe(AB, []))
    assert ctx.n_bases == 1
    assert not ctx.valid(STANDARD, 0, parse_formula("a"))
    assert ctx.valid(STANDARD, 0, parse_formula("a -> a"))
    # with no extensions, a -> b holds vacuously
    assert ctx.valid(STANDARD, 0, parse_formula("a -> b"))


@given(universes, formulas(ABC, max_leaves=5), st.data())
def test_table_engine_matches_naive_oracle(u, f, data):
    ctx = EvalContext(u)
    naive = NaiveEvaluator(u)
    m = data.draw(st.integers(0, u.full_mask))
    for sel in SELECTORS:
        assert ctx.valid(sel, m, f) == naive.valid(sel, m, f)


@given(universes, formulas(ABC, max_leaves=4), formulas(ABC, max_leaves=4), st.data())
def test_monotone(u, g, f, data):
    ctx = EvalContext(u)
    m = data.draw(st.integers(0, u.full_mask))
    for sel in SELECTORS:
        if ctx.consequence(sel, m, [g], f):
            assert all(ctx.consequence(sel, c, [g], f) for c in u.superset_masks(m))


@given(universes, st.data())
def test_bot_clause(u, data):
    ctx = EvalContext(u)
    m = data.draw(st.integers(0, u.full_mask))
    # bot is itself an atom, so it is among the atoms that must be derivable
    every_atom = all(Deriver().derives(u.base_of(m), (), a) for a in u.atoms)
    for sel in SELECTORS:
        assert ctx.valid(sel, m, BOT) == every_atom


def test_letters_alone_do_not_make_bot_valid():
    u = make_universe(AB, [parse_rule("a"), parse_rule("b")])
    ctx = EvalContext(u)
    assert ctx.valid(STANDARD, u.full_mask, Conj(*AB))
    assert not ctx.valid(STANDARD, u.full_mask, BOT)


@given(universes, formulas(ABC, max_leaves=4), formulas(ABC, max_leaves=4))
def test_logical_consequence_is_consequence_at_empty_base(u, g, f):
    ctx = EvalContext(u)
    for sel in SELECTORS:
        lc = ctx.logical_consequence(sel, [g], f)
        assert lc == ctx.consequence(sel, 0, [g], f)
        everywhere = all(not ctx.valid(sel, m, g) or ctx.valid(sel, m, f) for m in range(ctx.n_bases))
        assert lc == everywhere


@given(universes, formulas(ABC, max_leaves=4), formulas(ABC, max_leaves=4), st.data())
def test_sandqvist_disjunction_introduction(u, a, b, data):
    ctx = EvalContext(u)
    m = data.draw(st.integers(0, u.full_mask))
    if ctx.valid(SANDQVIST, m, a):
        assert ctx.valid(SANDQVIST, m, Disj(a, b))
        assert ctx.valid(SANDQVIST, m, Disj(b, a))


@given(universes, formulas(ABC, max_leaves=5), st.data())
def test_standard_disjunction_implies_sandqvist(u, f, data):
    ctx = EvalContext(u)
    m = data.draw(st.integers(0, u.full_mask))
    if ctx.valid(STANDARD, m, f) and isinstance(f, Disj):
        assert ctx.valid(SANDQVIST, m, f)


def test_disjunction_free_agreement_against_naive_oracle():
    u = universe_from_seed(7, AB, 4)
    table = EvalContext(u)
    naive = NaiveEvaluator(u)
    fs = enumerate_formulas(AB + [BOT], 2, (Conj, Imp))
    for m in range(table.n_bases):
        for g in fs:
            for f in fs:
                assert table.consequence(STANDARD, m, [g], f) == naive.consequence(SANDQVIST, m, [g], f)


def test_cache_coherence_on_full_sweep():
    u = universe_from_seed(3, AB, 4)
    fresh_each_time = NaiveEvaluator(u, memo=False)
    memo = NaiveEvaluator(u)
    table = EvalContext(u)
    for f in enumerate_formulas(AB + [BOT], 2):
        for m in range(table.n_bases):
            for sel in SELECTORS:
                want = fresh_each_time.valid(sel, m, f)
                assert memo.valid(sel, m, f) == want
                assert table.valid(sel, m, f) == want


def test_tables_are_read_only_and_memoized():
    ctx = EvalContext(universe_from_seed(1))
    f = parse_formula("a -> b \\/ c")
    t = ctx.table(SANDQVIST, f)
    with pytest.raises(ValueError):
        t[0] = not t[0]
    ctx.table(SANDQVIST, f)
    assert ctx.stats["cache_hits"] >= 1
    assert isinstance(t, np.ndarray)


def test_frontier_is_minimal():
    u = load_universe(DATA / "harrop.univ")
    ctx = EvalContext(u)
    table = ctx.table(STANDARD, parse_formula("b"))
    front = ctx.frontier(table)
    assert sorted(sorted(r.text() for r in u.rules_of(m)) for m in front) == [["(a => b)", "a"], ["(a => bot)", "a"], ["b"]]


def test_restrict_level_drops_higher_rules():
    u = load_universe(DATA / "harrop-sand.univ")
    low = restrict_level(u, 1)
    assert low.k == u.k - 1
    assert low.level_bound == 1
