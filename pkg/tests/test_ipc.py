import pytest
from hypothesis import given

from ptsem.errors import OverlapError
from ptsem.ipc import (
    Prover,
    classical_countermodel,
    countermodel_il,
    extended_context,
    prove_extended,
    prove_il,
    prove_il_proof,
)
from ptsem.rules import load_base, make_base
from ptsem.syntax import parse_formula, parse_rule, parse_sequent

from .conftest import DATA, formulas

THEOREMS = [
    "p -> p",
    "p -> q -> p",
    "(p -> q -> r) -> (p -> q) -> p -> r",
    "p /\\ q -> q /\\ p",
    "p \\/ q -> q \\/ p",
    "~~(p \\/ ~p)",
    "~~~p -> ~p",
    "(p \\/ q -> r) -> (p -> r) /\\ (q -> r)",
    "bot -> p",
    "((p -> q) -> p) -> ~~p",
]

NON_THEOREMS = [
    ("p \\/ ~p", 2),
    ("~~p -> p", 2),
    ("((p -> q) -> p) -> p", 2),
    ("(p -> q) \\/ (q -> p)", 3),
    ("(~p -> q \\/ r) -> (~p -> q) \\/ (~p -> r)", 4),
    ("~p \\/ ~~p", 3),
]


@pytest.mark.parametrize("text", THEOREMS)
def test_theorems(text):
    assert prove_il([], parse_formula(text))
    assert countermodel_il([], parse_formula(text)) is None


@pytest.mark.parametrize("text, size", NON_THEOREMS)
def test_non_theorems_have_small_countermodels(text, size):
    f = parse_formula(text)
    assert not prove_il([], f)
    m = countermodel_il([], f)
    assert m is not None and m.size == size
    assert m.is_well_formed()
    assert m.refutes([], f)


def test_sequent_contexts():
    assert prove_il(*parse_sequent("p, p -> q |- q"))
    assert not prove_il(*parse_sequent("p -> q |- q"))
    assert prove_il(*parse_sequent("p \\/ q, ~p |- q"))


def test_proof_objects_record_rules():
    proof = prove_il_proof(*parse_sequent("p /\\ q |- q /\\ p"))
    assert proof.rule == "andL"
    assert proof.size() >= 3


@given(formulas(max_leaves=6))
def test_prover_and_countermodels_are_exclusive(f):
    proved = Prover().prove((), f) is not None
    model = countermodel_il((), f, max_points=4)
    assert not (proved and model is not None)
    if model is not None:
        assert model.refutes((), f)


@given(formulas(max_leaves=6))
def test_provable_implies_classically_valid(f):
    if prove_il([], f):
        assert classical_countermodel([], f) is None


@given(formulas(max_leaves=5), formulas(max_leaves=5))
def test_cut_admissible(a, b):
    if prove_il([], a) and prove_il([a], b):
        assert prove_il([], b)


EXT_BASE = load_base(DATA / "ext.base")
EXT_SEQUENT = "w -> bot |- ((q \\/ (t -> u)) -> z) /\\ (w -> bot)"


def test_extended_sequent_and_its_translation():
    gamma, goal = parse_sequent(EXT_SEQUENT)
    assumed = [parse_rule("(s => t)"), parse_rule("r")]
    assert prove_extended(gamma, assumed, EXT_BASE, goal)
    ctx = extended_context(gamma, assumed, EXT_BASE)
    translated = parse_sequent("p, p -> v, w -> bot, r, q /\\ r -> z, s -> t, (s -> u) /\\ v -> q |- q")[0]
    assert ctx == translated
    assert prove_il(ctx, goal)
    assert not prove_extended(gamma, assumed[:1], EXT_BASE, goal)


def test_overlap_is_rejected():
    b = make_base([parse_rule("p")])
    with pytest.raises(OverlapError):
        extended_context([], [parse_rule("p")], b)
