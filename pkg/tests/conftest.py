from pathlib import Path

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ptsem.syntax import BOT, Atom, AtomicRule, Conj, Disj, Imp, Premise

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"

# filled by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


LETTERS = [Atom(n) for n in "pqr"]


def formulas(letters=LETTERS, connectives=(Conj, Disj, Imp), max_leaves=8, with_bot=True):
    leaves = st.sampled_from(list(letters) + ([BOT] if with_bot else []))

    def extend(children):
        return st.builds(lambda c, a, b: c(a, b), st.sampled_from(connectives), children, children)

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def disjunction_free(letters=LETTERS, max_leaves=8):
    return formulas(letters, (Conj, Imp), max_leaves)


def rules(letters=LETTERS, max_level=2, max_premises=3):
    """Atomic rules of level at most ``max_level``."""
    atom = st.sampled_from(list(letters))
    if max_level <= 0:
        return st.builds(lambda a: AtomicRule((), a), atom)
    inner = rules(letters, max_level - 2, 2) if max_level >= 2 else None
    discharged = st.frozensets(inner, max_size=2) if inner is not None else st.just(frozenset())
    premise = st.builds(Premise, discharged, atom)
    return st.builds(lambda ps, c: AtomicRule(tuple(ps), c), st.lists(premise, max_size=max_premises), atom)
