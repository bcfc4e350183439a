import itertools

import pytest
from hypothesis import strategies as st

from poslog import corpus
from poslog.structures import FinStructure
from poslog.syntax import And, App, Eq, Exists, Or, Rel, Signature, Var
from poslog.verify import cycle_structure

U = Signature("U", (("f", 1),))
FR = Signature("FR", (("f", 1),), (("R", 2),))


@pytest.fixture(scope="session")
def ws():
    return corpus.load_workspace()


@pytest.fixture(scope="session")
def t_inj():
    return corpus.theory("t_inj")


@pytest.fixture(scope="session")
def t_nofix():
    return corpus.theory("t_nofix")


@pytest.fixture(scope="session")
def t_prime():
    return corpus.theory("t_prime")


@pytest.fixture(scope="session")
def t_any():
    return corpus.theory("t_any")


def cycles(*lengths):
    return cycle_structure(lengths, U)


# --------------------------------------------------------------- strategies

@st.composite
def unary_structures(draw, min_size=1, max_size=4, signature=U):
    n = draw(st.integers(min_size, max_size))
    table = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    return FinStructure.from_tables(signature, [f"a{i}" for i in range(n)], {"f": table}, name="S")


@st.composite
def fr_structures(draw, max_size=3):
    n = draw(st.integers(1, max_size))
    table = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    pairs = list(itertools.product(range(n), repeat=2))
    rel = draw(st.sets(st.sampled_from(pairs)))
    return FinStructure.from_tables(FR, [f"a{i}" for i in range(n)], {"f": table}, {"R": rel}, name="S")


def terms(variables, depth=2):
    base = st.sampled_from([Var(v) for v in variables])
    if depth == 0:
        return base
    return st.recursive(base, lambda t: t.map(lambda s: App("f", (s,))), max_leaves=depth + 1)


def positive_formulas(variables=("x", "y"), relations=True, max_leaves=6):
    """Random positive formulas over f (and R), free variables among ``variables``."""
    bound = ("u", "v")
    every = tuple(variables) + bound

    def atom():
        t = terms(every)
        eqs = st.builds(Eq, t, t)
        if not relations:
            return eqs
        return st.one_of(eqs, st.builds(lambda a, b: Rel("R", (a, b)), t, t))

    def extend(children):
        parts = st.lists(children, min_size=2, max_size=3).map(tuple)
        return st.one_of(st.builds(And, parts), st.builds(Or, parts),
                         st.builds(lambda v, b: Exists((v,), b), st.sampled_from(bound), children))

    def close(phi):
        # bind the helper variables so only ``variables`` stay free
        from poslog.syntax import free_vars
        loose = tuple(sorted(free_vars(phi) & set(bound)))
        return Exists(loose, phi) if loose else phi

    return st.recursive(atom(), extend, max_leaves=max_leaves).map(close)


# ----------------------------------------------------- acceptance summary lines

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
