import pytest

from residuated.algebra import FiniteOrderedAlgebra
from residuated.dlo import build_paper_algebra
from residuated.relational import RelationalContext

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def paper():
    return build_paper_algebra()


@pytest.fixture(scope="session")
def paper_alg(paper):
    return paper[0]


@pytest.fixture
def trivial():
    t = ((0,),)
    return FiniteOrderedAlgebra(("⊥",), frozenset({(0, 0)}), t, t, t)


@pytest.fixture
def chain3():
    """W = {(0,1), (1,2), (0,2)}: the strict order on three points."""
    return RelationalContext.from_pairs(3, [(0, 1), (1, 2), (0, 2)])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
