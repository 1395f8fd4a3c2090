import itertools

import pytest
from hypothesis import given, settings, strategies as st

from residuated.algebra import (
    FiniteOrderedAlgebra,
    StructuralError,
    check_monotonicity,
    check_order,
    check_residuation,
    check_semigroup,
    validate,
)


def chain2(comp):
    """Two-element chain ⊥ <= ⊤ with the given composition and constant ⊤ residuals."""
    le = [("⊥", "⊥"), ("⊤", "⊤"), ("⊥", "⊤")]
    res = {k: "⊤" for k in comp}
    return FiniteOrderedAlgebra.from_names(["⊥", "⊤"], le, comp, res, res)


def test_trivial_algebra_passes(trivial):
    for check in (check_order, check_semigroup, check_monotonicity, check_residuation, validate):
        assert check(trivial).passed


def test_paper_algebra_passes(paper_alg):
    report = validate(paper_alg)
    assert report.passed, report.lines()
    assert report.warnings == []


def test_missing_reflexive_pair(trivial):
    alg = FiniteOrderedAlgebra(trivial.elements, frozenset(), trivial.comp, trivial.rres, trivial.lres)
    report = check_order(alg)
    assert report.violations == [("reflexivity", ("⊥",))]


def test_transitivity_violation():
    t = tuple(tuple(0 for _ in range(3)) for _ in range(3))
    le = frozenset({(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)})
    report = check_order(FiniteOrderedAlgebra(("x", "y", "z"), le, t, t, t))
    assert report.violations == [("transitivity", ("x", "y", "z"))]


def test_antisymmetry_is_only_a_warning():
    t = ((0, 0), (0, 0))
    le = frozenset(itertools.product(range(2), repeat=2))
    report = check_order(FiniteOrderedAlgebra(("x", "y"), le, t, t, t))
    assert report.passed
    assert report.warnings == [("antisymmetry", ("x", "y"))]


def test_mutated_composition_breaks_associativity(paper_alg):
    bad = paper_alg.with_entry("comp", "a", "a", "⊤")
    report = check_semigroup(bad)
    assert not report.passed
    name, (x, y, z) = report.violations[0]
    assert name == "associativity"
    # the reported triple really is a witness
    c = lambda p, q: bad.apply("comp", p, q)
    assert c(x, c(y, z)) != c(c(x, y), z)


def test_mutated_residual_breaks_residuation(paper_alg):
    assert paper_alg.apply("rres", "b", "b") == "b′"
    bad = paper_alg.with_entry("rres", "b", "b", "⊤")
    report = check_residuation(bad)
    assert not report.passed
    assert {name for name, _ in report.violations} == {"residuation-rres"}
    for _, (x, y, z) in report.violations:
        assert (x, z) == ("b", "b")


def test_monotonicity_defect():
    alg = chain2({("⊤", "⊤"): "⊥", ("⊥", "⊥"): "⊤", ("⊥", "⊤"): "⊥", ("⊤", "⊥"): "⊥"})
    report = check_monotonicity(alg)
    assert ("monotonicity", ("⊥", "⊥", "⊥", "⊤")) in report.violations


def test_violations_are_capped(paper_alg):
    bad = paper_alg.with_entry("comp", "a", "a", "⊤")
    capped = check_semigroup(bad, cap=3)
    full = check_semigroup(bad, cap=10_000)
    assert len(capped.violations) == 3
    assert 3 + capped.suppressed["associativity"] == len(full.violations)
    assert capped.violations == full.violations[:3]


def test_reports_are_deterministic(paper_alg):
    bad = paper_alg.with_entry("lres", "a", "a", "⊥")
    assert validate(bad).violations == validate(bad).violations
    viol = check_residuation(bad).violations
    idx = [tuple(bad.index(e) for e in w) for _, w in viol]
    assert idx == sorted(idx)


@pytest.mark.parametrize("mutate, message", [
    (lambda a: FiniteOrderedAlgebra(("x", "x"), frozenset(), ((0, 0),) * 2, ((0, 0),) * 2, ((0, 0),) * 2),
     "duplicate"),
    (lambda a: FiniteOrderedAlgebra(("x",), frozenset({(0, 0)}), ((0,),), ((1,),), ((0,),)), "outside"),
    (lambda a: FiniteOrderedAlgebra(("x", "y"), frozenset(), ((0, 0),), ((0, 0),) * 2, ((0, 0),) * 2),
     "not 2x2"),
])
def test_structural_errors(mutate, message):
    with pytest.raises(StructuralError, match=message):
        mutate(None)


def test_from_names_requires_total_tables():
    comp = {("x", "x"): "x"}
    with pytest.raises(StructuralError, match="missing entry"):
        FiniteOrderedAlgebra.from_names(["x", "y"], [], comp, comp, comp)


@st.composite
def small_algebras(draw):
    m = draw(st.integers(1, 3))
    table = lambda: tuple(tuple(draw(st.integers(0, m - 1)) for _ in range(m)) for _ in range(m))
    # a random preorder: reflexive transitive closure of random pairs
    le = {(i, i) for i in range(m)} | set(draw(st.lists(st.tuples(st.integers(0, m - 1), st.integers(0, m - 1)))))
    while True:
        more = {(x, z) for x, y in le for y2, z in le if y == y2} - le
        if not more:
            break
        le |= more
    names = tuple(f"e{i}" for i in range(m))
    return FiniteOrderedAlgebra(names, frozenset(le), table(), table(), table())


@settings(max_examples=300, deadline=None)
@given(small_algebras())
def test_opposite_duality(alg):
    assert check_residuation(alg).passed == check_residuation(alg.opposite()).passed
    assert validate(alg).passed == validate(alg.opposite()).passed
    assert alg.opposite().opposite() == alg


def test_opposite_of_paper_algebra(paper_alg):
    assert validate(paper_alg.opposite()).passed
