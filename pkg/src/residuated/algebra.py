"""Finite ordered algebras of signature (<=, comp, rres, lres) and axiom checks.

An algebra is given by tables.  ``comp[x][y]`` is ``x o y``, ``rres[x][y]`` is
``x \\ y`` and ``lres[x][y]`` is ``x / y``; all entries are element indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

DEFAULT_CAP = 100

OPS = ("comp", "rres", "lres")


class StructuralError(ValueError):
    """The input is not a well-formed finite algebra (as opposed to one failing an axiom)."""


@dataclass(frozen=True)
class FiniteOrderedAlgebra:
    elements: tuple[str, ...]
    le: frozenset[tuple[int, int]]
    comp: tuple[tuple[int, ...], ...]
    rres: tuple[tuple[int, ...], ...]
    lres: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = len(self.elements)
        if m < 1:
            raise StructuralError("algebra needs at least one element")
        if len(set(self.elements)) != m:
            dup = sorted({e for e in self.elements if self.elements.count(e) > 1})
            raise StructuralError(f"duplicate element names: {' '.join(dup)}")
        for x, y in self.le:
            if not (0 <= x < m and 0 <= y < m):
                raise StructuralError(f"order pair ({x}, {y}) out of range")
        for op in OPS:
            table = getattr(self, op)
            if len(table) != m or any(len(row) != m for row in table):
                raise StructuralError(f"{op} table is not {m}x{m}")
            for row in table:
                for z in row:
                    if not (isinstance(z, int) and 0 <= z < m):
                        raise StructuralError(f"{op} table has entry {z!r} outside the carrier")

    @classmethod
    def from_names(cls, elements: Sequence[str], le: Iterable[tuple[str, str]],
                   comp: dict, rres: dict, lres: dict) -> "FiniteOrderedAlgebra":
        """Build from name-keyed data; tables map ``(x, y)`` name pairs to names."""
        elements = tuple(elements)
        if len(set(elements)) != len(elements):
            raise StructuralError("duplicate element names")
        idx = {e: i for i, e in enumerate(elements)}

        def look(name):
            try:
                return idx[name]
            except KeyError:
                raise StructuralError(f"unknown element {name!r}") from None

        tables = []
        for op, data in (("comp", comp), ("rres", rres), ("lres", lres)):
            rows = []
            for x in elements:
                row = []
                for y in elements:
                    if (x, y) not in data:
                        raise StructuralError(f"{op} table missing entry for ({x}, {y})")
                    row.append(look(data[(x, y)]))
                rows.append(tuple(row))
            for x, y in data:
                look(x), look(y)
            tables.append(tuple(rows))
        order = frozenset((look(x), look(y)) for x, y in le)
        return cls(elements, order, *tables)

    @property
    def size(self) -> int:
        return len(self.elements)

    def index(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError:
            raise KeyError(name) from None

    def leq(self, x: int, y: int) -> bool:
        return (x, y) in self.le

    def table(self, op: str) -> tuple[tuple[int, ...], ...]:
        return getattr(self, op)

    def apply(self, op: str, x: str, y: str) -> str:
        """Name-level lookup, e.g. ``alg.apply("comp", "a", "b")``."""
        return self.elements[self.table(op)[self.index(x)][self.index(y)]]

    def opposite(self) -> "FiniteOrderedAlgebra":
        """Opposite algebra: ``x o' y = y o x``, ``x \\' y = y / x``, ``x /' y = y \\ x``."""
        m = self.size
        comp = tuple(tuple(self.comp[y][x] for y in range(m)) for x in range(m))
        rres = tuple(tuple(self.lres[y][x] for y in range(m)) for x in range(m))
        lres = tuple(tuple(self.rres[y][x] for y in range(m)) for x in range(m))
        return FiniteOrderedAlgebra(self.elements, self.le, comp, rres, lres)

    def with_entry(self, op: str, x: str, y: str, z: str) -> "FiniteOrderedAlgebra":
        """Copy with a single table cell replaced (handy for building defects)."""
        rows = [list(r) for r in self.table(op)]
        rows[self.index(x)][self.index(y)] = self.index(z)
        tables = {o: self.table(o) for o in OPS}
        tables[op] = tuple(tuple(r) for r in rows)
        return FiniteOrderedAlgebra(self.elements, self.le, **tables)


@dataclass
class AxiomReport:
    violations: list[tuple[str, tuple[str, ...]]] = field(default_factory=list)
    warnings: list[tuple[str, tuple[str, ...]]] = field(default_factory=list)
    # per-axiom count of witnesses dropped by the cap
    suppressed: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def merge(self, other: "AxiomReport") -> "AxiomReport":
        self.violations.extend(other.violations)
        self.warnings.extend(other.warnings)
        for k, v in other.suppressed.items():
            self.suppressed[k] = self.suppressed.get(k, 0) + v
        return self

    def lines(self) -> list[str]:
        out = []
        for name, wit in self.violations:
            out.append(f"VIOLATION {name}: {' '.join(wit)}")
        for name, n in sorted(self.suppressed.items()):
            out.append(f"VIOLATION {name}: ... {n} more witnesses suppressed")
        for name, wit in self.warnings:
            out.append(f"WARNING {name}: {' '.join(wit)}")
        out.append("PASSED" if self.passed else "FAILED")
        return out


class _Collector:
    def __init__(self, alg, cap):
        self.alg = alg
        self.cap = cap
        self.report = AxiomReport()
        self._counts: dict[str, int] = {}

    def add(self, name, witness, warning=False):
        n = self._counts.get(name, 0)
        self._counts[name] = n + 1
        names = tuple(self.alg.elements[i] for i in witness)
        if warning:
            self.report.warnings.append((name, names))
        elif n < self.cap:
            self.report.violations.append((name, names))
        else:
            self.report.suppressed[name] = self.report.suppressed.get(name, 0) + 1


def check_order(alg: FiniteOrderedAlgebra, cap: int = DEFAULT_CAP) -> AxiomReport:
    """Reflexivity and transitivity are required; antisymmetry failures are warnings."""
    c = _Collector(alg, cap)
    m = alg.size
    for x in range(m):
        if not alg.leq(x, x):
            c.add("reflexivity", (x,))
    for x, y, z in itertools.product(range(m), repeat=3):
        if alg.leq(x, y) and alg.leq(y, z) and not alg.leq(x, z):
            c.add("transitivity", (x, y, z))
    for x in range(m):
        for y in range(x + 1, m):
            if alg.leq(x, y) and alg.leq(y, x):
                c.add("antisymmetry", (x, y), warning=True)
    return c.report


def check_semigroup(alg: FiniteOrderedAlgebra, cap: int = DEFAULT_CAP) -> AxiomReport:
    c = _Collector(alg, cap)
    t = alg.comp
    for x, y, z in itertools.product(range(alg.size), repeat=3):
        if t[x][t[y][z]] != t[t[x][y]][z]:
            c.add("associativity", (x, y, z))
    return c.report


def check_monotonicity(alg: FiniteOrderedAlgebra, cap: int = DEFAULT_CAP) -> AxiomReport:
    c = _Collector(alg, cap)
    t = alg.comp
    pairs = sorted(alg.le)
    for x, x2 in pairs:
        for y, y2 in pairs:
            if not alg.leq(t[x][y], t[x2][y2]):
                c.add("monotonicity", (x, x2, y, y2))
    return c.report


def check_residuation(alg: FiniteOrderedAlgebra, cap: int = DEFAULT_CAP) -> AxiomReport:
    """For every (x, y, z): y <= x\\z  iff  x o y <= z  iff  x <= z/y.

    A triple is reported under ``residuation-rres`` when the first
    biconditional breaks and under ``residuation-lres`` for the second.
    """
    c = _Collector(alg, cap)
    leq = alg.leq
    for x, y, z in itertools.product(range(alg.size), repeat=3):
        middle = leq(alg.comp[x][y], z)
        if leq(y, alg.rres[x][z]) != middle:
            c.add("residuation-rres", (x, y, z))
        if leq(x, alg.lres[z][y]) != middle:
            c.add("residuation-lres", (x, y, z))
    return c.report


def validate(alg: FiniteOrderedAlgebra, cap: int = DEFAULT_CAP) -> AxiomReport:
    report = AxiomReport()
    for check in (check_order, check_semigroup, check_monotonicity, check_residuation):
        report.merge(check(alg, cap))
    return report
