"""Exact two-sorted dense-order computations behind the seven-element counterexample.

Points are pairs (q, s) with q rational and sort s in {0, 1}.  A pattern
relation is a set of atoms ``(s, t, c)``: the point pair ((q, s), (r, t))
belongs to it iff ``q c r`` for the comparison ``c`` in ``<``, ``=``, ``>``.
Every pair of points matches exactly one atom, and order automorphisms of
the rationals act transitively on the pairs matching a given atom, so
operations on pattern relations are exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from residuated.algebra import FiniteOrderedAlgebra
from residuated.relational import RelationalContext, pairs_to_mask
from residuated.terms import COMP, LRES, RRES, closure, parse_term, evaluate

CMPS = ("<", "=", ">")
_FLIP = {"<": ">", "=": "=", ">": "<"}

ALL_ATOMS = frozenset(itertools.product((0, 1), (0, 1), CMPS))
W_PAT = frozenset({(0, 0, "<"), (1, 0, "<"), (1, 0, "=")})

BOT, TOP = "⊥", "⊤"
A, B, BA, A1, B1 = "a", "b", "ba", "a′", "b′"

PAPER_ELEMENTS = {
    BOT: frozenset(),
    A: frozenset({(0, 0, "<")}),
    B: frozenset({(1, 0, "=")}),
    BA: frozenset({(1, 0, "<")}),
    A1: frozenset({(0, 0, "<"), (1, 0, "<")}),
    B1: frozenset({(1, 0, "="), (1, 0, "<")}),
    TOP: W_PAT,
}

# header order of the published tables
TABLE_ORDER = (A, B, BOT, BA, TOP, B1, A1)

# Published tables, cell [row][col], rows and columns in TABLE_ORDER.
PAPER_TABLES = {
    "comp": (
        (A, BA, BOT, BA, A1, BA, A1),
        (BOT,) * 7,
        (BOT,) * 7,
        (BOT,) * 7,
        (A, BA, BOT, BA, A1, BA, A1),
        (BOT,) * 7,
        (A, BA, BOT, BA, A1, BA, A1),
    ),
    "rres": (
        (TOP, B1, TOP, B1, B1, B1, B1),
        (B1, B1, TOP, B1, B1, B1, B1),
        (B1, B1, TOP, B1, B1, B1, B1),
        (B1, TOP, TOP, TOP, B1, TOP, B1),
        (TOP,) * 7,
        (B1, TOP, TOP, TOP, B1, TOP, B1),
        (TOP,) * 7,
    ),
    "lres": (
        (A, BOT, BOT, B1, TOP, B1, TOP),
        (TOP,) * 7,
        (TOP,) * 7,
        (TOP,) * 7,
        (A, BOT, BOT, B1, TOP, B1, TOP),
        (TOP,) * 7,
        (A, BOT, BOT, B1, TOP, B1, TOP),
    ),
}

# defining terms over the generators a, b used by the representation search
PAPER_DEFINING_TERMS = {
    A: "a",
    B: "b",
    BOT: "b∘b",
    TOP: "(b∘b)\\b",
    BA: "b∘a",
    B1: "b\\b",
    A1: "((b∘b)\\b)∘a",
}


class ConsistencyError(RuntimeError):
    pass


@dataclass(frozen=True)
class OrderConstraintSystem:
    points: tuple[str, ...]
    constraints: tuple[tuple[str, str, str], ...]


def weak_orders(k: int) -> Iterator[tuple[int, ...]]:
    """Rank vectors of all weak orders (ties allowed) on ``k`` labelled points."""
    for ranks in itertools.product(range(k), repeat=k):
        if set(ranks) == set(range(max(ranks) + 1)):
            yield ranks


def _holds(p, c, q) -> bool:
    return p < q if c == "<" else p == q if c == "=" else p > q


def dlo_sat(sys: OrderConstraintSystem) -> bool:
    """Satisfiable in a dense linear order without endpoints?

    Only the relative order of the points matters, so it suffices to try
    every weak order of them.
    """
    k = len(sys.points)
    if k > 3:
        raise ValueError("dlo_sat supports at most 3 points")
    pos = {p: i for i, p in enumerate(sys.points)}
    for ranks in weak_orders(k):
        if all(_holds(ranks[pos[p]], c, ranks[pos[q]]) for p, c, q in sys.constraints):
            return True
    return False


def _sat3(c_uw: str, c_wv: str, c_uv: str) -> bool:
    return _SAT3[c_uw, c_wv, c_uv]


_SAT3 = {
    (c1, c2, c3): dlo_sat(OrderConstraintSystem(("u", "w", "v"), (("u", c1, "w"), ("w", c2, "v"), ("u", c3, "v"))))
    for c1, c2, c3 in itertools.product(CMPS, repeat=3)
}


def compose_sym(x: frozenset, y: frozenset) -> frozenset:
    out = set()
    for s, t, c in ALL_ATOMS:
        for m, c1, c2 in itertools.product((0, 1), CMPS, CMPS):
            if (s, m, c1) in x and (m, t, c2) in y and _sat3(c1, c2, c):
                out.add((s, t, c))
                break
    return frozenset(out) & W_PAT


def rres_sym(x: frozenset, y: frozenset) -> frozenset:
    out = set()
    for s, t, c in ALL_ATOMS:
        ok = True
        for m, c1, c2 in itertools.product((0, 1), CMPS, CMPS):
            # w c1 u, w c2 v, u c v
            if not _sat3(_FLIP[c1], c2, c):
                continue
            if (m, s, c1) in x and (m, t, c2) not in y:
                ok = False
                break
        if ok:
            out.add((s, t, c))
    return frozenset(out) & W_PAT


def lres_sym(x: frozenset, y: frozenset) -> frozenset:
    out = set()
    for s, t, c in ALL_ATOMS:
        ok = True
        for m, c1, c2 in itertools.product((0, 1), CMPS, CMPS):
            # v c1 w, u c2 w, u c v
            if not _sat3(c, c1, c2):
                continue
            if (t, m, c1) in y and (s, m, c2) not in x:
                ok = False
                break
        if ok:
            out.add((s, t, c))
    return frozenset(out) & W_PAT


SYM_OPS = {COMP: compose_sym, RRES: rres_sym, LRES: lres_sym}


def sym_leq(x: frozenset, y: frozenset) -> bool:
    return x <= y


def eval_sym(term, env=None) -> frozenset:
    if isinstance(term, str):
        term = parse_term(term)
    return evaluate(term, env if env is not None else PAPER_ELEMENTS, SYM_OPS)


def build_paper_algebra() -> tuple[FiniteOrderedAlgebra, dict[str, frozenset]]:
    """Close {a, b} under the symbolic operations and export the abstract algebra.

    Elements are listed in closure discovery order.
    """
    found = closure({A: PAPER_ELEMENTS[A], B: PAPER_ELEMENTS[B]}, SYM_OPS)
    if len(found) != 7:
        raise ConsistencyError(f"closure of a, b has {len(found)} elements, expected 7")
    by_value = {v: k for k, v in PAPER_ELEMENTS.items()}
    try:
        order = [by_value[v] for v in found]
    except KeyError:
        raise ConsistencyError("closure produced an unexpected relation") from None
    family = {name: PAPER_ELEMENTS[name] for name in order}
    idx = {name: i for i, name in enumerate(order)}
    tables = []
    for op in (COMP, RRES, LRES):
        rows = []
        for x in order:
            rows.append(tuple(idx[by_value[SYM_OPS[op](family[x], family[y])]] for y in order))
        tables.append(tuple(rows))
    le = frozenset((idx[x], idx[y]) for x in order for y in order if family[x] <= family[y])
    return FiniteOrderedAlgebra(tuple(order), le, *tables), family


def closure_witnesses() -> dict[str, str]:
    """Shortest term found for each element during the closure of {a, b}."""
    found = closure({A: PAPER_ELEMENTS[A], B: PAPER_ELEMENTS[B]}, SYM_OPS)
    by_value = {v: k for k, v in PAPER_ELEMENTS.items()}
    return {by_value[v]: str(t) for v, t in found.items()}


@dataclass
class TableReport:
    orientation: str | None  # "row•col", "col•row" or None
    mismatches: dict[str, list[tuple[str, str, str, str]]]  # orientation -> (op, row, col, got)
    computed: dict[str, tuple[tuple[str, ...], ...]]  # op -> rows in TABLE_ORDER, entry = row•col
    discrepancies: list[tuple[str, str, str]]  # cells failing under both orientations

    @property
    def passed(self) -> bool:
        return self.orientation is not None


def computed_tables(alg: FiniteOrderedAlgebra, order=TABLE_ORDER) -> dict:
    return {op: tuple(tuple(alg.apply(op, r, c) for c in order) for r in order) for op in ("comp", "rres", "lres")}


def verify_tables(alg: FiniteOrderedAlgebra, published=None) -> TableReport:
    """Compare every cell of the published tables with the recomputed operations.

    Both readings of a cell are tried: entry(row, col) = row•col and
    entry(row, col) = col•row.  The report names the reading that matches
    all 147 cells, if any.
    """
    published = published or PAPER_TABLES
    comp = computed_tables(alg)
    mism = {"row•col": [], "col•row": []}
    both = []
    for op in ("comp", "rres", "lres"):
        for i, r in enumerate(TABLE_ORDER):
            for j, c in enumerate(TABLE_ORDER):
                cell = published[op][i][j]
                direct, transposed = comp[op][i][j], comp[op][j][i]
                if cell != direct:
                    mism["row•col"].append((op, r, c, direct))
                if cell != transposed:
                    mism["col•row"].append((op, r, c, transposed))
                if cell != direct and cell != transposed:
                    both.append((op, r, c))
    matching = [o for o, bad in mism.items() if not bad]
    orientation = matching[0] if len(matching) == 1 else None
    return TableReport(orientation, mism, comp, both)


def format_table(op: str, rows, order=TABLE_ORDER) -> str:
    sym = {"comp": "∘", "rres": "\\", "lres": "/"}[op]
    width = max(len(x) for x in order) + 1
    lines = [sym.ljust(width) + "|" + "".join(c.rjust(width) for c in order)]
    lines.append("-" * len(lines[0]))
    for r, row in zip(order, rows):
        lines.append(r.ljust(width) + "|" + "".join(v.rjust(width) for v in row))
    return "\n".join(lines)


# -- finite sampling oracle -------------------------------------------------

def grid_points(grid_size: int) -> list[tuple[Fraction, int]]:
    """{0, 1/2, 1, ..., grid_size} x {0, 1}, sorted by sort then value."""
    values = [Fraction(i, 2) for i in range(2 * grid_size + 1)]
    return [(q, s) for s in (0, 1) for q in values]


def _cmp(q, r) -> str:
    return "<" if q < r else "=" if q == r else ">"


def sample_pairs(x: frozenset, grid_size: int) -> set:
    if grid_size < 3:
        raise ValueError("grid_size must be at least 3")
    pts = grid_points(grid_size)
    return {(p, q) for p in pts for q in pts if (p[1], q[1], _cmp(p[0], q[0])) in x}


def grid_context(grid_size: int) -> tuple[RelationalContext, dict]:
    """The unit instantiated on the grid, and the point -> index map."""
    pts = grid_points(grid_size)
    index = {p: i for i, p in enumerate(pts)}
    unit = sample_pairs(W_PAT, grid_size)
    ctx = RelationalContext(len(pts), pairs_to_mask(((index[p], index[q]) for p, q in unit), len(pts)))
    return ctx, index


def sample_oracle(x: frozenset, grid_size: int) -> int:
    """Concrete relation (bit-matrix over :func:`grid_context`) matching ``x`` on the grid."""
    ctx, index = grid_context(grid_size)
    return pairs_to_mask(((index[p], index[q]) for p, q in sample_pairs(x & W_PAT, grid_size)), ctx.base_size)
