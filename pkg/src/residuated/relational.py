"""Algebras of binary relations inside a finite transitive unit W.

A relation on the base ``{0..n-1}`` is an ``int`` bit-matrix: pair ``(u, v)``
is bit ``u*n + v``.  All operations are relative to the unit of a
:class:`RelationalContext`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from residuated.algebra import FiniteOrderedAlgebra, StructuralError
from residuated.terms import COMP, LRES, RRES, Term, closure, evaluate, parse_term


class NotClosedError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


def pairs_to_mask(pairs: Iterable[tuple[int, int]], n: int) -> int:
    mask = 0
    for u, v in pairs:
        if not (0 <= u < n and 0 <= v < n):
            raise StructuralError(f"pair ({u}, {v}) outside base of size {n}")
        mask |= 1 << (u * n + v)
    return mask


def mask_to_pairs(mask: int, n: int) -> list[tuple[int, int]]:
    out = []
    while mask:
        low = mask & -mask
        bit = low.bit_length() - 1
        out.append(divmod(bit, n))
        mask ^= low
    return out


def rows_of(mask: int, n: int) -> list[int]:
    full = (1 << n) - 1
    return [(mask >> (u * n)) & full for u in range(n)]


def from_rows(rows: list[int], n: int) -> int:
    mask = 0
    for u, r in enumerate(rows):
        mask |= r << (u * n)
    return mask


def raw_compose(x: int, y: int, n: int) -> int:
    """Unrestricted relational composition."""
    yr = rows_of(y, n)
    out = []
    for xr in rows_of(x, n):
        acc = 0
        w = 0
        while xr:
            if xr & 1:
                acc |= yr[w]
            xr >>= 1
            w += 1
        out.append(acc)
    return from_rows(out, n)


def is_transitive(mask: int, n: int) -> bool:
    return raw_compose(mask, mask, n) & ~mask == 0


def field_of(mask: int, n: int) -> set[int]:
    pts = set()
    for u, v in mask_to_pairs(mask, n):
        pts.update((u, v))
    return pts


def is_reflexive(mask: int, n: int) -> bool:
    return all(mask >> (u * n + u) & 1 for u in range(n))


def submasks(mask: int):
    """All submasks of ``mask``, starting from 0, in increasing order."""
    bits = mask_to_bits(mask)
    for i in range(1 << len(bits)):
        sub = 0
        j = 0
        while i:
            if i & 1:
                sub |= bits[j]
            i >>= 1
            j += 1
        yield sub


def mask_to_bits(mask: int) -> list[int]:
    bits = []
    while mask:
        low = mask & -mask
        bits.append(low)
        mask ^= low
    return bits


@dataclass(frozen=True)
class RelationalContext:
    base_size: int
    unit: int
    named: Mapping[str, int] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        n = self.base_size
        if n < 1:
            raise StructuralError("base must have at least one point")
        if self.unit >> (n * n):
            raise StructuralError("unit has pairs outside the base")
        if not is_transitive(self.unit, n):
            raise StructuralError("unit is not transitive")
        missing = set(range(n)) - field_of(self.unit, n)
        if missing:
            raise StructuralError(f"base points outside the field of the unit: {sorted(missing)}")
        for name, rel in self.named.items():
            if rel & ~self.unit:
                raise StructuralError(f"relation {name!r} is not contained in the unit")

    @classmethod
    def from_pairs(cls, n: int, unit: Iterable[tuple[int, int]],
                   named: Mapping[str, Iterable[tuple[int, int]]] | None = None):
        named = {k: pairs_to_mask(v, n) for k, v in (named or {}).items()}
        return cls(n, pairs_to_mask(unit, n), named)

    def rel(self, pairs: Iterable[tuple[int, int]]) -> int:
        mask = pairs_to_mask(pairs, self.base_size)
        self.check(mask)
        return mask

    def pairs(self, mask: int) -> list[tuple[int, int]]:
        return mask_to_pairs(mask, self.base_size)

    def check(self, *rels: int) -> None:
        for r in rels:
            if r & ~self.unit:
                raise StructuralError(f"relation {self.pairs(r & ~self.unit)} leaves the unit")

    @property
    def unit_rows(self) -> list[int]:
        return rows_of(self.unit, self.base_size)

    @property
    def reflexive(self) -> bool:
        return is_reflexive(self.unit, self.base_size)

    @property
    def square(self) -> bool:
        n = self.base_size
        return self.unit == (1 << (n * n)) - 1

    def ops(self) -> "FastOps":
        return FastOps(self.base_size, self.unit)

    def connectives(self) -> dict:
        f = self.ops()
        return {COMP: f.compose, RRES: f.rres, LRES: f.lres}


class FastOps:
    """Unchecked operations for one unit; the search loop lives on these."""

    __slots__ = ("n", "unit", "urows", "full")

    def __init__(self, n: int, unit: int):
        self.n = n
        self.unit = unit
        self.full = (1 << n) - 1
        self.urows = rows_of(unit, n)

    def compose(self, x: int, y: int) -> int:
        return raw_compose(x, y, self.n) & self.unit

    def rres(self, x: int, y: int) -> int:
        # row u of x\y: W_u & AND over {w : (w,u) in x} of row w of y
        n, full = self.n, self.full
        xr = rows_of(x, n)
        yr = rows_of(y, n)
        out = 0
        for u in range(n):
            acc = full
            bit = 1 << u
            for w in range(n):
                if xr[w] & bit:
                    acc &= yr[w]
            out |= (acc & self.urows[u]) << (u * n)
        return out

    def lres(self, x: int, y: int) -> int:
        # row u of x/y: W_u & {v : row v of y is inside row u of x}
        n = self.n
        xr = rows_of(x, n)
        yr = rows_of(y, n)
        out = 0
        for u in range(n):
            notx = ~xr[u]
            acc = 0
            for v in range(n):
                if not yr[v] & notx:
                    acc |= 1 << v
            out |= (acc & self.urows[u]) << (u * n)
        return out


def compose(x: int, y: int, ctx: RelationalContext) -> int:
    """{(u,v) in W : (u,w) in x and (w,v) in y for some w}."""
    ctx.check(x, y)
    return ctx.ops().compose(x, y)


def rres(x: int, y: int, ctx: RelationalContext) -> int:
    """x \\ y = {(u,v) in W : for every w, (w,u) in x implies (w,v) in y}."""
    ctx.check(x, y)
    return ctx.ops().rres(x, y)


def lres(x: int, y: int, ctx: RelationalContext) -> int:
    """x / y = {(u,v) in W : for every w, (v,w) in y implies (u,w) in x}."""
    ctx.check(x, y)
    return ctx.ops().lres(x, y)


def close(generators: Mapping[str, int], ctx: RelationalContext) -> dict[str, int]:
    """Subalgebra of the full relation algebra over ``ctx`` generated by ``generators``.

    Each element is named by its shortest witnessing term.
    """
    ctx.check(*generators.values())
    found = closure(generators, ctx.connectives())
    return {str(term): value for value, term in found.items()}


def to_abstract(family: Mapping[str, int], ctx: RelationalContext) -> FiniteOrderedAlgebra:
    names = list(family)
    rels = [family[k] for k in names]
    ctx.check(*rels)
    index = {}
    for i, r in enumerate(rels):
        if r in index:
            raise StructuralError(f"{names[index[r]]!r} and {names[i]!r} are the same relation")
        index[r] = i
    conn = ctx.connectives()
    tables = []
    for op in (COMP, RRES, LRES):
        rows = []
        for i, x in enumerate(rels):
            row = []
            for j, y in enumerate(rels):
                z = conn[op](x, y)
                if z not in index:
                    raise NotClosedError(
                        f"family not closed: {names[i]}{op}{names[j]} = {ctx.pairs(z)} is missing")
                row.append(index[z])
            rows.append(tuple(row))
        tables.append(tuple(rows))
    le = frozenset((i, j) for i, x in enumerate(rels) for j, y in enumerate(rels) if x & ~y == 0)
    return FiniteOrderedAlgebra(tuple(names), le, *tables)


def eval_term(t: Term | str, env: Mapping[str, int], ctx: RelationalContext) -> int:
    if isinstance(t, str):
        t = parse_term(t)
    ctx.check(*env.values())
    return evaluate(t, env, ctx.connectives())


def implication8(a, b, compose_fn, rres_fn, leq) -> bool:
    """(a <= a∘a and a∘a <= a) -> a <= a∘(b\\b)∘a, over arbitrary operations."""
    aa = compose_fn(a, a)
    if not (leq(a, aa) and leq(aa, a)):
        return True
    return leq(a, compose_fn(compose_fn(a, rres_fn(b, b)), a))


def check_implication8(ctx: RelationalContext, a: int, b: int) -> bool:
    ctx.check(a, b)
    f = ctx.ops()
    return implication8(a, b, f.compose, f.rres, lambda x, y: x & ~y == 0)


def find_reflexive_point(ctx: RelationalContext, a: int) -> int:
    """A point z with (z,z) in a, for nonempty dense transitive a.

    Starts from the least pair of ``a`` and keeps splitting every edge of the
    path through its least midpoint until some point repeats.
    """
    ctx.check(a)
    if not a:
        raise PreconditionError("relation is empty")
    f = ctx.ops()
    aa = f.compose(a, a)
    if a & ~aa:
        raise PreconditionError("relation is not dense (a is not contained in a∘a)")
    if aa & ~a:
        raise PreconditionError("relation is not transitive (a∘a is not contained in a)")
    n = ctx.base_size
    arows = rows_of(a, n)
    path = list(mask_to_pairs(a & -a, n)[0])
    while True:
        seen = set()
        repeats = set()
        for z in path:
            (repeats if z in seen else seen).add(z)
        if repeats:
            z = min(repeats)
            assert arows[z] >> z & 1
            return z
        longer = [path[0]]
        for u, v in zip(path, path[1:]):
            mids = [w for w in range(n) if arows[u] >> w & 1 and arows[w] >> v & 1]
            longer += [mids[0], v]
        path = longer


def transitive_closure(mask: int, n: int) -> int:
    while True:
        nxt = mask | raw_compose(mask, mask, n)
        if nxt == mask:
            return mask
        mask = nxt


def random_unit(rng: random.Random, max_points: int, density: float | None = None) -> RelationalContext:
    """A random transitive unit with full field on at most ``max_points`` points."""
    n = rng.randint(1, max_points)
    p = rng.random() if density is None else density
    mask = 0
    for bit in range(n * n):
        if rng.random() < p:
            mask |= 1 << bit
    if not mask:
        mask = 1 << rng.randrange(n * n)
    mask = transitive_closure(mask, n)
    pts = sorted(field_of(mask, n))
    relabel = {u: i for i, u in enumerate(pts)}
    k = len(pts)
    return RelationalContext(k, pairs_to_mask(((relabel[u], relabel[v]) for u, v in mask_to_pairs(mask, n)), k))


def random_subrelation(rng: random.Random, ctx: RelationalContext, p: float = 0.5) -> int:
    out = 0
    for bit in mask_to_bits(ctx.unit):
        if rng.random() < p:
            out |= bit
    return out


def random_idempotent(rng: random.Random, ctx: RelationalContext) -> int:
    """A random dense and transitive subrelation of the unit (possibly empty)."""
    n = ctx.base_size
    a = transitive_closure(random_subrelation(rng, ctx, rng.random()), n)
    while True:
        sq = raw_compose(a, a, n)
        if sq == a:
            return a
        a = sq
