"""Bounded search for representations of a finite algebra on small bases.

Units are enumerated one per isomorphism class; for each unit only the images
of the generators are guessed, every other image being forced by its defining
term.  Partial assignments are pruned by checking every condition whose
elements are already computed, so pruning never rejects a representation.
"""

from __future__ import annotations

import functools
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence, Union

from residuated.algebra import AxiomReport, FiniteOrderedAlgebra
from residuated.relational import (
    FastOps,
    RelationalContext,
    is_reflexive,
    is_transitive,
    field_of,
    close,
    submasks,
)
from residuated.terms import COMP, LRES, OP_NAMES, RRES, Term, closure, evaluate, parse_term

log = logging.getLogger(__name__)

_OP_ORDER = (COMP, RRES, LRES)


# -- units --------------------------------------------------------------------

def labeled_transitive_naive(k: int) -> list[int]:
    """Every transitive relation on k labelled points, by filtering all 2^(k*k)."""
    return [m for m in range(1 << (k * k)) if is_transitive(m, k)]


@functools.lru_cache(maxsize=None)
def labeled_transitive(k: int) -> tuple[int, ...]:
    """Transitive relations on k labelled points, grown one point at a time."""
    if k == 0:
        return (0,)
    out = []
    for old in labeled_transitive(k - 1):
        # re-index from a (k-1)-grid to a k-grid
        base = 0
        for u in range(k - 1):
            base |= ((old >> (u * (k - 1))) & ((1 << (k - 1)) - 1)) << (u * k)
        new = k - 1
        for row, col, loop in itertools.product(range(1 << (k - 1)), range(1 << (k - 1)), (0, 1)):
            m = base | (row << (new * k)) | (loop << (new * k + new))
            for u in range(k - 1):
                if col >> u & 1:
                    m |= 1 << (u * k + new)
            if is_transitive(m, k):
                out.append(m)
    return tuple(sorted(out))


@functools.lru_cache(maxsize=None)
def labeled_units(k: int) -> tuple[int, ...]:
    """Transitive relations on k labelled points whose field is all k points."""
    return tuple(m for m in labeled_transitive(k) if len(field_of(m, k)) == k)


def permute(mask: int, perm: Sequence[int], k: int) -> int:
    out = 0
    for u in range(k):
        for v in range(k):
            if mask >> (u * k + v) & 1:
                out |= 1 << (perm[u] * k + perm[v])
    return out


def canonical(mask: int, k: int) -> int:
    """Least encoding over all relabellings of the base."""
    return min(permute(mask, p, k) for p in itertools.permutations(range(k)))


@functools.lru_cache(maxsize=None)
def canonical_units(k: int) -> tuple[int, ...]:
    return tuple(sorted({canonical(m, k) for m in labeled_units(k)}))


def enumerate_units(n: int, square_mode: bool = False) -> Iterator[RelationalContext]:
    """One unit per isomorphism class, for every base size 1..n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    for k in range(1, n + 1):
        if square_mode:
            yield RelationalContext(k, (1 << (k * k)) - 1)
        else:
            for m in canonical_units(k):
                yield RelationalContext(k, m)


# -- problems -------------------------------------------------------------------

def _abstract_ops(alg: FiniteOrderedAlgebra) -> dict:
    return {op: (lambda t: lambda x, y: t[x][y])(alg.table(OP_NAMES[op])) for op in _OP_ORDER}


def defining_terms(alg: FiniteOrderedAlgebra, generators: Sequence[str]) -> dict[str, Term]:
    """Shortest term over ``generators`` for every element; error if they do not generate."""
    found = closure({g: alg.index(g) for g in generators}, _abstract_ops(alg))
    missing = [e for i, e in enumerate(alg.elements) if i not in found]
    if missing:
        raise ValueError(f"generators {list(generators)} do not generate {' '.join(missing)}")
    terms = {alg.elements[i]: t for i, t in found.items()}
    for g in generators:
        terms[g] = Term.var(g)
    return terms


def minimal_generators(alg: FiniteOrderedAlgebra) -> tuple[str, ...]:
    ops = _abstract_ops(alg)
    for r in range(1, alg.size + 1):
        for gens in itertools.combinations(alg.elements, r):
            if len(closure({g: alg.index(g) for g in gens}, ops)) == alg.size:
                return gens
    raise AssertionError("unreachable: the whole carrier generates")


@dataclass
class SearchProblem:
    target: FiniteOrderedAlgebra
    generators: tuple[str, ...]
    defining_terms: dict[str, Term]
    max_base: int
    square_mode: bool = False

    def __post_init__(self):
        self.generators = tuple(self.generators)
        self.defining_terms = {k: parse_term(v) if isinstance(v, str) else v
                               for k, v in self.defining_terms.items()}
        ops = _abstract_ops(self.target)
        env = {g: self.target.index(g) for g in self.generators}
        for e in self.target.elements:
            if e not in self.defining_terms:
                raise ValueError(f"missing defining term for element {e!r}")
            t = self.defining_terms[e]
            if not t.leaves() <= set(self.generators):
                raise ValueError(f"defining term {t} of {e!r} uses non-generators")
            got = evaluate(t, env, ops)
            if got != self.target.index(e):
                raise ValueError(f"defining term {t} evaluates to {self.target.elements[got]!r}, not {e!r}")

    @classmethod
    def for_algebra(cls, alg, max_base, generators=None, square_mode=False):
        gens = tuple(generators) if generators else minimal_generators(alg)
        return cls(alg, gens, defining_terms(alg, gens), max_base, square_mode)


@dataclass
class Counters:
    units_examined: int = 0
    assignments_examined: int = 0
    nodes: int = 0
    identity_cuts: int = 0

    def add(self, other: "Counters") -> None:
        self.units_examined += other.units_examined
        self.assignments_examined += other.assignments_examined
        self.nodes += other.nodes
        self.identity_cuts += other.identity_cuts


@dataclass
class Found:
    ctx: RelationalContext
    images: dict[str, int]
    unit_index: int
    counters: Counters = field(default_factory=Counters)

    def element_images(self, p: SearchProblem) -> dict[str, int]:
        f = self.ctx.ops()
        conn = {COMP: f.compose, RRES: f.rres, LRES: f.lres}
        return {e: evaluate(t, self.images, conn) for e, t in p.defining_terms.items()}


@dataclass
class NotFoundUpTo:
    n: int
    counters: Counters = field(default_factory=Counters)

    @property
    def units_examined(self):
        return self.counters.units_examined

    @property
    def assignments_examined(self):
        return self.counters.assignments_examined


RepresentationResult = Union[Found, NotFoundUpTo]


# -- the per-unit scan ----------------------------------------------------------

def identity_violations(alg: FiniteOrderedAlgebra) -> list[tuple[str, str, str]]:
    """Inequalities every representation on a reflexive unit satisfies, but ``alg`` violates.

    With a reflexive unit both y\\y and y/y contain the identity, hence
    z <= z o (y\\y), z <= (y\\y) o z and likewise for y/y.
    """
    out = []
    c = alg.comp
    for y in range(alg.size):
        for res in (alg.rres[y][y], alg.lres[y][y]):
            for z in range(alg.size):
                if not alg.leq(z, c[z][res]):
                    out.append((alg.elements[z], alg.elements[y], "right"))
                if not alg.leq(z, c[res][z]):
                    out.append((alg.elements[z], alg.elements[y], "left"))
    return out


class _Plan:
    """Generator order plus the checks that become decidable after each generator."""

    def __init__(self, p: SearchProblem):
        alg = p.target
        self.alg = alg
        self.terms = p.defining_terms
        reach = {g: sum(1 for t in p.defining_terms.values() if t.leaves() == {g}) for g in p.generators}
        # generators defining the most elements on their own go first
        self.order = sorted(p.generators, key=lambda g: (-reach[g], p.generators.index(g)))
        self.identity_cut = bool(identity_violations(alg))
        avail: list[int] = []
        self.recipes: dict = {}
        self.stages = []
        for i, g in enumerate(self.order):
            known = set(self.order[: i + 1])
            new = [alg.index(e) for e in alg.elements
                   if alg.index(e) not in avail and self.terms[e].leaves() <= known]
            # generator first so the remaining terms can refer to it
            new.sort(key=lambda e: (self.terms[alg.elements[e]].size, e))
            old = list(avail)
            avail.extend(new)
            self.recipes.update((e, self._recipe(e, avail)) for e in new)
            distinct = [(e, f) for k, e in enumerate(new) for f in old + new[:k]]
            order = [(e, f, alg.leq(e, f)) for e in avail for f in avail
                     if e != f and (e in new or f in new)]
            tables = []
            for op in _OP_ORDER:
                t = alg.table(OP_NAMES[op])
                for e in avail:
                    for f in avail:
                        r = t[e][f]
                        if r in avail and (e in new or f in new or r in new):
                            tables.append((op, e, f, r))
            self.stages.append((g, new, distinct, order, tables))


    def _recipe(self, e, avail):
        """One-step computation of ``e`` from earlier elements when its term allows it."""
        t = self.terms[self.alg.elements[e]]
        if t.is_var:
            return ("gen", t.name)
        by_term = {self.terms[self.alg.elements[f]]: f for f in avail if f != e}
        before = avail[: avail.index(e)]
        l, r = by_term.get(t.left), by_term.get(t.right)
        if l in before and r in before:
            return ("op", t.op, l, r)
        return ("term", t)


def _stage_ok(images, distinct, order, tables, conn) -> bool:
    for e, f in distinct:
        if images[e] == images[f]:
            return False
    for e, f, want in order:
        if (images[e] & ~images[f] == 0) != want:
            return False
    for op, e, f, r in tables:
        if conn[op](images[e], images[f]) != images[r]:
            return False
    return True


def _compute(plan, stage, env, images, conn):
    for e in stage[1]:
        recipe = plan.recipes[e]
        kind = recipe[0]
        if kind == "gen":
            images[e] = env[recipe[1]]
        elif kind == "op":
            images[e] = conn[recipe[1]](images[recipe[2]], images[recipe[3]])
        else:
            images[e] = evaluate(recipe[1], env, conn)


def search_unit(ctx: RelationalContext, p: SearchProblem, prune: bool = True, plan=None):
    """Scan one unit; returns (images of generators or None, Counters)."""
    plan = plan or _Plan(p)
    counters = Counters(units_examined=1)
    if prune and plan.identity_cut and is_reflexive(ctx.unit, ctx.base_size):
        counters.identity_cuts = 1
        return None, counters
    f = FastOps(ctx.base_size, ctx.unit)
    conn = {COMP: f.compose, RRES: f.rres, LRES: f.lres}
    candidates = list(submasks(ctx.unit))
    stages = plan.stages
    last = len(stages) - 1

    if not prune:
        checks = [s[2:] for s in stages]
        for combo in itertools.product(candidates, repeat=len(stages)):
            counters.nodes += 1
            counters.assignments_examined += 1
            env = dict(zip(plan.order, combo))
            images = {}
            for s in stages:
                _compute(plan, s, env, images, conn)
            if all(_stage_ok(images, *c, conn) for c in checks):
                return env, counters
        return None, counters

    env: dict[str, int] = {}
    images: dict[int, int] = {}

    def descend(i):
        g, new, distinct, order, tables = stages[i]
        for cand in candidates:
            counters.nodes += 1
            if i == last:
                counters.assignments_examined += 1
            env[g] = cand
            _compute(plan, stages[i], env, images, conn)
            if _stage_ok(images, distinct, order, tables, conn):
                if i == last or descend(i + 1):
                    return True
        del env[g]
        return False

    if descend(0):
        return dict(env), counters
    return None, counters


# -- driver ---------------------------------------------------------------------

def _run_shard(p: SearchProblem, units: list[tuple[int, RelationalContext]], prune: bool):
    plan = _Plan(p)
    out = []
    for idx, ctx in units:
        images, counters = search_unit(ctx, p, prune, plan)
        out.append((idx, images, counters))
        if images is not None:
            break
    return out


def search_representation(p: SearchProblem, jobs: int = 1, prune: bool = True,
                          progress=None) -> RepresentationResult:
    """First representation in canonical unit order, or a certificate that none exists up to ``p.max_base``.

    Counters cover exactly the units up to and including the one where the
    witness was found, so they do not depend on ``jobs``.
    """
    units = list(enumerate(enumerate_units(p.max_base, p.square_mode)))
    if jobs <= 1:
        plan = _Plan(p)
        results = []
        for idx, ctx in units:
            images, counters = search_unit(ctx, p, prune, plan)
            results.append((idx, images, counters))
            if progress:
                progress(idx + 1, len(units))
            if images is not None:
                break
    else:
        shards = [units[w::jobs] for w in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_shard, p, shard, prune) for shard in shards if shard]
            results = [r for fut in futures for r in fut.result()]
        results.sort(key=lambda r: r[0])
    total = Counters()
    for idx, images, counters in results:
        total.add(counters)
        if images is not None:
            log.debug("representation found on unit %d", idx)
            return Found(units[idx][1], images, idx, total)
    return NotFoundUpTo(p.max_base, total)


def verify_representation(ctx: RelationalContext, images: Mapping[str, int], p: SearchProblem) -> AxiomReport:
    """Re-check a witness from scratch, without the defining terms or the search code.

    Generator pairs (element, relation) are closed under the operations on
    both sides at once; the result must be the graph of an order-isomorphism
    from the target onto the subalgebra of the unit's relations generated by
    the images.
    """
    alg = p.target
    report = AxiomReport()
    conn = ctx.connectives()
    try:
        ctx.check(*images.values())
    except ValueError as exc:
        report.violations.append(("containment", (str(exc),)))
        return report
    graph: dict[int, int] = {alg.index(g): images[g] for g in p.generators}
    frontier = True
    while frontier:
        frontier = False
        for x, rx in list(graph.items()):
            for y, ry in list(graph.items()):
                for op in _OP_ORDER:
                    z = alg.table(OP_NAMES[op])[x][y]
                    rz = conn[op](rx, ry)
                    if z not in graph:
                        graph[z] = rz
                        frontier = True
                    elif graph[z] != rz:
                        bad = ("homomorphism", (alg.elements[x], op, alg.elements[y]))
                        if bad not in report.violations:
                            report.violations.append(bad)
    if len(graph) != alg.size:
        report.violations.append(("generation", (str(len(graph)), str(alg.size))))
    seen: dict[int, int] = {}
    for e, r in sorted(graph.items()):
        if r in seen:
            report.violations.append(("injectivity", (alg.elements[seen[r]], alg.elements[e])))
        seen.setdefault(r, e)
    for e, re_ in graph.items():
        for f, rf in graph.items():
            if (re_ & ~rf == 0) != alg.leq(e, f):
                report.violations.append(("order", (alg.elements[e], alg.elements[f])))
    fam = close({g: images[g] for g in p.generators}, ctx)
    if len(fam) != alg.size:
        report.violations.append(("closure-size", (str(len(fam)), str(alg.size))))
    return report
