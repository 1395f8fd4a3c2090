"""Exhaustive and randomized hunts for counterexamples to

    (a <= a∘a and a∘a <= a)  ->  a <= a∘(b\\b)∘a

on finite bases.  There are none: on a finite base every nonempty dense transitive
relation has a reflexive point.
"""

from __future__ import annotations

import hashlib
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from residuated.relational import (
    FastOps,
    check_implication8,
    mask_to_pairs,
    random_idempotent,
    random_subrelation,
    random_unit,
    submasks,
)
from residuated.search import labeled_transitive, labeled_units

EXHAUSTIVE_LIMIT = 3
RANDOM_LIMIT = 6


@dataclass
class ImplicationRun:
    units: int = 0
    pairs: int = 0  # (a, b) pairs that passed the antecedent filter
    counterexamples: list = field(default_factory=list)
    log: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples


def _scan_units(k: int, units: list[int]):
    pairs = 0
    found = []
    for unit in units:
        f = FastOps(k, unit)
        subs = list(submasks(unit))
        idempotents = [a for a in subs if f.compose(a, a) == a]
        # the consequent only sees b through b\b
        residues: dict[int, int] = {}
        for b in subs:
            residues.setdefault(f.rres(b, b), b)
        for a in idempotents:
            for r, b in residues.items():
                if a & ~f.compose(f.compose(a, r), a):
                    found.append((k, unit, a, b))
        pairs += len(idempotents) * len(subs)
    return pairs, found


def exhaustive(n: int, jobs: int = 1) -> ImplicationRun:
    """Every full-field transitive unit on k <= n labelled points, every a, every b."""
    if not 1 <= n <= EXHAUSTIVE_LIMIT:
        raise ValueError(f"exhaustive mode supports 1 <= n <= {EXHAUSTIVE_LIMIT}")
    run = ImplicationRun()
    for k in range(1, n + 1):
        units = list(labeled_units(k))
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                parts = list(pool.map(_scan_units, [k] * jobs, [units[w::jobs] for w in range(jobs)]))
        else:
            parts = [_scan_units(k, units)]
        k_pairs = sum(p for p, _ in parts)
        run.counterexamples += sorted(c for _, found in parts for c in found)
        run.units += len(units)
        run.pairs += k_pairs
        run.log.append(f"k={k} units={len(units)} labelled_transitive={len(labeled_transitive(k))} pairs={k_pairs}")
    return run


def randomized(count: int, seed: int, max_points: int = RANDOM_LIMIT) -> ImplicationRun:
    """Random units on <= max_points points; ``a`` alternates between dense-transitive and arbitrary."""
    if not 1 <= max_points <= RANDOM_LIMIT:
        raise ValueError(f"random mode supports 1 <= n <= {RANDOM_LIMIT}")
    rng = random.Random(seed)
    run = ImplicationRun()
    digest = hashlib.sha256()
    for i in range(count):
        ctx = random_unit(rng, max_points)
        a = random_idempotent(rng, ctx) if i % 2 == 0 else random_subrelation(rng, ctx)
        b = random_subrelation(rng, ctx)
        run.units += 1
        digest.update(f"{ctx.base_size}:{ctx.unit}:{a}:{b};".encode())
        f = ctx.ops()
        if f.compose(a, a) != a:
            continue
        run.pairs += 1
        if not check_implication8(ctx, a, b):
            run.counterexamples.append((ctx.base_size, ctx.unit, a, b))
    run.log.append(f"seed={seed} samples={count} max_points={max_points} "
                   f"antecedent_held={run.pairs} digest={digest.hexdigest()[:16]}")
    return run


def describe(k: int, unit: int, a: int, b: int) -> str:
    fmt = lambda m: " ".join(f"({u},{v})" for u, v in mask_to_pairs(m, k)) or "∅"
    return f"base={k} unit={fmt(unit)} a={fmt(a)} b={fmt(b)}"
