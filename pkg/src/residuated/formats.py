"""Line-oriented text formats for algebras and relational structures.

Algebra file::

    elements a b
    le a a
    comp a b b        # a∘b = b
    rres a b a
    lres a b a

Relational file::

    base 3
    unit 0 1
    rel x 0 1
    rel empty         # declares an empty relation

``#`` starts a comment.
"""

from __future__ import annotations

from pathlib import Path

from residuated.algebra import OPS, FiniteOrderedAlgebra, StructuralError
from residuated.relational import RelationalContext, mask_to_pairs

BUILTIN_PAPER = "builtin:paper"


class ParseError(StructuralError):
    def __init__(self, msg, lineno=None):
        super().__init__(f"line {lineno}: {msg}" if lineno else msg)


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if line:
            yield lineno, line


def parse_algebra(text: str) -> FiniteOrderedAlgebra:
    elements = None
    le = []
    tables = {op: {} for op in OPS}
    for lineno, words in _lines(text):
        key, args = words[0], words[1:]
        if key == "elements":
            if elements is not None:
                raise ParseError("repeated 'elements' line", lineno)
            if not args:
                raise ParseError("no elements listed", lineno)
            elements = args
            continue
        if elements is None:
            raise ParseError("'elements' must come first", lineno)
        for a in args:
            if a not in elements:
                raise ParseError(f"unknown element {a!r}", lineno)
        if key == "le":
            if len(args) != 2:
                raise ParseError("'le' takes two elements", lineno)
            le.append(tuple(args))
        elif key in OPS:
            if len(args) != 3:
                raise ParseError(f"'{key}' takes three elements", lineno)
            x, y, z = args
            if (x, y) in tables[key]:
                raise ParseError(f"duplicate {key} entry for ({x}, {y})", lineno)
            tables[key][(x, y)] = z
        else:
            raise ParseError(f"unknown keyword {key!r}", lineno)
    if elements is None:
        raise ParseError("missing 'elements' line")
    return FiniteOrderedAlgebra.from_names(elements, le, **tables)


def format_algebra(alg: FiniteOrderedAlgebra) -> str:
    names = alg.elements
    out = ["elements " + " ".join(names)]
    out += [f"le {names[x]} {names[y]}" for x, y in sorted(alg.le)]
    for op in OPS:
        t = alg.table(op)
        out += [f"{op} {names[x]} {names[y]} {names[t[x][y]]}"
                for x in range(alg.size) for y in range(alg.size)]
    return "\n".join(out) + "\n"


def parse_relfile(text: str) -> RelationalContext:
    n = None
    unit = []
    named: dict[str, list] = {}
    for lineno, words in _lines(text):
        key, args = words[0], words[1:]
        try:
            if key == "base":
                if n is not None or len(args) != 1:
                    raise ParseError("expected a single 'base <n>' line", lineno)
                n = int(args[0])
            elif n is None:
                raise ParseError("'base' must come first", lineno)
            elif key == "unit":
                if len(args) != 2:
                    raise ParseError("'unit' takes two points", lineno)
                unit.append((int(args[0]), int(args[1])))
            elif key == "rel":
                if len(args) not in (1, 3):
                    raise ParseError("'rel' takes a name and optionally two points", lineno)
                pairs = named.setdefault(args[0], [])
                if len(args) == 3:
                    pairs.append((int(args[1]), int(args[2])))
            else:
                raise ParseError(f"unknown keyword {key!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"bad integer: {exc}", lineno) from None
    if n is None:
        raise ParseError("missing 'base' line")
    return RelationalContext.from_pairs(n, unit, named)


def format_relfile(ctx: RelationalContext) -> str:
    n = ctx.base_size
    out = [f"base {n}"]
    out += [f"unit {u} {v}" for u, v in sorted(mask_to_pairs(ctx.unit, n))]
    for name, rel in ctx.named.items():
        pairs = sorted(mask_to_pairs(rel, n))
        if pairs:
            out += [f"rel {name} {u} {v}" for u, v in pairs]
        else:
            out.append(f"rel {name}")
    return "\n".join(out) + "\n"


def load_algebra(source: str) -> FiniteOrderedAlgebra:
    if source == BUILTIN_PAPER:
        from residuated.dlo import build_paper_algebra
        return build_paper_algebra()[0]
    return parse_algebra(Path(source).read_text(encoding="utf-8"))


def load_relfile(source: str) -> RelationalContext:
    return parse_relfile(Path(source).read_text(encoding="utf-8"))
