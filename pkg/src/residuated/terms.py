"""Terms over named generators with the connectives o, \\ and /, plus subalgebra closure.

Concrete syntax: ``∘`` (or ``*``) for composition, ``\\`` and ``/`` for the
residuals.  Residuals bind tighter than composition, so ``a∘b\\b∘a`` reads as
``a∘(b\\b)∘a``; all connectives associate to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Hashable, Mapping, Optional

COMP, RRES, LRES = "∘", "\\", "/"
CONNECTIVES = (COMP, RRES, LRES)
OP_NAMES = {COMP: "comp", RRES: "rres", LRES: "lres"}
_SORT_CHAR = {COMP: "\x01", RRES: "\x02", LRES: "\x03"}

_TOKEN = re.compile(r"\s*(?:(?P<op>[∘*\\/])|(?P<paren>[()])|(?P<name>[^\s∘*\\/()]+))")


@dataclass(frozen=True)
class Term:
    op: Optional[str] = None
    left: Optional["Term"] = None
    right: Optional["Term"] = None
    name: Optional[str] = None
    size: int = field(default=1, init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.op is not None:
            object.__setattr__(self, "size", self.left.size + self.right.size)

    @classmethod
    def var(cls, name: str) -> "Term":
        return cls(name=name)

    @classmethod
    def app(cls, op: str, left: "Term", right: "Term") -> "Term":
        if op not in CONNECTIVES:
            raise ValueError(f"unknown connective {op!r}")
        return cls(op=op, left=left, right=right)

    @property
    def is_var(self) -> bool:
        return self.op is None

    def leaves(self) -> frozenset[str]:
        if self.is_var:
            return frozenset([self.name])
        return self.left.leaves() | self.right.leaves()

    def __str__(self):
        if self.is_var:
            return self.name
        return f"{self.left._wrapped()}{self.op}{self.right._wrapped()}"

    def _wrapped(self):
        return str(self) if self.is_var else f"({self})"

    def sort_key(self):
        """Size first, then lexicographic on the rendering with ∘ < \\ < /."""
        key = self.__dict__.get("_key")
        if key is None:
            text = str(self)
            for op, ch in _SORT_CHAR.items():
                text = text.replace(op, ch)
            key = (self.size, text)
            object.__setattr__(self, "_key", key)
        return key


def parse_term(text: str) -> Term:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot tokenize term at {text[pos:]!r}")
        pos = m.end()
        if m.group("op"):
            tok = m.group("op")
            tokens.append(("op", COMP if tok == "*" else tok))
        elif m.group("paren"):
            tokens.append((m.group("paren"), None))
        else:
            tokens.append(("name", m.group("name")))
    tokens.append(("end", None))
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def atom():
        kind, val = take()
        if kind == "name":
            return Term.var(val)
        if kind == "(":
            t = composition()
            if take()[0] != ")":
                raise ValueError(f"unbalanced parentheses in {text!r}")
            return t
        raise ValueError(f"unexpected token in {text!r}")

    def residual():
        t = atom()
        while peek() in (("op", RRES), ("op", LRES)):
            t = Term.app(take()[1], t, atom())
        return t

    def composition():
        t = residual()
        while peek() == ("op", COMP):
            take()
            t = Term.app(COMP, t, residual())
        return t

    term = composition()
    if peek()[0] != "end":
        raise ValueError(f"trailing input in term {text!r}")
    return term


Ops = Mapping[str, Callable[[Hashable, Hashable], Hashable]]


def evaluate(term: Term, env: Mapping[str, Hashable], ops: Ops):
    """Bottom-up evaluation; ``ops`` maps each connective to a binary function."""
    if term.is_var:
        try:
            return env[term.name]
        except KeyError:
            raise KeyError(f"unbound name {term.name!r}") from None
    return ops[term.op](evaluate(term.left, env, ops), evaluate(term.right, env, ops))


def closure(generators: Mapping[str, Hashable], ops: Ops) -> dict:
    """Least family containing the generators and closed under ``ops``.

    Returns ``{value: Term}`` in discovery order, where each term is the
    shortest witness (ties by ``Term.sort_key``).  Generators with equal
    values keep the least name.
    """
    found: dict = {}
    for name in sorted(generators):
        term = Term.var(name)
        value = generators[name]
        if value not in found or term.sort_key() < found[value].sort_key():
            found[value] = term
    buckets: dict[int, list] = {1: list(found.items())}
    size = 2
    while size <= 2 * max(buckets):
        fresh: dict = {}
        for lsize in range(1, size):
            for lval, lt in buckets.get(lsize, ()):
                for rval, rt in buckets.get(size - lsize, ()):
                    for op in CONNECTIVES:
                        value = ops[op](lval, rval)
                        if value in found:
                            continue
                        term = Term.app(op, lt, rt)
                        if value not in fresh or term.sort_key() < fresh[value].sort_key():
                            fresh[value] = term
        if fresh:
            new = sorted(fresh.items(), key=lambda kv: kv[1].sort_key())
            buckets[size] = new
            found.update(new)
        size += 1
    return found
