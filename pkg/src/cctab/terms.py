"""Logic terms, clauses and programs.

Terms are immutable. Variables carry a clause-local integer id; the printable
name is kept only for output and never takes part in equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union


@dataclass(frozen=True, slots=True)
class Var:
    id: int
    name: str = field(default="_", compare=False)


@dataclass(frozen=True, slots=True)
class Atom:
    name: str


@dataclass(frozen=True, slots=True)
class Int:
    value: int


class Struct:
    """Compound term.  Treated as immutable; equality and hashing are
    iterative so deeply nested terms (long lists) never hit the host
    recursion limit."""

    __slots__ = ("functor", "args", "_hash")

    def __init__(self, functor: str, args: tuple):
        self.functor = functor
        self.args = args
        self._hash = None

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not Struct:
            return NotImplemented
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if type(a) is Struct:
                if type(b) is not Struct:
                    return False
                if a is b:
                    continue
                if a.functor != b.functor or len(a.args) != len(b.args):
                    return False
                stack.extend(zip(a.args, b.args))
            elif a != b:
                return False
        return True

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __hash__(self):
        h = self._hash
        if h is None:
            toks = []
            stack = [self]
            while stack:
                x = stack.pop()
                if type(x) is Struct:
                    toks.append(x.functor)
                    toks.append(len(x.args))
                    stack.extend(x.args)
                else:
                    toks.append(x)
            h = hash(tuple(toks))
            self._hash = h
        return h

    def __repr__(self):
        return f"Struct({self.functor!r}, {self.args!r})"


Term = Union[Var, Atom, Int, Struct]

NIL = Atom("[]")
CONS = "."


def mk_list(items: Iterable[Term], tail: Term = NIL) -> Term:
    out = tail
    for item in reversed(list(items)):
        out = Struct(CONS, (item, out))
    return out


def list_items(t: Term) -> Optional[list[Term]]:
    """Return the elements of a proper list term, or None if t is not one."""
    items = []
    while True:
        if t == NIL:
            return items
        if isinstance(t, Struct) and t.functor == CONS and len(t.args) == 2:
            items.append(t.args[0])
            t = t.args[1]
        else:
            return None


@dataclass(frozen=True, slots=True, order=True)
class PredId:
    name: str
    arity: int

    def __str__(self):
        return f"{self.name}/{self.arity}"


def pred_of(t: Term) -> Optional[PredId]:
    if isinstance(t, Atom):
        return PredId(t.name, 0)
    if isinstance(t, Struct):
        return PredId(t.functor, len(t.args))
    return None


@dataclass(frozen=True, slots=True)
class Clause:
    head: Term  # Atom or Struct
    body: tuple  # tuple of Term (empty = fact)

    def pred(self) -> PredId:
        p = pred_of(self.head)
        assert p is not None
        return p


@dataclass(frozen=True, slots=True)
class Program:
    clauses: tuple  # tuple of Clause, source order
    tabled: frozenset  # frozenset of PredId
    bridges: frozenset  # frozenset of PredId

    def __post_init__(self):
        both = self.tabled & self.bridges
        if both:
            from .errors import LoadError

            names = ", ".join(str(p) for p in sorted(both))
            raise LoadError(f"{names} declared both table and bridge")

    def clauses_for(self, pred: PredId) -> list[Clause]:
        return [c for c in self.clauses if c.pred() == pred]

    def defined_preds(self) -> list[PredId]:
        seen = []
        for c in self.clauses:
            p = c.pred()
            if p not in seen:
                seen.append(p)
        return seen


def walk_subterms(t: Term) -> Iterator[Term]:
    """Yield t and every subterm, depth-first, left to right, iteratively."""
    stack = [t]
    while stack:
        cur = stack.pop()
        yield cur
        if isinstance(cur, Struct):
            stack.extend(reversed(cur.args))


def vars_of(t: Term) -> list[Var]:
    """Variables of t in first-occurrence order."""
    out = []
    seen = set()
    for sub in walk_subterms(t):
        if isinstance(sub, Var) and sub.id not in seen:
            seen.add(sub.id)
            out.append(sub)
    return out


def vars_of_all(ts: Iterable[Term]) -> list[Var]:
    out = []
    seen = set()
    for t in ts:
        for v in vars_of(t):
            if v.id not in seen:
                seen.add(v.id)
                out.append(v)
    return out


def term_size(t: Term) -> int:
    """Number of term nodes (interpreter cells)."""
    n = 0
    for _ in walk_subterms(t):
        n += 1
    return n


def rename_term(t: Term, mapping: dict) -> Term:
    """Rebuild t with every Var replaced through mapping (id -> Var)."""
    if isinstance(t, Var):
        return mapping[t.id]
    if not isinstance(t, Struct):
        return t
    out: list = []
    todo: list = [(t, False)]
    while todo:
        x, rebuild = todo.pop()
        if rebuild:
            n = len(x.args)
            args = tuple(out[-n:])
            del out[-n:]
            out.append(Struct(x.functor, args))
        elif isinstance(x, Var):
            out.append(mapping[x.id])
        elif isinstance(x, Struct):
            todo.append((x, True))
            for a in reversed(x.args):
                todo.append((a, False))
        else:
            out.append(x)
    return out[0]


def canonical_variant(t: Term) -> Term:
    """Renumber variables left-to-right from 0.

    Two terms are variants (equal up to a bijective renaming of variables)
    exactly when their canonical forms are equal.
    """
    mapping: dict = {}
    for v in vars_of(t):
        k = len(mapping)
        mapping[v.id] = Var(k, f"_{k}")
    return rename_term(t, mapping) if mapping else t


def normalize_clause(head: Term, body: Iterable[Term]) -> Clause:
    """Renumber clause variables 0..n-1 in first-occurrence order, keeping names."""
    body = tuple(body)
    mapping: dict = {}
    for v in vars_of_all((head, *body)):
        mapping[v.id] = Var(len(mapping), v.name)
    if not mapping:
        return Clause(head, body)
    return Clause(rename_term(head, mapping), tuple(rename_term(g, mapping) for g in body))


def clause_nvars(c: Clause) -> int:
    n = 0
    for v in vars_of_all((c.head, *c.body)):
        n = max(n, v.id + 1)
    return n


def canonical_clause(c: Clause) -> tuple:
    """Canonical form of a clause for structural comparison-modulo-renaming."""
    packed = Struct(":-", (c.head, mk_list(c.body)))
    return canonical_variant(packed)
