"""Immutable AST for CHC benchmarks.

All nodes are frozen dataclasses built from tuples, so a parsed
:class:`Script` can be shared freely between threads and compared
structurally with ``==``.  Source locations never take part in equality.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Union


@dataclass(frozen=True)
class Sort:
    kind: str  # "Bool" | "Int" | "Real" | "Array" | "Datatype"
    name: str = ""
    index: "Sort | None" = None
    element: "Sort | None" = None

    @staticmethod
    def array(index: "Sort", element: "Sort") -> "Sort":
        return Sort("Array", index=index, element=element)

    @staticmethod
    def datatype(name: str) -> "Sort":
        return Sort("Datatype", name=name)

    @property
    def is_numeric(self) -> bool:
        return self.kind in ("Int", "Real")

    def walk(self) -> Iterator["Sort"]:
        yield self
        if self.kind == "Array":
            yield from self.index.walk()
            yield from self.element.walk()

    def __str__(self) -> str:
        if self.kind == "Array":
            return f"(Array {self.index} {self.element})"
        if self.kind == "Datatype":
            from .sexpr import symbol_text

            return symbol_text(self.name)
        return self.kind


BOOL = Sort("Bool")
INT = Sort("Int")
REAL = Sort("Real")


# -- terms -------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str
    sort: Sort


@dataclass(frozen=True)
class IntLit:
    value: int

    @property
    def sort(self) -> Sort:
        return INT


@dataclass(frozen=True)
class RealLit:
    value: Fraction

    @property
    def sort(self) -> Sort:
        return REAL


@dataclass(frozen=True)
class BoolLit:
    value: bool

    @property
    def sort(self) -> Sort:
        return BOOL


@dataclass(frozen=True)
class App:
    """Core or theory operator application (connectives, ite, arithmetic, arrays)."""

    op: str
    args: tuple
    sort: Sort


@dataclass(frozen=True)
class DtApp:
    """Datatype constructor, selector or tester application."""

    kind: str  # "ctor" | "sel" | "test"
    name: str  # constructor / selector name; constructor name for testers
    args: tuple
    sort: Sort


@dataclass(frozen=True)
class ConstArray:
    sort: Sort
    value: "Term"


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple

    @property
    def sort(self) -> Sort:
        return BOOL


Term = Union[Var, IntLit, RealLit, BoolLit, App, DtApp, ConstArray]

TRUE = BoolLit(True)
FALSE = BoolLit(False)


def children(t) -> tuple:
    if isinstance(t, (App, DtApp, Atom)):
        return t.args
    if isinstance(t, ConstArray):
        return (t.value,)
    return ()


def iter_subterms(t) -> Iterator:
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def free_vars(t) -> set[str]:
    return {n.name for n in iter_subterms(t) if isinstance(n, Var)}


def substitute(t, mapping: dict):
    """Replace variables by name; ``mapping`` values are terms."""
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, App):
        return App(t.op, tuple(substitute(a, mapping) for a in t.args), t.sort)
    if isinstance(t, DtApp):
        return DtApp(t.kind, t.name, tuple(substitute(a, mapping) for a in t.args), t.sort)
    if isinstance(t, Atom):
        return Atom(t.predicate, tuple(substitute(a, mapping) for a in t.args))
    if isinstance(t, ConstArray):
        return ConstArray(t.sort, substitute(t.value, mapping))
    return t


def conjuncts(t) -> list:
    """Flatten nested conjunctions, dropping ``true``."""
    if isinstance(t, App) and t.op == "and":
        out = []
        for a in t.args:
            out.extend(conjuncts(a))
        return out
    if t == TRUE:
        return []
    return [t]


def conjoin(parts) -> Term:
    flat = []
    for p in parts:
        flat.extend(conjuncts(p))
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return App("and", tuple(flat), BOOL)


# -- declarations and clauses -------------------------------------------------


@dataclass(frozen=True)
class Selector:
    name: str
    sort: Sort


@dataclass(frozen=True)
class Constructor:
    name: str
    selectors: tuple  # of Selector


@dataclass(frozen=True)
class Datatype:
    name: str
    constructors: tuple  # of Constructor


@dataclass(frozen=True)
class Predicate:
    name: str
    arg_sorts: tuple  # of Sort


@dataclass(frozen=True)
class Clause:
    bound_vars: tuple  # of (name, Sort)
    body_atoms: tuple  # of Atom
    constraint: Term
    head: Atom | None  # None encodes ``false``
    loc: tuple[int, int] = field(default=(0, 0), compare=False, repr=False)

    @property
    def is_query(self) -> bool:
        return self.head is None

    @property
    def is_fact(self) -> bool:
        return not self.body_atoms

    def atoms(self) -> Iterator[Atom]:
        yield from self.body_atoms
        if self.head is not None:
            yield self.head


@dataclass(frozen=True)
class Script:
    logic: str | None = "HORN"
    metadata: tuple = ()  # (keyword, value text) from set-info
    datatypes: tuple = ()  # of Datatype, one entry per declared datatype
    datatype_groups: tuple = ()  # names per declare-datatypes command
    predicates: tuple = ()  # of Predicate
    constants: tuple = ()  # free 0-ary non-Bool symbols: (name, Sort)
    clauses: tuple = ()  # of Clause
    check_sat: bool = True
    exit: bool = False
    extra_commands: tuple = ()  # verbatim text of tolerated non-profile commands
    # command names in source order; informational only
    commands: tuple = field(default=(), compare=False, repr=False)
    command_locs: tuple = field(default=(), compare=False, repr=False)

    def predicate(self, name: str) -> Predicate | None:
        for p in self.predicates:
            if p.name == name:
                return p
        return None

    def datatype(self, name: str) -> Datatype | None:
        for d in self.datatypes:
            if d.name == name:
                return d
        return None

    @property
    def queries(self) -> list[Clause]:
        return [c for c in self.clauses if c.is_query]

    def declared_names(self) -> set[str]:
        names = {p.name for p in self.predicates}
        names.update(n for n, _ in self.constants)
        for d in self.datatypes:
            names.add(d.name)
            for c in d.constructors:
                names.add(c.name)
                names.update(s.name for s in c.selectors)
        return names


def fresh_name(base: str, taken: set[str]) -> str:
    """Return ``base!k`` for the smallest k not in ``taken`` (and record it)."""
    k = 0
    while True:
        candidate = f"{base}!{k}"
        if candidate not in taken:
            taken.add(candidate)
            return candidate
        k += 1
