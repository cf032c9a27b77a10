"""Parse SMT-LIB 2.6 text in the CHC profile into a sort-checked :class:`Script`.

Clause bodies are flattened on the way in: every uninterpreted application
of a top-level conjunct goes to ``body_atoms`` and the remaining conjuncts
become the clause constraint.  Existentials in the premise are lifted into
the clause's bound variables; ``let`` is expanded by substitution.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import ast
from .ast import (
    BOOL,
    FALSE,
    INT,
    REAL,
    TRUE,
    App,
    Atom,
    BoolLit,
    Clause,
    ConstArray,
    Constructor,
    Datatype,
    DtApp,
    IntLit,
    Predicate,
    RealLit,
    Script,
    Selector,
    Sort,
    Var,
)
from .errors import SortError, SyntaxErrorInScript, UnknownCommandError
from .sexpr import (
    DecimalLit,
    Keyword,
    Numeral,
    Pos,
    SList,
    String,
    Symbol,
    datum_text,
    pos_of,
    read_all,
)

_NEG_INT = re.compile(r"-(0|[1-9][0-9]*)")
_NEG_DEC = re.compile(r"-(0|[1-9][0-9]*)\.[0-9]+")

# commands that are tolerated verbatim but are not part of the CHC profile
TOLERATED_COMMANDS = frozenset(
    {"set-option", "get-model", "get-info", "get-proof", "get-unsat-core", "echo", "get-assignment"}
)

_BOOL_NARY = {"and", "or"}
_CHAINABLE = {"<=", "<", ">=", ">"}


@dataclass(frozen=True)
class _Quant:
    kind: str  # "forall" | "exists"
    bound: tuple  # of (name, Sort)
    body: object
    pos: Pos

    @property
    def sort(self) -> Sort:
        return BOOL


def _err(cls, rule: str, msg: str, d) -> Exception:
    p = pos_of(d)
    return cls(rule, msg, p.line, p.col)


class _Context:
    def __init__(self) -> None:
        self.datatypes: dict[str, Datatype] = {}
        self.constructors: dict[str, tuple[str, Constructor]] = {}
        self.selectors: dict[str, tuple[str, Constructor, Selector]] = {}
        self.predicates: dict[str, Predicate] = {}
        self.constants: dict[str, Sort] = {}

    def taken(self) -> set[str]:
        names = set(self.datatypes) | set(self.constructors) | set(self.selectors)
        return names | set(self.predicates) | set(self.constants)

    # -- sorts ---------------------------------------------------------------

    def sort(self, d, pending: set[str] = frozenset()) -> Sort:
        if isinstance(d, Symbol):
            if d.name in ("Bool", "Int", "Real"):
                return Sort(d.name)
            if d.name in self.datatypes or d.name in pending:
                return Sort.datatype(d.name)
            raise _err(SortError, "unknown-sort", f"unknown sort {d.name!r}", d)
        if isinstance(d, SList) and d.head() == "Array" and len(d) == 3:
            return Sort.array(self.sort(d[1], pending), self.sort(d[2], pending))
        raise _err(SortError, "unsupported-sort", f"unsupported sort {datum_text(d)}", d)

    # -- terms ---------------------------------------------------------------

    def term(self, d, env: dict):
        if isinstance(d, Numeral):
            return IntLit(d.value)
        if isinstance(d, DecimalLit):
            return RealLit(d.value)
        if isinstance(d, Symbol):
            return self.symbol(d, env)
        if isinstance(d, (String, Keyword)):
            raise _err(SyntaxErrorInScript, "bad-term", f"unexpected {datum_text(d)} in term", d)
        if not d.items:
            raise _err(SyntaxErrorInScript, "bad-term", "empty application", d)
        head = d[0]
        if isinstance(head, SList):
            return self.indexed_app(d, env)
        if not isinstance(head, Symbol):
            raise _err(SyntaxErrorInScript, "bad-term", f"bad operator {datum_text(head)}", d)
        op = head.name
        if op in ("forall", "exists"):
            return self.quantifier(d, env)
        if op == "let":
            return self.let(d, env)
        if op == "!":
            if len(d) < 2:
                raise _err(SyntaxErrorInScript, "bad-annotation", "empty annotation", d)
            return self.term(d[1], env)
        if op == "as":
            return self.ascribed(d, env)
        if op == "-" and len(d) == 2 and isinstance(d[1], Numeral):
            return IntLit(-d[1].value)
        if op == "-" and len(d) == 2 and isinstance(d[1], DecimalLit):
            return RealLit(-d[1].value)
        args = [self.term(a, env) for a in d.items[1:]]
        if op in self.predicates and op not in env:
            return self.atom(op, args, d)
        if op in self.constructors and op not in env:
            return self.construct(op, args, d)
        if op in self.selectors and op not in env:
            return self.select(op, args, d)
        if op.startswith("is-") and op[3:] in self.constructors:
            return self.tester(op[3:], args, d)
        return self.theory(op, args, d)

    def symbol(self, d: Symbol, env: dict):
        name = d.name
        if name in env:
            return env[name]
        if not d.quoted:
            if name == "true":
                return TRUE
            if name == "false":
                return FALSE
            if _NEG_INT.fullmatch(name):
                return IntLit(int(name))
            if _NEG_DEC.fullmatch(name):
                return RealLit(-Fraction(name[1:]))
        if name in self.constants:
            return Var(name, self.constants[name])
        if name in self.constructors:
            return self.construct(name, [], d)
        if name in self.predicates:
            return self.atom(name, [], d)
        raise _err(SortError, "unknown-symbol", f"unknown symbol {name!r}", d)

    def quantifier(self, d: SList, env: dict):
        if len(d) != 3 or not isinstance(d[1], SList) or not d[1].items:
            raise _err(SyntaxErrorInScript, "bad-quantifier", "malformed quantifier", d)
        bound = []
        inner = dict(env)
        seen = set()
        for b in d[1]:
            if not (isinstance(b, SList) and len(b) == 2 and isinstance(b[0], Symbol)):
                raise _err(SyntaxErrorInScript, "bad-binder", f"malformed binder {datum_text(b)}", b)
            name = b[0].name
            if name in seen:
                raise _err(SyntaxErrorInScript, "duplicate-binder", f"variable {name!r} bound twice", b)
            seen.add(name)
            s = self.sort(b[1])
            bound.append((name, s))
            inner[name] = Var(name, s)
        body = self.term(d[2], inner)
        if body.sort != BOOL:
            raise _err(SortError, "quantifier-body", "quantifier body must be Bool", d)
        return _Quant(d[0].name, tuple(bound), body, d.pos)

    def let(self, d: SList, env: dict):
        if len(d) != 3 or not isinstance(d[1], SList):
            raise _err(SyntaxErrorInScript, "bad-let", "malformed let", d)
        inner = dict(env)
        for b in d[1]:
            if not (isinstance(b, SList) and len(b) == 2 and isinstance(b[0], Symbol)):
                raise _err(SyntaxErrorInScript, "bad-let", f"malformed let binding {datum_text(b)}", b)
            # parallel binding: values see the outer environment
            inner[b[0].name] = self.term(b[1], env)
        return self.term(d[2], inner)

    def ascribed(self, d: SList, env: dict):
        if len(d) != 3 or not isinstance(d[1], Symbol):
            raise _err(SyntaxErrorInScript, "bad-as", "malformed 'as'", d)
        target = self.sort(d[2])
        t = self.term(d[1], env)
        t = _coerce(t, target)
        if t.sort != target:
            raise _err(SortError, "ascription", f"term has sort {t.sort}, not {target}", d)
        return t

    def indexed_app(self, d: SList, env: dict):
        head = d[0]
        if head.head() == "_" and len(head) == 3 and isinstance(head[1], Symbol) and head[1].name == "is":
            ctor = head[2]
            if not isinstance(ctor, Symbol) or ctor.name not in self.constructors:
                raise _err(SortError, "unknown-constructor", f"unknown constructor in tester {datum_text(head)}", d)
            return self.tester(ctor.name, [self.term(a, env) for a in d.items[1:]], d)
        if head.head() == "as" and len(head) == 3 and isinstance(head[1], Symbol) and head[1].name == "const":
            s = self.sort(head[2])
            if s.kind != "Array" or len(d) != 2:
                raise _err(SortError, "const-array", "const needs an Array sort and one value", d)
            v = _coerce(self.term(d[1], env), s.element)
            if v.sort != s.element:
                raise _err(SortError, "const-array", f"const value sort {v.sort} != {s.element}", d)
            return ConstArray(s, v)
        raise _err(SyntaxErrorInScript, "bad-term", f"unsupported operator {datum_text(head)}", d)

    def atom(self, name: str, args: list, d) -> Atom:
        pred = self.predicates[name]
        if len(args) != len(pred.arg_sorts):
            raise _err(
                SortError,
                "predicate-arity",
                f"predicate {name!r} expects {len(pred.arg_sorts)} arguments, got {len(args)}",
                d,
            )
        out = []
        for a, s in zip(args, pred.arg_sorts):
            a = _coerce(a, s)
            if a.sort != s:
                raise _err(SortError, "argument-sort", f"argument of {name!r} has sort {a.sort}, expected {s}", d)
            out.append(a)
        return Atom(name, tuple(out))

    def construct(self, name: str, args: list, d) -> DtApp:
        dt, ctor = self.constructors[name]
        if len(args) != len(ctor.selectors):
            raise _err(SortError, "constructor-arity", f"constructor {name!r} arity mismatch", d)
        out = []
        for a, sel in zip(args, ctor.selectors):
            a = _coerce(a, sel.sort)
            if a.sort != sel.sort:
                raise _err(SortError, "argument-sort", f"argument of {name!r} has sort {a.sort}, expected {sel.sort}", d)
            out.append(a)
        return DtApp("ctor", name, tuple(out), Sort.datatype(dt))

    def select(self, name: str, args: list, d) -> DtApp:
        dt, _, sel = self.selectors[name]
        if len(args) != 1 or args[0].sort != Sort.datatype(dt):
            raise _err(SortError, "selector-argument", f"selector {name!r} applies to one {dt} term", d)
        return DtApp("sel", name, tuple(args), sel.sort)

    def tester(self, name: str, args: list, d) -> DtApp:
        dt, _ = self.constructors[name]
        if len(args) != 1 or args[0].sort != Sort.datatype(dt):
            raise _err(SortError, "tester-argument", f"tester for {name!r} applies to one {dt} term", d)
        return DtApp("test", name, tuple(args), BOOL)

    def theory(self, op: str, args: list, d):
        n = len(args)

        def need(cond: bool, msg: str) -> None:
            if not cond:
                raise _err(SortError, "operator-sort", f"{op}: {msg}", d)

        if op in _BOOL_NARY or op in ("xor", "=>"):
            need(n >= (2 if op in ("xor", "=>") else 1), "too few arguments")
            need(all(a.sort == BOOL for a in args), "arguments must be Bool")
            return App(op, tuple(args), BOOL)
        if op == "not":
            need(n == 1 and args[0].sort == BOOL, "expects one Bool")
            return App(op, tuple(args), BOOL)
        if op in ("=", "distinct"):
            need(n >= 2, "too few arguments")
            args = _unify(args)
            need(all(a.sort == args[0].sort for a in args), "arguments must share a sort")
            return App(op, tuple(args), BOOL)
        if op == "ite":
            need(n == 3 and args[0].sort == BOOL, "expects (ite Bool T T)")
            a, b = _unify(args[1:])
            need(a.sort == b.sort, "branches must share a sort")
            return App(op, (args[0], a, b), a.sort)
        if op in ("+", "-", "*") or op in _CHAINABLE:
            need(n >= (2 if op in _CHAINABLE else 1), "too few arguments")
            args = _unify(args)
            s = args[0].sort
            need(s.is_numeric and all(a.sort == s for a in args), "arguments must be all Int or all Real")
            return App(op, tuple(args), BOOL if op in _CHAINABLE else s)
        if op in ("div", "mod"):
            need(n >= 2 and all(a.sort == INT for a in args), "arguments must be Int")
            need(op == "div" or n == 2, "mod is binary")
            return App(op, tuple(args), INT)
        if op == "abs":
            need(n == 1 and args[0].sort == INT, "expects one Int")
            return App(op, tuple(args), INT)
        if op == "/":
            args = [_coerce(a, REAL) for a in args]
            need(n >= 2 and all(a.sort == REAL for a in args), "arguments must be Real")
            return App(op, tuple(args), REAL)
        if op == "to_real":
            need(n == 1 and args[0].sort == INT, "expects one Int")
            return App(op, tuple(args), REAL)
        if op in ("to_int", "is_int"):
            need(n == 1 and args[0].sort == REAL, "expects one Real")
            return App(op, tuple(args), INT if op == "to_int" else BOOL)
        if op == "select":
            need(n == 2 and args[0].sort.kind == "Array", "expects (select Array index)")
            arr = args[0].sort
            i = _coerce(args[1], arr.index)
            need(i.sort == arr.index, "index sort mismatch")
            return App(op, (args[0], i), arr.element)
        if op == "store":
            need(n == 3 and args[0].sort.kind == "Array", "expects (store Array index value)")
            arr = args[0].sort
            i = _coerce(args[1], arr.index)
            v = _coerce(args[2], arr.element)
            need(i.sort == arr.index and v.sort == arr.element, "index/value sort mismatch")
            return App(op, (args[0], i, v), arr)
        raise _err(SortError, "unknown-function", f"unknown function symbol {op!r}", d)

    # -- declarations --------------------------------------------------------

    def declare_datatypes(self, d: SList) -> tuple[str, ...]:
        if len(d) != 3 or not isinstance(d[1], SList) or not isinstance(d[2], SList):
            raise _err(SyntaxErrorInScript, "bad-datatypes", "malformed declare-datatypes", d)
        legacy = len(d[1]) == 0 or all(isinstance(x, Symbol) for x in d[1])
        if legacy:
            if len(d[1]):
                raise _err(SortError, "parametric-datatype", "parametric datatypes are not supported", d)
            names, bodies = [], []
            for spec in d[2]:
                if not (isinstance(spec, SList) and spec.items and isinstance(spec[0], Symbol)):
                    raise _err(SyntaxErrorInScript, "bad-datatypes", "malformed datatype", spec)
                names.append(spec[0].name)
                bodies.append(SList(spec.items[1:], spec.pos))
        else:
            names = []
            for decl in d[1]:
                if not (isinstance(decl, SList) and len(decl) == 2 and isinstance(decl[0], Symbol)):
                    raise _err(SyntaxErrorInScript, "bad-datatypes", "malformed sort declaration", decl)
                if not (isinstance(decl[1], Numeral) and decl[1].value == 0):
                    raise _err(SortError, "parametric-datatype", "parametric datatypes are not supported", decl)
                names.append(decl[0].name)
            bodies = list(d[2])
            if len(bodies) != len(names):
                raise _err(SyntaxErrorInScript, "bad-datatypes", "sort/constructor list length mismatch", d)
        self._define_datatypes(names, bodies, d)
        return tuple(names)

    def declare_datatype(self, d: SList) -> tuple[str, ...]:
        if len(d) != 3 or not isinstance(d[1], Symbol) or not isinstance(d[2], SList):
            raise _err(SyntaxErrorInScript, "bad-datatypes", "malformed declare-datatype", d)
        self._define_datatypes([d[1].name], [d[2]], d)
        return (d[1].name,)

    def _define_datatypes(self, names: list, bodies: list, d) -> None:
        pending = set(names)
        for name in names:
            self._fresh_symbol(name, d)
        for name, body in zip(names, bodies):
            if isinstance(body, SList) and body.head() == "par":
                raise _err(SortError, "parametric-datatype", "parametric datatypes are not supported", body)
            ctors = []
            for c in body:
                if isinstance(c, Symbol):
                    cname, sels = c.name, []
                elif isinstance(c, SList) and c.items and isinstance(c[0], Symbol):
                    cname, sels = c[0].name, list(c.items[1:])
                else:
                    raise _err(SyntaxErrorInScript, "bad-constructor", f"malformed constructor {datum_text(c)}", c)
                self._fresh_symbol(cname, c)
                selectors = []
                for s in sels:
                    if not (isinstance(s, SList) and len(s) == 2 and isinstance(s[0], Symbol)):
                        raise _err(SyntaxErrorInScript, "bad-selector", f"malformed selector {datum_text(s)}", s)
                    self._fresh_symbol(s[0].name, s)
                    selectors.append(Selector(s[0].name, self.sort(s[1], pending)))
                ctor = Constructor(cname, tuple(selectors))
                ctors.append(ctor)
                self.constructors[cname] = (name, ctor)
                for sel in selectors:
                    self.selectors[sel.name] = (name, ctor, sel)
            if not ctors:
                raise _err(SyntaxErrorInScript, "bad-datatypes", f"datatype {name!r} has no constructors", d)
            self.datatypes[name] = Datatype(name, tuple(ctors))

    def _fresh_symbol(self, name: str, d) -> None:
        if name in self.taken():
            raise _err(SortError, "duplicate-declaration", f"symbol {name!r} declared twice", d)

    def declare_fun(self, d: SList) -> None:
        if len(d) != 4 or not isinstance(d[1], Symbol) or not isinstance(d[2], SList):
            raise _err(SyntaxErrorInScript, "bad-declare-fun", "malformed declare-fun", d)
        name = d[1].name
        self._fresh_symbol(name, d)
        arg_sorts = tuple(self.sort(s) for s in d[2])
        result = self.sort(d[3])
        if result == BOOL:
            self.predicates[name] = Predicate(name, arg_sorts)
        elif not arg_sorts:
            self.constants[name] = result
        else:
            raise _err(
                SortError,
                "uninterpreted-function",
                f"{name!r}: uninterpreted functions must have Bool codomain",
                d,
            )


def _coerce(t, target: Sort):
    if target == REAL and isinstance(t, IntLit):
        return RealLit(Fraction(t.value))
    return t


def _unify(args: list) -> list:
    if any(a.sort == REAL for a in args):
        return [_coerce(a, REAL) for a in args]
    return list(args)


# -- clause extraction --------------------------------------------------------


def _has_atom_or_quant(t) -> bool:
    stack = [t]
    while stack:
        n = stack.pop()
        if isinstance(n, (Atom, _Quant)):
            return True
        stack.extend(ast.children(n))
    return False


def _raw_subst(t, mapping: dict):
    if not mapping:
        return t
    if isinstance(t, _Quant):
        inner = {k: v for k, v in mapping.items() if k not in {n for n, _ in t.bound}}
        return _Quant(t.kind, t.bound, _raw_subst(t.body, inner), t.pos)
    if isinstance(t, App):
        return App(t.op, tuple(_raw_subst(a, mapping) for a in t.args), t.sort)
    if isinstance(t, (Var, DtApp, Atom, ConstArray)):
        if isinstance(t, Var):
            return mapping.get(t.name, t)
        if isinstance(t, DtApp):
            return DtApp(t.kind, t.name, tuple(_raw_subst(a, mapping) for a in t.args), t.sort)
        if isinstance(t, Atom):
            return Atom(t.predicate, tuple(_raw_subst(a, mapping) for a in t.args))
        return ConstArray(t.sort, _raw_subst(t.value, mapping))
    return t


class _ClauseBuilder:
    def __init__(self, ctx: _Context, d):
        self.ctx = ctx
        self.d = d
        self.bound: list[tuple[str, Sort]] = []
        self.taken = ctx.taken()

    def bind(self, q: _Quant):
        mapping = {}
        for name, s in q.bound:
            if name in {n for n, _ in self.bound}:
                new = ast.fresh_name(name, self.taken | {n for n, _ in self.bound})
                mapping[name] = Var(new, s)
                name = new
            self.bound.append((name, s))
        return _raw_subst(q.body, mapping)

    def fail(self, rule: str, msg: str):
        return _err(SyntaxErrorInScript, rule, msg, self.d)

    def build(self, raw) -> Clause:
        premises = []
        node = raw
        while True:
            if isinstance(node, _Quant):
                if node.kind != "forall":
                    raise self.fail("quantifier-position", "existential quantifier in clause head")
                node = self.bind(node)
            elif isinstance(node, App) and node.op == "=>":
                premises.extend(node.args[:-1])
                node = node.args[-1]
            else:
                break
        head = self.head(node, premises)
        body_atoms, constraint = [], []
        queue = list(premises)
        while queue:
            p = queue.pop(0)
            if isinstance(p, App) and p.op == "and":
                queue[0:0] = list(p.args)
            elif isinstance(p, _Quant):
                if p.kind != "exists":
                    raise self.fail("quantifier-position", "universal quantifier in clause premise")
                queue.insert(0, self.bind(p))
            elif isinstance(p, Atom):
                self.check_pure_args(p)
                body_atoms.append(p)
            elif p == TRUE:
                continue
            else:
                if _has_atom_or_quant(p):
                    raise self.fail("non-horn", "uninterpreted predicate or quantifier under an interpreted operator")
                constraint.append(p)
        if head is not None:
            self.check_pure_args(head)
        loc = pos_of(self.d)
        return Clause(
            tuple(self.bound),
            tuple(body_atoms),
            ast.conjoin(constraint),
            head,
            (loc.line, loc.col),
        )

    def head(self, node, premises: list):
        if node == FALSE:
            return None
        if isinstance(node, Atom):
            return node
        if isinstance(node, App) and node.op == "not":
            premises.append(node.args[0])
            return None
        if isinstance(node, App) and node.op == "or":
            head = None
            for lit in node.args:
                if isinstance(lit, App) and lit.op == "not":
                    premises.append(lit.args[0])
                elif isinstance(lit, Atom):
                    if head is not None:
                        raise self.fail("non-horn", "clause has more than one positive atom")
                    head = lit
                elif lit == FALSE:
                    continue
                elif _has_atom_or_quant(lit):
                    raise self.fail("non-horn", "unsupported disjunct in clause")
                else:
                    premises.append(App("not", (lit,), BOOL))
            return head
        if isinstance(node, _Quant):
            raise self.fail("quantifier-position", "quantifier in clause head")
        if _has_atom_or_quant(node):
            raise self.fail("non-horn", "clause head is not an atom or false")
        # interpreted conclusion c: (body => c) is (body and not c => false)
        premises.append(App("not", (node,), BOOL))
        return None

    def check_pure_args(self, a: Atom) -> None:
        for arg in a.args:
            if _has_atom_or_quant(arg):
                raise self.fail("non-horn", f"nested predicate or quantifier inside {a.predicate!r}")


# -- commands -----------------------------------------------------------------


def parse_script(text: str | bytes) -> Script:
    """Parse one benchmark.  Raises a :class:`ChcFormatError` subclass on failure."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            from .errors import LexicalError

            raise LexicalError("encoding", f"input is not UTF-8: {e.reason}", 0, 0) from None
    ctx = _Context()
    logic = None
    metadata = []
    groups = []
    clauses = []
    check_sat = False
    exit_ = False
    extras = []
    commands = []
    locs = []
    for cmd in read_all(text):
        if not isinstance(cmd, SList) or cmd.head() is None:
            raise _err(SyntaxErrorInScript, "bad-command", f"expected a command, got {datum_text(cmd)}", cmd)
        name = cmd.head()
        commands.append(name)
        locs.append((cmd.pos.line, cmd.pos.col))
        if name == "set-logic":
            if len(cmd) != 2 or not isinstance(cmd[1], Symbol):
                raise _err(SyntaxErrorInScript, "bad-set-logic", "malformed set-logic", cmd)
            if logic is not None:
                raise _err(SyntaxErrorInScript, "duplicate-set-logic", "set-logic given twice", cmd)
            logic = cmd[1].name
        elif name == "set-info":
            if len(cmd) not in (2, 3) or not isinstance(cmd[1], Keyword):
                raise _err(SyntaxErrorInScript, "bad-set-info", "malformed set-info", cmd)
            value = datum_text(cmd[2]) if len(cmd) == 3 else ""
            metadata.append((cmd[1].name, value))
        elif name == "declare-datatypes":
            groups.append(ctx.declare_datatypes(cmd))
        elif name == "declare-datatype":
            groups.append(ctx.declare_datatype(cmd))
        elif name == "declare-fun":
            ctx.declare_fun(cmd)
        elif name == "declare-const":
            if len(cmd) != 3 or not isinstance(cmd[1], Symbol):
                raise _err(SyntaxErrorInScript, "bad-declare-const", "malformed declare-const", cmd)
            ctx.declare_fun(SList((cmd[0], cmd[1], SList((), cmd.pos), cmd[2]), cmd.pos))
        elif name == "assert":
            if len(cmd) != 2:
                raise _err(SyntaxErrorInScript, "bad-assert", "assert takes one term", cmd)
            raw = ctx.term(cmd[1], {})
            if raw.sort != BOOL:
                raise _err(SortError, "assert-sort", "asserted term must be Bool", cmd)
            clauses.append(_ClauseBuilder(ctx, cmd).build(raw))
        elif name == "check-sat":
            check_sat = True
        elif name == "exit":
            exit_ = True
        elif name in TOLERATED_COMMANDS:
            extras.append(datum_text(cmd))
        else:
            raise _err(UnknownCommandError, "unknown-command", f"command {name!r} is not in the CHC profile", cmd)
    predicates = tuple(ctx.predicates.values())
    return Script(
        logic=logic,
        metadata=tuple(metadata),
        datatypes=tuple(ctx.datatypes[n] for g in groups for n in g),
        datatype_groups=tuple(groups),
        predicates=predicates,
        constants=tuple(ctx.constants.items()),
        clauses=tuple(clauses),
        check_sat=check_sat,
        exit=exit_,
        extra_commands=tuple(extras),
        commands=tuple(commands),
        command_locs=tuple(locs),
    )


def parse_file(path) -> Script:
    with open(path, "rb") as fh:
        return parse_script(fh.read())
