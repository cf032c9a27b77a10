"""Deterministic SMT-LIB 2.6 printing of :class:`Script` values."""
from __future__ import annotations

from .ast import (
    App,
    Atom,
    BoolLit,
    Clause,
    ConstArray,
    DtApp,
    IntLit,
    RealLit,
    Script,
    Var,
    conjuncts,
)
from .sexpr import fraction_text, is_terminating, symbol_text


def term_text(t) -> str:
    if isinstance(t, Var):
        return symbol_text(t.name)
    if isinstance(t, BoolLit):
        return "true" if t.value else "false"
    if isinstance(t, IntLit):
        return str(t.value) if t.value >= 0 else f"(- {-t.value})"
    if isinstance(t, RealLit):
        v = t.value
        if not is_terminating(v):
            ratio = f"(/ {abs(v.numerator)}.0 {v.denominator}.0)"
            return ratio if v >= 0 else f"(- {ratio})"
        return fraction_text(v) if v >= 0 else f"(- {fraction_text(-v)})"
    if isinstance(t, Atom):
        return _app(symbol_text(t.predicate), t.args)
    if isinstance(t, App):
        return _app(t.op, t.args)
    if isinstance(t, DtApp):
        if t.kind == "test":
            return _app(f"(_ is {symbol_text(t.name)})", t.args)
        return _app(symbol_text(t.name), t.args)
    if isinstance(t, ConstArray):
        return f"((as const {t.sort}) {term_text(t.value)})"
    raise TypeError(f"not a term: {t!r}")


def _app(op: str, args) -> str:
    if not args:
        return op
    return "(" + op + " " + " ".join(term_text(a) for a in args) + ")"


def clause_text(c: Clause) -> str:
    parts = [term_text(a) for a in c.body_atoms]
    parts.extend(term_text(x) for x in conjuncts(c.constraint))
    head = "false" if c.head is None else term_text(c.head)
    if not parts:
        body = head
    elif len(parts) == 1:
        body = f"(=> {parts[0]} {head})"
    else:
        body = f"(=> (and {' '.join(parts)}) {head})"
    if c.bound_vars:
        binders = " ".join(f"({symbol_text(n)} {s})" for n, s in c.bound_vars)
        body = f"(forall ({binders}) {body})"
    return f"(assert {body})"


def _datatype_group(script: Script, names) -> str:
    decls = " ".join(f"({symbol_text(n)} 0)" for n in names)
    bodies = []
    for n in names:
        dt = script.datatype(n)
        ctors = []
        for c in dt.constructors:
            sels = "".join(f" ({symbol_text(s.name)} {s.sort})" for s in c.selectors)
            ctors.append(f"({symbol_text(c.name)}{sels})")
        bodies.append("(" + " ".join(ctors) + ")")
    return f"(declare-datatypes ({decls}) ({' '.join(bodies)}))"


def print_script(s: Script, *, metadata: bool = True) -> str:
    """Render ``s`` as SMT-LIB text, one command per line.

    With ``metadata=False`` the set-info lines are omitted; that form is
    what fingerprinting hashes.
    """
    lines = []
    if s.logic is not None:
        lines.append(f"(set-logic {symbol_text(s.logic)})")
    if metadata:
        lines.extend(f"(set-info :{k} {v})" if v else f"(set-info :{k})" for k, v in s.metadata)
    lines.extend(s.extra_commands)
    for group in s.datatype_groups:
        lines.append(_datatype_group(s, group))
    for name, sort in s.constants:
        lines.append(f"(declare-fun {symbol_text(name)} () {sort})")
    for p in s.predicates:
        sorts = " ".join(str(x) for x in p.arg_sorts)
        lines.append(f"(declare-fun {symbol_text(p.name)} ({sorts}) Bool)")
    lines.extend(clause_text(c) for c in s.clauses)
    if s.check_sat:
        lines.append("(check-sat)")
    if s.exit:
        lines.append("(exit)")
    return "\n".join(lines) + "\n"
