"""Repair lenient scripts into the strict profile and merge multiple queries."""
from __future__ import annotations

from dataclasses import replace

from .ast import (
    BOOL,
    App,
    Atom,
    Clause,
    Predicate,
    Script,
    Var,
    conjoin,
    fresh_name,
    free_vars,
)
from .errors import NormalizationError

QUERY_PREDICATE = "chc_query"


def _clause_names(c: Clause) -> set[str]:
    names = {n for n, _ in c.bound_vars}
    for part in (*c.body_atoms, c.constraint, *([c.head] if c.head else [])):
        names |= free_vars(part)
    return names


def _flatten_atom(a: Atom, bound: set[str], seen: set[str], base: str, taken: set[str], new_vars: list, eqs: list, distinct: bool) -> Atom:
    args = []
    for i, arg in enumerate(a.args):
        if isinstance(arg, Var) and arg.name in bound and not (distinct and arg.name in seen):
            seen.add(arg.name)
            args.append(arg)
            continue
        stem = arg.name if isinstance(arg, Var) else base
        name = fresh_name(stem, taken)
        v = Var(name, arg.sort)
        new_vars.append((name, arg.sort))
        eqs.append(App("=", (v, arg), BOOL))
        if distinct:
            seen.add(name)
        args.append(v)
    return Atom(a.predicate, tuple(args))


def normalize_clause(c: Clause, taken_global: set[str]) -> Clause:
    bound = {n for n, _ in c.bound_vars}
    taken = set(taken_global) | _clause_names(c)
    new_vars: list = []
    eqs: list = []
    body = tuple(
        _flatten_atom(a, bound, set(), "b", taken, new_vars, eqs, distinct=False) for a in c.body_atoms
    )
    head = c.head
    if head is not None:
        head = _flatten_atom(head, bound, set(), "h", taken, new_vars, eqs, distinct=True)
    if not new_vars:
        return c
    return Clause(
        c.bound_vars + tuple(new_vars),
        body,
        conjoin([c.constraint, *eqs]),
        head,
        c.loc,
    )


def normalize(s: Script) -> Script:
    """Return a strict-conformant, equisatisfiable version of ``s``.

    Head arguments become pairwise distinct bound variables and body atom
    arguments become bound variables; every replaced argument is moved
    into the constraint as an equality over a fresh variable.  Raises
    :class:`NormalizationError` for free constants that occur in clauses.
    """
    used_constants = set()
    const_names = {n for n, _ in s.constants}
    for c in s.clauses:
        used_constants |= _clause_names(c) & (const_names - {n for n, _ in c.bound_vars})
    if used_constants:
        line, col = next(
            c.loc for c in s.clauses if _clause_names(c) & used_constants
        )
        raise NormalizationError(
            "free-constant",
            "could not be put in CHC-COMP compliant format: clauses refer to free constants "
            + ", ".join(sorted(used_constants)),
            line,
            col,
        )
    taken = s.declared_names()
    clauses = tuple(normalize_clause(c, taken) for c in s.clauses)
    out = replace(
        s,
        logic="HORN",
        constants=(),
        clauses=clauses,
        check_sat=True,
        extra_commands=(),
        commands=(),
        command_locs=(),
    )
    if out == s and s.commands == _canonical_commands(s):
        return s
    return out


def _canonical_commands(s: Script) -> tuple:
    cmds = ["set-logic"] + ["set-info"] * len(s.metadata)
    cmds += ["declare-datatypes"] * len(s.datatype_groups)
    cmds += ["declare-fun"] * len(s.predicates)
    cmds += ["assert"] * len(s.clauses)
    cmds.append("check-sat")
    if s.exit:
        cmds.append("exit")
    return tuple(cmds)


def merge_queries(s: Script) -> Script:
    """Route every query through one fresh nullary predicate.

    With more than one ``false``-headed clause, each query ``body => false``
    becomes ``body => q`` for a fresh ``q`` and a single ``q => false`` is
    appended.  Scripts with at most one query are returned unchanged.
    """
    queries = [c for c in s.clauses if c.is_query]
    if len(queries) <= 1:
        return s
    taken = s.declared_names()
    if QUERY_PREDICATE in taken:
        name = fresh_name(QUERY_PREDICATE, taken)
    else:
        name = QUERY_PREDICATE
    goal = Atom(name, ())
    clauses = tuple(replace(c, head=goal) if c.is_query else c for c in s.clauses)
    final = Clause((), (goal,), conjoin([]), None)
    return replace(
        s,
        predicates=s.predicates + (Predicate(name, ()),),
        clauses=clauses + (final,),
        commands=(),
        command_locs=(),
    )
