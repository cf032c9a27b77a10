"""Track assignment: clause linearity, background theories, transition-system shape."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .chcformat.ast import (
    App,
    Clause,
    ConstArray,
    IntLit,
    RealLit,
    Script,
    Var,
    free_vars,
    iter_subterms,
)


class Linearity(str, Enum):
    LINEAR = "linear"
    NONLINEAR = "nonlinear"


class AdtRecursion(str, Enum):
    NONE = "none"
    NONRECURSIVE = "nonrecursive"
    RECURSIVE = "recursive"


class TrackId(str, Enum):
    LIA_LIN = "LIA-lin"
    LIA_NONLIN = "LIA-nonlin"
    LIA_LIN_ARRAYS = "LIA-lin-Arrays"
    LIA_NONLIN_ARRAYS = "LIA-nonlin-Arrays"
    LRA_TS = "LRA-TS"
    LRA_TS_PAR = "LRA-TS-par"
    ADT_NONLIN = "ADT-nonlin"
    LIA_NONLIN_ARRAYS_NONREC_ADT = "LIA-nonlin-Arrays-nonrecADT"
    UNCLASSIFIED = "Unclassified"

    def __str__(self) -> str:
        return self.value


# column order of the competition's result tables
COMPETITION_TRACKS = (
    TrackId.LIA_LIN,
    TrackId.LIA_NONLIN,
    TrackId.LIA_LIN_ARRAYS,
    TrackId.LIA_NONLIN_ARRAYS,
    TrackId.LRA_TS,
    TrackId.LRA_TS_PAR,
    TrackId.ADT_NONLIN,
    TrackId.LIA_NONLIN_ARRAYS_NONREC_ADT,
)


@dataclass(frozen=True)
class TheorySet:
    uses_int: bool = False
    uses_real: bool = False
    uses_arrays: bool = False
    uses_adt: bool = False
    adt_recursive: AdtRecursion = AdtRecursion.NONE
    arithmetic_linear: bool = True

    def describe(self) -> str:
        parts = []
        if self.uses_int:
            parts.append("Int")
        if self.uses_real:
            parts.append("Real")
        if self.uses_arrays:
            parts.append("Arrays")
        if self.uses_adt:
            parts.append("ADT-rec" if self.adt_recursive is AdtRecursion.RECURSIVE else "ADT-nonrec")
        if not self.arithmetic_linear:
            parts.append("NonlinearArith")
        return ",".join(parts) or "Bool"


@dataclass(frozen=True)
class Classification:
    track: TrackId
    linearity: Linearity
    theories: TheorySet
    reason: str | None = None  # first disqualifying feature when Unclassified

    def record(self, file: str) -> str:
        line = f"{file}\t{self.track.value}\t{self.linearity.value}\t{self.theories.describe()}"
        if self.reason:
            line += f"\t{self.reason}"
        return line


def clause_linearity(c: Clause) -> Linearity:
    return Linearity.LINEAR if len(c.body_atoms) <= 1 else Linearity.NONLINEAR


def script_linearity(s: Script) -> Linearity:
    if all(clause_linearity(c) is Linearity.LINEAR for c in s.clauses):
        return Linearity.LINEAR
    return Linearity.NONLINEAR


def _is_ground(t) -> bool:
    return not free_vars(t)


def _nonlinear_op(t) -> bool:
    if not isinstance(t, App):
        return False
    if t.op == "*":
        return sum(1 for a in t.args if not _is_ground(a)) > 1
    if t.op in ("div", "mod", "/"):
        return any(not _is_ground(a) for a in t.args[1:])
    return False


def _adt_recursion(s: Script) -> AdtRecursion:
    if not s.datatypes:
        return AdtRecursion.NONE
    graph: dict[str, set[str]] = {d.name: set() for d in s.datatypes}
    for d in s.datatypes:
        for c in d.constructors:
            for sel in c.selectors:
                for part in sel.sort.walk():
                    if part.kind == "Datatype":
                        graph[d.name].add(part.name)
    # iterative DFS cycle check
    state: dict[str, int] = {}
    for root in graph:
        if root in state:
            continue
        stack = [(root, iter(graph[root]))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
            elif state.get(nxt) == 1:
                return AdtRecursion.RECURSIVE
            elif nxt not in state and nxt in graph:
                state[nxt] = 1
                stack.append((nxt, iter(graph[nxt])))
    return AdtRecursion.NONRECURSIVE


def detect_theories(s: Script) -> TheorySet:
    sorts = []
    for p in s.predicates:
        sorts.extend(p.arg_sorts)
    for d in s.datatypes:
        for c in d.constructors:
            sorts.extend(sel.sort for sel in c.selectors)
    sorts.extend(srt for _, srt in s.constants)
    linear = True
    for c in s.clauses:
        sorts.extend(srt for _, srt in c.bound_vars)
        for part in (*c.atoms(), c.constraint):
            for t in iter_subterms(part):
                if isinstance(t, IntLit):
                    sorts.append(t.sort)
                elif isinstance(t, RealLit):
                    sorts.append(t.sort)
                elif isinstance(t, (App, Var, ConstArray)):
                    sorts.append(t.sort)
                    if linear and _nonlinear_op(t):
                        linear = False
    kinds = {k.kind for srt in sorts for k in srt.walk()}
    recursion = _adt_recursion(s)
    return TheorySet(
        uses_int="Int" in kinds,
        uses_real="Real" in kinds,
        uses_arrays="Array" in kinds,
        uses_adt=bool(s.datatypes) or "Datatype" in kinds,
        adt_recursive=recursion,
        arithmetic_linear=linear,
    )


def is_transition_system(s: Script) -> bool:
    if len(s.predicates) != 1 or len(s.clauses) != 3:
        return False
    shapes = set()
    for c in s.clauses:
        n = len(c.body_atoms)
        if n == 0 and c.head is not None:
            shapes.add("init")
        elif n == 1 and c.head is not None:
            shapes.add("trans")
        elif n == 1 and c.head is None:
            shapes.add("error")
        else:
            return False
    return shapes == {"init", "trans", "error"}


def classify(s: Script) -> Classification:
    th = detect_theories(s)
    lin = script_linearity(s)

    def unclassified(reason: str) -> Classification:
        return Classification(TrackId.UNCLASSIFIED, lin, th, reason)

    if not th.arithmetic_linear:
        return unclassified("nonlinear-arithmetic")
    if th.uses_real:
        if th.uses_int:
            return unclassified("mixed-int-real")
        if th.uses_arrays or th.uses_adt:
            return unclassified("real-with-arrays-or-adt")
        if not is_transition_system(s):
            return unclassified("real-not-transition-system")
        return Classification(TrackId.LRA_TS, lin, th)
    if th.uses_adt:
        if th.adt_recursive is AdtRecursion.RECURSIVE:
            if th.uses_arrays:
                return unclassified("recursive-adt-with-arrays")
            if th.uses_int:
                return unclassified("recursive-adt-with-int")
            return Classification(TrackId.ADT_NONLIN, lin, th)
        if th.uses_int and th.uses_arrays:
            return Classification(TrackId.LIA_NONLIN_ARRAYS_NONREC_ADT, lin, th)
        return unclassified("nonrecursive-adt-without-int-arrays")
    if not th.uses_int:
        return unclassified("no-arithmetic-theory")
    if th.uses_arrays:
        track = TrackId.LIA_LIN_ARRAYS if lin is Linearity.LINEAR else TrackId.LIA_NONLIN_ARRAYS
    else:
        track = TrackId.LIA_LIN if lin is Linearity.LINEAR else TrackId.LIA_NONLIN
    return Classification(track, lin, th)


def assign_track(s: Script) -> TrackId:
    return classify(s).track
