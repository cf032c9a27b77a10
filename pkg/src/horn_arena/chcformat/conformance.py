"""Strict / lenient conformance checking against the CHC-COMP profile."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .ast import Atom, Clause, Script, Var, free_vars

# rules a normalization pass can repair
REPAIRABLE = frozenset(
    {
        "logic-horn",
        "head-args-distinct",
        "head-args-variables",
        "body-args-variables",
        "command-sequence",
    }
)

_ALLOWED_ORDER = {
    "set-logic": 0,
    "set-info": 1,
    "declare-datatypes": 2,
    "declare-datatype": 2,
    "declare-fun": 3,
    "assert": 4,
    "check-sat": 5,
    "exit": 6,
}


class Profile(str, Enum):
    STRICT = "strict"
    LENIENT = "lenient"


class Verdict(str, Enum):
    CONFORMANT = "conformant"
    REPAIRED = "repaired"
    REJECTED = "rejected"


@dataclass(frozen=True)
class Violation:
    rule: str
    line: int
    col: int
    message: str

    @property
    def location(self) -> str:
        return f"{self.line}:{self.col}"


@dataclass(frozen=True)
class ConformanceReport:
    verdict: Verdict
    violations: tuple = ()
    profile: Profile = Profile.STRICT

    def lines(self, file: str) -> list[str]:
        """Tab-separated records, one per violation (one line if clean)."""
        if not self.violations:
            return [f"{file}\t{self.verdict.value}\t-\t-\t-"]
        return [
            f"{file}\t{self.verdict.value}\t{v.rule}\t{v.location}\t{v.message}"
            for v in self.violations
        ]


def _head_violations(c: Clause) -> list[Violation]:
    out = []
    if c.head is None:
        return out
    seen = set()
    line, col = c.loc
    for i, arg in enumerate(c.head.args):
        if not isinstance(arg, Var) or arg.name not in {n for n, _ in c.bound_vars}:
            out.append(
                Violation("head-args-variables", line, col, f"argument {i} of head {c.head.predicate!r} is not a bound variable")
            )
        elif arg.name in seen:
            out.append(
                Violation("head-args-distinct", line, col, f"variable {arg.name!r} repeated in head {c.head.predicate!r}")
            )
        else:
            seen.add(arg.name)
    return out


def _body_violations(c: Clause) -> list[Violation]:
    line, col = c.loc
    bound = {n for n, _ in c.bound_vars}
    out = []
    for a in c.body_atoms:
        if any(not isinstance(x, Var) or x.name not in bound for x in a.args):
            out.append(
                Violation("body-args-variables", line, col, f"body atom {a.predicate!r} has a non-variable argument")
            )
    return out


def _closure_violations(s: Script, c: Clause) -> list[Violation]:
    bound = {n for n, _ in c.bound_vars}
    free = set()
    for part in (*c.body_atoms, c.constraint, *( [c.head] if c.head else [])):
        free |= free_vars(part)
    free -= bound
    if not free:
        return []
    line, col = c.loc
    names = ", ".join(sorted(free))
    return [Violation("universally-closed", line, col, f"clause refers to free symbols: {names}")]


def _command_violations(s: Script) -> list[Violation]:
    out = []
    last = -1
    counts: dict[str, int] = {}
    locs = s.command_locs or [(0, 0)] * len(s.commands)
    for name, (line, col) in zip(s.commands, locs):
        counts[name] = counts.get(name, 0) + 1
        rank = _ALLOWED_ORDER.get(name)
        if rank is None:
            out.append(Violation("command-sequence", line, col, f"command {name!r} is outside the CHC profile"))
            continue
        if rank < last:
            out.append(Violation("command-sequence", line, col, f"command {name!r} out of order"))
        last = max(last, rank)
    if not s.commands:
        # constructed in memory: reconstruct from fields
        if s.extra_commands:
            out.append(Violation("command-sequence", 0, 0, "script carries commands outside the CHC profile"))
    if counts.get("check-sat", 0) > 1:
        out.append(Violation("command-sequence", 0, 0, "check-sat occurs more than once"))
    if not s.check_sat:
        out.append(Violation("command-sequence", 0, 0, "missing check-sat"))
    if s.constants:
        names = ", ".join(n for n, _ in s.constants)
        out.append(Violation("command-sequence", 0, 0, f"declarations outside the profile: {names}"))
    return out


def validate_conformance(s: Script, profile: Profile | str = Profile.STRICT) -> ConformanceReport:
    profile = Profile(profile)
    violations: list[Violation] = []
    if s.logic != "HORN":
        violations.append(Violation("logic-horn", 0, 0, f"logic is {s.logic!r}, expected 'HORN'"))
    violations.extend(_command_violations(s))
    for c in s.clauses:
        violations.extend(_closure_violations(s, c))
        violations.extend(_head_violations(c))
        violations.extend(_body_violations(c))
    if not violations:
        verdict = Verdict.CONFORMANT
    elif profile is Profile.STRICT:
        verdict = Verdict.REJECTED
    elif all(v.rule in REPAIRABLE for v in violations):
        verdict = Verdict.REPAIRED
    else:
        verdict = Verdict.REJECTED
    return ConformanceReport(verdict, tuple(violations), profile)


def is_atom_free(term) -> bool:
    from .ast import iter_subterms

    return not any(isinstance(n, Atom) for n in iter_subterms(term))
