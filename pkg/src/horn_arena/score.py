"""Per-track standings, rankings, unique solves and sat/unsat conflicts."""
from __future__ import annotations

import csv
import io
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .runner import JobRecord, Verdict


class DuplicateJobError(ValueError):
    pass


class TieBreak(str, Enum):
    CPU = "cpu"
    WALL = "wall"


def tie_break_for(track: str) -> TieBreak:
    return TieBreak.WALL if track == "LRA-TS-par" else TieBreak.CPU


@dataclass(frozen=True)
class SolverStanding:
    solver: str
    track: str
    score: int
    sat_count: int
    unsat_count: int
    cpu_time_total_s: float
    wall_time_total_s: float
    unique_count: int


@dataclass(frozen=True)
class Exclusion:
    solver: str
    reason: str  # "hors concours" | "zero score"


@dataclass(frozen=True)
class Ranking:
    track: str
    places: tuple  # of (rank, solver)
    excluded: tuple = ()  # of Exclusion
    unresolved_ties: tuple = ()  # groups of solver names tied on score and time

    @property
    def order(self) -> list[str]:
        return [s for _, s in self.places]


@dataclass(frozen=True)
class Inconsistency:
    benchmark: str
    sat_claimants: tuple
    unsat_claimants: tuple


def _check_unique(jobs: Sequence[JobRecord]) -> None:
    seen = set()
    for j in jobs:
        key = (j.solver, j.benchmark)
        if key in seen:
            raise DuplicateJobError(f"solver {j.solver!r} has more than one job on {j.benchmark!r}")
        seen.add(key)


def _track_jobs(jobs: Iterable[JobRecord], track: str | None) -> list[JobRecord]:
    jobs = list(jobs)
    if track is None:
        return jobs
    return [j for j in jobs if j.track == track or not j.track]


def standings(jobs: Iterable[JobRecord], track: str | None = None) -> list[SolverStanding]:
    """One standing per solver present in ``jobs`` (filtered to ``track``).

    A solver with no record on some benchmark counts as ``unknown`` there.
    """
    jobs = _track_jobs(jobs, track)
    _check_unique(jobs)
    solvers_on: dict[str, set[str]] = defaultdict(set)
    for j in jobs:
        if j.verdict.solved:
            solvers_on[j.benchmark].add(j.solver)
    acc: dict[str, list] = {}
    for j in jobs:
        a = acc.setdefault(j.solver, [0, 0, 0.0, 0.0, 0])
        if j.verdict is Verdict.SAT:
            a[0] += 1
        elif j.verdict is Verdict.UNSAT:
            a[1] += 1
        a[2] += j.cpu_time_s
        a[3] += j.wall_time_s
        if j.verdict.solved and solvers_on[j.benchmark] == {j.solver}:
            a[4] += 1
    label = track or ""
    return [
        SolverStanding(s, label, a[0] + a[1], a[0], a[1], a[2], a[3], a[4])
        for s, a in sorted(acc.items())
    ]


def coverage_gaps(jobs: Iterable[JobRecord]) -> dict[str, list[str]]:
    """Benchmarks each solver has no record for, relative to the union of the run."""
    jobs = list(jobs)
    benches = {j.benchmark for j in jobs}
    have: dict[str, set[str]] = defaultdict(set)
    for j in jobs:
        have[j.solver].add(j.benchmark)
    return {s: sorted(benches - b) for s, b in sorted(have.items()) if benches - b}


def _time(st: SolverStanding, tie_break: TieBreak) -> float:
    return st.wall_time_total_s if tie_break is TieBreak.WALL else st.cpu_time_total_s


def order_standings(rows: Iterable[SolverStanding], tie_break: TieBreak | str = TieBreak.CPU) -> list[SolverStanding]:
    tb = TieBreak(tie_break)
    return sorted(rows, key=lambda s: (-s.score, _time(s, tb), s.solver))


def rank(
    rows: Sequence[SolverStanding],
    tie_break: TieBreak | str | None = None,
    hors_concours: Iterable[str] = (),
) -> Ranking:
    """Rank competing solvers with a positive score.

    Ties on score go to the lower total time (wall-clock for LRA-TS-par,
    CPU otherwise); exact ties fall back to the solver name and are
    reported in ``unresolved_ties``.
    """
    track = rows[0].track if rows else ""
    tb = TieBreak(tie_break) if tie_break is not None else tie_break_for(track)
    hc = set(hors_concours)
    excluded = []
    eligible = []
    for st in order_standings(rows, tb):
        if st.solver in hc:
            excluded.append(Exclusion(st.solver, "hors concours"))
        elif st.score == 0:
            excluded.append(Exclusion(st.solver, "zero score"))
        else:
            eligible.append(st)
    ties = []
    groups: dict[tuple, list[str]] = defaultdict(list)
    for st in eligible:
        groups[(st.score, _time(st, tb))].append(st.solver)
    for names in groups.values():
        if len(names) > 1:
            ties.append(tuple(names))
    places = tuple((i + 1, st.solver) for i, st in enumerate(eligible))
    return Ranking(track, places, tuple(excluded), tuple(ties))


def detect_inconsistencies(jobs: Iterable[JobRecord]) -> list[Inconsistency]:
    sat: dict[str, set[str]] = defaultdict(set)
    unsat: dict[str, set[str]] = defaultdict(set)
    for j in jobs:
        if j.verdict is Verdict.SAT:
            sat[j.benchmark].add(j.solver)
        elif j.verdict is Verdict.UNSAT:
            unsat[j.benchmark].add(j.solver)
    return [
        Inconsistency(b, tuple(sorted(sat[b])), tuple(sorted(unsat[b])))
        for b in sorted(set(sat) & set(unsat))
    ]


def standings_by_run(runs: Mapping[str, Iterable[JobRecord]], track: str) -> dict[str, list[SolverStanding]]:
    """Score several labelled runs (e.g. before/after a tool fix) side by side."""
    return {label: standings(jobs, track) for label, jobs in runs.items()}


# -- CSV ---------------------------------------------------------------------

STANDINGS_COLUMNS = ("solver", "score", "sat", "unsat", "cpu_s", "wall_s", "unique")


def standings_csv(rows: Iterable[SolverStanding]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(STANDINGS_COLUMNS)
    for s in rows:
        w.writerow([s.solver, s.score, s.sat_count, s.unsat_count,
                    repr(s.cpu_time_total_s), repr(s.wall_time_total_s), s.unique_count])
    return buf.getvalue()


def parse_standings_csv(text: str, track: str = "") -> list[SolverStanding]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if tuple(header or ()) != STANDINGS_COLUMNS:
        raise ValueError(f"standings CSV header must be {','.join(STANDINGS_COLUMNS)}")
    out = []
    for row in reader:
        if not row:
            continue
        out.append(SolverStanding(row[0], track, int(row[1]), int(row[2]), int(row[3]),
                                  float(row[4]), float(row[5]), int(row[6])))
    return out


INCONSISTENCY_COLUMNS = ("benchmark", "sat_claimants", "unsat_claimants")


def inconsistencies_csv(items: Iterable[Inconsistency]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(INCONSISTENCY_COLUMNS)
    for i in items:
        w.writerow([i.benchmark, ";".join(i.sat_claimants), ";".join(i.unsat_claimants)])
    return buf.getvalue()
