"""Plain-text renderings of per-track result tables and the competition summary."""
from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal
from typing import Mapping, Sequence

from .classify import COMPETITION_TRACKS
from .score import Ranking, SolverStanding, order_standings, standings_csv, tie_break_for

TABLE_HEADER = ("Solver", "Score", "#sat", "#unsat", "CPU time/s", "Wall-clock/s", "#unique", "")
PLACE_LABELS = ("Winner", "2nd place", "3rd place")
HORS_CONCOURS_MARK = "hors concours"


def whole_seconds(x: float) -> int:
    return int(Decimal(repr(x)).quantize(Decimal(1), rounding=ROUND_HALF_UP))


def _grid(rows: Sequence[Sequence[str]], right: Sequence[bool]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    out = []
    for n, r in enumerate(rows):
        cells = [c.rjust(w) if right[i] else c.ljust(w) for i, (c, w) in enumerate(zip(r, widths))]
        out.append("  ".join(cells).rstrip())
        if n == 0:
            out.append("-" * len(out[0]))
    return "\n".join(out) + "\n"


def track_rows(standings: Sequence[SolverStanding], ranking: Ranking) -> list[tuple]:
    hc = {e.solver for e in ranking.excluded if e.reason == HORS_CONCOURS_MARK}
    tb = tie_break_for(ranking.track)
    rows = []
    for s in order_standings(standings, tb):
        rows.append((
            s.solver,
            str(s.score),
            str(s.sat_count),
            str(s.unsat_count),
            str(whole_seconds(s.cpu_time_total_s)),
            str(whole_seconds(s.wall_time_total_s)),
            str(s.unique_count),
            HORS_CONCOURS_MARK if s.solver in hc else "",
        ))
    return rows


def render_track_table(standings: Sequence[SolverStanding], ranking: Ranking) -> tuple[str, str]:
    """Return (text table, full-precision CSV) for one track.

    Rows are ordered by score, hors-concours entries included and marked
    in the last column.  Text times are whole seconds.
    """
    rows = track_rows(standings, ranking)
    title = f"Solver performance on {ranking.track} track\n" if ranking.track else ""
    text = title + _grid([TABLE_HEADER, *rows], (False, True, True, True, True, True, True, False))
    ordered = order_standings(standings, tie_break_for(ranking.track))
    return text, standings_csv(ordered)


def render_summary(rankings: Mapping[str, Ranking]) -> str:
    known = [t.value for t in COMPETITION_TRACKS]
    tracks = [t for t in known if t in rankings] + sorted(t for t in rankings if t not in known)
    header = ("",) + tuple(tracks)
    rows = [header]
    for i, label in enumerate(PLACE_LABELS):
        row = [label]
        for t in tracks:
            order = rankings[t].order
            row.append(order[i] if i < len(order) else "")
        rows.append(tuple(row))
    return _grid(rows, [False] * len(header))
