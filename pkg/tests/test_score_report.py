import csv
import io
from dataclasses import replace

import pytest

import tables
from horn_arena import score as scoring
from horn_arena.report import HORS_CONCOURS_MARK, TABLE_HEADER, render_summary, render_track_table, whole_seconds
from horn_arena.runner import JobRecord, Verdict

S, U, K = Verdict.SAT, Verdict.UNSAT, Verdict.UNKNOWN


def job(solver, bench, verdict, cpu=1.0, wall=1.0, track="T"):
    return JobRecord(solver, "default", bench, track, verdict, cpu, wall)


def test_standings_counts_and_uniques():
    jobs = [
        job("a", "b1", S), job("b", "b1", S),
        job("a", "b2", U), job("b", "b2", K),
        job("a", "b3", K), job("b", "b3", K),
    ]
    st = {s.solver: s for s in scoring.standings(jobs, "T")}
    assert (st["a"].score, st["a"].sat_count, st["a"].unsat_count, st["a"].unique_count) == (2, 1, 1, 1)
    assert (st["b"].score, st["b"].unique_count) == (1, 0)
    assert st["a"].cpu_time_total_s == 3.0


def test_missing_records_count_as_unknown():
    jobs = [job("a", "b1", S), job("b", "b2", U)]
    st = {s.solver: s for s in scoring.standings(jobs, "T")}
    assert st["a"].unique_count == 1 and st["b"].unique_count == 1
    assert scoring.coverage_gaps(jobs) == {"a": ["b2"], "b": ["b1"]}


def test_duplicate_job_rejected():
    with pytest.raises(scoring.DuplicateJobError):
        scoring.standings([job("a", "b1", S), job("a", "b1", U)], "T")


def test_track_filter():
    jobs = [job("a", "b1", S, track="X"), job("a", "b2", S, track="Y")]
    assert scoring.standings(jobs, "X")[0].score == 1


def test_tie_break_cpu_vs_wall():
    jobs = [job("a", "b1", S, cpu=10, wall=1, track="LIA-lin"), job("b", "b2", S, cpu=5, wall=8, track="LIA-lin")]
    st = scoring.standings(jobs, "LIA-lin")
    assert scoring.rank(st).order == ["b", "a"]
    st_par = [replace(s, track="LRA-TS-par") for s in st]
    assert scoring.rank(st_par).order == ["a", "b"]
    assert scoring.rank(st, "wall").order == ["a", "b"]


def test_unresolved_tie_falls_back_to_name():
    jobs = [job("zeta", "b1", S), job("alpha", "b2", U)]
    rk = scoring.rank(scoring.standings(jobs, "T"))
    assert rk.order == ["alpha", "zeta"]
    assert rk.unresolved_ties == (("alpha", "zeta"),)


def test_exclusions():
    jobs = [job("a", "b1", S), job("b", "b1", S), job("c", "b1", K)]
    rk = scoring.rank(scoring.standings(jobs, "T"), hors_concours=["b"])
    assert rk.order == ["a"]
    assert [(e.solver, e.reason) for e in rk.excluded] == [("b", "hors concours"), ("c", "zero score")]


def test_inconsistencies_do_not_change_scores():
    jobs = [job("a", "b1", S), job("b", "b1", U)]
    (inc,) = scoring.detect_inconsistencies(jobs)
    assert inc.sat_claimants == ("a",) and inc.unsat_claimants == ("b",)
    assert [s.score for s in scoring.standings(jobs, "T")] == [1, 1]
    text = scoring.inconsistencies_csv([inc])
    assert text == "benchmark,sat_claimants,unsat_claimants\nb1,a,b\n"


def test_standings_by_run():
    before = [job("u", "b1", S), job("g", "b1", U)]
    after = [job("u", "b1", K), job("g", "b1", U)]
    out = scoring.standings_by_run({"original": before, "fixed": after}, "T")
    assert {s.solver: s.score for s in out["original"]} == {"g": 1, "u": 1}
    assert {s.solver: s.score for s in out["fixed"]} == {"g": 1, "u": 0}


def test_parse_standings_csv_header_check():
    with pytest.raises(ValueError):
        scoring.parse_standings_csv("name,score\n")


# -- report ---------------------------------------------------------------------


@pytest.mark.parametrize("x, expected", [(0.4, 0), (0.5, 1), (1.5, 2), (2.5, 3), (149834.5, 149835), (7.49999, 7)])
def test_whole_seconds_half_up(x, expected):
    assert whole_seconds(x) == expected


def test_track_table_layout():
    st = scoring.standings(tables.lia_lin_jobs(), "LIA-lin")
    rk = scoring.rank(st, hors_concours=["Spacer"])
    text, csv_text = render_track_table(st, rk)
    lines = text.splitlines()
    assert lines[0] == "Solver performance on LIA-lin track"
    assert lines[1].split()[:2] == ["Solver", "Score"]
    body = lines[3:]
    assert [line.split("  ")[0].strip() for line in body] == \
        ["Spacer", "Golem", "Eldarica", "U. Unihorn", "U. TreeAutomizer"]
    assert body[0].rstrip().endswith(HORS_CONCOURS_MARK)
    rows = list(csv.reader(io.StringIO(csv_text)))
    assert rows[0] == list(scoring.STANDINGS_COLUMNS)
    assert [r[0] for r in rows[1:]] == ["Spacer", "Golem", "Eldarica", "U. Unihorn", "U. TreeAutomizer"]
    assert scoring.parse_standings_csv(csv_text, "LIA-lin") == scoring.order_standings(st)


def test_csv_keeps_full_precision_text_rounds():
    st = scoring.standings([job("a", "b1", S, cpu=1.23456789, wall=0.5)], "T")
    text, csv_text = render_track_table(st, scoring.rank(st))
    assert "1.23456789" in csv_text
    assert text.splitlines()[-1].split()[4:6] == ["1", "1"]


def test_summary_from_appendix():
    ranks = {
        t: scoring.rank(rows, hors_concours=["Spacer"])
        for t, rows in tables.appendix_standings().items()
    }
    text = render_summary(ranks)
    winners = text.splitlines()[2]
    assert winners.split()[0] == "Winner"
    for t, r in ranks.items():
        assert r.order[0] == tables.SUMMARY_WINNERS[t]
    assert ranks["LIA-nonlin-Arrays-nonrecADT"].order == ["Eldarica"]
    assert ranks["ADT-nonlin"].order == ["RInGen", "Eldarica"]
    assert ranks["LRA-TS"].order == ["Golem", "U. TreeAutomizer", "U. Unihorn"]
    assert ranks["LIA-lin-Arrays"].order == ["Eldarica", "U. Unihorn", "U. TreeAutomizer"]
    header = text.splitlines()[0].split()
    assert header == [t for t in tables.SUMMARY_WINNERS]


def test_table_header_columns():
    assert TABLE_HEADER[:7] == ("Solver", "Score", "#sat", "#unsat", "CPU time/s", "Wall-clock/s", "#unique")
