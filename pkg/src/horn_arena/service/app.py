from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import pipeline
from .. import score as scoring
from ..chcformat import ChcFormatError, canonical_fingerprint, parse_script
from ..curate import RaterConfig, Rating, SelectionQuota, rate_benchmark, select_from_repository, selection_counts
from ..report import render_summary, render_track_table
from ..runner import JobRecord, Verdict
from .models import (
    CheckRequest,
    CheckResponse,
    ClassifyResponse,
    BenchmarkRequest,
    ExclusionModel,
    FingerprintResponse,
    InconsistencyModel,
    NormalizeRequest,
    NormalizeResponse,
    RateRequest,
    RateResponse,
    ScoreRequest,
    ScoreResponse,
    SelectRequest,
    SelectResponse,
    StandingModel,
    SummaryRequest,
    SummaryResponse,
    ViolationModel,
)

app = FastAPI(title="horn-arena", version="0.1.0")


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/check", response_model=CheckResponse)
def check(req: CheckRequest):
    report = pipeline.check_text(req.text, req.profile)
    return CheckResponse(
        verdict=report.verdict.value,
        profile=report.profile.value,
        violations=[ViolationModel(rule=v.rule, location=v.location, message=v.message) for v in report.violations],
        records=report.lines(req.name),
    )


@app.post("/normalize", response_model=NormalizeResponse)
def normalize(req: NormalizeRequest):
    o = pipeline.normalize_text(req.text, req.merge_queries)
    return NormalizeResponse(accepted=o.accepted, text=o.text, rule=o.rule, location=o.location, message=o.message)


@app.post("/classify", response_model=ClassifyResponse)
def classify(req: BenchmarkRequest):
    o = pipeline.classify_text(req.text)
    c = o.classification
    if c is None:
        return ClassifyResponse(track="Unclassified", reason=f"parse-error:{o.error.rule}", record=o.record(req.name))
    return ClassifyResponse(
        track=c.track.value,
        linearity=c.linearity.value,
        theories=c.theories.describe(),
        reason=c.reason,
        record=o.record(req.name),
    )


@app.post("/fingerprint", response_model=FingerprintResponse)
def fingerprint(req: BenchmarkRequest):
    try:
        d = canonical_fingerprint(parse_script(req.text))
    except ChcFormatError as e:
        raise HTTPException(status_code=422, detail={"rule": e.rule, "location": e.location, "message": e.message})
    return FingerprintResponse(algorithm=d.algorithm, digest=d.hexdigest)


@app.post("/rate", response_model=RateResponse)
def rate(req: RateRequest):
    cfg = RaterConfig(winner_timeout=req.winner_timeout, runner_up_timeout=req.runner_up_timeout)
    r = rate_benchmark(
        (Verdict(req.winner.verdict), req.winner.seconds),
        (Verdict(req.runner_up.verdict), req.runner_up.seconds),
        cfg,
    )
    return RateResponse(rating=r.value)


@app.post("/select", response_model=SelectResponse)
def select(req: SelectRequest):
    pools = {Rating(k): v for k, v in req.pools.items()}
    quota = SelectionQuota(req.repository, req.cap)
    counts = selection_counts({r: len(v) for r, v in pools.items()}, quota)
    return SelectResponse(
        selected=select_from_repository(pools, quota, req.seed),
        counts={r.value: n for r, n in counts.items()},
    )


@app.post("/score", response_model=ScoreResponse)
def score(req: ScoreRequest):
    jobs = [
        JobRecord(j.solver, j.configuration, j.benchmark, j.track or req.track, Verdict(j.verdict),
                  j.cpu_time_s, j.wall_time_s)
        for j in req.jobs
    ]
    try:
        st = scoring.standings(jobs, req.track)
    except scoring.DuplicateJobError as e:
        raise HTTPException(status_code=422, detail=str(e))
    rk = scoring.rank(st, req.tie_break, req.hors_concours)
    table, csv_text = render_track_table(st, rk)
    return ScoreResponse(
        track=req.track,
        standings=[
            StandingModel(solver=s.solver, score=s.score, sat=s.sat_count, unsat=s.unsat_count,
                          cpu_s=s.cpu_time_total_s, wall_s=s.wall_time_total_s, unique=s.unique_count)
            for s in st
        ],
        ranking=rk.order,
        excluded=[ExclusionModel(solver=e.solver, reason=e.reason) for e in rk.excluded],
        unresolved_ties=[list(t) for t in rk.unresolved_ties],
        inconsistencies=[
            InconsistencyModel(benchmark=i.benchmark, sat_claimants=list(i.sat_claimants),
                               unsat_claimants=list(i.unsat_claimants))
            for i in scoring.detect_inconsistencies([j for j in jobs if j.track == req.track])
        ],
        table=table,
        csv=csv_text,
    )


@app.post("/summary", response_model=SummaryResponse)
def summary(req: SummaryRequest):
    rankings = {
        t: scoring.Ranking(t, tuple((i + 1, s) for i, s in enumerate(order)))
        for t, order in req.rankings.items()
    }
    return SummaryResponse(text=render_summary(rankings))
