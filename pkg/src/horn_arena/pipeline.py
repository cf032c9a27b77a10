"""File-level operations shared by the CLI and the HTTP service."""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import score as scoring
from .chcformat import (
    ChcFormatError,
    ConformanceReport,
    Profile,
    Verdict as ConformanceVerdict,
    Violation,
    canonical_fingerprint,
    merge_queries,
    normalize,
    parse_script,
    print_script,
    validate_conformance,
)
from .classify import COMPETITION_TRACKS, Classification, classify
from .curate import (
    CorpusEntry,
    PlanRow,
    RaterConfig,
    Rating,
    SelectionQuota,
    SuiteManifest,
    build_suite,
    rate_benchmark,
    select_from_repository,
)
from .report import HORS_CONCOURS_MARK, render_summary, render_track_table
from .runner import JobRecord, ResourceLimits, SolverSpec, run_job

log = logging.getLogger(__name__)


def expand_inputs(paths: Iterable[str | Path]) -> list[Path]:
    """Files as given; directories expanded to their ``*.smt2`` files, sorted."""
    out = []
    for p in map(Path, paths):
        if p.is_dir():
            out.extend(sorted(x for x in p.rglob("*.smt2") if x.is_file()))
        elif p.exists():
            out.append(p)
        else:
            raise FileNotFoundError(str(p))
    return out


def read_text(path: Path) -> bytes:
    return path.read_bytes()


# -- check / normalize / classify ---------------------------------------------


def check_text(data: bytes | str, profile: Profile | str = Profile.STRICT) -> ConformanceReport:
    try:
        s = parse_script(data)
    except ChcFormatError as e:
        return ConformanceReport(
            ConformanceVerdict.REJECTED, (Violation(e.rule, e.line, e.col, e.message),), Profile(profile)
        )
    return validate_conformance(s, profile)


@dataclass(frozen=True)
class NormalizeOutcome:
    accepted: bool
    text: str = ""
    rule: str = ""
    location: str = ""
    message: str = ""

    def record(self, file: str) -> str:
        if self.accepted:
            return f"{file}\taccepted\t-\t-\t-"
        return f"{file}\trejected\t{self.rule}\t{self.location}\t{self.message}"


def normalize_text(data: bytes | str, merge: bool = False) -> NormalizeOutcome:
    try:
        s = normalize(parse_script(data))
        if merge:
            s = merge_queries(s)
    except ChcFormatError as e:
        return NormalizeOutcome(False, rule=e.rule, location=e.location, message=e.message)
    report = validate_conformance(s, Profile.STRICT)
    if report.verdict is not ConformanceVerdict.CONFORMANT:
        v = report.violations[0]
        return NormalizeOutcome(False, rule=v.rule, location=v.location, message=v.message)
    return NormalizeOutcome(True, text=print_script(s))


def output_path(src: Path, out_dir: Path, root: Path | None) -> Path:
    if root is not None:
        try:
            return out_dir / src.resolve().relative_to(root.resolve())
        except ValueError:
            pass
    return out_dir / src.name


def normalize_files(
    files: Sequence[Path], out_dir: Path, merge: bool = False, root: Path | None = None
) -> list[tuple[Path, NormalizeOutcome]]:
    results = []
    for f in files:
        outcome = normalize_text(read_text(f), merge)
        if outcome.accepted:
            dest = output_path(f, out_dir, root)
            dest.parent.mkdir(parents=True, exist_ok=True)
            dest.write_text(outcome.text, encoding="utf-8")
        results.append((f, outcome))
    return results


@dataclass(frozen=True)
class ClassifyOutcome:
    classification: Classification | None
    error: ChcFormatError | None = None

    def record(self, file: str) -> str:
        if self.classification is not None:
            return self.classification.record(file)
        e = self.error
        return f"{file}\tUnclassified\t-\t-\tparse-error:{e.rule}"


def classify_text(data: bytes | str) -> ClassifyOutcome:
    try:
        return ClassifyOutcome(classify(parse_script(data)))
    except ChcFormatError as e:
        return ClassifyOutcome(None, e)


# -- dedup ---------------------------------------------------------------------


@dataclass(frozen=True)
class DedupRow:
    file: str
    repository: str
    digest: str | None
    duplicate_of: str | None = None
    error: str | None = None


@dataclass
class DedupResult:
    rows: list
    totals: dict = field(default_factory=dict)  # repository -> (total, unique)

    def unique_digests(self) -> set[str]:
        return {r.digest for r in self.rows if r.digest and r.duplicate_of is None}


def repository_of(relpath: str, repositories: Iterable[str] = ()) -> str:
    """Longest matching repository prefix, else the first path component."""
    best = ""
    for repo in repositories:
        if (relpath == repo or relpath.startswith(repo.rstrip("/") + "/")) and len(repo) > len(best):
            best = repo
    if best:
        return best
    return relpath.split("/", 1)[0] if "/" in relpath else "."


def dedup_files(
    files: Sequence[Path], root: Path, scope: str = "repository", repositories: Iterable[str] = ()
) -> DedupResult:
    if scope not in ("repository", "global"):
        raise ValueError(f"unknown dedup scope {scope!r}")
    repositories = list(repositories)
    seen: dict[tuple, str] = {}
    rows = []
    totals: dict[str, list[int]] = defaultdict(lambda: [0, 0])
    for f in files:
        rel = f.resolve().relative_to(root.resolve()).as_posix()
        repo = repository_of(rel, repositories)
        try:
            digest = canonical_fingerprint(parse_script(read_text(f))).hexdigest
        except ChcFormatError as e:
            rows.append(DedupRow(rel, repo, None, error=f"{e.rule}@{e.location}"))
            continue
        key = (repo, digest) if scope == "repository" else ("", digest)
        totals[repo][0] += 1
        if key in seen:
            rows.append(DedupRow(rel, repo, digest, duplicate_of=seen[key]))
        else:
            seen[key] = rel
            totals[repo][1] += 1
            rows.append(DedupRow(rel, repo, digest))
    return DedupResult(rows, {k: tuple(v) for k, v in sorted(totals.items())})


# -- rating / selection -------------------------------------------------------


def rate_files(
    files: Sequence[tuple[str, Path]], winner: SolverSpec, runner_up: SolverSpec, cfg: RaterConfig
) -> dict[str, Rating]:
    ratings = {}
    for bench_id, path in files:
        w = run_job(winner, path, ResourceLimits(cfg.winner_timeout, 64 * 1024**3, cfg.winner_timeout))
        r = run_job(runner_up, path, ResourceLimits(cfg.runner_up_timeout, 64 * 1024**3, cfg.runner_up_timeout))
        ratings[bench_id] = rate_benchmark((w.verdict, w.wall_time_s), (r.verdict, r.wall_time_s), cfg)
    return ratings


def corpus_metadata(
    root: Path, ratings: Mapping[str, Rating], repositories: Iterable[str]
) -> tuple[dict, list[str]]:
    """Resolve track and digest for every rated benchmark; returns (metadata, problems)."""
    repositories = list(repositories)
    meta = {}
    problems = []
    for bench, rating in sorted(ratings.items()):
        path = root / bench
        try:
            s = parse_script(path.read_bytes())
        except FileNotFoundError:
            problems.append(f"{bench}: file not found under {root}")
            continue
        except ChcFormatError as e:
            problems.append(f"{bench}: {e}")
            continue
        repo = repository_of(bench, repositories)
        meta[(repo, bench)] = CorpusEntry(repo, bench, classify(s).track.value, rating,
                                          canonical_fingerprint(s).hexdigest)
    return meta, problems


def select_suite(plan: Sequence[PlanRow], meta: Mapping[tuple, CorpusEntry], seed: int) -> SuiteManifest:
    selections: dict[str, list[str]] = defaultdict(list)
    for row in plan:
        pools: dict[Rating, list[str]] = defaultdict(list)
        for (repo, bench), e in meta.items():
            if repo == row.repository and (row.track is None or e.track == row.track):
                pools[e.rating].append(bench)
        label = row.repository if row.track is None else f"{row.repository}/{row.track}"
        picked = select_from_repository(pools, SelectionQuota(label, row.cap), seed)
        selections[row.repository].extend(picked)
    return build_suite(selections, meta, seed)


# -- reporting ----------------------------------------------------------------


@dataclass
class TrackReport:
    track: str
    standings: list
    ranking: scoring.Ranking
    table: str
    csv: str
    inconsistencies: list
    gaps: dict


def report_jobs(jobs: Sequence[JobRecord], hors_concours: Iterable[str] = ()) -> tuple[list[TrackReport], str]:
    """Per-track tables plus the summary for all tracks present in ``jobs``."""
    hc = set(hors_concours)
    by_track: dict[str, list[JobRecord]] = defaultdict(list)
    for j in jobs:
        by_track[j.track or "-"].append(j)
    order = [t.value for t in COMPETITION_TRACKS]
    tracks = [t for t in order if t in by_track] + sorted(t for t in by_track if t not in order)
    reports = []
    for t in tracks:
        tj = by_track[t]
        st = scoring.standings(tj, t)
        rk = scoring.rank(st, scoring.tie_break_for(t), hc)
        table, csv_text = render_track_table(st, rk)
        reports.append(TrackReport(t, st, rk, table, csv_text, scoring.detect_inconsistencies(tj),
                                   scoring.coverage_gaps(tj)))
    summary = render_summary({r.track: r.ranking for r in reports}) if reports else ""
    return reports, summary


__all__ = [
    "HORS_CONCOURS_MARK",
    "check_text",
    "classify_text",
    "corpus_metadata",
    "dedup_files",
    "expand_inputs",
    "normalize_files",
    "normalize_text",
    "rate_files",
    "report_jobs",
    "repository_of",
    "select_suite",
]
