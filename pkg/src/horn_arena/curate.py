"""Benchmark rating and quota-based suite selection."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .runner import Verdict


class Rating(str, Enum):
    A = "A"  # both reference solvers
    B = "B"  # winner only
    C = "C"  # runner-up only
    D = "D"  # neither

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class RaterConfig:
    winner: str = "spacer"
    winner_timeout: float = 5.0
    runner_up: str = "eldarica"
    runner_up_timeout: float = 10.0

    def __post_init__(self) -> None:
        if self.winner_timeout <= 0 or self.runner_up_timeout <= 0:
            raise ValueError("rater timeouts must be strictly positive")


@dataclass(frozen=True)
class SelectionQuota:
    repository: str
    cap: int

    def __post_init__(self) -> None:
        if self.cap < 0:
            raise ValueError(f"{self.repository}: cap must be nonnegative")

    @property
    def a_target(self) -> int:
        return math.floor(0.2 * self.cap)

    b_target = c_target = a_target

    @property
    def d_target(self) -> int:
        return math.floor(0.4 * self.cap)


def _solved(verdict: Verdict, seconds: float, timeout: float) -> bool:
    return verdict in (Verdict.SAT, Verdict.UNSAT) and seconds <= timeout


def rate_benchmark(
    winner: tuple[Verdict, float], runner_up: tuple[Verdict, float], cfg: RaterConfig = RaterConfig()
) -> Rating:
    w = _solved(*winner, cfg.winner_timeout)
    r = _solved(*runner_up, cfg.runner_up_timeout)
    if w and r:
        return Rating.A
    if w:
        return Rating.B
    if r:
        return Rating.C
    return Rating.D


def selection_counts(sizes: Mapping[Rating, int], quota: SelectionQuota) -> dict[Rating, int]:
    """How many benchmarks of each rating the quota procedure takes.

    Depends only on the pool sizes and the cap.  An A shortfall is split
    between B (rounded up) and C (rounded down); B and C shortfalls go to
    D; nothing ever flows back to A.
    """
    if quota.cap == 0:
        return {r: 0 for r in Rating}
    size = {r: int(sizes.get(r, 0)) for r in Rating}
    take_a = min(size[Rating.A], quota.a_target)
    short_a = quota.a_target - take_a
    b_goal = quota.b_target + math.ceil(short_a / 2)
    c_goal = quota.c_target + short_a // 2
    take_b = min(size[Rating.B], b_goal)
    take_c = min(size[Rating.C], c_goal)
    d_goal = quota.d_target + (b_goal - take_b) + (c_goal - take_c)
    take_d = min(size[Rating.D], d_goal)
    return {Rating.A: take_a, Rating.B: take_b, Rating.C: take_c, Rating.D: take_d}


def _pool_rng(seed: int, repository: str, rating: Rating) -> random.Random:
    # string seeds hash with SHA-512, independent of PYTHONHASHSEED
    return random.Random(f"{seed}/{repository}/{rating.value}")


def select_from_repository(
    pools: Mapping[Rating, Sequence[str]], quota: SelectionQuota, seed: int
) -> list[str]:
    """Seeded stand-in for ``sort -R | head -n`` applied per rating pool."""
    counts = selection_counts({r: len(pools.get(r, ())) for r in Rating}, quota)
    picked: list[str] = []
    for r in Rating:
        pool = sorted(pools.get(r, ()))
        _pool_rng(seed, quota.repository, r).shuffle(pool)
        picked.extend(pool[: counts[r]])
    return picked


# -- suite manifest ----------------------------------------------------------


@dataclass(frozen=True)
class CorpusEntry:
    repository: str
    benchmark: str
    track: str
    rating: Rating
    digest: str


@dataclass(frozen=True)
class ManifestEntry:
    repository: str
    benchmark: str
    track: str
    rating: Rating
    digest: str
    also_in: tuple = ()  # (repository, benchmark) pairs sharing the digest


@dataclass(frozen=True)
class SuiteManifest:
    entries: tuple
    seed: int
    totals: tuple = ()  # (repository, count), sorted by repository
    duplicates: tuple = field(default=(), compare=False)

    def total_for(self, repository: str) -> int:
        return dict(self.totals).get(repository, 0)


class DanglingBenchmarkError(KeyError):
    def __init__(self, repository: str, benchmark: str):
        super().__init__(f"{repository}: benchmark {benchmark!r} is not in the corpus metadata")
        self.repository = repository
        self.benchmark = benchmark

    def __str__(self) -> str:
        return self.args[0]


def build_suite(
    selections: Mapping[str, Iterable[str]],
    corpus: Mapping[tuple[str, str], CorpusEntry],
    seed: int,
) -> SuiteManifest:
    """Resolve selections into a digest-unique manifest ordered by (repository, id).

    A digest picked from more than one repository is kept once, under the
    first (repository, id) in that order, with the others listed in ``also_in``.
    """
    resolved = []
    for repo in sorted(selections):
        for bench in sorted(set(selections[repo])):
            entry = corpus.get((repo, bench))
            if entry is None:
                raise DanglingBenchmarkError(repo, bench)
            resolved.append(entry)
    first: dict[str, int] = {}
    kept: list[ManifestEntry] = []
    extra: dict[int, list] = {}
    for e in resolved:
        if e.digest in first:
            extra.setdefault(first[e.digest], []).append((e.repository, e.benchmark))
            continue
        first[e.digest] = len(kept)
        kept.append(ManifestEntry(e.repository, e.benchmark, e.track, e.rating, e.digest))
    entries = []
    dups = []
    for i, m in enumerate(kept):
        if i in extra:
            m = ManifestEntry(m.repository, m.benchmark, m.track, m.rating, m.digest, tuple(extra[i]))
            dups.append(m)
        entries.append(m)
    totals: dict[str, int] = {}
    for m in entries:
        totals[m.repository] = totals.get(m.repository, 0) + 1
    return SuiteManifest(tuple(entries), seed, tuple(sorted(totals.items())), tuple(dups))


# -- file formats ------------------------------------------------------------

MANIFEST_COLUMNS = ("repository", "id", "track", "rating", "digest", "also_in")


def write_manifest(m: SuiteManifest) -> str:
    lines = [f"# seed\t{m.seed}", "\t".join(MANIFEST_COLUMNS)]
    for e in m.entries:
        also = ",".join(f"{r}:{b}" for r, b in e.also_in) or "-"
        lines.append("\t".join((e.repository, e.benchmark, e.track, e.rating.value, e.digest, also)))
    return "\n".join(lines) + "\n"


def read_manifest(text: str) -> SuiteManifest:
    seed = None
    entries = []
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip():
            continue
        if raw.startswith("#"):
            parts = raw[1:].strip().split("\t")
            if parts[0] == "seed" and len(parts) == 2:
                seed = int(parts[1])
            continue
        cols = raw.split("\t")
        if not header_seen:
            if tuple(cols[:5]) != MANIFEST_COLUMNS[:5]:
                raise ValueError(f"line {lineno}: manifest header expected")
            header_seen = True
            continue
        if len(cols) not in (5, 6):
            raise ValueError(f"line {lineno}: expected 5 or 6 columns, got {len(cols)}")
        also = ()
        if len(cols) == 6 and cols[5] != "-":
            also = tuple(tuple(x.split(":", 1)) for x in cols[5].split(","))
        entries.append(ManifestEntry(cols[0], cols[1], cols[2], Rating(cols[3]), cols[4], also))
    if seed is None:
        raise ValueError("manifest has no seed header")
    totals: dict[str, int] = {}
    for e in entries:
        totals[e.repository] = totals.get(e.repository, 0) + 1
    return SuiteManifest(
        tuple(entries), seed, tuple(sorted(totals.items())), tuple(e for e in entries if e.also_in)
    )


@dataclass(frozen=True)
class PlanRow:
    repository: str
    cap: int
    track: str | None = None


def read_selection_plan(text: str) -> list[PlanRow]:
    """``<repository>\\t<N_r>`` or ``<repository>\\t<track>\\t<N_r>`` per line."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        try:
            if len(cols) == 2:
                rows.append(PlanRow(cols[0], int(cols[1])))
            elif len(cols) == 3:
                rows.append(PlanRow(cols[0], int(cols[2]), cols[1]))
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"selection plan line {lineno}: expected '<repository>[\\t<track>]\\t<N_r>'") from None
        if rows[-1].cap < 0:
            raise ValueError(f"selection plan line {lineno}: N_r must be nonnegative")
    return rows


def read_rating_table(text: str) -> dict[str, Rating]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2 or cols[1] not in Rating.__members__:
            raise ValueError(f"rating table line {lineno}: expected '<benchmark>\\t<A|B|C|D>'")
        out[cols[0]] = Rating(cols[1])
    return out


def write_rating_table(ratings: Mapping[str, Rating]) -> str:
    return "".join(f"{b}\t{r.value}\n" for b, r in sorted(ratings.items()))
