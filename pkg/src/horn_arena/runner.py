"""Resource-limited solver execution, suite scheduling and job-CSV ingestion."""
from __future__ import annotations

import csv
import io
import json
import logging
import os
import resource
import signal
import subprocess
import tempfile
import threading
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import psutil

log = logging.getLogger(__name__)

BENCHMARK_PLACEHOLDER = "{benchmark}"
OUTDIR_PLACEHOLDER = "{outdir}"
ENFORCEMENT_SLACK_S = 2.0
POLL_INTERVAL_S = 0.1
GIB = 1024**3


class Verdict(str, Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value

    @property
    def solved(self) -> bool:
        return self is not Verdict.UNKNOWN


class ConfigError(ValueError):
    """Invalid solver specification or limits."""


@dataclass(frozen=True)
class SolverSpec:
    name: str
    configuration: str
    command: tuple  # argv template
    competing: bool = True
    tracks: tuple = ()  # empty: run on every track

    def __post_init__(self) -> None:
        hits = sum(arg.count(BENCHMARK_PLACEHOLDER) for arg in self.command)
        if hits != 1:
            raise ConfigError(
                f"{self.name}/{self.configuration}: command must contain {BENCHMARK_PLACEHOLDER} exactly once"
            )

    @property
    def key(self) -> tuple[str, str]:
        return (self.name, self.configuration)

    def argv(self, benchmark: str | Path, outdir: str | Path) -> list[str]:
        return [
            a.replace(BENCHMARK_PLACEHOLDER, str(benchmark)).replace(OUTDIR_PLACEHOLDER, str(outdir))
            for a in self.command
        ]

    def runs_on(self, track: str) -> bool:
        return not self.tracks or track in self.tracks


def solver_package_specs(package_dir: str | Path, name: str | None = None, competing: bool = True) -> list[SolverSpec]:
    """One spec per ``bin/starexec_run_<configuration>`` entry script."""
    package_dir = Path(package_dir)
    specs = []
    for script in sorted((package_dir / "bin").glob("starexec_run_*")):
        config = script.name[len("starexec_run_"):]
        specs.append(
            SolverSpec(name or package_dir.name, config, (str(script.resolve()), BENCHMARK_PLACEHOLDER), competing)
        )
    return specs


def load_solver_specs(path: str | Path) -> list[SolverSpec]:
    """Read a JSON solver file: ``{"solvers": [{name, configuration, command | package, competing, tracks}]}``."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: {e}") from None
    specs = []
    for i, item in enumerate(data.get("solvers", [])):
        try:
            if "package" in item:
                pkg = (path.parent / item["package"]).resolve()
                found = [
                    s for s in solver_package_specs(pkg, item.get("name"), item.get("competing", True))
                    if "configuration" not in item or s.configuration == item["configuration"]
                ]
                if not found:
                    raise ConfigError(f"{path}: solver #{i}: no entry script in {pkg}/bin")
                specs.extend(replace(s, tracks=tuple(item.get("tracks", ()))) for s in found)
            else:
                command = item["command"]
                if isinstance(command, str):
                    command = command.split()
                specs.append(
                    SolverSpec(
                        item["name"],
                        item.get("configuration", "default"),
                        tuple(command),
                        bool(item.get("competing", True)),
                        tuple(item.get("tracks", ())),
                    )
                )
        except KeyError as e:
            raise ConfigError(f"{path}: solver #{i} lacks field {e}") from None
    keys = [s.key for s in specs]
    if len(keys) != len(set(keys)):
        raise ConfigError(f"{path}: (name, configuration) pairs must be unique")
    return specs


def dump_solver_specs(specs: Iterable[SolverSpec]) -> str:
    return json.dumps(
        {
            "solvers": [
                {
                    "name": s.name,
                    "configuration": s.configuration,
                    "command": list(s.command),
                    "competing": s.competing,
                    "tracks": list(s.tracks),
                }
                for s in specs
            ]
        },
        indent=2,
        sort_keys=True,
    )


@dataclass(frozen=True)
class ResourceLimits:
    wall_seconds: float
    memory_bytes: int
    cpu_seconds: float | None = None  # None only for the parallel-track profile

    def __post_init__(self) -> None:
        if self.wall_seconds <= 0 or self.memory_bytes <= 0:
            raise ConfigError("wall and memory limits must be positive")
        if self.cpu_seconds is not None and self.cpu_seconds <= 0:
            raise ConfigError("cpu limit must be positive")

    @property
    def exclusive(self) -> bool:
        return self.cpu_seconds is None


TEST_LIMITS = ResourceLimits(wall_seconds=600, memory_bytes=64 * GIB, cpu_seconds=600)
COMPETITION_LIMITS = ResourceLimits(wall_seconds=1800, memory_bytes=64 * GIB, cpu_seconds=1800)
COMPETITION_PARALLEL_LIMITS = ResourceLimits(wall_seconds=1800, memory_bytes=64 * GIB)


def limits_for_profile(profile: str, track: str) -> ResourceLimits:
    if profile == "test":
        return TEST_LIMITS
    if profile != "competition":
        raise ConfigError(f"unknown limit profile {profile!r}")
    return COMPETITION_PARALLEL_LIMITS if track == "LRA-TS-par" else COMPETITION_LIMITS


class JobStatus(str, Enum):
    OK = "ok"
    ERROR_EXIT = "error-exit"
    SIGNALLED = "signalled"
    TIMEOUT_WALL = "timeout-wall"
    TIMEOUT_CPU = "timeout-cpu"
    MEMOUT = "memout"
    LAUNCH_ERROR = "launch-error"
    HARNESS_ERROR = "harness-error"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class JobRecord:
    solver: str
    configuration: str
    benchmark: str
    track: str
    verdict: Verdict
    cpu_time_s: float
    wall_time_s: float
    status: JobStatus = JobStatus.OK
    exit_code: int | None = 0
    output: str = ""  # first non-whitespace output line


def first_output_line(text: str) -> str:
    for line in text.splitlines():
        if line.strip():
            return line.strip()
    return ""


def normalize_verdict(line: str | None, exit_status: int | None = 0) -> Verdict:
    """Exact, case-sensitive ``sat``/``unsat``; anything else is unknown."""
    if exit_status != 0 or line is None:
        return Verdict.UNKNOWN
    line = line.strip()
    if line == "sat":
        return Verdict.SAT
    if line == "unsat":
        return Verdict.UNSAT
    return Verdict.UNKNOWN


# -- single job --------------------------------------------------------------


def _tree_usage(root: psutil.Process) -> tuple[float, int]:
    """CPU seconds (including reaped descendants) and summed RSS of a live process tree."""
    cpu = 0.0
    rss = 0
    try:
        procs = [root] + root.children(recursive=True)
    except psutil.Error:
        return 0.0, 0
    for p in procs:
        try:
            t = p.cpu_times()
            cpu += t.user + t.system + t.children_user + t.children_system
            rss += p.memory_info().rss
        except psutil.Error:
            continue
    return cpu, rss


def _kill_group(pgid: int) -> None:
    try:
        os.killpg(pgid, signal.SIGKILL)
    except (ProcessLookupError, PermissionError):
        pass


def _supervise(proc: subprocess.Popen, limits: ResourceLimits, start: float, poll: float):
    pid = proc.pid
    try:
        root = psutil.Process(pid)
    except psutil.Error:
        root = None
    if limits.cpu_seconds is not None:
        # per-process backstop in case the watchdog thread is starved
        hard = int(limits.cpu_seconds + ENFORCEMENT_SLACK_S) + 1
        try:
            resource.prlimit(pid, resource.RLIMIT_CPU, (hard, hard + 1))
        except (OSError, ValueError):
            pass
    sampled_cpu = 0.0
    reason = None
    delay = min(0.005, poll)
    while True:
        done_pid, raw_status, usage = os.wait4(pid, os.WNOHANG)
        if done_pid == pid:
            break
        elapsed = time.monotonic() - start
        if root is not None:
            cpu, rss = _tree_usage(root)
            sampled_cpu = max(sampled_cpu, cpu)
        else:
            rss = 0
        if elapsed >= limits.wall_seconds:
            reason = JobStatus.TIMEOUT_WALL
        elif limits.cpu_seconds is not None and sampled_cpu >= limits.cpu_seconds:
            reason = JobStatus.TIMEOUT_CPU
        elif rss >= limits.memory_bytes:
            reason = JobStatus.MEMOUT
        if reason is not None:
            _kill_group(pid)
            done_pid, raw_status, usage = os.wait4(pid, 0)
            break
        time.sleep(delay)
        delay = min(delay * 2, poll)
    wall = time.monotonic() - start
    # stray members of the group must not outlive the job
    _kill_group(pid)
    proc.returncode = os.waitstatus_to_exitcode(raw_status)
    cpu = max(sampled_cpu, usage.ru_utime + usage.ru_stime)
    return reason, proc.returncode, cpu, wall


def run_job(
    spec: SolverSpec,
    benchmark: str | Path,
    limits: ResourceLimits,
    *,
    benchmark_id: str | None = None,
    track: str = "",
    poll: float = POLL_INTERVAL_S,
) -> JobRecord:
    """Run one (solver, benchmark) pair; never raises for solver misbehaviour."""
    bench_id = benchmark_id or str(benchmark)
    base = dict(solver=spec.name, configuration=spec.configuration, benchmark=bench_id, track=track)
    with tempfile.TemporaryDirectory(prefix="horn-arena-") as tmp:
        out_path = Path(tmp) / "stdout"
        outdir = Path(tmp) / "out"
        outdir.mkdir()
        proc = None
        error = ""
        for attempt in range(2):
            with open(out_path, "wb") as out:
                try:
                    start = time.monotonic()
                    proc = subprocess.Popen(
                        spec.argv(benchmark, outdir),
                        stdout=out,
                        stderr=subprocess.DEVNULL,
                        stdin=subprocess.DEVNULL,
                        start_new_session=True,
                        cwd=tmp,
                    )
                    break
                except OSError as e:
                    error = f"{type(e).__name__}: {e}"
                    log.warning("launch of %s/%s failed (attempt %d): %s", spec.name, spec.configuration, attempt + 1, error)
        if proc is None:
            return JobRecord(
                **base, verdict=Verdict.UNKNOWN, cpu_time_s=0.0, wall_time_s=0.0,
                status=JobStatus.LAUNCH_ERROR, exit_code=None, output=error,
            )
        reason, code, cpu, wall = _supervise(proc, limits, start, poll)
        with open(out_path, "rb") as fh:
            text = fh.read(1 << 16).decode("utf-8", errors="replace")
    line = first_output_line(text)
    if reason is not None:
        return JobRecord(**base, verdict=Verdict.UNKNOWN, cpu_time_s=cpu, wall_time_s=wall,
                         status=reason, exit_code=code, output=line)
    if code == 0:
        status = JobStatus.OK
    elif code < 0:
        status = JobStatus.SIGNALLED
    else:
        status = JobStatus.ERROR_EXIT
    if status is JobStatus.SIGNALLED and -code == signal.SIGXCPU:
        status = JobStatus.TIMEOUT_CPU
    return JobRecord(**base, verdict=normalize_verdict(line, code), cpu_time_s=cpu, wall_time_s=wall,
                     status=status, exit_code=code, output=line)


# -- suites ------------------------------------------------------------------


@dataclass
class SchedulerLog:
    """Start/end events of a suite run, for auditing slot usage."""

    events: list = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def add(self, kind: str, job: tuple, weight: int) -> None:
        with self.lock:
            self.events.append((time.monotonic(), kind, job, weight))

    def peak_usage(self) -> int:
        used = peak = 0
        for _, kind, _, w in sorted(self.events, key=lambda e: (e[0], e[1] == "start")):
            used += w if kind == "start" else -w
            peak = max(peak, used)
        return peak

    def intervals(self) -> dict:
        out: dict = {}
        for t, kind, job, w in self.events:
            out.setdefault(job, [None, None, w])[0 if kind == "start" else 1] = t
        return out


@dataclass(frozen=True)
class SuiteJob:
    spec: SolverSpec
    benchmark_id: str
    path: Path
    track: str
    limits: ResourceLimits


def plan_jobs(
    entries: Sequence,
    specs: Sequence[SolverSpec],
    limits: ResourceLimits | Mapping[str, ResourceLimits],
    corpus_root: str | Path,
    track_override: str | None = None,
) -> list[SuiteJob]:
    root = Path(corpus_root)
    jobs = []
    for e in entries:
        track = track_override or e.track
        lim = limits if isinstance(limits, ResourceLimits) else limits[track]
        for spec in specs:
            if spec.runs_on(track) or spec.runs_on(e.track):
                jobs.append(SuiteJob(spec, e.benchmark, root / e.benchmark, track, lim))
    return jobs


def run_suite(
    entries: Sequence,
    specs: Sequence[SolverSpec],
    limits: ResourceLimits | Mapping[str, ResourceLimits],
    slots: int = 2,
    *,
    corpus_root: str | Path = ".",
    track_override: str | None = None,
    scheduler_log: SchedulerLog | None = None,
    poll: float = POLL_INTERVAL_S,
) -> list[JobRecord]:
    """Run every (spec, entry) pair once on ``slots`` worker slots.

    Jobs whose limits carry no CPU cap occupy every slot.  Jobs are
    admitted in a fixed order; the returned records are sorted by
    (benchmark, solver, configuration).
    """
    if slots < 1:
        raise ConfigError("at least one worker slot is required")
    jobs = plan_jobs(entries, specs, limits, corpus_root, track_override)
    slog = scheduler_log if scheduler_log is not None else SchedulerLog()
    cond = threading.Condition()
    free = [slots]
    results: list[JobRecord] = []
    threads = []

    def work(job: SuiteJob, weight: int) -> None:
        key = (job.benchmark_id, job.spec.name, job.spec.configuration)
        slog.add("start", key, weight)
        try:
            rec = run_job(job.spec, job.path, job.limits, benchmark_id=job.benchmark_id, track=job.track, poll=poll)
        except Exception as e:  # harness fault: record it and keep going
            log.exception("job %s failed inside the harness", key)
            rec = JobRecord(job.spec.name, job.spec.configuration, job.benchmark_id, job.track,
                            Verdict.UNKNOWN, 0.0, 0.0, JobStatus.HARNESS_ERROR, None, str(e))
        slog.add("end", key, weight)
        with cond:
            results.append(rec)
            free[0] += weight
            cond.notify_all()

    for job in jobs:
        weight = slots if job.limits.exclusive else 1
        with cond:
            while free[0] < weight:
                cond.wait()
            free[0] -= weight
        t = threading.Thread(target=work, args=(job, weight), daemon=True)
        threads.append(t)
        t.start()
    for t in threads:
        t.join()
    return sorted(results, key=lambda r: (r.benchmark, r.solver, r.configuration))


# -- CSV ---------------------------------------------------------------------

JOB_COLUMNS = ("benchmark", "solver", "configuration", "result", "cpu time", "wallclock time", "status", "track")

DEFAULT_COLUMN_MAP = {
    "benchmark": "benchmark",
    "solver": "solver",
    "configuration": "configuration",
    "result": "result",
    "cpu": "cpu time",
    "wall": "wallclock time",
}
REQUIRED_FIELDS = tuple(DEFAULT_COLUMN_MAP)


class MissingColumnError(KeyError):
    def __init__(self, field_name: str, column: str):
        super().__init__(f"job CSV lacks column {column!r} (mapped from {field_name!r})")
        self.column = column

    def __str__(self) -> str:
        return self.args[0]


@dataclass(frozen=True)
class Reject:
    line: int
    reason: str


def write_jobs_csv(records: Iterable[JobRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(JOB_COLUMNS)
    for r in records:
        w.writerow([r.benchmark, r.solver, r.configuration, r.verdict.value,
                    repr(r.cpu_time_s), repr(r.wall_time_s), r.status.value, r.track])
    return buf.getvalue()


def ingest_job_csv(
    source: str | Path | io.TextIOBase,
    column_map: Mapping[str, str] | None = None,
    *,
    track: str | None = None,
) -> tuple[list[JobRecord], list[Reject]]:
    """Read a job-information CSV into records plus a list of rejected rows.

    ``column_map`` maps the logical fields benchmark, solver, configuration,
    result, cpu and wall (optionally status and track) to header names.
    """
    cmap = dict(DEFAULT_COLUMN_MAP)
    if column_map:
        cmap.update(column_map)
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            return _ingest(fh, cmap, track)
    return _ingest(source, cmap, track)


def _ingest(fh, cmap: dict, track: str | None):
    reader = csv.DictReader(fh)
    header = reader.fieldnames or []
    for f in REQUIRED_FIELDS:
        if cmap[f] not in header:
            raise MissingColumnError(f, cmap[f])
    for f in ("status", "track"):
        if f in cmap and cmap[f] not in header:
            raise MissingColumnError(f, cmap[f])
    status_col = cmap.get("status") if cmap.get("status") in header else None
    track_col = cmap.get("track") if cmap.get("track") in header else None
    if "status" not in cmap and "status" in header:
        status_col = "status"
    if "track" not in cmap and "track" in header:
        track_col = "track"
    records, rejects = [], []
    for row in reader:
        line = reader.line_num
        if None in row or any(row.get(cmap[f]) is None for f in REQUIRED_FIELDS):
            rejects.append(Reject(line, "wrong number of fields"))
            continue
        try:
            cpu = float(row[cmap["cpu"]])
            wall = float(row[cmap["wall"]])
        except ValueError:
            rejects.append(Reject(line, f"non-numeric time: {row[cmap['cpu']]!r}/{row[cmap['wall']]!r}"))
            continue
        if cpu < 0 or wall < 0 or cpu != cpu or wall != wall:
            rejects.append(Reject(line, "negative or NaN time"))
            continue
        status = JobStatus.OK
        if status_col:
            try:
                status = JobStatus(row[status_col])
            except ValueError:
                status = JobStatus.OK  # foreign status vocabulary
        records.append(
            JobRecord(
                solver=row[cmap["solver"]],
                configuration=row[cmap["configuration"]],
                benchmark=row[cmap["benchmark"]],
                track=(row[track_col] if track_col else None) or track or "",
                verdict=normalize_verdict(row[cmap["result"]]),
                cpu_time_s=cpu,
                wall_time_s=wall,
                status=status,
                exit_code=0,
                output=row[cmap["result"]],
            )
        )
    return records, rejects
