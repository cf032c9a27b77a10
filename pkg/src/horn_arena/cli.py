"""``horn-arena`` command line: one subcommand per harness operation.

Exit codes: 0 success, 1 configuration error, 2 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import pipeline
from . import score as scoring
from .chcformat import Profile
from .classify import TrackId
from .config import RunConfig, load_column_map, load_run_config
from .curate import (
    DanglingBenchmarkError,
    RaterConfig,
    read_manifest,
    read_rating_table,
    read_selection_plan,
    write_manifest,
    write_rating_table,
)
from .runner import (
    ConfigError,
    MissingColumnError,
    dump_solver_specs,
    ingest_job_csv,
    load_solver_specs,
    run_suite,
    write_jobs_csv,
)

log = logging.getLogger("horn_arena")

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _bool_flag(value: str) -> bool:
    v = value.lower()
    if v in ("true", "1", "yes"):
        return True
    if v in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected True/False, got {value!r}")


def _out(text: str, dest: str | None) -> None:
    if dest:
        Path(dest).parent.mkdir(parents=True, exist_ok=True)
        Path(dest).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _config(args) -> RunConfig:
    cfg = load_run_config(getattr(args, "config", None))
    return cfg.override(
        seed=getattr(args, "seed", None),
        profile=getattr(args, "profile", None),
        slots=getattr(args, "slots", None),
        solvers=getattr(args, "solvers", None),
        column_map=getattr(args, "column_map", None),
        out_dir=getattr(args, "out_dir", None),
        hors_concours=getattr(args, "hors_concours", None) or None,
    )


# -- subcommands ---------------------------------------------------------------


def cmd_check(args) -> int:
    lines = []
    for f in pipeline.expand_inputs(args.files):
        lines.extend(pipeline.check_text(f.read_bytes(), args.profile).lines(str(f)))
    _out("\n".join(lines) + ("\n" if lines else ""), args.output)
    return EXIT_OK


def cmd_normalize(args) -> int:
    files = pipeline.expand_inputs(args.files)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    root = Path(args.root) if args.root else None
    results = pipeline.normalize_files(files, out_dir, args.merge_queries, root)
    _out("".join(o.record(str(f)) + "\n" for f, o in results), args.output)
    return EXIT_OK


def cmd_classify(args) -> int:
    lines = [pipeline.classify_text(f.read_bytes()).record(str(f)) for f in pipeline.expand_inputs(args.files)]
    _out("".join(line + "\n" for line in lines), args.output)
    return EXIT_OK


def cmd_dedup(args) -> int:
    root = Path(args.root)
    if not root.is_dir():
        raise FileNotFoundError(f"{root} is not a directory")
    result = pipeline.dedup_files(pipeline.expand_inputs([root]), root, args.scope, args.repository or ())
    lines = []
    for r in result.rows:
        if r.error:
            lines.append(f"{r.file}\t-\trejected:{r.error}")
        else:
            lines.append(f"{r.file}\t{r.digest}\t{r.duplicate_of or '-'}")
    for repo, (total, unique) in result.totals.items():
        lines.append(f"# {repo}\t{total}/{unique}")
    _out("".join(line + "\n" for line in lines), args.output)
    return EXIT_OK


def _find_spec(specs, name: str):
    for s in specs:
        if s.name == name or f"{s.name}/{s.configuration}" == name:
            return s
    raise ConfigError(f"no solver named {name!r} in the solver file")


def cmd_rate(args) -> int:
    cfg = _config(args)
    if not cfg.solvers:
        raise ConfigError("rate needs --solvers")
    specs = load_solver_specs(cfg.solvers)
    rater = RaterConfig(args.winner, args.winner_timeout, args.runner_up, args.runner_up_timeout)
    root = Path(args.root)
    files = [(f.resolve().relative_to(root.resolve()).as_posix(), f) for f in pipeline.expand_inputs([root])]
    ratings = pipeline.rate_files(files, _find_spec(specs, args.winner), _find_spec(specs, args.runner_up), rater)
    _out(write_rating_table(ratings), args.output)
    return EXIT_OK


def cmd_select(args) -> int:
    cfg = _config(args)
    plan = read_selection_plan(Path(args.plan).read_text())
    ratings = read_rating_table(Path(args.ratings).read_text())
    meta, problems = pipeline.corpus_metadata(Path(args.root), ratings, [r.repository for r in plan])
    for p in problems:
        print(f"warning: {p}", file=sys.stderr)
    manifest = pipeline.select_suite(plan, meta, cfg.seed)
    for e in manifest.duplicates:
        also = ", ".join(f"{r}:{b}" for r, b in e.also_in)
        print(f"duplicate: {e.repository}:{e.benchmark} also selected as {also}", file=sys.stderr)
    _out(write_manifest(manifest), args.output)
    return EXIT_OK


def cmd_run(args) -> int:
    cfg = _config(args)
    if not cfg.solvers:
        raise ConfigError("run needs --solvers")
    specs = load_solver_specs(cfg.solvers)
    manifest = read_manifest(Path(args.manifest).read_text())
    roots = [Path(args.root)] if args.root else [Path(r) for r in cfg.corpus_roots]
    if len(roots) != 1:
        raise ConfigError("run needs exactly one corpus root (--root or corpus_roots)")
    override = TrackId.LRA_TS_PAR.value if args.track_mode == "par" else None
    tracks = {override or e.track for e in manifest.entries}
    limits = {t: cfg.limits(t) for t in tracks}
    records = run_suite(manifest.entries, specs, limits, cfg.slots, corpus_root=roots[0], track_override=override)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "jobs.csv").write_text(write_jobs_csv(records), encoding="utf-8")
    (out / "solvers.json").write_text(dump_solver_specs(specs) + "\n", encoding="utf-8")
    print(f"{len(records)} jobs written to {out / 'jobs.csv'}")
    return EXIT_OK


def cmd_ingest(args) -> int:
    cfg = _config(args)
    records, rejects = ingest_job_csv(args.csv, load_column_map(cfg.column_map), track=args.track)
    for r in rejects:
        print(f"reject: line {r.line}: {r.reason}", file=sys.stderr)
    _out(write_jobs_csv(records), args.output)
    return EXIT_OK


def cmd_score(args) -> int:
    cfg = _config(args)
    records, rejects = ingest_job_csv(args.csv, load_column_map(cfg.column_map), track=args.track)
    for r in rejects:
        print(f"reject: line {r.line}: {r.reason}", file=sys.stderr)
    st = scoring.standings(records, args.track)
    rk = scoring.rank(st, args.tie_break, cfg.hors_concours)
    ordered = scoring.order_standings(st, args.tie_break or scoring.tie_break_for(args.track))
    _out(scoring.standings_csv(ordered), args.output)
    lines = [f"# ranking {args.track}"]
    lines += [f"# {place}\t{solver}" for place, solver in rk.places]
    lines += [f"# excluded\t{e.solver}\t{e.reason}" for e in rk.excluded]
    lines += [f"# unresolved tie\t{', '.join(t)}" for t in rk.unresolved_ties]
    print("\n".join(lines), file=sys.stderr if not args.output else sys.stdout)
    return EXIT_OK


def cmd_report(args) -> int:
    cfg = _config(args)
    run = Path(args.run)
    jobs_path = run / "jobs.csv" if run.is_dir() else run
    records, rejects = ingest_job_csv(jobs_path, load_column_map(cfg.column_map))
    for r in rejects:
        print(f"reject: line {r.line}: {r.reason}", file=sys.stderr)
    hc = set(cfg.hors_concours)
    spec_file = run / "solvers.json" if run.is_dir() else None
    if spec_file is not None and spec_file.exists():
        hc |= {s.name for s in load_solver_specs(spec_file) if not s.competing}
    reports, summary = pipeline.report_jobs(records, sorted(hc))
    dest = Path(args.report_dir) if args.report_dir else (run / "report" if run.is_dir() else None)
    chunks = []
    for r in reports:
        chunks.append(r.table)
        if r.inconsistencies:
            chunks.append(f"{len(r.inconsistencies)} inconsistent result(s) on {r.track}\n")
        for solver, missing in r.gaps.items():
            chunks.append(f"{solver}: no result for {len(missing)} benchmark(s), counted as unknown\n")
        for tie in r.ranking.unresolved_ties:
            chunks.append(f"unresolved tie on {r.track}: {', '.join(tie)}\n")
        chunks.append("\n")
        if dest is not None:
            dest.mkdir(parents=True, exist_ok=True)
            (dest / f"{r.track}.txt").write_text(r.table, encoding="utf-8")
            (dest / f"{r.track}.csv").write_text(r.csv, encoding="utf-8")
            (dest / f"{r.track}.inconsistencies.csv").write_text(
                scoring.inconsistencies_csv(r.inconsistencies), encoding="utf-8"
            )
    chunks.append("Results of the competition\n")
    chunks.append(summary)
    if dest is not None:
        (dest / "summary.txt").write_text(summary, encoding="utf-8")
    sys.stdout.write("".join(chunks))
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("horn_arena.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="horn-arena", description="CHC solver competition harness")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, *, seed=False, solvers=False, columns=False):
        sp.add_argument("--config", help="JSON run configuration; flags override it")
        if seed:
            sp.add_argument("--seed", type=int)
        if solvers:
            sp.add_argument("--solvers", help="JSON solver specification file")
        if columns:
            sp.add_argument("--column-map", dest="column_map", help="JSON map of logical fields to CSV headers")
        return sp

    sp = sub.add_parser("check", help="validate benchmarks against the CHC-COMP profile")
    sp.add_argument("--profile", choices=[x.value for x in Profile], default="strict")
    sp.add_argument("-o", "--output")
    sp.add_argument("files", nargs="+")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("normalize", help="rewrite benchmarks into CHC-COMP format")
    sp.add_argument("--out-dir", dest="out_dir", required=True)
    sp.add_argument("--merge-queries", "--merge_queries", dest="merge_queries", nargs="?",
                    const=True, default=False, type=_bool_flag)
    sp.add_argument("--root", help="mirror paths relative to this directory")
    sp.add_argument("-o", "--output")
    sp.add_argument("files", nargs="+")
    sp.set_defaults(func=cmd_normalize)

    sp = sub.add_parser("classify", help="assign competition tracks")
    sp.add_argument("-o", "--output")
    sp.add_argument("files", nargs="+")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("dedup", help="fingerprint a corpus and report duplicates")
    sp.add_argument("--scope", choices=["repository", "global"], default="repository")
    sp.add_argument("--repository", action="append", help="repository prefix (repeatable)")
    sp.add_argument("-o", "--output")
    sp.add_argument("root")
    sp.set_defaults(func=cmd_dedup)

    sp = common(sub.add_parser("rate", help="rate benchmarks A/B/C/D with two reference solvers"), solvers=True)
    sp.add_argument("--winner", required=True)
    sp.add_argument("--runner-up", dest="runner_up", required=True)
    sp.add_argument("--winner-timeout", type=float, default=5.0)
    sp.add_argument("--runner-up-timeout", type=float, default=10.0)
    sp.add_argument("-o", "--output")
    sp.add_argument("root")
    sp.set_defaults(func=cmd_rate)

    sp = common(sub.add_parser("select", help="select a suite from rated repositories"), seed=True)
    sp.add_argument("--plan", required=True, help="'<repository>[\\t<track>]\\t<N_r>' lines")
    sp.add_argument("--ratings", required=True, help="'<benchmark>\\t<rating>' lines")
    sp.add_argument("--root", required=True, help="corpus root the benchmark ids are relative to")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_select)

    sp = common(sub.add_parser("run", help="execute solvers on a suite manifest"), solvers=True)
    sp.add_argument("--manifest", required=True)
    sp.add_argument("--root")
    sp.add_argument("--out-dir", dest="out_dir")
    sp.add_argument("--profile", choices=["test", "competition"])
    sp.add_argument("--slots", type=int)
    sp.add_argument("--track-mode", dest="track_mode", choices=["seq", "par"], default="seq")
    sp.set_defaults(func=cmd_run)

    sp = common(sub.add_parser("ingest", help="normalize an external job-information CSV"), columns=True)
    sp.add_argument("--csv", required=True)
    sp.add_argument("--track")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_ingest)

    sp = common(sub.add_parser("score", help="standings and ranking for one track"), columns=True)
    sp.add_argument("--csv", required=True)
    sp.add_argument("--track", required=True)
    sp.add_argument("--hors-concours", dest="hors_concours", action="append", default=[])
    sp.add_argument("--tie-break", dest="tie_break", choices=["cpu", "wall"])
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_score)

    sp = common(sub.add_parser("report", help="render per-track tables and the summary"), columns=True)
    sp.add_argument("--run", required=True, help="run directory (with jobs.csv) or a jobs CSV")
    sp.add_argument("--hors-concours", dest="hors_concours", action="append", default=[])
    sp.add_argument("--report-dir", dest="report_dir")
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("serve", help="serve the harness over HTTP")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)
    sp.set_defaults(func=cmd_serve)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as e:  # --help
        return EXIT_OK if e.code in (0, None) else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, MissingColumnError, DanglingBenchmarkError, ValueError, json.JSONDecodeError) as e:
        print(f"horn-arena: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"horn-arena: I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
