import pytest

import corpus
from horn_arena.curate import (
    CorpusEntry,
    DanglingBenchmarkError,
    RaterConfig,
    Rating,
    SelectionQuota,
    build_suite,
    rate_benchmark,
    read_manifest,
    read_rating_table,
    read_selection_plan,
    select_from_repository,
    selection_counts,
    write_manifest,
    write_rating_table,
)
from horn_arena.pipeline import dedup_files, expand_inputs, repository_of
from horn_arena.runner import Verdict
from tables import SELECTION_ROWS, rating_pools

S, U, K = Verdict.SAT, Verdict.UNSAT, Verdict.UNKNOWN


@pytest.mark.parametrize(
    "winner, runner_up, expected",
    [
        ((S, 1.0), (U, 2.0), Rating.A),
        ((S, 5.0), (S, 10.0), Rating.A),  # limits are inclusive
        ((S, 5.01), (S, 1.0), Rating.C),
        ((U, 0.1), (K, 0.1), Rating.B),
        ((K, 0.1), (S, 9.0), Rating.C),
        ((K, 0.1), (S, 10.5), Rating.D),
        ((K, 0.0), (K, 0.0), Rating.D),
    ],
)
def test_rate_benchmark(winner, runner_up, expected):
    assert rate_benchmark(winner, runner_up) is expected


def test_rater_config_rejects_nonpositive_timeouts():
    with pytest.raises(ValueError):
        RaterConfig(winner_timeout=0)


def test_quota_targets():
    q = SelectionQuota("r", 67)
    assert (q.a_target, q.b_target, q.c_target, q.d_target) == (13, 13, 13, 26)
    with pytest.raises(ValueError):
        SelectionQuota("r", -1)


def test_shortfall_of_a_split_between_b_and_c():
    # A short by 5: B gets 3 extra, C gets 2
    counts = selection_counts({Rating.A: 1, Rating.B: 100, Rating.C: 100, Rating.D: 100}, SelectionQuota("r", 30))
    assert counts == {Rating.A: 1, Rating.B: 9, Rating.C: 8, Rating.D: 12}


def test_shortfall_of_b_and_c_goes_to_d():
    counts = selection_counts({Rating.A: 100, Rating.B: 0, Rating.C: 1, Rating.D: 100}, SelectionQuota("r", 50))
    assert counts == {Rating.A: 10, Rating.B: 0, Rating.C: 1, Rating.D: 39}


def test_no_backfill_into_a():
    counts = selection_counts({Rating.A: 100, Rating.B: 0, Rating.C: 0, Rating.D: 0}, SelectionQuota("r", 50))
    assert counts[Rating.A] == 10


def test_zero_cap():
    assert sum(selection_counts({r: 10 for r in Rating}, SelectionQuota("r", 0)).values()) == 0


@pytest.mark.parametrize("key", sorted(SELECTION_ROWS))
def test_table_rows_any_seed(key):
    _, cap, expected = SELECTION_ROWS[key]
    pools = rating_pools(*key)
    for seed in (0, 1, 2022, -7):
        assert len(select_from_repository(pools, SelectionQuota(key[0], cap), seed)) == expected


def test_seed_changes_members_not_counts():
    pools = rating_pools("kind2", "LIA-nonlin")
    q = SelectionQuota("kind2", 90)
    a = select_from_repository(pools, q, 1)
    b = select_from_repository(pools, q, 2)
    assert len(a) == len(b) and set(a) != set(b)
    # input order does not matter
    shuffled = {r: list(reversed(v)) for r, v in pools.items()}
    assert select_from_repository(shuffled, q, 1) == a


def _entry(repo, bench, digest, rating=Rating.A):
    return CorpusEntry(repo, bench, "LIA-lin", rating, digest)


def test_build_suite_merges_cross_repository_duplicates():
    corpus_meta = {
        ("r1", "r1/a.smt2"): _entry("r1", "r1/a.smt2", "d1"),
        ("r1", "r1/b.smt2"): _entry("r1", "r1/b.smt2", "d2"),
        ("r2", "r2/x.smt2"): _entry("r2", "r2/x.smt2", "d1"),
    }
    m = build_suite({"r2": ["r2/x.smt2"], "r1": ["r1/b.smt2", "r1/a.smt2"]}, corpus_meta, 5)
    assert [e.benchmark for e in m.entries] == ["r1/a.smt2", "r1/b.smt2"]
    assert m.entries[0].also_in == (("r2", "r2/x.smt2"),)
    assert m.totals == (("r1", 2),)
    assert len(m.duplicates) == 1


def test_build_suite_dangling():
    with pytest.raises(DanglingBenchmarkError) as ei:
        build_suite({"r1": ["missing.smt2"]}, {}, 0)
    assert ei.value.benchmark == "missing.smt2"


def test_manifest_round_trip():
    corpus_meta = {
        ("r1", "r1/a.smt2"): _entry("r1", "r1/a.smt2", "d1"),
        ("r2", "r2/x.smt2"): _entry("r2", "r2/x.smt2", "d1"),
        ("r2", "r2/y.smt2"): _entry("r2", "r2/y.smt2", "d3", Rating.D),
    }
    m = build_suite({"r1": ["r1/a.smt2"], "r2": ["r2/x.smt2", "r2/y.smt2"]}, corpus_meta, 42)
    text = write_manifest(m)
    assert text.startswith("# seed\t42\n")
    assert read_manifest(text) == m
    assert write_manifest(read_manifest(text)) == text


def test_manifest_requires_seed():
    with pytest.raises(ValueError):
        read_manifest("repository\tid\ttrack\trating\tdigest\n")


def test_plan_and_rating_files():
    plan = read_selection_plan("# comment\nhopv\t30\nhcai\tLIA-nonlin\t60\n")
    assert [(p.repository, p.cap, p.track) for p in plan] == [("hopv", 30, None), ("hcai", 60, "LIA-nonlin")]
    with pytest.raises(ValueError):
        read_selection_plan("hopv\tthirty\n")
    with pytest.raises(ValueError):
        read_selection_plan("hopv\t-1\n")
    ratings = {"a.smt2": Rating.B, "b.smt2": Rating.D}
    assert read_rating_table(write_rating_table(ratings)) == ratings
    with pytest.raises(ValueError):
        read_rating_table("a.smt2\tE\n")


def test_repository_of():
    assert repository_of("synth/semgus/x.smt2", ["synth/semgus", "synth"]) == "synth/semgus"
    assert repository_of("hopv/x.smt2") == "hopv"
    assert repository_of("x.smt2") == "."


def test_dedup_228_files(tmp_path):
    gen = corpus.corpus(seed=7, per_shape=29)[:226]
    # the generator repeats itself; a distinct extra query makes every file unique
    texts = [
        g.text.replace("(check-sat)", f"(assert (forall ((u Int)) (=> (= u {i}) false)))\n(check-sat)")
        for i, g in enumerate(gen)
    ]
    for i, text in enumerate(texts):
        repo = "repoA" if i % 2 else "repoB"
        (tmp_path / repo).mkdir(exist_ok=True)
        (tmp_path / repo / f"f{i:03d}.smt2").write_text(text)
    # a layout-only copy and a comment-only copy
    (tmp_path / "repoA" / "x_ws_copy.smt2").write_text(texts[1].replace(" ", "   ").replace("\n", "\n\n"))
    (tmp_path / "repoA" / "x_comment_copy.smt2").write_text("; copied\n" + texts[3] + "; end\n")
    files = expand_inputs([tmp_path])
    assert len(files) == 228
    result = dedup_files(files, tmp_path)
    assert len(result.unique_digests()) == 226
    dups = {r.file: r.duplicate_of for r in result.rows if r.duplicate_of}
    assert dups == {"repoA/x_comment_copy.smt2": "repoA/f003.smt2", "repoA/x_ws_copy.smt2": "repoA/f001.smt2"}
    assert result.totals["repoA"] == (115, 113)
