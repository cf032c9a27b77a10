from fractions import Fraction

import pytest

from conftest import LIA_LIN_SAFE
from horn_arena.chcformat import (
    INT,
    REAL,
    LexicalError,
    NormalizationError,
    Profile,
    SortError,
    SyntaxErrorInScript,
    UnknownCommandError,
    Verdict,
    canonical_fingerprint,
    merge_queries,
    normalize,
    parse_script,
    print_script,
    validate_conformance,
)
from horn_arena.chcformat.ast import App, Atom, IntLit, RealLit, Var, fresh_name
from horn_arena.chcformat.printer import term_text
from horn_arena.chcformat.sexpr import DecimalLit, Numeral, SList, Symbol, fraction_text, read_all


# -- lexer -------------------------------------------------------------------


def test_read_all_positions_and_atoms():
    data = read_all('(assert |a b|)\n; comment\n(x 12 3.50 "s""q" :kw)')
    assert len(data) == 2
    first, second = data
    assert isinstance(first, SList) and first.head() == "assert"
    assert first.items[1] == Symbol("a b", quoted=True)
    assert second.pos.line == 3 and second.pos.col == 1
    assert second.items[1] == Numeral(12)
    assert second.items[2] == DecimalLit(Fraction(7, 2))
    assert second.items[3].value == 's"q'


@pytest.mark.parametrize("text", ["(a", "a)", "(a |b", '(a "b'])
def test_unbalanced_input_rejected(text):
    with pytest.raises((LexicalError, SyntaxErrorInScript)):
        read_all(text)


def test_hex_literal_is_lexical_error():
    with pytest.raises(LexicalError) as ei:
        parse_script("(set-logic HORN)\n(assert #x0F)")
    assert ei.value.line == 2


def test_fraction_text():
    assert fraction_text(Fraction(5, 2)) == "2.5"
    with pytest.raises(ValueError):
        fraction_text(Fraction(1, 3))
    assert term_text(RealLit(Fraction(-1, 3))) == "(- (/ 1.0 3.0))"
    assert term_text(RealLit(Fraction(-5, 4))) == "(- 1.25)"


# -- parser ------------------------------------------------------------------


def test_parse_flattens_clauses():
    s = parse_script(LIA_LIN_SAFE)
    assert [p.name for p in s.predicates] == ["inv"]
    init, step, query = s.clauses
    assert init.body_atoms == () and init.head == Atom("inv", (Var("x", INT),))
    assert [a.predicate for a in step.body_atoms] == ["inv"]
    assert query.is_query
    assert isinstance(query.constraint, App) and query.constraint.op == "<"


def test_big_integers_and_exact_decimals():
    s = parse_script(
        "(set-logic HORN)(declare-fun p (Int Real) Bool)"
        "(assert (forall ((x Int) (r Real)) (=> (and (= x 123456789012345678901234567890) (= r 0.1)) (p x r))))"
    )
    lits = [a for a in s.clauses[0].constraint.args for a in a.args if not isinstance(a, Var)]
    assert IntLit(123456789012345678901234567890) in lits
    assert RealLit(Fraction(1, 10)) in lits


def test_let_and_exists_are_eliminated():
    s = parse_script(
        "(set-logic HORN)(declare-fun p (Int) Bool)"
        "(assert (forall ((x Int)) (=> (and (p x) (exists ((y Int)) (let ((z (+ x y))) (= z 2)))) (p (+ x 1)))))"
    )
    (c,) = s.clauses
    assert len(c.bound_vars) == 2
    assert "let" not in print_script(s) and "exists" not in print_script(s)


def test_or_clause_and_negated_body():
    s = parse_script(
        "(set-logic HORN)(declare-fun p (Int) Bool)"
        "(assert (forall ((x Int)) (or (not (p x)) (> x 0) (p (+ x 1)))))"
        "(assert (forall ((x Int)) (not (and (p x) (< x 0)))))"
    )
    a, b = s.clauses
    assert a.head is not None and a.head.predicate == "p"
    assert b.is_query


def test_int_literal_promoted_in_real_context():
    s = parse_script(
        "(set-logic HORN)(declare-fun p (Real) Bool)(assert (forall ((r Real)) (=> (> r 1) (p r))))"
    )
    cmp = s.clauses[0].constraint
    assert cmp.args[1] == RealLit(Fraction(1))


def test_datatypes_both_syntaxes():
    new = parse_script("(set-logic HORN)(declare-datatypes ((L 0)) (((nil) (cons (hd Int) (tl L)))))"
                       "(declare-fun p (L) Bool)(assert (p nil))")
    old = parse_script("(set-logic HORN)(declare-datatypes () ((L (nil) (cons (hd Int) (tl L)))))"
                       "(declare-fun p (L) Bool)(assert (p nil))")
    assert [c.name for c in new.datatypes[0].constructors] == ["nil", "cons"]
    assert new.datatypes == old.datatypes


def test_sort_errors_name_the_rule():
    with pytest.raises(SortError) as ei:
        parse_script("(set-logic HORN)(declare-fun p (Int) Bool)(assert (forall ((b Bool)) (p b)))")
    assert ei.value.rule
    with pytest.raises(SortError) as ei:
        parse_script("(set-logic HORN)(assert (forall ((x Int)) (q x)))")
    assert ei.value.rule == "unknown-function"
    assert "q" in ei.value.message


def test_unknown_command():
    with pytest.raises(UnknownCommandError) as ei:
        parse_script("(set-logic HORN)\n(push 1)\n(check-sat)")
    assert ei.value.rule == "unknown-command"
    assert ei.value.location == "2:1"


def test_tolerated_commands_kept():
    s = parse_script("(set-logic HORN)(set-option :produce-models true)(check-sat)(get-model)")
    assert len(s.extra_commands) == 2


def test_non_horn_rejected():
    with pytest.raises(SyntaxErrorInScript):
        parse_script("(set-logic HORN)(declare-fun p (Int) Bool)"
                     "(assert (forall ((x Int)) (=> (p x) (or (p (+ x 1)) (p (+ x 2))))))")


def test_parse_bytes_and_bad_utf8():
    assert parse_script(LIA_LIN_SAFE.encode()) == parse_script(LIA_LIN_SAFE)
    with pytest.raises(LexicalError):
        parse_script(b"(set-logic HORN)\xff")


# -- printer -----------------------------------------------------------------


def test_round_trip_simple():
    s = parse_script(LIA_LIN_SAFE)
    text = print_script(s)
    assert parse_script(text) == s
    assert print_script(parse_script(text)) == text


def test_print_empty_script():
    assert print_script(parse_script("(set-logic HORN)(check-sat)")) == "(set-logic HORN)\n(check-sat)\n"


def test_quoted_symbols_round_trip():
    s = parse_script("(set-logic HORN)(declare-fun |my pred| (Int) Bool)(assert (forall ((|x y| Int)) (|my pred| |x y|)))")
    assert "|my pred|" in print_script(s)
    assert parse_script(print_script(s)) == s


# -- conformance ---------------------------------------------------------------


def test_conformant_benchmark():
    r = validate_conformance(parse_script(LIA_LIN_SAFE), Profile.STRICT)
    assert r.verdict is Verdict.CONFORMANT and r.violations == ()


def test_strict_rejects_what_lenient_repairs():
    text = ("(set-logic HORN)(declare-fun p (Int Int) Bool)"
            "(assert (forall ((x Int)) (p x x)))"
            "(assert (forall ((x Int)) (=> (p x 1) false)))(check-sat)")
    s = parse_script(text)
    strict = validate_conformance(s, Profile.STRICT)
    lenient = validate_conformance(s, Profile.LENIENT)
    assert strict.verdict is Verdict.REJECTED
    assert lenient.verdict is Verdict.REPAIRED
    rules = {v.rule for v in strict.violations}
    assert {"head-args-distinct", "body-args-variables"} <= rules


def test_missing_logic_and_command_order():
    s = parse_script("(declare-fun p (Int) Bool)(assert (forall ((x Int)) (p x)))(check-sat)")
    r = validate_conformance(s)
    assert "logic-horn" in {v.rule for v in r.violations}


def test_free_constant_is_not_repairable():
    s = parse_script("(set-logic HORN)(declare-fun c () Int)(declare-fun p (Int) Bool)(assert (p c))(check-sat)")
    r = validate_conformance(s, Profile.LENIENT)
    assert r.verdict is Verdict.REJECTED
    assert "universally-closed" in {v.rule for v in r.violations}
    with pytest.raises(NormalizationError) as ei:
        normalize(s)
    assert ei.value.rule == "free-constant"


def test_report_lines_format():
    s = parse_script("(set-logic HORN)(declare-fun p (Int) Bool)(assert (p 1))(check-sat)")
    (line,) = validate_conformance(s).lines("f.smt2")
    f, verdict, rule, loc, msg = line.split("\t")
    assert (f, verdict, rule, loc) == ("f.smt2", "rejected", "head-args-variables", "1:43")
    assert msg


# -- normalize -------------------------------------------------------------------


def test_normalize_produces_strict_form():
    text = ("(set-logic HORN)(set-option :x 1)(declare-fun p (Int Int) Bool)"
            "(assert (p 0 0))"
            "(assert (forall ((x Int)) (=> (p x (+ x 1)) (p (+ x 1) x))))"
            "(assert (forall ((x Int)) (=> (p x x) false)))(check-sat)")
    n = normalize(parse_script(text))
    assert validate_conformance(n).verdict is Verdict.CONFORMANT
    assert n.extra_commands == ()
    assert normalize(n) == n
    fresh = {name for c in n.clauses for name, _ in c.bound_vars}
    assert any("!" in name for name in fresh)


def test_merge_queries_single_query():
    text = ("(set-logic HORN)(declare-fun p (Int) Bool)(assert (forall ((x Int)) (=> (= x 0) (p x))))"
            "(assert (forall ((x Int)) (=> (and (p x) (< x 0)) false)))"
            "(assert (forall ((x Int)) (=> (and (p x) (> x 5)) false)))(check-sat)")
    m = merge_queries(normalize(parse_script(text)))
    assert len(m.queries) == 1
    assert m.predicate("chc_query") is not None
    assert m.queries[0].body_atoms[0].predicate == "chc_query"
    # nothing to merge with a single query
    single = normalize(parse_script(LIA_LIN_SAFE))
    assert merge_queries(single) == single


def test_merge_queries_avoids_name_clash():
    text = ("(set-logic HORN)(declare-fun chc_query (Int) Bool)(assert (forall ((x Int)) (chc_query x)))"
            "(assert (forall ((x Int)) (=> (and (chc_query x) (< x 0)) false)))"
            "(assert (forall ((x Int)) (=> (and (chc_query x) (> x 0)) false)))")
    m = merge_queries(parse_script(text))
    names = [p.name for p in m.predicates]
    assert len(names) == len(set(names)) == 2


def test_fresh_name():
    taken = {"x!0"}
    assert fresh_name("x", taken) == "x!1"
    assert "x!1" in taken


# -- fingerprint -----------------------------------------------------------------


def test_fingerprint_ignores_layout_comments_and_metadata():
    a = parse_script(LIA_LIN_SAFE)
    b = parse_script("; header\n(set-logic HORN)\n(set-info :status sat)\n" + LIA_LIN_SAFE.split("\n", 1)[1].replace(" ", "  "))
    assert canonical_fingerprint(a) == canonical_fingerprint(b)
    assert canonical_fingerprint(a).algorithm == "sha256"
    assert len(canonical_fingerprint(a).hexdigest) == 64


def test_fingerprint_sensitive_to_content():
    a = parse_script(LIA_LIN_SAFE)
    b = parse_script(LIA_LIN_SAFE.replace("(< x 0)", "(< x 1)"))
    assert canonical_fingerprint(a) != canonical_fingerprint(b)
