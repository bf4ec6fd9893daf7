import pytest

from cctab import (
    Mode,
    PredId,
    RangeRestrictionError,
    ResourceLimitError,
    bottom_up_eval,
    compare_answer_sets,
    gen_fixture,
    parse_program,
    parse_query,
    parse_term,
    print_term,
)
from cctab.oracle import oracle_answers_for

from conftest import make_engine, read_fixture


def names(facts, pred):
    return sorted(print_term(t) for t in facts.get(pred, ()))


def test_mixed_loop_fixpoint(mixed_loop_src):
    facts = bottom_up_eval(parse_program(mixed_loop_src))
    assert names(facts, PredId("t", 1)) == ["t(0)", "t(1)"]
    assert names(facts, PredId("p", 1)) == ["p(0)"]


def test_two_cycle_fixpoint():
    facts = bottom_up_eval(parse_program(gen_fixture("cycle", 1)))
    assert names(facts, PredId("path", 2)) == [
        "path(1, 1)",
        "path(1, 2)",
        "path(2, 1)",
        "path(2, 2)",
    ]


def test_empty_program():
    assert bottom_up_eval(parse_program("")) == {}


def test_monotone_and_idempotent():
    src = gen_fixture("chain", 3)
    p = parse_program(src)
    sizes = []

    # re-run with increasing caps; the naive store only ever grows
    for cap in (1, 2, 3, 50):
        try:
            facts = bottom_up_eval(p, cap=cap)
        except ResourceLimitError:
            continue
        sizes.append(sum(len(s) for s in facts.values()))
    assert sizes == sorted(sizes)
    full = bottom_up_eval(p)
    again = bottom_up_eval(p, cap=100)
    assert full == again  # one extra round adds nothing


def test_non_range_restricted_clause_named():
    with pytest.raises(RangeRestrictionError, match=r"free\(X\)"):
        bottom_up_eval(parse_program("free(X) :- q(Y).\nq(1).\n"))


def test_unbound_arithmetic_rejected():
    with pytest.raises(RangeRestrictionError):
        bottom_up_eval(parse_program("bad(X) :- X is Y + 1.\n"))


def test_iteration_cap():
    # a counter that grows forever is not bounded-term-size
    src = "n(0).\nn(X) :- n(Y), X is Y + 1.\n"
    with pytest.raises(ResourceLimitError, match="cap"):
        bottom_up_eval(parse_program(src), cap=50)


def test_builtins_in_bodies():
    src = """val(1).
val(4).
ok(X) :- val(X), X < 3.
eq(X) :- val(X), X =:= 4.
diff(X) :- val(X), X \\= 1.
double(Y) :- val(X), Y is X * 2.
"""
    facts = bottom_up_eval(parse_program(src))
    assert names(facts, PredId("ok", 1)) == ["ok(1)"]
    assert names(facts, PredId("eq", 1)) == ["eq(4)"]
    assert names(facts, PredId("diff", 1)) == ["diff(4)"]
    assert names(facts, PredId("double", 1)) == ["double(2)", "double(8)"]


def test_oracle_answers_for_variant_filter():
    facts = bottom_up_eval(parse_program(gen_fixture("chain", 3)))
    subset = oracle_answers_for(facts, parse_term("path(2, X)"))
    assert sorted(print_term(t) for t in subset) == ["path(2, 3)", "path(2, 4)"]
    shared = oracle_answers_for(facts, parse_term("path(X, X)"))
    assert shared == set()


# -- engine comparison --------------------------------------------------------------


def test_general_mode_agrees_with_oracle(mixed_loop_src):
    eng = make_engine(mixed_loop_src)
    list(eng.solve(parse_query("t(A)")))
    facts = bottom_up_eval(parse_program(mixed_loop_src))
    equal, missing, extra = compare_answer_sets(eng, facts, PredId("t", 1))
    assert equal and not missing and not extra


def test_legacy_mode_mismatch_reports_missing(mixed_loop_src):
    eng = make_engine(mixed_loop_src, Mode.LEGACY)
    list(eng.solve(parse_query("t(A)")))
    facts = bottom_up_eval(parse_program(mixed_loop_src))
    equal, missing, extra = compare_answer_sets(eng, facts, PredId("t", 1))
    assert not equal
    assert [print_term(t) for t in missing] == ["t(1)"]
    assert extra == []


def test_random_graph_transitive_closure_agrees():
    import random

    rng = random.Random(97)
    edges = [(i, j) for i in range(1, 9) for j in range(1, 9) if rng.random() < 0.3]
    src = read_fixture("reach.pl") + "".join(f"edge({a}, {b}).\n" for a, b in edges)
    eng = make_engine(src)
    q = parse_query("path(X, Y)")[0]
    list(eng.solve(q))
    facts = bottom_up_eval(parse_program(src))
    equal, missing, extra = compare_answer_sets(eng, facts, PredId("path", 2), call=q)
    assert equal, (missing, extra)


def test_grid_fixture_agrees_with_oracle():
    src = gen_fixture("grid", 3)
    eng = make_engine(src)
    q = parse_query("path(X, Y)")[0]
    count = sum(1 for _ in eng.solve(q))
    facts = bottom_up_eval(parse_program(src))
    equal, missing, extra = compare_answer_sets(eng, facts, PredId("path", 2), call=q)
    assert equal, (missing, extra)
    assert count == len(facts[PredId("path", 2)]) > 0


def test_compare_requires_completed_entry(mixed_loop_src):
    eng = make_engine(mixed_loop_src)
    facts = bottom_up_eval(parse_program(mixed_loop_src))
    with pytest.raises(RangeRestrictionError):
        compare_answer_sets(eng, facts, PredId("t", 1), call=parse_term("t(X)"))
