import pytest

from conftest import ann, eq, interleaved, theory, trace
from divcritic.critic import run_critic
from divcritic.annotation import AnnotatedEquation, is_wave_rule, skeleton
from divcritic.divergence import EquationSequence, TraceEquation, detect_patterns, partition_trace
from divcritic.filters import disprove
from divcritic.speculate import (
    SpeculatedLemma,
    check_lemma,
    speculate_all,
    speculate_transverse,
    speculate_upward,
    strip_equal_context,
    variable_variants,
)
from divcritic.terms import variant_equal


def patterns(name, th):
    return [p for s in partition_trace(trace(name, th)) for p in detect_patterns(s)]


def texts(lemmas, heuristic=None):
    return [str(l.equation) for l in lemmas if heuristic is None or l.heuristic == heuristic]


def test_dbl_cancellation(nat):
    ps = patterns("dbl_session", nat)
    got = texts(speculate_upward(ps[0], ps), "cancellation")
    assert "plus({s(<X1>)}, X1) = {s(<plus(X1, X1)>)}" in got
    assert "plus({s(<X1>)}, V1) = {s(<plus(X1, V1)>)}" in got


def test_dbl_fertilization(nat):
    ps = patterns("dbl_session", nat)
    got = texts(speculate_transverse(ps[0], nat, ps), "fertilization")
    assert "plus({s(<X1>)}, X1) = plus(X1, {s(<X1>)})" in got


def test_surviving_dbl_lemmas_match_the_recorded_list(nat):
    """After refutation, exactly the eight s(x)+x variants remain."""
    ps = patterns("dbl_session", nat)
    kept = [str(l) for l in speculate_all(ps, nat) if disprove(l.erased, nat) is None]
    assert kept == [
        "plus(s(X1), X1) = s(plus(X1, X1))",
        "plus(s(X1), V1) = s(plus(X1, V1))",
        "plus(s(V1), X1) = s(plus(V1, X1))",
        "plus(s(V1), V2) = s(plus(V1, V2))",
        "plus(s(X1), X1) = plus(X1, s(X1))",
        "plus(s(X1), V1) = plus(X1, s(V1))",
        "plus(s(V1), X1) = plus(V1, s(X1))",
        "plus(s(V1), V2) = plus(V1, s(V2))",
    ]


def test_sorted_petering_out():
    th = theory("row30")
    ps = patterns("row30", th)
    got = texts(speculate_all(ps, th), "petering-out")
    assert "sorted({insert(A1, <isort(V1)>)}) = sorted(isort(V1))" in got
    for lem in speculate_all(ps, th):
        assert lem.equation.rhs == skeleton(lem.equation.rhs)
        assert variant_equal(skeleton(lem.equation.lhs), lem.equation.rhs)


def test_nth_petering_out_keeps_both_fronts():
    th = theory("row27")
    ps = patterns("row27", th)
    got = texts(speculate_upward(ps[0], ps), "petering-out")
    assert "nth({s(<s(I)>)}, nth(J, {cons(Y, <X>)})) = nth(s(I), nth(J, X))" in got


def test_qrev_fertilization():
    th = theory("row22")
    ps = patterns("row22", th)
    got = [str(l) for p in ps for l in speculate_transverse(p, th, ps) if l.heuristic == "fertilization"]
    assert "app(app(rev(A), cons(C, nil)), B) = app(rev(A), cons(C, B))" in got


def test_plus_simplification():
    th = theory("row04")
    ps = patterns("row04", th)
    got = texts(speculate_transverse(ps[0], th, ps), "simplification")
    assert "plus({s(<0>)}, len(B)) = plus(0, {s(<len(B)>)})" in got


def test_unary_front_has_no_transverse_lemma(nat):
    seq = EquationSequence(
        tuple(
            TraceEquation(f"e{i}", None, eq(text, nat))
            for i, text in enumerate(["dbl(X) = X", "dbl(s(X)) = X", "dbl(s(s(X))) = X"])
        )
    )
    (p,) = detect_patterns(seq)
    assert speculate_transverse(p, nat, [p]) == []
    assert speculate_upward(p, [p])


def test_mutual_patterns_give_both_lemmas(mutual):
    report = run_critic(interleaved(mutual), mutual)
    got = [str(l) for l in report.lemmas]
    assert "even_m(plus(s(s(X)), V1)) = even_m(plus(X, V1))" in got
    assert "odd_m(plus(s(s(V1)), X)) = odd_m(plus(V1, X))" in got


def test_empty_pattern_list(nat):
    assert speculate_all([], nat) == []


@pytest.mark.parametrize("name", ["dbl_session", "row04", "row22", "row27", "row30"])
def test_every_lemma_is_a_wave_rule(name):
    th = theory("row02" if name == "dbl_session" else name)
    for lem in speculate_all(patterns(name, th), th):
        assert is_wave_rule(lem.equation), str(lem.equation)
        # only simplification may leave a rhs variable unbound; the disprover rejects those
        assert check_lemma(lem) or lem.heuristic == "simplification"


def strip(lhs, rhs, th):
    return strip_equal_context(SpeculatedLemma(AnnotatedEquation(ann(lhs, th), ann(rhs, th)), "fertilization"))


def test_strip_removes_shared_outer_context(nat):
    got = strip("plus(plus({s(<X>)}, Y), X)", "plus(plus(X, {s(<Y>)}), X)", nat)
    assert str(got.equation) == "plus({s(<X>)}, Y) = plus(X, {s(<Y>)})"
    assert [str(c) for c in got.stripped] == ["plus(□, X)"]
    assert is_wave_rule(got.equation)
    assert strip_equal_context(got) == got


def test_strip_leaves_differing_functors(nat):
    lem = strip("plus({s(<X>)}, Y)", "{s(<plus(X, Y)>)}", nat)
    assert str(lem.equation) == "plus({s(<X>)}, Y) = {s(<plus(X, Y)>)}" and lem.stripped == ()


def test_strip_equal_sides_to_tautology(nat):
    lem = strip("s(s(0))", "s(s(0))", nat)
    assert str(lem.equation) == "0 = 0" and len(lem.stripped) == 2


def test_variable_variants(nat):
    a = ann("plus({s(<X>)}, Y)", nat)
    vs = variable_variants(a, {"X", "Y"})
    assert len(vs) == 4 and vs[0] == a
    assert len({str(v) for v in vs}) == 4
