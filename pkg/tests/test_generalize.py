from conftest import ann, eq, term, theory
from divcritic.annotation import AnnotatedEquation
from divcritic.filters import disprove
from divcritic.generalize import candidate_terms, generalize, is_instance, merge_lemmas, primary_terms
from divcritic.speculate import SpeculatedLemma


def lemma(lhs, rhs, th, heuristic="cancellation"):
    return SpeculatedLemma(AnnotatedEquation(ann(lhs, th), ann(rhs, th)), heuristic)


def test_primary_terms_follow_recursive_positions(lists):
    got = [str(t) for t in primary_terms(term("plus(s(0), len(B))", lists), lists.signature)]
    assert got == ["plus(s(0), len(B))", "len(B)", "B"]
    got = [str(t) for t in primary_terms(term("s(plus(0, len(B)))", lists), lists.signature)]
    assert got == ["s(plus(0, len(B)))", "plus(0, len(B))", "len(B)", "B"]
    x = term("len(B)", lists).args[0]
    assert primary_terms(x, lists.signature) == [x]


def test_candidates_exclude_fronts(lists):
    lem = lemma("plus({s(<0>)}, len(B))", "{s(<plus(0, len(B))>)}", lists)
    assert [str(t) for t in candidate_terms(lem, lists.signature)] == ["len(B)", "0", "B"]


def test_generalization_progression(lists):
    lem = lemma("plus({s(<0>)}, len(B))", "{s(<plus(0, len(B))>)}", lists)
    out = generalize(lem, lists)
    assert str(out.equation) == "plus({s(<V2>)}, V1) = {s(<plus(V2, V1)>)}"
    assert [str(t) for t in out.generalized] == ["len(B)", "0"]
    assert is_instance(out.erased, lem.erased)


def test_zero_generalizes_to_variable(nat):
    lem = lemma("plus({s(<0>)}, Y)", "{s(<plus(0, Y)>)}", nat)
    assert str(generalize(lem, nat)) == "plus(s(V1), Y) = s(plus(V1, Y))"


def test_overgeneralization_is_refused():
    th = theory("row16")
    lem = lemma("len({app(<A>, cons(A1, nil))})", "{s(<len(A)>)}", th)
    out = generalize(lem, th)
    # replacing cons(A1, nil) by a variable would be false
    assert "cons" in str(out)
    assert disprove(out.erased, th) is None


def test_sorted_lemmas_merge():
    th = theory("row30")
    ls = [
        SpeculatedLemma(AnnotatedEquation(ann("sorted({insert(0, <X>)})", th), term("sorted(X)", th)), "petering-out"),
        SpeculatedLemma(AnnotatedEquation(ann("sorted({insert(s(Y), <X>)})", th), term("sorted(X)", th)), "petering-out"),
    ]
    (merged,) = merge_lemmas(ls, th.signature)
    assert str(merged.equation) == "sorted({insert(V1, <X>)}) = sorted(X)"
    assert all(is_instance(merged.erased, l.erased) for l in ls)


def test_plus_lemmas_do_not_merge(nat):
    ls = [
        lemma("plus({s(<X>)}, Y)", "{s(<plus(X, Y)>)}", nat),
        lemma("plus({s(<X>)}, Y)", "plus(X, {s(<Y>)})", nat, "fertilization"),
    ]
    assert merge_lemmas(ls, nat.signature) == ls
    assert merge_lemmas(ls[:1], nat.signature) == ls[:1]


def test_partial_cover_does_not_merge():
    th = theory("row30")
    only_zero = SpeculatedLemma(AnnotatedEquation(ann("sorted({insert(0, <X>)})", th), term("sorted(X)", th)), "petering-out")
    assert merge_lemmas([only_zero], th.signature) == [only_zero]


def test_is_instance(nat):
    assert is_instance(eq("plus(s(X), Y) = s(plus(X, Y))", nat), eq("plus(s(0), Y) = s(plus(0, Y))", nat))
    assert not is_instance(eq("plus(s(0), Y) = s(plus(0, Y))", nat), eq("plus(s(X), Y) = s(plus(X, Y))", nat))
