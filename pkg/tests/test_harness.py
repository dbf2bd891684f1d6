import pytest

from conftest import eq, theory, theory_file
from divcritic.critic import run_critic
from divcritic.harness import CRITIC_ROUNDS, ProverConfig, critic_loop, induction_variable, prove
from divcritic.rewrite import RewriteRule
from divcritic.terms import Var


@pytest.fixture(scope="module")
def dbl():
    tf = theory_file("row02")
    return tf.theory, tf.conjectures[0]


def test_dbl_diverges_from_definitions(dbl):
    th, conj = dbl
    out = prove(conj, th)
    assert out.status == "exhausted"
    assert len(out.trace) == ProverConfig().max_inductions
    assert [te.parent for te in out.trace[:3]] == [None, "e1", "e2"]
    assert str(out.trace[1].equation) == "s(plus(N, N)) = plus(s(N), N)"
    assert str(out.trace[2].equation) == "s(s(plus(N, N))) = plus(s(s(N)), N)"


def test_trace_feeds_the_critic(dbl):
    th, conj = dbl
    report = run_critic(prove(conj, th).trace, th)
    # the harness buries the opposite successor below plus, so only the transverse rule appears
    assert [str(l) for l in report.lemmas] == ["plus(s(N), V1) = plus(N, s(V1))"]
    assert report.lemmas[0].heuristic == "fertilization"


def test_lemma_closes_the_proof(dbl):
    th, conj = dbl
    lemma = eq("plus(s(X), Y) = s(plus(X, Y))", th)
    assert prove(conj, th.with_rules([RewriteRule(lemma.lhs, lemma.rhs)])).status == "proved"


def test_induction_variable(dbl, lists):
    th, conj = dbl
    assert induction_variable(conj.lhs, conj.rhs, th) == Var("N", "nat")
    e = eq("len(app(A, B)) = plus(len(A), len(B))", lists)
    assert induction_variable(e.lhs, e.rhs, lists) == Var("A", "list")
    e = eq("s(X) = s(X)", lists)
    assert induction_variable(e.lhs, e.rhs, lists) is None


def test_constructor_clash_is_divergence(nat):
    out = prove(eq("s(X) = 0", nat), nat)
    assert out.status == "diverged" and "clash" in out.reason


def test_trivial_goal_proves_without_induction(nat):
    out = prove(eq("plus(X, 0) = X", nat), nat)
    assert out.status == "proved" and out.trace == []


def test_config_validation():
    with pytest.raises(ValueError):
        ProverConfig(max_inductions=0)
    with pytest.raises(ValueError):
        ProverConfig(window=1)


def test_critic_loop_proves_dbl(dbl):
    th, conj = dbl
    rep = critic_loop(conj, th)
    assert rep.proved
    assert "plus(s(N), V1) = plus(N, s(V1))" in [str(e) for e in rep.lemmas]
    assert len(rep.rounds) <= CRITIC_ROUNDS + 1
    text = rep.render()
    assert text.startswith("Conjecture: dbl(N) = plus(N, N)") and text.endswith("Result: proved\n")


def test_critic_loop_reports_failure():
    th = theory("row13")
    rep = critic_loop(theory_file("row13").conjectures[0], th)
    assert not rep.proved
    assert any("rot" in str(l) for l in rep.speculated)


def test_assumed_lemmas_skip_subproofs(dbl):
    th, conj = dbl
    rep = critic_loop(conj, th, ProverConfig(assume_lemmas=True))
    assert rep.proved and rep.lemmas
