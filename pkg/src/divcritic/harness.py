"""A small explicit structural-induction prover and the critic retry loop.

Goals are simplified by normalization, constructor cancellation and one
fertilization step with the nearest induction hypothesis.  Whatever is left
is split by induction on the leftmost variable in a recursive argument
position.  Every inducted goal is recorded with its parent, which gives the
analyzer the parentage it needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .critic import CriticConfig, CriticReport, run_critic
from .divergence import TraceEquation
from .filters import DisproverConfig
from .rewrite import DEFAULT_FUEL, Equation, FuelExhausted, Normalizer, RewriteRule, RuleError, Theory
from .terms import (
    App,
    FreshNames,
    Term,
    Var,
    match,
    names_in,
    substitute,
    subterms,
    variables,
    weight,
)

CRITIC_ROUNDS = 3


@dataclass(frozen=True)
class ProverConfig:
    max_inductions: int = 6
    fuel: int = DEFAULT_FUEL
    window: int = 3
    disprove_depth: int = 3
    disprove_max: int = 500
    assume_lemmas: bool = False

    def __post_init__(self):
        if self.max_inductions < 1:
            raise ValueError("max_inductions must be at least 1")
        if self.window < 2:
            raise ValueError("window must be at least 2")

    @property
    def critic(self) -> CriticConfig:
        return CriticConfig(self.window, DisproverConfig(self.disprove_depth, self.disprove_max, self.fuel))


@dataclass(frozen=True)
class Hypothesis:
    equation: Equation
    fixed: Var  # the induction variable, which must map to itself


@dataclass
class Goal:
    lhs: Term
    rhs: Term
    hyps: tuple  # nearest first
    parent: str | None


@dataclass
class ProofOutcome:
    status: str  # proved | diverged | exhausted
    trace: list
    lemmas_used: list = field(default_factory=list)
    reason: str = ""


# --- simplification ---------------------------------------------------------------


def _cancel(lhs: Term, rhs: Term, theory: Theory):
    """Split equal outer constructors; None signals a constructor clash."""
    sig = theory.signature
    todo, out = [(lhs, rhs)], []
    while todo:
        a, b = todo.pop(0)
        if a == b:
            continue
        if (
            isinstance(a, App)
            and isinstance(b, App)
            and sig.is_constructor(a.fn)
            and sig.is_constructor(b.fn)
        ):
            if a.fn != b.fn:
                return None
            todo[:0] = list(zip(a.args, b.args))
            continue
        out.append((a, b))
    return out


def _fertilize(lhs: Term, rhs: Term, hyp: Hypothesis):
    eq = hyp.equation
    fixed = {hyp.fixed: hyp.fixed}
    for src, dst, check_weight in ((eq.lhs, eq.rhs, False), (eq.rhs, eq.lhs, True)):
        if isinstance(src, Var):
            continue
        for side in (0, 1):
            term = (lhs, rhs)[side]
            for pos, sub in subterms(term):
                sigma = match(src, sub, fixed)
                if sigma is None:
                    continue
                if not set(variables(dst)) <= set(sigma):
                    continue
                new = substitute(sigma, dst)
                if check_weight and weight(new) > weight(sub):
                    continue
                replaced = _put(term, pos, new)
                return (replaced, rhs) if side == 0 else (lhs, replaced)
    return None


def _put(t: Term, p: tuple, u: Term) -> Term:
    if not p:
        return u
    args = list(t.args)
    args[p[0] - 1] = _put(args[p[0] - 1], p[1:], u)
    return App(t.fn, tuple(args), t.sort)


def induction_variable(lhs: Term, rhs: Term, theory: Theory) -> Var | None:
    sig = theory.signature
    for t in (lhs, rhs):
        for _, sub in subterms(t):
            if isinstance(sub, App) and sig.has_symbol(sub.fn) and not sig.is_constructor(sub.fn):
                for i in sorted(sig.recursive_positions(sub.fn)):
                    a = sub.args[i - 1]
                    if isinstance(a, Var):
                        return a
    return None


def _cases(x: Var, goal: Goal, theory: Theory) -> list:
    sig = theory.signature
    out = []
    avoid = names_in(goal.lhs, goal.rhs)
    fresh = FreshNames(avoid, prefix=x.name.rstrip("0123456789") or "V")
    hyp = Hypothesis(Equation(goal.lhs, goal.rhs), x)
    for c in sig.constructors(x.sort):
        args = []
        reused = False
        for s in c.arg_sorts:
            if s == x.sort and not reused:
                args.append(x)
                reused = True
            else:
                args.append(fresh.var(s))
        value = App(c.name, tuple(args), x.sort)
        sigma = {x: value}
        hyps = ((hyp,) if reused else ()) + goal.hyps
        out.append((substitute(sigma, goal.lhs), substitute(sigma, goal.rhs), hyps))
    return out


def prove(conjecture: Equation, theory: Theory, cfg: ProverConfig | None = None) -> ProofOutcome:
    cfg = cfg or ProverConfig()
    nz = Normalizer(theory, cfg.fuel)
    trace: list = []
    stack = [Goal(conjecture.lhs, conjecture.rhs, (), None)]
    inductions = 0

    def norm(t: Term) -> Term:
        nz.refuel(cfg.fuel)
        return nz.normalize(t)

    while stack:
        goal = stack.pop(0)
        try:
            pairs = _cancel(norm(goal.lhs), norm(goal.rhs), theory)
        except FuelExhausted:
            return ProofOutcome("exhausted", trace, reason="rewrite fuel exhausted")
        if pairs is None:
            return ProofOutcome("diverged", trace, reason="constructor clash")
        subgoals = []
        for lhs, rhs in pairs:
            if goal.hyps:
                hit = _fertilize(lhs, rhs, goal.hyps[0])
                if hit is not None:
                    try:
                        again = _cancel(norm(hit[0]), norm(hit[1]), theory)
                    except FuelExhausted:
                        return ProofOutcome("exhausted", trace, reason="rewrite fuel exhausted")
                    if again is None:
                        return ProofOutcome("diverged", trace, reason="constructor clash")
                    subgoals.extend(again)
                    continue
            subgoals.append((lhs, rhs))
        new = []
        for lhs, rhs in subgoals:
            x = induction_variable(lhs, rhs, theory)
            if x is None:
                return ProofOutcome("diverged", trace, reason=f"stuck goal {Equation(lhs, rhs)}")
            if inductions >= cfg.max_inductions:
                return ProofOutcome("exhausted", trace, reason="induction budget used up")
            inductions += 1
            eid = f"e{len(trace) + 1}"
            trace.append(TraceEquation(eid, goal.parent, Equation(lhs, rhs)))
            here = Goal(lhs, rhs, goal.hyps, eid)
            for clhs, crhs, hyps in _cases(x, here, theory):
                new.append(Goal(clhs, crhs, hyps, eid))
        stack[:0] = new
    return ProofOutcome("proved", trace)


# --- critic loop ------------------------------------------------------------------


@dataclass
class RoundReport:
    outcome: ProofOutcome
    critic: CriticReport | None = None
    added: list = field(default_factory=list)


@dataclass
class LoopReport:
    conjecture: Equation
    status: str
    rounds: list = field(default_factory=list)
    lemmas: list = field(default_factory=list)  # equations added as rules

    @property
    def proved(self) -> bool:
        return self.status == "proved"

    @property
    def speculated(self) -> list:
        return [lem for r in self.rounds if r.critic for lem in r.critic.lemmas]

    def render(self) -> str:
        lines = [f"Conjecture: {self.conjecture}"]
        for k, r in enumerate(self.rounds, 1):
            lines.append(f"Round {k}: {r.outcome.status}" + (f" ({r.outcome.reason})" if r.outcome.reason else ""))
            if r.critic is not None:
                lines += ["  " + ln if ln else "" for ln in r.critic.render().rstrip("\n").split("\n")]
                for lem in r.critic.lemmas:
                    lines.append(f"  heuristic {lem.heuristic}: {lem}")
            for eq in r.added:
                lines.append(f"  added lemma {eq}")
        lines.append(f"Result: {self.status}")
        return "\n".join(lines) + "\n"


def _as_rule(eq: Equation, label: str) -> RewriteRule | None:
    for cand in (eq, eq.flipped()):
        try:
            return RewriteRule(cand.lhs, cand.rhs, (), label)
        except RuleError:
            continue
    return None


def critic_loop(conjecture: Equation, theory: Theory, cfg: ProverConfig | None = None, _depth: int = 0) -> LoopReport:
    """Prove; on failure ask the critic for lemmas, establish them, and retry."""
    cfg = cfg or ProverConfig()
    report = LoopReport(conjecture, "exhausted")
    current = theory
    for _ in range(CRITIC_ROUNDS):
        outcome = prove(conjecture, current, cfg)
        rnd = RoundReport(outcome)
        report.rounds.append(rnd)
        if outcome.status == "proved":
            report.status = "proved"
            return report
        rnd.critic = run_critic(outcome.trace, current, cfg.critic)
        extra = []
        for lem in rnd.critic.lemmas:
            eq = lem.erased
            rule = _as_rule(eq, f"lemma{len(report.lemmas) + len(extra) + 1}")
            if rule is None or any(r.lhs == rule.lhs and r.rhs == rule.rhs for r in current.rules):
                continue
            if not cfg.assume_lemmas:
                if _depth >= 2:
                    continue
                sub_cfg = ProverConfig(
                    max(1, cfg.max_inductions // 2), cfg.fuel, cfg.window, cfg.disprove_depth, cfg.disprove_max, False
                )
                sub = critic_loop(eq, current.with_rules(extra), sub_cfg, _depth + 1)
                if not sub.proved:
                    continue
                for sub_eq in sub.lemmas:
                    r = _as_rule(sub_eq, f"lemma{len(report.lemmas) + len(extra) + 1}")
                    if r is not None:
                        extra.append(r)
                        rnd.added.append(sub_eq)
                        report.lemmas.append(sub_eq)
            extra.append(rule)
            rnd.added.append(eq)
            report.lemmas.append(eq)
        if not extra:
            report.status = outcome.status
            return report
        current = current.with_rules(extra)
    final = prove(conjecture, current, cfg)
    report.rounds.append(RoundReport(final))
    report.status = final.status
    return report
