"""Lemma speculation from divergence patterns.

Upward lemmas move the accumulating fronts to the top of the term, where
they either cancel against structure seen on the other side (cancellation)
or vanish (petering out).  Transverse lemmas move a front onto a sibling
argument, where a sink or a defining rule can absorb it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .annotation import (
    AnnotatedEquation,
    erase,
    front_groups,
    is_front,
    is_wave_rule,
    locate,
    skeleton,
    strip_group,
    subterm_at,
    wrap,
)
from .diffmatch import maximal_match
from .divergence import DivergencePattern, SidePattern
from .rewrite import Theory
from .terms import (
    HOLE,
    App,
    Context,
    FreshNames,
    Term,
    Var,
    match,
    names_in,
    replace_at,
    substitute,
    variables,
)

UPWARD = ("cancellation", "petering-out")
TRANSVERSE = ("fertilization", "simplification")
MAX_FULL_VARIANTS = 4


@dataclass(frozen=True)
class SpeculatedLemma:
    equation: AnnotatedEquation
    heuristic: str
    provenance: DivergencePattern | None = None
    stripped: tuple = ()  # contexts removed by the equality heuristic
    generalized: tuple = ()  # terms replaced by fresh variables

    @property
    def erased(self):
        return self.equation.erased

    def __str__(self) -> str:
        return str(self.erased)


# --- helpers ----------------------------------------------------------------------


def _skeleton_var_positions(a: Term) -> list:
    """Annotated positions of variables in the skeleton part of ``a``."""
    out = []

    def walk(t: Term, pos: tuple) -> None:
        if isinstance(t, Var):
            out.append(pos)
            return
        if t.hole is not None:
            walk(t.args[t.hole - 1], (*pos, t.hole))
            return
        for i, x in enumerate(t.args, 1):
            walk(x, (*pos, i))

    walk(a, ())
    return out


def variable_variants(a: Term, avoid: set) -> list:
    """Copies of ``a`` with each skeleton variable occurrence kept or made fresh.

    All combinations when there are few occurrences, otherwise only the two
    extremes.  The first entry is always ``a`` itself.
    """
    positions = _skeleton_var_positions(a)
    n = len(positions)
    if n <= MAX_FULL_VARIANTS:
        choices = list(itertools.product((False, True), repeat=n))
    else:
        choices = [(False,) * n, (True,) * n]
    out = []
    for choice in choices:
        fresh = FreshNames(avoid | names_in(a))
        t = a
        for pos, make_fresh in zip(positions, choice):
            if make_fresh:
                v = subterm_at(t, pos)
                t = _put(t, pos, fresh.var(v.sort))
        out.append(t)
    return out


def _put(t: Term, p: tuple, u: Term) -> Term:
    if not p:
        return u
    args = list(t.args)
    args[p[0] - 1] = _put(args[p[0] - 1], p[1:], u)
    return App(t.fn, tuple(args), t.sort, t.hole)


def _rename_fresh(ctx: Context, avoid: set) -> Context:
    fresh = FreshNames(avoid)
    sigma = {v: fresh.var(v.sort) for v in ctx.variables()}
    return Context(substitute(sigma, ctx.term), ctx.hole_sort)


def _keep(lemma: AnnotatedEquation) -> bool:
    lhs, rhs = erase(lemma.lhs), erase(lemma.rhs)
    return not isinstance(lhs, Var) and lhs != rhs


def _match_for(seq, sp: SidePattern, d: int):
    if d == 1:
        return sp.matches[0]
    m = maximal_match(seq[sp.start + d].side(sp.side), seq[sp.start].side(sp.side))
    if m is None:
        return None
    if [g.skeleton_position for g in front_groups(m.annotated)] != sp.positions:
        return None
    return m


def _opposite(p: DivergencePattern, side: str) -> SidePattern | None:
    return p.side("rhs" if side == "lhs" else "lhs")


def _cancellation_contexts(p: DivergencePattern, sp: SidePattern, patterns: list, sort: str, avoid: set) -> list:
    # only fronts at the top of a side can cancel against a front moved to the top
    def usable(g) -> bool:
        return g.skeleton_position == () and g.context.hole_sort == sort and g.context.result_sort == sort

    opp = _opposite(p, sp.side)
    found = [g.context for g in opp.groups if usable(g)] if opp is not None else []
    if found:
        return found
    for other in patterns:
        if other.sequence == p.sequence:
            continue
        for osp in other.sides:
            found.extend(_rename_fresh(g.context, avoid) for g in osp.groups if usable(g))
    return found


def _dedup(items: list) -> list:
    seen = set()
    out = []
    for x in items:
        key = (x.equation.lhs, x.equation.rhs)
        if key not in seen:
            seen.add(key)
            out.append(x)
    return out


# --- upward -----------------------------------------------------------------------


def speculate_upward(p: DivergencePattern, patterns: list = ()) -> list:
    """Lemmas G(H(U)) = F(G(U)) for every side of ``p`` and every distance in its window."""
    out = []
    seq = p.sequence
    for sp in p.sides:
        for d in range(1, sp.stop - sp.start):
            m = _match_for(seq, sp, d)
            if m is None:
                continue
            groups = front_groups(m.annotated)
            if any(g.skeleton_position == () for g in groups):
                continue  # G is the identity: nothing to move upward
            ann = m.annotated
            sort = ann.sort
            avoid = names_in(*(te.equation.lhs for te in seq.members), *(te.equation.rhs for te in seq.members))
            for ctx in _cancellation_contexts(p, sp, list(patterns), sort, avoid):
                for v in variable_variants(ann, avoid | names_in(ctx.term)):
                    out.append(SpeculatedLemma(AnnotatedEquation(v, wrap(ctx, skeleton(v))), "cancellation", p))
            for v in variable_variants(ann, avoid):
                out.append(SpeculatedLemma(AnnotatedEquation(v, skeleton(v)), "petering-out", p))
    return [lem for lem in _dedup(out) if _keep(lem.equation)]


# --- transverse -------------------------------------------------------------------


def _sink_contexts(patterns: list) -> list:
    out = []
    for q in patterns:
        for sp in q.sides:
            first = q.sequence[sp.start].side(sp.side)
            for g in sp.groups:
                if isinstance(subterm_at(first, g.skeleton_position), Var):
                    if all(not (c.term == g.context.term) for c in out):
                        out.append(g.context)
    return out


def _simplification_contexts(theory: Theory, fn: str, j: int, sort: str, avoid: set) -> list:
    out = []
    for rule in theory.rules:
        if rule.lhs.fn != fn:
            continue
        arg = rule.lhs.args[j - 1]
        if isinstance(arg, Var) or arg.sort != sort:
            continue
        for pos, v in _var_positions(arg):
            if v.sort != sort:
                continue
            body = replace_at(arg, pos, Var(HOLE, sort))
            ctx = _rename_fresh(Context(body, sort), avoid)
            if all(c.term != ctx.term for c, _ in out):
                out.append((ctx, rule))
    return out


def _var_positions(t: Term) -> list:
    out = []

    def walk(u: Term, pos: tuple) -> None:
        if isinstance(u, Var):
            out.append((pos, u))
            return
        for i, x in enumerate(u.args, 1):
            walk(x, (*pos, i))

    walk(t, ())
    return out


def _move(v: Term, spos: tuple, j: int, ctx: Context) -> Term:
    """Remove the group at ``spos`` and wrap sibling ``j`` in ``ctx``."""
    stripped = strip_group(v, spos)
    target = locate(stripped, (*spos[:-1], j))
    return _put(stripped, target, wrap(ctx, subterm_at(stripped, target)))


def speculate_transverse(p: DivergencePattern, theory: Theory, patterns: list = ()) -> list:
    out = []
    seq = p.sequence
    sinks = _sink_contexts(list(patterns) or [p])
    avoid = names_in(*(te.equation.lhs for te in seq.members), *(te.equation.rhs for te in seq.members))
    for sp in p.sides:
        ann = sp.matches[0].annotated
        skel = skeleton(ann)
        for g in front_groups(ann):
            spos = g.skeleton_position
            if not spos:
                continue
            parent = subterm_at(skel, spos[:-1])
            if len(parent.args) < 2:
                continue
            for j in range(1, len(parent.args) + 1):
                if j == spos[-1]:
                    continue
                sibling = parent.args[j - 1]
                sort = sibling.sort
                found = []
                if isinstance(sibling, Var):
                    for ctx in sinks:
                        if ctx.hole_sort == sort and ctx.result_sort == sort:
                            found.append(("fertilization", ctx, None))
                for ctx, rule in _simplification_contexts(theory, parent.fn, j, sort, avoid):
                    found.append(("simplification", ctx, rule))
                for heuristic, ctx, rule in found:
                    for v in variable_variants(ann, avoid | names_in(ctx.term)):
                        rhs = _move(v, spos, j, ctx)
                        if rule is not None:
                            at = subterm_at(erase(rhs), spos[:-1])
                            if match(rule.lhs, at) is None:
                                continue
                        lem = SpeculatedLemma(AnnotatedEquation(v, rhs), heuristic, p)
                        out.append(strip_equal_context(lem))
    return [lem for lem in _dedup(out) if _keep(lem.equation)]


# --- equality heuristic -------------------------------------------------------


def strip_equal_context(lem: SpeculatedLemma) -> SpeculatedLemma:
    """Cancel equal plain outermost functors of the two sides."""
    lhs, rhs = lem.equation.lhs, lem.equation.rhs
    removed = list(lem.stripped)
    while isinstance(lhs, App) and isinstance(rhs, App) and not is_front(lhs) and not is_front(rhs):
        if lhs.fn != rhs.fn or len(lhs.args) != len(rhs.args) or not lhs.args:
            break
        differ = [i for i, (a, b) in enumerate(zip(lhs.args, rhs.args)) if a != b]
        if len(differ) == 1:
            k = differ[0]
        elif not differ and len(lhs.args) == 1:
            k = 0
        else:
            break
        removed.append(Context(replace_at(erase(lhs), (k + 1,), Var(HOLE, lhs.args[k].sort)), lhs.args[k].sort))
        lhs, rhs = lhs.args[k], rhs.args[k]
    if len(removed) == len(lem.stripped):
        return lem
    return SpeculatedLemma(AnnotatedEquation(lhs, rhs), lem.heuristic, lem.provenance, tuple(removed), lem.generalized)


# --- everything ------------------------------------------------------------------


def speculate_all(patterns: list, theory: Theory) -> list:
    """All lemmas in a fixed order: upward before transverse, pattern order kept."""
    out = []
    for p in patterns:
        out.extend(speculate_upward(p, patterns))
    for p in patterns:
        out.extend(speculate_transverse(p, theory, patterns))
    return _dedup(out)


def check_lemma(lem: SpeculatedLemma) -> bool:
    return is_wave_rule(lem.equation) and set(variables(erase(lem.equation.rhs))) <= set(
        variables(erase(lem.equation.lhs))
    )
