"""Generalization of speculated lemmas and merging over constructor cover sets."""

from __future__ import annotations

from dataclasses import replace as dc_replace

from .annotation import AnnotatedEquation, erase, front_groups, fronts, is_wave_rule, locate_plain, subterm_at
from .filters import DisproverConfig, disprove, type_check
from .rewrite import Equation, Theory
from .speculate import SpeculatedLemma
from .terms import (
    HOLE,
    App,
    FreshNames,
    Signature,
    Term,
    Var,
    names_in,
    occurs,
    replace_at,
    substitute,
    subterms,
    variables,
    weight,
)


def primary_terms(t: Term, sig: Signature) -> list:
    """``t`` plus the primary terms below its recursive argument positions, root first."""
    out: list = []

    def walk(u: Term) -> None:
        if u not in out:
            out.append(u)
        if isinstance(u, App) and sig.has_symbol(u.fn):
            for i in sorted(sig.recursive_positions(u.fn)):
                walk(u.args[i - 1])

    walk(t)
    return out


def _hole_contents(a: Term) -> list:
    out = []
    for g in front_groups(a):
        out.append(erase(subterm_at(a, locate_plain(a, g.skeleton_position))))
    return out


def candidate_terms(lem: SpeculatedLemma, sig: Signature) -> list:
    """Shared primary terms of both sides plus wave-hole contents found on both sides.

    Erased wave-fronts are never candidates.  Ordered by decreasing weight,
    ties broken by first occurrence.
    """
    lhs, rhs = erase(lem.equation.lhs), erase(lem.equation.rhs)
    rp = primary_terms(rhs, sig)
    cands = [t for t in primary_terms(lhs, sig) if t in rp]
    for t in _hole_contents(lem.equation.lhs) + _hole_contents(lem.equation.rhs):
        if t not in cands and occurs(t, lhs) and occurs(t, rhs):
            cands.append(t)
    front_terms = {erase(f.node) for a in (lem.equation.lhs, lem.equation.rhs) for f in fronts(a)}
    cands = [t for t in cands if t not in front_terms]
    order = {}
    for k, (_, s) in enumerate(list(subterms(lhs)) + list(subterms(rhs))):
        order.setdefault(s, k)
    return sorted(cands, key=lambda t: (-weight(t), order.get(t, 0)))


def _replace_all(a: Term, old: Term, new: Term) -> Term:
    if a == old:
        return new
    if isinstance(a, Var) or not a.args:
        return a
    return App(a.fn, tuple(_replace_all(x, old, new) for x in a.args), a.sort, a.hole)


def acceptable(eq: AnnotatedEquation, theory: Theory, cfg: DisproverConfig) -> bool:
    plain = eq.erased
    if isinstance(plain.lhs, Var) or plain.lhs == plain.rhs:
        return False
    if not set(variables(plain.rhs)) <= set(variables(plain.lhs)):
        return False
    if not type_check(plain, theory.signature):
        return False
    if not is_wave_rule(eq):
        return False
    return disprove(plain, theory, cfg) is None


def generalize(lem: SpeculatedLemma, theory: Theory, cfg: DisproverConfig | None = None) -> SpeculatedLemma:
    """Replace candidate subterms by fresh variables while the disprover allows it."""
    cfg = cfg or DisproverConfig()
    current = lem
    for cand in candidate_terms(lem, theory.signature):
        if isinstance(cand, Var):
            continue  # renaming a variable changes nothing
        eq = current.equation
        plain = eq.erased
        if not (occurs(cand, plain.lhs) or occurs(cand, plain.rhs)):
            continue
        v = FreshNames(names_in(plain.lhs, plain.rhs)).var(cand.sort)
        trial = AnnotatedEquation(_replace_all(eq.lhs, cand, v), _replace_all(eq.rhs, cand, v))
        if acceptable(trial, theory, cfg):
            current = dc_replace(current, equation=trial, generalized=current.generalized + (cand,))
    return current


# --- merging --------------------------------------------------------------------


def _canonical(t: Term) -> Term:
    vs = variables(t)
    return substitute({v: Var(f"C{k}", v.sort) for k, v in enumerate(vs)}, t)


def _pair(eq: AnnotatedEquation) -> App:
    return App("=", (eq.lhs, eq.rhs), "")


def _cover_positions(pair: App, sig: Signature) -> list:
    """Positions holding a constructor with distinct, otherwise unused variable arguments."""
    out = []
    counts: dict = {}
    for _, s in subterms(pair):
        if isinstance(s, Var):
            counts[s] = counts.get(s, 0) + 1
    for pos, s in subterms(pair):
        if not pos or isinstance(s, Var) or s.hole is not None or not sig.is_constructor(s.fn):
            continue
        if all(isinstance(a, Var) and counts[a] == 1 for a in s.args) and len(set(s.args)) == len(s.args):
            out.append((pos, s))
    return out


def merge_lemmas(lemmas: list, sig: Signature) -> list:
    """Replace families covering every constructor of a sort by one lemma; repeat to a fixpoint."""
    current = list(lemmas)
    changed = True
    while changed:
        changed = False
        groups: dict = {}
        for idx, lem in enumerate(current):
            pair = _pair(lem.equation)
            for pos, s in _cover_positions(pair, sig):
                hole = Var(HOLE, s.sort)
                key = (pos, _canonical(replace_at(pair, pos, hole)))
                groups.setdefault(key, []).append((idx, s.fn))
        for (pos, _), members in groups.items():
            pick: dict = {}
            for i, fn in members:
                pick.setdefault(fn, i)
            idxs = sorted(pick.values())
            first = current[idxs[0]]
            pair = _pair(first.equation)
            sort = subterm_at(pair, pos).sort
            wanted = sorted(c.name for c in sig.constructors(sort))
            if sorted(pick) != wanted or len(idxs) < 2:
                continue
            v = FreshNames(names_in(pair)).var(sort)
            merged_pair = replace_at(pair, pos, v)
            merged = SpeculatedLemma(
                AnnotatedEquation(merged_pair.args[0], merged_pair.args[1]),
                first.heuristic,
                first.provenance,
                first.stripped,
                first.generalized,
            )
            drop = set(idxs)
            current = [merged if i == idxs[0] else lem for i, lem in enumerate(current) if i not in drop or i == idxs[0]]
            changed = True
            break
    return current


def is_instance(general: Equation, specific: Equation) -> bool:
    from .rewrite import subsumes

    return subsumes(general, specific)
