"""Difference matching of a subject against a target up to variable renaming.

A difference match annotates the subject so that its skeleton equals the
target under a bijective, sort-preserving renaming of variables, and its
erasure is the subject itself.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .annotation import erase, fronts, skeleton
from .terms import App, Term, Var, renaming_between


@dataclass(frozen=True)
class DifferenceMatch:
    annotated: Term
    renaming: tuple  # sorted ((subject var, target var), ...)

    @property
    def sigma(self) -> dict:
        return dict(self.renaming)

    @property
    def front_positions(self) -> tuple:
        return tuple(sorted(f.position for f in fronts(self.annotated)))

    def is_identity(self) -> bool:
        return all(a == b for a, b in self.renaming)


def _merge(r1: dict, r2: dict):
    out = dict(r1)
    for k, v in r2.items():
        if out.setdefault(k, v) != v:
            return None
    if len(set(out.values())) != len(out):
        return None
    return out


@lru_cache(maxsize=200_000)
def _dm(s: Term, t: Term) -> tuple:
    """All (annotated, renaming-items) pairs for subject ``s`` against ``t``."""
    out = []
    if isinstance(s, Var):
        if isinstance(t, Var) and t.sort == s.sort:
            out.append((s, ((s, t),)))
        return tuple(out)
    if s.sort != t.sort:
        return ()
    if isinstance(t, App) and t.fn == s.fn and len(t.args) == len(s.args):
        partials = [((), {})]
        for a, b in zip(s.args, t.args):
            subs = _dm(a, b)
            nxt = []
            for args, ren in partials:
                for ann, items in subs:
                    m = _merge(ren, dict(items))
                    if m is not None:
                        nxt.append(((*args, ann), m))
            partials = nxt
            if not partials:
                break
        for args, ren in partials:
            out.append((App(s.fn, args, s.sort), tuple(sorted(ren.items(), key=_key))))
    for i, a in enumerate(s.args, 1):
        if a.sort != s.sort:
            continue
        for ann, items in _dm(a, t):
            args = [erase(x) for x in s.args]
            args[i - 1] = ann
            out.append((App(s.fn, tuple(args), s.sort, i), items))
    return tuple(out)


def _key(item):
    v, w = item
    return (v.name, v.sort, w.name)


def all_matches(subject: Term, target: Term) -> list:
    """Every difference match of ``subject`` against ``target``."""
    if subject.sort != target.sort:
        return []
    seen = {}
    for ann, items in _dm(subject, target):
        seen.setdefault((ann, items), DifferenceMatch(ann, items))
    return list(seen.values())


def brute_force_matches(subject: Term, target: Term) -> list:
    """Test oracle: enumerate every annotation of ``subject`` and filter."""
    out = []
    for ann in _annotations(subject):
        ren = renaming_between([skeleton(ann)], [target])
        if ren is not None:
            out.append(DifferenceMatch(ann, tuple(sorted(ren.items(), key=_key))))
    return out


def _annotations(t: Term):
    if isinstance(t, Var):
        yield t
        return
    # plain node: annotate every child independently
    for args in itertools.product(*(list(_annotations(a)) for a in t.args)):
        yield App(t.fn, tuple(args), t.sort)
    # front node: one same-sorted hole child, the rest stay plain
    for i, a in enumerate(t.args, 1):
        if a.sort != t.sort:
            continue
        for inner in _annotations(a):
            args = list(t.args)
            args[i - 1] = inner
            yield App(t.fn, tuple(args), t.sort, i)


def _prefix(p: tuple, q: tuple) -> bool:
    return q[: len(p)] == p


def dominates(m1: DifferenceMatch, m2: DifferenceMatch) -> bool:
    """Front-height order: ``m1`` has fronts at or above those of ``m2`` and no more of them."""
    p1, p2 = m1.front_positions, m2.front_positions
    if len(p1) > len(p2):
        return False
    return all(any(_prefix(p, q) for q in p2) for p in p1)


def strictly_dominates(m1: DifferenceMatch, m2: DifferenceMatch) -> bool:
    return dominates(m1, m2) and not dominates(m2, m1)


def maximal_matches(matches: list) -> list:
    return [m for m in matches if not any(strictly_dominates(o, m) for o in matches)]


def maximal_match(subject: Term, target: Term) -> DifferenceMatch | None:
    """The maximal match; ties go to the leftmost-outermost fronts, then to the identity renaming."""
    best = maximal_matches(all_matches(subject, target))
    if not best:
        return None
    return min(best, key=lambda m: (m.front_positions, not m.is_identity(), str(m.annotated)))
