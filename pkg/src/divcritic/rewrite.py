"""Conditional rewriting, subsumption and ground-instance enumeration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .terms import (
    App,
    Position,
    Signature,
    Term,
    Var,
    check_sorts,
    depth,
    match,
    substitute,
    variables,
    weight,
)

DEFAULT_FUEL = 10_000


class RuleError(ValueError):
    pass


class FuelExhausted(RuntimeError):
    """Raised when normalization runs out of rewrite steps."""


@dataclass(frozen=True)
class Condition:
    term: Term
    positive: bool = True  # positive: must normalize to true; negative: to false


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term
    conditions: tuple = ()

    def __post_init__(self):
        if self.lhs.sort != self.rhs.sort:
            raise RuleError(f"sides of {self} have different sorts")

    def __str__(self) -> str:
        from .syntax import format_equation

        return format_equation(self.lhs, self.rhs)

    def flipped(self) -> "Equation":
        return Equation(self.rhs, self.lhs, self.conditions)

    def variables(self) -> list:
        seen: dict = {}
        for t in (self.lhs, self.rhs, *(c.term for c in self.conditions)):
            for v in variables(t):
                seen.setdefault(v, None)
        return list(seen)


@dataclass(frozen=True)
class RewriteRule:
    lhs: Term
    rhs: Term
    conditions: tuple = ()
    label: str = ""

    def __post_init__(self):
        if isinstance(self.lhs, Var):
            raise RuleError(f"left-hand side of rule {self.label or ''} is a variable")
        if self.lhs.sort != self.rhs.sort:
            raise RuleError("rule sides have different sorts")
        lvars = set(variables(self.lhs))
        extra = [v for t in (self.rhs, *(c.term for c in self.conditions)) for v in variables(t) if v not in lvars]
        if extra:
            raise RuleError(f"extra variable {extra[0].name} not in left-hand side")

    @property
    def equation(self) -> Equation:
        return Equation(self.lhs, self.rhs, self.conditions)

    def __str__(self) -> str:
        from .syntax import format_term

        body = f"{format_term(self.lhs)} = {format_term(self.rhs)}"
        if not self.conditions:
            return body
        conds = ", ".join(f"{format_term(c.term)} = {str(c.positive).lower()}" for c in self.conditions)
        return f"{conds} => {body}"


@dataclass(frozen=True)
class Theory:
    signature: Signature
    rules: tuple = ()

    def __post_init__(self):
        for r in self.rules:
            for t in (r.lhs, r.rhs, *(c.term for c in r.conditions)):
                if not check_sorts(t, self.signature):
                    raise RuleError(f"rule {r} is not well-sorted")

    def with_rules(self, extra) -> "Theory":
        return Theory(self.signature, self.rules + tuple(extra))


class Normalizer:
    """Leftmost-innermost conditional rewriting with a shared fuel budget.

    Results of completed normalizations are cached, so a Normalizer reused
    across many ground instances (the disprover) avoids repeated work.
    """

    def __init__(self, theory: Theory, fuel: int = DEFAULT_FUEL):
        self.theory = theory
        self.fuel = fuel
        self.cache: dict = {}
        self._index: dict = {}
        for r in theory.rules:
            self._index.setdefault(r.lhs.fn, []).append(r)

    def refuel(self, fuel: int) -> None:
        self.fuel = fuel

    def _spend(self) -> None:
        self.fuel -= 1
        if self.fuel < 0:
            raise FuelExhausted("rewrite fuel exhausted")

    def normalize(self, t: Term) -> Term:
        if isinstance(t, Var):
            return t
        hit = self.cache.get(t)
        if hit is not None:
            return hit
        args = tuple(self.normalize(a) for a in t.args)
        u = App(t.fn, args, t.sort) if args != t.args or t.hole is not None else t
        step = self._root_step(u)
        result = u if step is None else self.normalize(step[0])
        self.cache[t] = result
        return result

    def _holds(self, c, sigma) -> bool:
        value = self.normalize(substitute(sigma, c.term))
        want = "true" if c.positive else "false"
        return isinstance(value, App) and value.fn == want and not value.args

    def _root_step(self, t: App):
        for r in self._index.get(t.fn, ()):
            sigma = match(r.lhs, t)
            if sigma is None:
                continue
            if all(self._holds(c, sigma) for c in r.conditions):
                self._spend()
                return substitute(sigma, r.rhs), r.label
        return None

    def rewrite_once(self, t: Term, _pos: Position = ()):
        if isinstance(t, Var):
            return None
        for i, a in enumerate(t.args, 1):
            hit = self.rewrite_once(a, (*_pos, i))
            if hit is not None:
                new, p, label = hit
                return _rebuild(t, i, new), p, label
        step = self._root_step(t)
        if step is None:
            return None
        return step[0], _pos, step[1]


def _rebuild(t: App, i: int, new: Term) -> App:
    args = list(t.args)
    args[i - 1] = new
    return App(t.fn, tuple(args), t.sort, t.hole)


def normalize(t: Term, theory: Theory, fuel: int = DEFAULT_FUEL) -> Term:
    """Normal form of ``t``; raises FuelExhausted if ``fuel`` steps do not suffice."""
    return Normalizer(theory, fuel).normalize(t)


def rewrite_once(t: Term, theory: Theory, fuel: int = DEFAULT_FUEL):
    """First leftmost-innermost rewrite step as (term, position, rule label), or None."""
    return Normalizer(theory, fuel).rewrite_once(t)


def rewrite_at_root(t: Term, rule: RewriteRule, theory: Theory, fuel: int = DEFAULT_FUEL) -> Term | None:
    if isinstance(t, Var):
        return None
    sigma = match(rule.lhs, t)
    if sigma is None:
        return None
    nz = Normalizer(theory, fuel)
    try:
        if not all(nz._holds(c, sigma) for c in rule.conditions):
            return None
    except FuelExhausted:
        return None
    return substitute(sigma, rule.rhs)


def _as_pair(eq: Equation) -> App:
    return App("=", (eq.lhs, eq.rhs), "")


def subsumes(general: Equation, specific: Equation) -> bool:
    """True iff an instance of ``general`` equals ``specific`` in some orientation."""
    target = _as_pair(specific)
    for g in (general, general.flipped()):
        if match(_as_pair(g), target) is not None:
            return True
    return False


# --- ground instances ------------------------------------------------------------


def ground_terms(sig: Signature, sort: str, max_depth: int) -> list:
    """Constructor ground terms of ``sort`` with depth <= max_depth, smallest first."""
    memo: dict = {}

    def build(s: str, d: int) -> list:
        key = (s, d)
        if key in memo:
            return memo[key]
        memo[key] = []
        out = []
        if d >= 1:
            for c in sig.constructors(s):
                pools = [build(a, d - 1) for a in c.arg_sorts]
                for args in itertools.product(*pools):
                    out.append(App(c.name, tuple(args), s))
        memo[key] = out
        return out

    from .syntax import format_term

    terms = build(sort, max_depth)
    return sorted(set(terms), key=lambda t: (weight(t), format_term(t)))


def ground_substitutions(vs, sig: Signature, max_depth: int) -> Iterator[dict]:
    """All constructor-ground substitutions for ``vs`` up to ``max_depth``.

    Ordered by total weight, then lexicographically by the printed images.
    """
    from .syntax import format_term

    vs = list(vs)
    if not vs:
        yield {}
        return
    pools = [ground_terms(sig, v.sort, max_depth) for v in vs]
    combos = list(itertools.product(*pools))
    combos.sort(key=lambda ts: (sum(weight(t) for t in ts), [format_term(t) for t in ts]))
    for ts in combos:
        yield dict(zip(vs, ts))


def is_constructor_ground(t: Term, sig: Signature) -> bool:
    if isinstance(t, Var):
        return False
    return sig.is_constructor(t.fn) and all(is_constructor_ground(a, sig) for a in t.args)


def term_depth(t: Term) -> int:
    return depth(t)
