"""Sorted first-order terms, signatures, substitutions and one-hole contexts.

Applications carry an optional ``hole`` index.  A plain term never sets it;
annotated terms (see :mod:`divcritic.annotation`) use it to mark a node as a
wave-front whose ``hole``-th argument is the wave-hole.  Keeping one node type
lets matching, substitution and positions work on both kinds of term.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union

# Variable name used for the hole of a context; not producible by the parser.
HOLE = "□"

Position = tuple  # 1-based child indices from the root


class SortError(ValueError):
    pass


@dataclass(frozen=True)
class Var:
    name: str
    sort: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple = ()
    sort: str = ""
    hole: int | None = None
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.hole is not None and not 1 <= self.hole <= len(self.args):
            raise ValueError(f"wave-hole index {self.hole} out of range for {self.fn}")
        object.__setattr__(self, "_hash", hash((self.fn, self.args, self.sort, self.hole)))

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        from .syntax import format_term

        return format_term(self)


Term = Union[Var, App]
Substitution = Mapping[Var, Term]


@dataclass(frozen=True)
class FunctionSymbol:
    name: str
    arg_sorts: tuple
    result_sort: str
    constructor: bool = False
    recursive: frozenset = frozenset()  # 1-based argument positions

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)


@dataclass(frozen=True)
class Signature:
    sorts: tuple
    symbols: tuple  # of FunctionSymbol, declaration order

    def __post_init__(self):
        names = [f.name for f in self.symbols]
        if len(set(names)) != len(names):
            raise SortError("duplicate symbol declaration")
        if len(set(self.sorts)) != len(self.sorts):
            raise SortError("duplicate sort declaration")
        for f in self.symbols:
            for s in (*f.arg_sorts, f.result_sort):
                if s not in self.sorts:
                    raise SortError(f"undeclared sort {s!r} in {f.name}")
            if f.constructor and f.recursive:
                raise SortError(f"constructor {f.name} cannot declare recursive positions")
            if not all(1 <= i <= f.arity for i in f.recursive):
                raise SortError(f"recursive position out of range in {f.name}")

    def symbol(self, name: str) -> FunctionSymbol:
        for f in self.symbols:
            if f.name == name:
                return f
        raise KeyError(name)

    def has_symbol(self, name: str) -> bool:
        return any(f.name == name for f in self.symbols)

    def constructors(self, sort: str) -> list:
        return [f for f in self.symbols if f.constructor and f.result_sort == sort]

    def is_constructor(self, name: str) -> bool:
        return self.has_symbol(name) and self.symbol(name).constructor

    def recursive_positions(self, name: str) -> frozenset:
        """Recursive argument positions of a symbol.

        Constructors are treated as recursive exactly on the arguments that
        share their result sort (``s`` on 1, ``cons`` on 2).
        """
        f = self.symbol(name)
        if f.constructor:
            return frozenset(i + 1 for i, s in enumerate(f.arg_sorts) if s == f.result_sort)
        return f.recursive

    def app(self, name: str, *args: Term) -> App:
        f = self.symbol(name)
        if len(args) != f.arity:
            raise SortError(f"{name} expects {f.arity} arguments, got {len(args)}")
        for a, s in zip(args, f.arg_sorts):
            if a.sort != s:
                raise SortError(f"argument {a} of {name} has sort {a.sort}, expected {s}")
        return App(name, tuple(args), f.result_sort)


def check_sorts(t: Term, sig: Signature) -> bool:
    """True iff ``t`` (ignoring annotations) is well-sorted over ``sig``."""
    if isinstance(t, Var):
        return t.sort in sig.sorts or t.name == HOLE
    if not sig.has_symbol(t.fn):
        return False
    f = sig.symbol(t.fn)
    if f.arity != len(t.args) or f.result_sort != t.sort:
        return False
    return all(a.sort == s and check_sorts(a, sig) for a, s in zip(t.args, f.arg_sorts))


# --- traversal -----------------------------------------------------------


def subterms(t: Term) -> Iterator[tuple[Position, Term]]:
    """Pre-order (position, subterm) pairs, leftmost-outermost first."""
    yield (), t
    if isinstance(t, App):
        for i, a in enumerate(t.args, 1):
            for p, s in subterms(a):
                yield (i, *p), s


def subterm_at(t: Term, p: Position) -> Term:
    for i in p:
        if not isinstance(t, App) or not 1 <= i <= len(t.args):
            raise IndexError(f"invalid position {p}")
        t = t.args[i - 1]
    return t


def replace_at(t: Term, p: Position, u: Term) -> Term:
    if not p:
        if u.sort != t.sort:
            raise SortError(f"cannot replace {t} of sort {t.sort} by {u} of sort {u.sort}")
        return u
    if not isinstance(t, App) or not 1 <= p[0] <= len(t.args):
        raise IndexError(f"invalid position {p}")
    args = list(t.args)
    args[p[0] - 1] = replace_at(args[p[0] - 1], p[1:], u)
    return App(t.fn, tuple(args), t.sort, t.hole)


def variables(t: Term) -> list:
    """Distinct variables of ``t`` in left-to-right order of first occurrence."""
    seen: dict = {}
    for _, s in subterms(t):
        if isinstance(s, Var):
            seen.setdefault(s, None)
    return list(seen)


def weight(t: Term) -> int:
    """Number of symbol occurrences, variables included."""
    if isinstance(t, Var):
        return 1
    return 1 + sum(weight(a) for a in t.args)


def depth(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 1
    return 1 + max(depth(a) for a in t.args)


def symbols_of(t: Term) -> set:
    return {s.fn for _, s in subterms(t) if isinstance(s, App)}


def occurs(u: Term, t: Term) -> bool:
    return any(s == u for _, s in subterms(t))


# --- substitution and matching ------------------------------------------------


def substitute(sigma: Substitution, t: Term) -> Term:
    if isinstance(t, Var):
        return sigma.get(t, t)
    if not t.args:
        return t
    return App(t.fn, tuple(substitute(sigma, a) for a in t.args), t.sort, t.hole)


def match(pattern: Term, subject: Term, sigma: dict | None = None) -> dict | None:
    """The substitution σ with σ(pattern) == subject, or None.

    ``sigma`` pre-binds variables; it is not mutated.  Annotation marks take
    part in the comparison, so annotated patterns only match annotated
    subjects with the same fronts.
    """
    sigma = dict(sigma or {})
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if isinstance(p, Var):
            if p.sort != s.sort:
                return None
            bound = sigma.get(p)
            if bound is None:
                sigma[p] = s
            elif bound != s:
                return None
            continue
        if (
            not isinstance(s, App)
            or p.fn != s.fn
            or len(p.args) != len(s.args)
            or p.hole != s.hole
        ):
            return None
        stack.extend(zip(p.args, s.args))
    return sigma


def match_all(pairs: Iterable[tuple[Term, Term]], sigma: dict | None = None) -> dict | None:
    for p, s in pairs:
        sigma = match(p, s, sigma)
        if sigma is None:
            return None
    return sigma if sigma is not None else {}


def renaming_between(a: Iterable[Term], b: Iterable[Term]) -> dict | None:
    """A bijective, sort-preserving variable renaming taking terms ``a`` to ``b``."""
    fwd: dict = {}
    back: dict = {}
    for x, y in zip(a, b):
        stack = [(x, y)]
        while stack:
            p, s = stack.pop()
            if isinstance(p, Var):
                if not isinstance(s, Var) or p.sort != s.sort:
                    return None
                if fwd.setdefault(p, s) != s or back.setdefault(s, p) != p:
                    return None
                continue
            if (
                not isinstance(s, App)
                or p.fn != s.fn
                or len(p.args) != len(s.args)
                or p.hole != s.hole
            ):
                return None
            stack.extend(zip(p.args, s.args))
    return fwd


def variant_equal(a: Term, b: Term) -> bool:
    return renaming_between([a], [b]) is not None


# --- fresh names -----------------------------------------------------------


class FreshNames:
    """Supplies variable names ``V1, V2, ...`` avoiding a set of used names."""

    def __init__(self, avoid: Iterable[str] = (), prefix: str = "V"):
        self.avoid = set(avoid)
        self.prefix = prefix
        self.counter = itertools.count(1)

    def var(self, sort: str) -> Var:
        while True:
            name = f"{self.prefix}{next(self.counter)}"
            if name not in self.avoid:
                self.avoid.add(name)
                return Var(name, sort)


def names_in(*ts: Term) -> set:
    return {v.name for t in ts for v in variables(t)}


def rename_apart(t: Term, avoid: Iterable[str]) -> Term:
    fresh = FreshNames(avoid)
    return substitute({v: fresh.var(v.sort) for v in variables(t) if v.name != HOLE}, t)


# --- contexts ----------------------------------------------------------------


@dataclass(frozen=True)
class Context:
    """A term with exactly one occurrence of the hole variable."""

    term: Term
    hole_sort: str

    def __post_init__(self):
        n = sum(1 for _, s in subterms(self.term) if isinstance(s, Var) and s.name == HOLE)
        if n != 1:
            raise ValueError(f"context must contain exactly one hole, found {n}")

    @property
    def result_sort(self) -> str:
        return self.term.sort

    @property
    def hole_var(self) -> Var:
        return Var(HOLE, self.hole_sort)

    @property
    def hole_position(self) -> Position:
        for p, s in subterms(self.term):
            if isinstance(s, Var) and s.name == HOLE:
                return p
        raise AssertionError

    @property
    def trivial(self) -> bool:
        return isinstance(self.term, Var)

    def fill(self, t: Term) -> Term:
        if t.sort != self.hole_sort:
            raise SortError(f"hole of sort {self.hole_sort} cannot take {t} : {t.sort}")
        return substitute({self.hole_var: t}, self.term)

    def variables(self) -> list:
        return [v for v in variables(self.term) if v.name != HOLE]

    def __str__(self) -> str:
        return str(self.term)


def context_at(t: Term, p: Position) -> Context:
    """The context of ``t`` around position ``p``."""
    u = subterm_at(t, p)
    return Context(replace_at(t, p, Var(HOLE, u.sort)), u.sort)
