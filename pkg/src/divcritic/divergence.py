"""Partition a proof trace into sequences and detect accumulating term structure."""

from __future__ import annotations

from dataclasses import dataclass

from .annotation import front_groups
from .diffmatch import DifferenceMatch, maximal_match
from .rewrite import Equation
from .terms import Term, subterm_at, symbols_of, variant_equal, weight

SIDES = ("lhs", "rhs")
MAX_FALLBACK_SEQUENCES = 16


class TraceError(ValueError):
    pass


@dataclass(frozen=True)
class TraceEquation:
    id: str
    parent: str | None
    equation: Equation
    origin: str = "induction-goal"

    def side(self, name: str) -> Term:
        return self.equation.lhs if name == "lhs" else self.equation.rhs


@dataclass(frozen=True)
class EquationSequence:
    members: tuple

    def __post_init__(self):
        if len(self.members) < 2:
            raise TraceError("an equation sequence needs at least two members")

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, i):
        return self.members[i]

    @property
    def ids(self) -> tuple:
        return tuple(m.id for m in self.members)


# --- partitioning -----------------------------------------------------------------


def _symbols(te: TraceEquation) -> set:
    return symbols_of(te.equation.lhs) | symbols_of(te.equation.rhs)


def _weight(te: TraceEquation) -> int:
    return weight(te.equation.lhs) + weight(te.equation.rhs)


def _check_parentage(trace: list) -> None:
    ids = [te.id for te in trace]
    if len(set(ids)) != len(ids):
        raise TraceError("duplicate trace equation id")
    known = set(ids)
    by_id = {te.id: te for te in trace}
    for te in trace:
        if te.parent is not None and te.parent not in known:
            raise TraceError(f"unknown parent {te.parent} of {te.id}")
    for te in trace:
        seen = set()
        cur = te
        while cur.parent is not None:
            if cur.id in seen:
                raise TraceError(f"cyclic parentage through {cur.id}")
            seen.add(cur.id)
            cur = by_id[cur.parent]


def _parent_chains(trace: list) -> list:
    children: dict = {te.id: [] for te in trace}
    for te in trace:
        if te.parent is not None:
            children[te.parent].append(te)
    height: dict = {}

    def h(te) -> int:
        if te.id not in height:
            height[te.id] = 1 + max((h(c) for c in children[te.id]), default=0)
        return height[te.id]

    chains = []

    def follow(te) -> None:
        chain = [te]
        cur = te
        while children[cur.id]:
            kids = children[cur.id]
            best = max(range(len(kids)), key=lambda k: (h(kids[k]), k))
            for k, kid in enumerate(kids):
                if k != best:
                    follow(kid)
            cur = kids[best]
            chain.append(cur)
        chains.append(chain)

    for te in trace:
        if te.parent is None:
            follow(te)
    order = {te.id: k for k, te in enumerate(trace)}
    chains.sort(key=lambda c: order[c[0].id])
    return chains


def _split_by_symbols(chain: list) -> list:
    """Split interleaved goal families; kept only when it yields two real sequences."""
    parts: list = []
    for te in chain:
        syms = _symbols(te)
        for part in parts:
            if _symbols(part[-1]) <= syms:
                part.append(te)
                break
        else:
            parts.append([te])
    if sum(1 for p in parts if len(p) >= 2) >= 2:
        return parts
    return [chain]


def _fallback_groups(trace: list) -> list:
    groups: list = []
    for te in trace:
        syms, w = _symbols(te), _weight(te)
        for g in groups:
            if not _symbols(g[-1]) <= syms:
                continue
            step = w - _weight(g[-1])
            if step <= 0:
                continue
            if len(g) >= 2 and step != _weight(g[-1]) - _weight(g[-2]):
                continue
            g.append(te)
            break
        else:
            if len(groups) < MAX_FALLBACK_SEQUENCES:
                groups.append([te])
    return groups


def partition_trace(trace: list) -> list:
    """Candidate sequences of a trace, in order of their first member."""
    _check_parentage(trace)
    if any(te.parent is not None for te in trace):
        parts = [p for chain in _parent_chains(trace) for p in _split_by_symbols(chain)]
    else:
        parts = _fallback_groups(trace)
    return [EquationSequence(tuple(p)) for p in parts if len(p) >= 2]


# --- pattern detection ----------------------------------------------------------


@dataclass(frozen=True)
class SidePattern:
    """Accumulation on one side of the equations ``start .. stop-1`` of a sequence."""

    side: str
    start: int
    stop: int
    matches: tuple  # maximal match of member k+1 against member k

    @property
    def groups(self) -> list:
        return front_groups(self.matches[0].annotated)

    @property
    def positions(self) -> list:
        return [g.skeleton_position for g in self.groups]

    def seeds(self, seq: EquationSequence) -> list:
        first = seq[self.start].side(self.side)
        return [subterm_at(first, p) for p in self.positions]


@dataclass(frozen=True)
class DivergencePattern:
    sequence: EquationSequence
    sides: tuple  # SidePattern for each side showing accumulation

    @property
    def window(self) -> tuple:
        return min(s.start for s in self.sides), max(s.stop for s in self.sides)

    def side(self, name: str) -> SidePattern | None:
        for s in self.sides:
            if s.side == name:
                return s
        return None


def _signature(m: DifferenceMatch) -> list:
    return sorted(((g.skeleton_position, g.context) for g in front_groups(m.annotated)), key=lambda x: x[0])


def compatible(m1: DifferenceMatch, m2: DifferenceMatch) -> bool:
    s1, s2 = _signature(m1), _signature(m2)
    if len(s1) != len(s2):
        return False
    return all(p == q and c.hole_sort == d.hole_sort and variant_equal(c.term, d.term) for (p, c), (q, d) in zip(s1, s2))


def _side_pattern(seq: EquationSequence, side: str, window: int, begin: int = 0) -> SidePattern | None:
    pair_cache: dict = {}

    def pair(k: int):
        if k not in pair_cache:
            pair_cache[k] = maximal_match(seq[k + 1].side(side), seq[k].side(side))
        return pair_cache[k]

    for start in range(begin, len(seq) - window + 1):
        ms = []
        for k in range(start, start + window - 1):
            m = pair(k)
            if m is None or not m.front_positions or (ms and not compatible(ms[0], m)):
                break
            ms.append(m)
        else:
            return SidePattern(side, start, start + window, tuple(ms))
    return None


def detect_pattern(seq: EquationSequence, window: int = 3, begin: int = 0) -> DivergencePattern | None:
    """Earliest pattern; each side gets its own earliest consistent window."""
    if window < 2:
        raise ValueError("window must be at least 2")
    sides = tuple(p for p in (_side_pattern(seq, s, window, begin) for s in SIDES) if p is not None)
    if not sides:
        return None
    return DivergencePattern(seq, sides)


def detect_patterns(seq: EquationSequence, window: int = 3) -> list:
    """The earliest pattern plus any later ones disjoint from it in the sequence."""
    out = []
    begin = 0
    while begin <= len(seq) - window:
        p = detect_pattern(seq, window, begin)
        if p is None:
            break
        out.append(p)
        begin = p.window[1]
    return out


def check_pattern(p: DivergencePattern) -> bool:
    """Re-derive every recorded match; used to self-validate detected patterns."""
    for sp in p.sides:
        if not sp.groups:
            return False
        for k, m in zip(range(sp.start, sp.stop - 1), sp.matches):
            again = maximal_match(p.sequence[k + 1].side(sp.side), p.sequence[k].side(sp.side))
            if again != m or not compatible(sp.matches[0], again):
                return False
        for g in sp.groups:
            if g.context.trivial:
                return False
    return True


def skeleton_positions(p: DivergencePattern, side: str) -> list:
    sp = p.side(side)
    return [] if sp is None else sp.positions

