"""Wave-fronts and wave-holes: skeleton, erasure, wave rules and rippling.

An annotated term is an ordinary :class:`~divcritic.terms.App` tree in which
some nodes have ``hole`` set.  Such a node is a wave-front one functor thick;
its ``hole``-th argument is the wave-hole.  Adjacent fronts are stored nested
and only merged by the reader.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    HOLE,
    App,
    Context,
    Position,
    Term,
    Var,
    match,
    substitute,
    subterms,
    variant_equal,
)


class AnnotationError(ValueError):
    pass


def is_front(t: Term) -> bool:
    return isinstance(t, App) and t.hole is not None


def erase(a: Term) -> Term:
    if isinstance(a, Var):
        return a
    if a.hole is None and not a.args:
        return a
    return App(a.fn, tuple(erase(x) for x in a.args), a.sort)


def skeleton(a: Term) -> Term:
    if isinstance(a, Var):
        return a
    if a.hole is not None:
        return skeleton(a.args[a.hole - 1])
    if not a.args:
        return a
    return App(a.fn, tuple(skeleton(x) for x in a.args), a.sort)


def has_fronts(a: Term) -> bool:
    return any(is_front(s) for _, s in subterms(a))


def check_well_formed(a: Term) -> None:
    """Raise AnnotationError unless every front's hole keeps the skeleton well-sorted."""
    for _, s in subterms(a):
        if is_front(s) and s.args[s.hole - 1].sort != s.sort:
            raise AnnotationError(f"wave-hole of {s.fn} changes sort")


@dataclass(frozen=True)
class Front:
    """A front node: its position in the annotated term and in the skeleton."""

    position: Position
    skeleton_position: Position
    node: App


def fronts(a: Term) -> list:
    """Fronts lying in the skeleton part of ``a`` (not inside front material)."""
    out = []

    def walk(t: Term, pos: Position, spos: Position) -> None:
        if isinstance(t, Var):
            return
        if t.hole is not None:
            out.append(Front(pos, spos, t))
            walk(t.args[t.hole - 1], (*pos, t.hole), spos)
            return
        for i, x in enumerate(t.args, 1):
            walk(x, (*pos, i), (*spos, i))

    walk(a, (), ())
    return out


@dataclass(frozen=True)
class FrontGroup:
    """A maximal chain of nested fronts sitting at one skeleton position.

    ``context`` is the erased front material with the hole variable where
    the innermost wave-hole was, e.g. ``s(s(□))``.
    """

    skeleton_position: Position
    position: Position  # of the outermost front
    context: Context


def front_groups(a: Term) -> list:
    groups = []

    def walk(t: Term, pos: Position, spos: Position) -> None:
        if isinstance(t, Var):
            return
        if t.hole is not None:
            chain = []
            node = t
            while is_front(node):
                chain.append(node)
                node = node.args[node.hole - 1]
            inner = Var(HOLE, node.sort)
            for f in reversed(chain):
                args = [erase(x) for x in f.args]
                args[f.hole - 1] = inner
                inner = App(f.fn, tuple(args), f.sort)
            groups.append(FrontGroup(spos, pos, Context(inner, node.sort)))
            hole_path = pos
            for f in chain:
                hole_path = (*hole_path, f.hole)
            walk(node, hole_path, spos)
            return
        for i, x in enumerate(t.args, 1):
            walk(x, (*pos, i), (*spos, i))

    walk(a, (), ())
    return groups


def wrap(ctx: Context, inner: Term) -> Term:
    """Fill ``ctx`` with ``inner`` marking each node on the hole path as a front."""

    def build(t: Term) -> Term:
        if isinstance(t, Var):
            if t.name == HOLE:
                return inner
            return t
        for i, x in enumerate(t.args, 1):
            if any(isinstance(s, Var) and s.name == HOLE for _, s in subterms(x)):
                args = list(t.args)
                args[i - 1] = build(x)
                return App(t.fn, tuple(args), t.sort, i)
        return t

    if ctx.trivial:
        return inner
    return build(ctx.term)


def locate(a: Term, spos: Position) -> Position:
    """Annotated position of the (outermost) node standing at skeleton position ``spos``."""
    path: tuple = ()
    node = a
    for idx in spos:
        while is_front(node):
            path = (*path, node.hole)
            node = node.args[node.hole - 1]
        if not isinstance(node, App) or not 1 <= idx <= len(node.args):
            raise IndexError(f"invalid skeleton position {spos}")
        path = (*path, idx)
        node = node.args[idx - 1]
    return path


def locate_plain(a: Term, spos: Position) -> Position:
    """Like :func:`locate` but descends through fronts to the skeleton node itself."""
    path = locate(a, spos)
    node = subterm_at(a, path)
    while is_front(node):
        path = (*path, node.hole)
        node = node.args[node.hole - 1]
    return path


def subterm_at(t: Term, p: Position) -> Term:
    for i in p:
        t = t.args[i - 1]
    return t


def strip_group(a: Term, spos: Position) -> Term:
    """Remove the front chain standing at skeleton position ``spos``."""
    top = locate(a, spos)
    inner = subterm_at(a, locate_plain(a, spos))
    return _replace(a, top, inner)


def _replace(t: Term, p: Position, u: Term) -> Term:
    if not p:
        return u
    args = list(t.args)
    args[p[0] - 1] = _replace(args[p[0] - 1], p[1:], u)
    return App(t.fn, tuple(args), t.sort, t.hole)


def front_depths(a: Term) -> list:
    return [len(f.skeleton_position) for f in fronts(a)]


@dataclass(frozen=True)
class AnnotatedEquation:
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if skeleton(self.lhs).sort != skeleton(self.rhs).sort:
            raise AnnotationError("skeletons of the two sides have different sorts")

    @property
    def erased(self):
        from .rewrite import Equation

        return Equation(erase(self.lhs), erase(self.rhs))

    def __str__(self) -> str:
        from .syntax import format_equation

        return format_equation(self.lhs, self.rhs)


def is_wave_rule(eq: AnnotatedEquation) -> bool:
    """Skeleton preservation plus non-decreasing front height.

    The deepest right-hand front may not sit lower in the skeleton than the
    deepest left-hand front; a rule with no left-hand fronts moves nothing.
    """
    check_well_formed(eq.lhs)
    check_well_formed(eq.rhs)
    if not variant_equal(skeleton(eq.lhs), skeleton(eq.rhs)):
        return False
    ld, rd = front_depths(eq.lhs), front_depths(eq.rhs)
    if not ld:
        return False
    return not rd or max(rd) <= max(ld)


# --- rippling ---------------------------------------------------------------------


def ripple_step(a: Term, rules: list):
    """Rewrite the first annotated redex (leftmost-outermost) with a wave rule.

    Returns (new term, position, rule index) or None.  Pattern variables
    bind annotated subterms, so fronts below a variable are carried along.
    """
    for pos, sub in subterms(a):
        if isinstance(sub, Var):
            continue
        for k, rule in enumerate(rules):
            sigma = match(rule.lhs, sub)
            if sigma is not None:
                return _replace(a, pos, substitute(sigma, rule.rhs)), pos, k
    return None


def fertilize_annotated(a: Term, hypothesis_lhs: Term, hypothesis_rhs: Term):
    """Replace an instance of the hypothesis inside a wave-hole; (term, position) or None."""
    for pos, sub in subterms(a):
        if has_fronts(sub):
            continue
        sigma = match(hypothesis_lhs, sub)
        if sigma is not None and _inside_hole(a, pos):
            return _replace(a, pos, substitute(sigma, hypothesis_rhs)), pos
    return None


def _inside_hole(a: Term, pos: Position) -> bool:
    node = a
    inside = False
    for i in pos:
        if is_front(node):
            if i != node.hole:
                return False
            inside = True
        node = node.args[i - 1]
    return inside or not has_fronts(a)
