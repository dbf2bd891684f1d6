from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import strategies as st

from divcritic.rewrite import Equation
from divcritic.divergence import TraceEquation
from divcritic.syntax import load_theory, parse_annotated, parse_term, parse_theory, parse_trace
from divcritic.terms import App, Var

FIXTURES = Path(__file__).parent / "fixtures"
THEORIES = FIXTURES / "theories"
TRACES = FIXTURES / "traces"


def theory_file(name: str):
    return load_theory(THEORIES / f"{name}.th")


def theory(name: str):
    return theory_file(name).theory


def trace(name: str, th=None):
    th = th or theory(name)
    return parse_trace((TRACES / f"{name}.trace").read_text(), th.signature)[1]


def term(text: str, th, sort=None):
    return parse_term(text, th.signature, sort)


def ann(text: str, th, sort=None):
    return parse_annotated(text, th.signature, sort)


def eq(text: str, th) -> Equation:
    lhs, rhs = text.split(" = ")
    left = parse_term(lhs, th.signature)
    return Equation(left, parse_term(rhs, th.signature, left.sort))


@pytest.fixture(scope="session")
def nat():
    return theory("row02")


@pytest.fixture(scope="session")
def lists():
    return theory("row04")


MUTUAL = """sort nat
sort bool
cons 0 : -> nat
cons s : nat -> nat
cons true : -> bool
cons false : -> bool
fun plus : nat nat -> nat rec(2)
fun even_m : nat -> bool rec(1)
fun odd_m : nat -> bool rec(1)
rule plus(X, 0) = X
rule plus(X, s(Y)) = s(plus(X, Y))
rule even_m(0) = true
rule even_m(s(X)) = odd_m(X)
rule odd_m(0) = false
rule odd_m(s(X)) = even_m(X)
"""


@pytest.fixture(scope="session")
def mutual():
    return parse_theory(MUTUAL).theory


def interleaved(th):
    goals = [
        "even_m(plus(X, X))",
        "odd_m(plus(s(X), X))",
        "even_m(plus(s(s(X)), X))",
        "odd_m(plus(s(s(s(X))), X))",
        "even_m(plus(s(s(s(s(X)))), X))",
        "odd_m(plus(s(s(s(s(s(X))))), X))",
    ]
    return [TraceEquation(f"g{i}", None, eq(g + " = true", th)) for i, g in enumerate(goals)]


# --- random well-sorted terms ---------------------------------------------------------

NAT_VARS = [Var("X", "nat"), Var("Y", "nat")]
LIST_VARS = [Var("L", "list"), Var("M", "list")]


def _leaf(sort: str, ground: bool):
    if sort == "nat":
        opts = [App("0", (), "nat")] + ([] if ground else NAT_VARS)
    else:
        opts = [App("nil", (), "list")] + ([] if ground else LIST_VARS)
    return st.sampled_from(opts)


def terms(sort: str = "nat", size: int = 6, ground: bool = False, defined: bool = True):
    """Well-sorted terms over nat/list with plus, len and app (when ``defined``)."""
    if size <= 1:
        return _leaf(sort, ground)
    sub = lambda s, k: terms(s, k, ground, defined)  # noqa: E731
    if sort == "nat":
        options = [_leaf("nat", ground), sub("nat", size - 1).map(lambda a: App("s", (a,), "nat"))]
        if defined:
            options.append(
                st.tuples(sub("nat", size // 2), sub("nat", size // 2)).map(lambda p: App("plus", p, "nat"))
            )
            options.append(sub("list", size - 1).map(lambda a: App("len", (a,), "nat")))
    else:
        options = [
            _leaf("list", ground),
            st.tuples(sub("nat", size // 2), sub("list", size // 2)).map(lambda p: App("cons", p, "list")),
        ]
        if defined:
            options.append(
                st.tuples(sub("list", size // 2), sub("list", size // 2)).map(lambda p: App("app", p, "list"))
            )
    return st.one_of(*options)


def node_count(t) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(node_count(a) for a in t.args)
