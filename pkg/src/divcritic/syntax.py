"""Concrete syntax: terms, annotated terms, theory files and trace files.

Theory files are line oriented, ``#`` starts a comment::

    sort nat
    cons 0 : -> nat
    cons s : nat -> nat
    fun plus : nat nat -> nat rec(2)
    rule plus(X, 0) = X
    crule lt(X, Y) = true => insert(X, cons(Y, Z)) = cons(X, cons(Y, Z))
    conjecture dbl(N) = plus(N, N)

Identifiers starting with an uppercase letter are variables.  A variable may
carry an explicit sort, ``X:nat``, which is only needed when nothing else
fixes it.  Annotated terms write a wave-front as ``{f(..., <hole>, ...)}``.

Trace files::

    theory dbl.thy
    eq 1 parent=- dbl(X) = plus(X, X)
    eq 2 parent=1 s(plus(X, X)) = plus(s(X), X)
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .terms import App, FunctionSymbol, Signature, SortError, Term, Var, subterms

_TOKEN = re.compile(r"\s*(?:(=>)|([A-Za-z0-9_][A-Za-z0-9_']*)|(.))")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


# --- formatting --------------------------------------------------------------


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        body = t.fn
    else:
        parts = []
        for i, a in enumerate(t.args, 1):
            s = format_term(a)
            parts.append(f"<{s}>" if t.hole == i else s)
        body = f"{t.fn}({', '.join(parts)})"
    return "{" + body + "}" if t.hole is not None else body


def format_equation(lhs: Term, rhs: Term) -> str:
    return f"{format_term(lhs)} = {format_term(rhs)}"


# --- tokenizer and term parser --------------------------------------------------


@dataclass
class _Tokens:
    text: str
    line: int = 0
    toks: list = field(default_factory=list)
    i: int = 0

    def __post_init__(self):
        pos = 0
        while pos < len(self.text):
            m = _TOKEN.match(self.text, pos)
            if m is None or m.end() == pos:
                break
            if m.group(0).strip():
                tok = m.group(1) or m.group(2) or m.group(3)
                self.toks.append((tok, m.start(m.lastindex) + 1))
            pos = m.end()

    def peek(self) -> str | None:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def column(self) -> int:
        if self.i < len(self.toks):
            return self.toks[self.i][1]
        return len(self.text) + 1

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.line, self.column())

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.peek()
        if got != tok:
            raise self.error(f"expected {tok!r}, found {got!r}")
        self.i += 1

    def at_end(self) -> bool:
        return self.i >= len(self.toks)


@dataclass
class _Raw:
    """Untyped parse tree; sorts are attached afterwards."""

    name: str
    args: list
    is_var: bool
    hole: int | None = None
    sort: str | None = None
    column: int = 0


def _is_var_name(name: str) -> bool:
    return name[0].isupper()


def _parse_raw(tk: _Tokens, annotated: bool) -> _Raw:
    col = tk.column()
    if tk.peek() == "{":
        if not annotated:
            raise tk.error("wave-front annotation not allowed here")
        tk.next()
        inner = _parse_raw(tk, annotated)
        tk.expect("}")
        if inner.is_var or inner.hole is not None:
            raise ParseError("a wave-front must wrap a function application", tk.line, col)
        holes = [i for i, a in enumerate(inner.args, 1) if getattr(a, "_marked", False)]
        if len(holes) != 1:
            raise ParseError("a wave-front needs exactly one <wave-hole>", tk.line, col)
        inner.hole = holes[0]
        inner.args[holes[0] - 1]._marked = False
        return inner
    if tk.peek() == "<":
        if not annotated:
            raise tk.error("wave-hole annotation not allowed here")
        tk.next()
        inner = _parse_raw(tk, annotated)
        tk.expect(">")
        inner._marked = True
        return inner
    name = tk.next()
    if not re.fullmatch(r"[A-Za-z0-9_][A-Za-z0-9_']*", name):
        raise ParseError(f"unexpected {name!r}", tk.line, col)
    if _is_var_name(name):
        sort = None
        if tk.peek() == ":":
            tk.next()
            sort = tk.next()
        return _Raw(name, [], True, sort=sort, column=col)
    args = []
    if tk.peek() == "(":
        tk.next()
        if tk.peek() != ")":
            while True:
                args.append(_parse_raw(tk, annotated))
                if tk.peek() == ",":
                    tk.next()
                    continue
                break
        tk.expect(")")
    return _Raw(name, args, False, column=col)


def _check_unmarked(r: _Raw, tk: _Tokens) -> None:
    if getattr(r, "_marked", False):
        raise ParseError("wave-hole outside a wave-front", tk.line, r.column)
    for a in r.args:
        _check_unmarked(a, tk)


def _infer(raw: _Raw, sig: Signature, env: dict, line: int, expected: str | None = None) -> None:
    if raw.is_var:
        sort = raw.sort or expected
        if sort is not None:
            if sort not in sig.sorts:
                raise ParseError(f"unknown sort {sort!r}", line, raw.column)
            prev = env.setdefault(raw.name, sort)
            if prev != sort:
                raise ParseError(
                    f"sort error: variable {raw.name} used at sorts {prev} and {sort}", line, raw.column
                )
        return
    if not sig.has_symbol(raw.name):
        raise ParseError(f"unknown symbol {raw.name!r}", line, raw.column)
    f = sig.symbol(raw.name)
    if len(raw.args) != f.arity:
        raise ParseError(
            f"arity mismatch: {raw.name} expects {f.arity} arguments, got {len(raw.args)}", line, raw.column
        )
    if expected is not None and f.result_sort != expected:
        raise ParseError(f"sort error: {raw.name} has sort {f.result_sort}, expected {expected}", line, raw.column)
    for a, s in zip(raw.args, f.arg_sorts):
        _infer(a, sig, env, line, s)


def _sort_of(raw: _Raw, sig: Signature, env: dict) -> str | None:
    if raw.is_var:
        return env.get(raw.name)
    return sig.symbol(raw.name).result_sort


def _build(raw: _Raw, sig: Signature, env: dict, line: int) -> Term:
    if raw.is_var:
        if raw.name not in env:
            raise ParseError(f"cannot infer the sort of variable {raw.name}", line, raw.column)
        return Var(raw.name, env[raw.name])
    f = sig.symbol(raw.name)
    return App(raw.name, tuple(_build(a, sig, env, line) for a in raw.args), f.result_sort, raw.hole)


def _typed_group(raws: list, sig: Signature, line: int, env: dict | None = None) -> list:
    """Infer sorts jointly for terms given as (raw, expected_sort_or_partner) pairs.

    ``raws`` is a list of pairs of raw terms that must share a sort
    (``(lhs, rhs)``) or single raws with a fixed expected sort ``(raw, "sort")``.
    """
    env = {} if env is None else env
    for a, b in raws:
        if isinstance(b, str):
            _infer(a, sig, env, line, b)
            continue
        _infer(a, sig, env, line)
        _infer(b, sig, env, line)
    # second pass: equation sides fix each other's root variables
    changed = True
    while changed:
        changed = False
        for a, b in raws:
            if isinstance(b, str):
                continue
            sa, sb = _sort_of(a, sig, env), _sort_of(b, sig, env)
            if sa is not None and sb is not None and sa != sb:
                raise ParseError(f"sort error: sides have sorts {sa} and {sb}", line, b.column)
            if sa is None and sb is not None:
                _infer(a, sig, env, line, sb)
                changed = True
            elif sb is None and sa is not None:
                _infer(b, sig, env, line, sa)
                changed = True
    out = []
    for a, b in raws:
        out.append(_build(a, sig, env, line))
        if not isinstance(b, str):
            out.append(_build(b, sig, env, line))
    return out


def parse_term(text: str, sig: Signature, sort: str | None = None, annotated: bool = False) -> Term:
    tk = _Tokens(text)
    raw = _parse_raw(tk, annotated)
    if not tk.at_end():
        raise tk.error(f"unexpected {tk.peek()!r}")
    _check_unmarked(raw, tk)
    env: dict = {}
    _infer(raw, sig, env, 0, sort)
    return _build(raw, sig, env, 0)


def parse_annotated(text: str, sig: Signature, sort: str | None = None) -> Term:
    return parse_term(text, sig, sort, annotated=True)


def _parse_eq_raw(tk: _Tokens, annotated: bool = False) -> tuple:
    lhs = _parse_raw(tk, annotated)
    tk.expect("=")
    rhs = _parse_raw(tk, annotated)
    _check_unmarked(lhs, tk)
    _check_unmarked(rhs, tk)
    return lhs, rhs


def parse_equation(text: str, sig: Signature, annotated: bool = False, line: int = 0) -> tuple:
    tk = _Tokens(text, line)
    lhs, rhs = _parse_eq_raw(tk, annotated)
    if not tk.at_end():
        raise tk.error(f"unexpected {tk.peek()!r}")
    a, b = _typed_group([(lhs, rhs)], sig, line)
    return a, b


# --- theory files ----------------------------------------------------------------


@dataclass
class TheoryFile:
    name: str
    theory: object  # rewrite.Theory
    conjectures: list


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_theory(text: str, name: str = "<theory>") -> TheoryFile:
    from .rewrite import Condition, Equation, RewriteRule, RuleError, Theory

    sorts: list = []
    symbols: list = []
    rules: list = []
    conjectures: list = []
    sig: Signature | None = None
    decl_re = re.compile(
        r"(cons|fun)\s+(\S+)\s*:\s*(.*?)\s*->\s*([A-Za-z0-9_]+)\s*(?:rec\(\s*([0-9,\s]*)\))?\s*$"
    )

    def signature(lineno: int) -> Signature:
        nonlocal sig
        if sig is None:
            try:
                sig = Signature(tuple(sorts), tuple(symbols))
            except SortError as e:
                raise ParseError(str(e), lineno, 1) from None
        return sig

    for lineno, raw_line in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw_line)
        if not line:
            continue
        keyword = line.split(None, 1)[0]
        rest = line[len(keyword):].strip()
        if keyword in ("sort", "cons", "fun") and sig is not None:
            raise ParseError("declarations must precede rules and conjectures", lineno, 1)
        if keyword == "sort":
            if not re.fullmatch(r"[A-Za-z0-9_]+", rest):
                raise ParseError(f"bad sort name {rest!r}", lineno, 6)
            if rest in sorts:
                raise ParseError(f"duplicate declaration of sort {rest}", lineno, 6)
            sorts.append(rest)
        elif keyword in ("cons", "fun"):
            m = decl_re.match(line)
            if not m:
                raise ParseError(f"malformed {keyword} declaration", lineno, 1)
            kind, fname, args, result, rec = m.groups()
            arg_sorts = tuple(s for s in re.split(r"[\s,*]+", args) if s)
            for s in (*arg_sorts, result):
                if s not in sorts:
                    raise ParseError(f"unknown sort {s!r}", lineno, 1)
            if any(f.name == fname for f in symbols):
                raise ParseError(f"duplicate declaration of {fname}", lineno, 1)
            if _is_var_name(fname):
                raise ParseError(f"symbol {fname} must not start with an uppercase letter", lineno, 1)
            positions = frozenset(int(i) for i in re.split(r"[\s,]+", rec or "") if i)
            if kind == "cons" and positions:
                raise ParseError("constructors do not take rec(...)", lineno, 1)
            if not all(1 <= i <= len(arg_sorts) for i in positions):
                raise ParseError("recursive position out of range", lineno, 1)
            symbols.append(FunctionSymbol(fname, arg_sorts, result, kind == "cons", positions))
        elif keyword in ("rule", "crule"):
            s = signature(lineno)
            tk = _Tokens(rest, lineno)
            conds = []
            pairs = []
            if keyword == "crule":
                while True:
                    c = _parse_raw(tk, False)
                    tk.expect("=")
                    pol = tk.next()
                    if pol not in ("true", "false"):
                        raise tk.error("condition must equal true or false")
                    conds.append((c, pol == "true"))
                    if tk.peek() == ",":
                        tk.next()
                        continue
                    tk.expect("=>")
                    break
            lhs, rhs = _parse_eq_raw(tk)
            if not tk.at_end():
                raise tk.error(f"unexpected {tk.peek()!r}")
            for c, _ in conds:
                if c.is_var:
                    raise ParseError("condition must be an application", lineno, c.column)
                cs = s.symbol(c.name).result_sort if s.has_symbol(c.name) else None
                pairs.append((c, cs or "bool"))
            built = _typed_group([(lhs, rhs), *pairs], s, lineno)
            cond_terms = built[2:]
            try:
                for c in cond_terms:
                    if not s.constructors(c.sort) or {f.name for f in s.constructors(c.sort)} < {"true", "false"}:
                        raise RuleError(f"condition {c} is not boolean-valued")
                rules.append(
                    RewriteRule(
                        built[0],
                        built[1],
                        tuple(Condition(c, pol) for c, (_, pol) in zip(cond_terms, conds)),
                        label=f"r{len(rules) + 1}",
                    )
                )
            except RuleError as e:
                raise ParseError(str(e), lineno, 1) from None
        elif keyword == "conjecture":
            s = signature(lineno)
            lhs, rhs = parse_equation(rest, s, line=lineno)
            conjectures.append(Equation(lhs, rhs))
        else:
            raise ParseError(f"unknown keyword {keyword!r}", lineno, 1)
    if not sorts:
        raise ParseError("no sorts declared", 1, 1)
    s = signature(len(text.splitlines()) or 1)
    for so in s.sorts:
        if not s.constructors(so):
            raise ParseError(f"sort {so} has no constructors", 1, 1)
    return TheoryFile(name, Theory(s, tuple(rules)), conjectures)


def load_theory(path: str | Path) -> TheoryFile:
    path = Path(path)
    return parse_theory(path.read_text(encoding="utf-8"), path.stem)


def format_theory(tf: TheoryFile) -> str:
    th = tf.theory
    lines = [f"sort {s}" for s in th.signature.sorts]
    for f in th.signature.symbols:
        kw = "cons" if f.constructor else "fun"
        rec = f" rec({','.join(str(i) for i in sorted(f.recursive))})" if f.recursive else ""
        args = "".join(f"{a} " for a in f.arg_sorts)
        lines.append(f"{kw} {f.name} : {args}-> {f.result_sort}{rec}")
    for r in th.rules:
        eq = format_equation(_typed_vars(r.lhs), _typed_vars(r.rhs))
        if r.conditions:
            conds = ", ".join(
                f"{format_term(_typed_vars(c.term))} = {'true' if c.positive else 'false'}" for c in r.conditions
            )
            lines.append(f"crule {conds} => {eq}")
        else:
            lines.append(f"rule {eq}")
    for c in tf.conjectures:
        lines.append(f"conjecture {format_equation(_typed_vars(c.lhs), _typed_vars(c.rhs))}")
    return "\n".join(lines) + "\n"


def _typed_vars(t: Term) -> Term:
    # sorts of variables are recoverable from positions except at the root
    if isinstance(t, Var):
        return Var(f"{t.name}:{t.sort}", t.sort)
    return t


# --- trace files ----------------------------------------------------------------

_EQ_LINE = re.compile(r"eq\s+(\S+)\s+parent=(\S+)(?:\s+origin=(\S+))?\s+(.*)$")


def parse_trace(text: str, sig: Signature) -> tuple:
    """Parse a trace file; returns (theory path or None, list of TraceEquation)."""
    from .divergence import TraceEquation
    from .rewrite import Equation

    theory_path = None
    out: list = []
    ids: set = set()
    for lineno, raw_line in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw_line)
        if not line:
            continue
        if line.startswith("theory "):
            theory_path = line.split(None, 1)[1].strip()
            continue
        m = _EQ_LINE.match(line)
        if not m:
            raise ParseError("expected 'eq <id> parent=<id|-> <lhs> = <rhs>'", lineno, 1)
        eid, parent, origin, body = m.groups()
        if eid in ids:
            raise ParseError(f"duplicate equation id {eid}", lineno, 1)
        if parent != "-" and parent not in ids:
            raise ParseError(f"parent {parent} does not refer to an earlier equation", lineno, 1)
        col = m.start(4) + 1
        try:
            lhs, rhs = parse_equation(body, sig, line=lineno)
        except ParseError as e:
            raise ParseError(e.message, lineno, col + max(e.column - 1, 0)) from None
        ids.add(eid)
        out.append(
            TraceEquation(
                eid,
                None if parent == "-" else parent,
                Equation(lhs, rhs),
                origin or "induction-goal",
            )
        )
    return theory_path, out


def format_trace(trace: list, theory_path: str | None = None) -> str:
    lines = [f"theory {theory_path}"] if theory_path else []
    for te in trace:
        parent = te.parent if te.parent is not None else "-"
        eq = te.equation
        lines.append(f"eq {te.id} parent={parent} {format_equation(_typed_vars(eq.lhs), _typed_vars(eq.rhs))}")
    return "\n".join(lines) + "\n"


def term_vars_named(t: Term) -> dict:
    return {s.name: s for _, s in subterms(t) if isinstance(s, Var)}
