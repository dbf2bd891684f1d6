"""Command-line front end.

Exit codes: 0 when lemmas are produced or a proof is found, 1 when the
input diverges (or shows no pattern) and nothing survives, 2 on input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .critic import CriticConfig, run_critic
from .diffmatch import all_matches, maximal_match
from .filters import DisproverConfig
from .harness import ProverConfig, critic_loop
from .rewrite import DEFAULT_FUEL, RuleError
from .syntax import ParseError, format_theory, format_trace, load_theory, parse_term, parse_trace
from .terms import SortError

EXIT_OK, EXIT_NO_LEMMA, EXIT_INPUT = 0, 1, 2


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("theory", help="theory file")
    p.add_argument("--window", type=int, default=3)
    p.add_argument("--disprove-depth", type=int, default=3)
    p.add_argument("--disprove-max", type=int, default=500)
    p.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    p.add_argument("--max-inductions", type=int, default=6)
    p.add_argument("--assume-lemmas", action="store_true")
    p.add_argument("--emit-trace", metavar="PATH")
    p.add_argument("--quiet", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="divcritic", description="Divergence critic for inductive equational proofs.")
    sub = ap.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("speculate", help="speculate lemmas from a trace or from a fresh proof attempt")
    _add_common(sp)
    sp.add_argument("--trace", help="trace file to analyze instead of running the prover")
    pp = sub.add_parser("prove", help="run the prover with the critic loop on every conjecture")
    _add_common(pp)
    dp = sub.add_parser("diffmatch", help="difference match SUBJECT against TARGET")
    dp.add_argument("theory")
    dp.add_argument("subject")
    dp.add_argument("target")
    dp.add_argument("--all", action="store_true", help="print every match, not just the maximal one")
    cp = sub.add_parser("check", help="parse a theory and print it back")
    cp.add_argument("theory")
    return ap


def _prover_config(a) -> ProverConfig:
    return ProverConfig(a.max_inductions, a.fuel, a.window, a.disprove_depth, a.disprove_max, a.assume_lemmas)


def _out(a, text: str) -> None:
    if not getattr(a, "quiet", False):
        sys.stdout.write(text)


def _speculate(a) -> int:
    tf = load_theory(a.theory)
    if a.trace:
        _, trace = parse_trace(Path(a.trace).read_text(encoding="utf-8"), tf.theory.signature)
        cfg = CriticConfig(a.window, DisproverConfig(a.disprove_depth, a.disprove_max, a.fuel))
        report = run_critic(trace, tf.theory, cfg)
        _out(a, report.render())
        return EXIT_OK if report.lemmas else EXIT_NO_LEMMA
    return _loop(a, tf)


def _loop(a, tf) -> int:
    if not tf.conjectures:
        sys.stderr.write("error: theory declares no conjecture\n")
        return EXIT_INPUT
    ok = True
    traces = []
    for conj in tf.conjectures:
        rep = critic_loop(conj, tf.theory, _prover_config(a))
        traces.extend(rep.rounds[0].outcome.trace)
        _out(a, rep.render())
        ok = ok and (rep.proved or bool(rep.lemmas))
    if a.emit_trace:
        Path(a.emit_trace).write_text(format_trace(traces, a.theory), encoding="utf-8")
    return EXIT_OK if ok else EXIT_NO_LEMMA


def _diffmatch(a) -> int:
    sig = load_theory(a.theory).theory.signature
    subject = parse_term(a.subject, sig)
    target = parse_term(a.target, sig, subject.sort)
    if a.all:
        ms = all_matches(subject, target)
        for m in sorted(ms, key=lambda m: (m.front_positions, str(m.annotated))):
            print(m.annotated)
        return EXIT_OK if ms else EXIT_NO_LEMMA
    m = maximal_match(subject, target)
    if m is None:
        print("no difference match")
        return EXIT_NO_LEMMA
    print(m.annotated)
    return EXIT_OK


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    try:
        if a.command == "check":
            sys.stdout.write(format_theory(load_theory(a.theory)))
            return EXIT_OK
        if a.command == "diffmatch":
            return _diffmatch(a)
        if a.command == "speculate":
            return _speculate(a)
        return _loop(a, load_theory(a.theory))
    except (ParseError, SortError, RuleError, OSError, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
