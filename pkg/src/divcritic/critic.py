"""The divergence critic pipeline: detect, speculate, filter, generalize, prune, merge."""

from __future__ import annotations

from dataclasses import dataclass, field

from .divergence import detect_patterns, partition_trace
from .filters import DisproverConfig, dedup_subsumed, disprove, type_check
from .generalize import generalize, merge_lemmas
from .rewrite import Theory
from .speculate import speculate_all
from .syntax import format_equation


@dataclass(frozen=True)
class CriticConfig:
    window: int = 3
    disprover: DisproverConfig = DisproverConfig()


@dataclass
class CriticReport:
    inputs: list
    patterns: list = field(default_factory=list)
    speculated: list = field(default_factory=list)  # after type check and disprover
    refuted: list = field(default_factory=list)
    generalized: list = field(default_factory=list)
    deduplicated: list = field(default_factory=list)
    merged: list = field(default_factory=list)

    @property
    def lemmas(self) -> list:
        return self.merged

    @property
    def diverged(self) -> bool:
        return bool(self.patterns)

    def render(self) -> str:
        def block(title: str, items: list) -> list:
            return [f"{title}:", *items, ""]

        out = block("Equations input", [format_equation(te.equation.lhs, te.equation.rhs) for te in self.inputs])
        if not self.patterns:
            out.append("no divergence pattern")
            return "\n".join(out) + "\n"
        out += block("Lemmas speculated", [str(x) for x in self.speculated])
        out += block("Deleting lemmas subsumed", [str(x) for x in self.deduplicated])
        out += block("Merging remaining lemmas", [str(x) for x in self.merged])
        if not self.merged:
            out.append("divergence detected but no lemma survives")
        return "\n".join(out) + "\n"


def run_critic(trace: list, theory: Theory, cfg: CriticConfig | None = None) -> CriticReport:
    cfg = cfg or CriticConfig()
    report = CriticReport(list(trace))
    for seq in partition_trace(trace):
        report.patterns.extend(detect_patterns(seq, cfg.window))
    if not report.patterns:
        return report
    for lem in speculate_all(report.patterns, theory):
        eq = lem.erased
        if not type_check(eq, theory.signature):
            continue
        if disprove(eq, theory, cfg.disprover) is not None:
            report.refuted.append(lem)
            continue
        report.speculated.append(lem)
    report.generalized = [generalize(x, theory, cfg.disprover) for x in report.speculated]
    report.deduplicated = dedup_subsumed(report.generalized, theory)
    report.merged = dedup_subsumed(merge_lemmas(report.deduplicated, theory.signature), theory)
    return report
