"""Type checking, ground-instance disproving and subsumption pruning of lemmas."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .rewrite import (
    DEFAULT_FUEL,
    Equation,
    FuelExhausted,
    Normalizer,
    Theory,
    ground_substitutions,
    is_constructor_ground,
    subsumes,
)
from .terms import Signature, check_sorts, substitute


@dataclass(frozen=True)
class DisproverConfig:
    depth: int = 3
    max_instances: int = 500
    fuel: int = DEFAULT_FUEL


@dataclass(frozen=True)
class Counterexample:
    sigma: dict
    lhs_normal: object
    rhs_normal: object

    def __str__(self) -> str:
        binds = ", ".join(f"{v.name}={t}" for v, t in self.sigma.items())
        return f"{{{binds}}}: {self.lhs_normal} != {self.rhs_normal}"


def type_check(eq: Equation, sig: Signature) -> bool:
    return eq.lhs.sort == eq.rhs.sort and check_sorts(eq.lhs, sig) and check_sorts(eq.rhs, sig)


def disprove(eq: Equation, theory: Theory, cfg: DisproverConfig | None = None) -> Counterexample | None:
    """First ground instance whose sides normalize to different constructor terms.

    Instances whose normal forms keep defined symbols, or that run out of
    fuel, are skipped rather than counted as refutations.
    """
    cfg = cfg or DisproverConfig()
    nz = Normalizer(theory, cfg.fuel)
    sig = theory.signature
    for sigma in itertools.islice(ground_substitutions(eq.variables(), sig, cfg.depth), cfg.max_instances):
        nz.refuel(cfg.fuel)
        try:
            left = nz.normalize(substitute(sigma, eq.lhs))
            right = nz.normalize(substitute(sigma, eq.rhs))
        except FuelExhausted:
            continue
        if left != right and is_constructor_ground(left, sig) and is_constructor_ground(right, sig):
            return Counterexample(sigma, left, right)
    return None


def _rule_equations(theory: Theory) -> list:
    # a lemma carries no conditions, so only unconditional rules can subsume it
    return [r.equation for r in theory.rules if not r.conditions]


def dedup_subsumed(lemmas: list, theory: Theory | None = None, key=lambda x: x.erased) -> list:
    """Drop lemmas subsumed by a theory rule or by another lemma; the first of several variants stays."""
    rules = _rule_equations(theory) if theory is not None else []
    eqs = [key(x) for x in lemmas]
    keep = []
    for i, e in enumerate(eqs):
        if any(subsumes(r, e) for r in rules):
            continue
        beaten = False
        for j, f in enumerate(eqs):
            if j == i or any(subsumes(r, f) for r in rules):
                continue
            if subsumes(f, e) and (not subsumes(e, f) or j < i):
                beaten = True
                break
        if not beaten:
            keep.append(lemmas[i])
    return keep
