"""Divergence critic: spot diverging induction attempts and speculate wave-rule lemmas."""

from .critic import CriticConfig, CriticReport, run_critic
from .harness import ProverConfig, critic_loop, prove
from .syntax import load_theory, parse_theory, parse_trace

__all__ = [
    "CriticConfig",
    "CriticReport",
    "ProverConfig",
    "critic_loop",
    "load_theory",
    "parse_theory",
    "parse_trace",
    "prove",
    "run_critic",
]
