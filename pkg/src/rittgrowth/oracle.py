"""Exact limsup/liminf arithmetic on eventually periodic sequences.

The inequality proofs in this domain all reduce to four difference rules
for tail limits of A - B.  On an eventually periodic sequence the tail
limits are just the cycle extrema, and the class is closed under
pointwise difference, so every rule can be checked exactly: a violation
can only ever be an implementation bug, never estimation noise.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass


@dataclass(frozen=True)
class TailSequence:
    """Finite transient followed by a forever-repeated non-empty cycle."""

    transient: tuple[float, ...]
    cycle: tuple[float, ...]

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("cycle must be non-empty")

    def value(self, i: int) -> float:
        if i < len(self.transient):
            return self.transient[i]
        return self.cycle[(i - len(self.transient)) % len(self.cycle)]


def exact_limits(s: TailSequence) -> tuple[float, float]:
    """(limsup, liminf) = (max, min) of the cycle; the transient is irrelevant."""
    return max(s.cycle), min(s.cycle)


def difference(a: TailSequence, b: TailSequence) -> TailSequence:
    """Pointwise a - b, again eventually periodic.

    The combined transient covers both transients and the combined cycle
    runs over lcm(|cycle_a|, |cycle_b|) with the phases each sequence has
    reached by then.
    """
    t = max(len(a.transient), len(b.transient))
    cyc_len = math.lcm(len(a.cycle), len(b.cycle))
    transient = tuple(a.value(i) - b.value(i) for i in range(t))
    cycle = tuple(a.value(t + k) - b.value(t + k) for k in range(cyc_len))
    return TailSequence(transient, cycle)


@dataclass(frozen=True)
class RuleReport:
    name: str
    lhs: float
    rhs: float
    slack: float  # >= 0 means the rule holds
    ok: bool


def check_difference_rules(a: TailSequence, b: TailSequence) -> list[RuleReport]:
    """The four tail-limit rules for A - B, each evaluated exactly.

    liminf(A-B) >= liminf A - limsup B
    limsup(A-B) <= limsup A - liminf B
    liminf(A-B) <= min(liminf A - liminf B, limsup A - limsup B)
    limsup(A-B) >= max(liminf A - liminf B, limsup A - limsup B)
    """
    sup_a, inf_a = exact_limits(a)
    sup_b, inf_b = exact_limits(b)
    d = difference(a, b)
    sup_d, inf_d = exact_limits(d)

    reports = []

    def add(name, lhs, rhs, relation):
        slack = (lhs - rhs) if relation == "ge" else (rhs - lhs)
        reports.append(RuleReport(name, lhs, rhs, slack, slack >= 0.0))

    add("liminf(A-B) >= liminf A - limsup B", inf_d, inf_a - sup_b, "ge")
    add("limsup(A-B) <= limsup A - liminf B", sup_d, sup_a - inf_b, "le")
    add("liminf(A-B) <= min(liminf A - liminf B, limsup A - limsup B)",
        inf_d, min(inf_a - inf_b, sup_a - sup_b), "le")
    add("limsup(A-B) >= max(liminf A - liminf B, limsup A - limsup B)",
        sup_d, max(inf_a - inf_b, sup_a - sup_b), "ge")
    return reports


def random_sequence(rng: random.Random, max_transient: int = 4, max_cycle: int = 6,
                    lo: float = -10.0, hi: float = 10.0) -> TailSequence:
    transient = tuple(rng.uniform(lo, hi) for _ in range(rng.randint(0, max_transient)))
    cycle = tuple(rng.uniform(lo, hi) for _ in range(rng.randint(1, max_cycle)))
    return TailSequence(transient, cycle)


def sweep(instances: int, seed: int) -> tuple[int, int]:
    """(checked rules, violations) over seeded random instance pairs."""
    rng = random.Random(seed)
    checked = violations = 0
    for _ in range(instances):
        a = random_sequence(rng)
        b = random_sequence(rng)
        for report in check_difference_rules(a, b):
            checked += 1
            if not report.ok:
                violations += 1
    return checked, violations
