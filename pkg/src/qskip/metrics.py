"""Success probability, expected oracle-call cost, and efficiency.

Cost convention: a run with k search iterations budgets 2k expensive
calls (the rigid baseline always pays exactly that). The skip variants
are credited by their skip rate: the ancilla probe after iteration t
reads r_t = P(anc=1), which equals the joint weight of (control live,
flag raised); dividing by the control-branch weight 1/2 turns it into
the conditional skip probability s_t = P(flag | control live). The
expected count is the budget scaled by the mean skip rate,

    2k * (1 - mean_t s_t)  ==  2k - sum_t s_t / 0.5,

so a variant that skips 25% of its iterations spends 4.5 of a 6-call
budget. Noisy runs feed the trajectory-averaged probe readings through
the same normalization (always the ideal 1/2, never a measured branch
weight).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .builders import SuccessRule, Variant
from .errors import ConfigurationError


@dataclass(frozen=True)
class RunMetrics:
    p_succ: float
    stderr: float
    expected_ub: float
    efficiency: float | None


def p_succ(histogram: dict, rule=SuccessRule.BOTH_FLAGS) -> tuple[float, float]:
    """Success fraction and its binomial standard error.

    Histogram keys are bitstrings, last declared measurement leftmost;
    with flag measurements (fA, fB) the key reads "fB fA". BOTH_FLAGS
    counts only "11"; FB_ONLY counts every outcome with the fB bit set.
    """
    rule = SuccessRule(rule)
    shots = sum(histogram.values())
    if shots <= 0:
        raise ConfigurationError("histogram holds no shots")
    if rule is SuccessRule.BOTH_FLAGS:
        good = histogram.get("11", 0)
    else:
        good = sum(v for key, v in histogram.items() if key[0] == "1")
    p = good / shots
    return p, math.sqrt(p * (1.0 - p) / shots)


def expected_ub(probes: dict, k: int, variant=Variant.QSG_SWAPOUT) -> float:
    """Expected number of expensive-subroutine calls across k iterations."""
    variant = Variant(variant)
    if k < 0:
        raise ConfigurationError(f"k must be non-negative, got {k}")
    if k == 0:
        return 0.0
    if variant is Variant.FIXED:
        return 2.0 * k
    total = 2.0 * k
    for t in range(1, k + 1):
        label = f"a=1@iter {t}"
        if label not in probes:
            raise ConfigurationError(
                f"missing probe {label!r} needed for the expected call count")
        # raw joint reading -> conditional skip probability, capped at
        # certainty (noisy averages can wander past the ideal 0.5)
        s = min(1.0, probes[label] / 0.5)
        total -= s / 0.5
    return max(0.0, total)


def efficiency(p: float, ub: float) -> float | None:
    """Success per expensive call; undefined when no calls are made."""
    if ub <= 0.0:
        return None
    return p / ub


def summarize(histogram: dict, probes: dict, k: int, variant,
              rule=SuccessRule.BOTH_FLAGS) -> RunMetrics:
    p, se = p_succ(histogram, rule)
    ub = expected_ub(probes, k, variant)
    return RunMetrics(p_succ=p, stderr=se, expected_ub=ub,
                      efficiency=efficiency(p, ub))
