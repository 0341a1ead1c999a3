"""Nonparametric comparison statistics for evaluation runs.

Wilcoxon rank-sum (Mann-Whitney) two-sided p-values: exact by
enumeration for small samples, normal approximation with tie correction
otherwise.  Vargha-Delaney A12 as the effect size.
"""

from __future__ import annotations

import math
from itertools import combinations

EXACT_LIMIT = 12  # enumerate all C(n+m, n) splits up to this pooled size


def _midranks(pooled: list[float]) -> list[float]:
    """Fractional ranks (1-based); ties get the mean of their rank span."""
    order = sorted(range(len(pooled)), key=lambda i: pooled[i])
    ranks = [0.0] * len(pooled)
    i = 0
    while i < len(order):
        j = i
        while j < len(order) and pooled[order[j]] == pooled[order[i]]:
            j += 1
        avg = (i + j + 1) / 2  # mean of 1-based ranks i+1..j
        for k in range(i, j):
            ranks[order[k]] = avg
        i = j
    return ranks


def rank_sum_statistic(sample_a: list[float], sample_b: list[float]) -> float:
    """Mann-Whitney U for sample_a computed from midranks."""
    n, m = len(sample_a), len(sample_b)
    ranks = _midranks(list(sample_a) + list(sample_b))
    r_a = sum(ranks[:n])
    return r_a - n * (n + 1) / 2


def _exact_p(sample_a: list[float], sample_b: list[float]) -> float:
    """Two-sided exact p: share of label assignments with |U - nm/2| at
    least as large as observed, conditioning on the pooled values."""
    n, m = len(sample_a), len(sample_b)
    pooled = list(sample_a) + list(sample_b)
    ranks = _midranks(pooled)
    offset = n * (n + 1) / 2
    center = n * m / 2
    observed = abs(sum(ranks[:n]) - offset - center)
    hits = 0
    total = 0
    for combo in combinations(range(n + m), n):
        u = sum(ranks[i] for i in combo) - offset
        if abs(u - center) >= observed - 1e-12:
            hits += 1
        total += 1
    return hits / total


def _approx_p(sample_a: list[float], sample_b: list[float]) -> float:
    """Normal approximation with tie correction."""
    n, m = len(sample_a), len(sample_b)
    pooled = list(sample_a) + list(sample_b)
    u = rank_sum_statistic(sample_a, sample_b)
    mean = n * m / 2
    size = n + m
    # tie correction factor over group sizes
    tie_sum = 0
    seen: dict[float, int] = {}
    for v in pooled:
        seen[v] = seen.get(v, 0) + 1
    for count in seen.values():
        tie_sum += count ** 3 - count
    var = n * m / 12 * ((size + 1) - tie_sum / (size * (size - 1)))
    if var <= 0:
        return 1.0
    z = (abs(u - mean) - 0.5) / math.sqrt(var)  # continuity correction
    if z < 0:
        z = 0.0
    p = math.erfc(z / math.sqrt(2))
    return min(1.0, p)


def wilcoxon_rank_sum(sample_a: list[float], sample_b: list[float]) -> float:
    """Two-sided rank-sum p-value; exact when n+m <= 12."""
    if not sample_a or not sample_b:
        raise ValueError("samples must be non-empty")
    if len(sample_a) + len(sample_b) <= EXACT_LIMIT:
        return _exact_p(sample_a, sample_b)
    return _approx_p(sample_a, sample_b)


def vargha_delaney_a12(sample_a: list[float], sample_b: list[float]) -> float:
    """P(a > b) + 0.5 P(a = b) over all cross pairs."""
    if not sample_a or not sample_b:
        raise ValueError("samples must be non-empty")
    more = same = 0
    for a in sample_a:
        for b in sample_b:
            if a > b:
                more += 1
            elif a == b:
                same += 1
    return (more + 0.5 * same) / (len(sample_a) * len(sample_b))
