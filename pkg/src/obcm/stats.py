"""Two-sample Wilcoxon rank-sum (Mann-Whitney U) test."""

import math
from dataclasses import dataclass

from .errors import ParameterError

EXACT_MAX_TOTAL = 16
ALPHA = 0.05


@dataclass(frozen=True)
class TestResult:
    __test__ = False  # not a pytest class

    u_statistic: float
    rank_sum: float
    p_two_sided: float
    p_less: float
    method: str


def midranks(values):
    """1-based ranks with ties sharing the mean of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j) / 2 + 1
        for t in range(i, j + 1):
            ranks[order[t]] = rank
        i = j + 1
    return ranks


def u_distribution(na, nb):
    """Counts of each U value over all C(na+nb, na) rank assignments.

    ``counts[u]`` is the number of ways ``na`` of ``na+nb`` distinct ranks give
    ``U = u``; built with the usual recurrence on the largest rank.
    """
    # table[i][j] holds the count list for sample sizes (i, j)
    table = [[None] * (nb + 1) for _ in range(na + 1)]
    for i in range(na + 1):
        for j in range(nb + 1):
            if i == 0 or j == 0:
                table[i][j] = [1]
                continue
            # largest rank belongs to a: contributes j to U; else contributes 0
            with_a = [0] * j + table[i - 1][j]
            without = table[i][j - 1]
            size = i * j + 1
            counts = [0] * size
            for u, w in enumerate(with_a):
                counts[u] += w
            for u, w in enumerate(without):
                counts[u] += w
            table[i][j] = counts
    return table[na][nb]


def wilcoxon_rank_sum(a, b):
    """Rank-sum test; ``p_less`` is for ``a`` tending to be smaller than ``b``.

    Exact when the pooled sample has at most ``EXACT_MAX_TOTAL`` values and no
    ties, otherwise a normal approximation with tie-corrected variance and a
    continuity correction of 0.5.
    """
    a = [float(x) for x in a]
    b = [float(x) for x in b]
    na, nb = len(a), len(b)
    if na == 0 or nb == 0:
        raise ParameterError("both samples need at least one value")
    pooled = a + b
    ranks = midranks(pooled)
    rank_sum = sum(ranks[:na])
    u = rank_sum - na * (na + 1) / 2
    ties = len(set(pooled)) < len(pooled)

    if na + nb <= EXACT_MAX_TOTAL and not ties:
        counts = u_distribution(na, nb)
        total = sum(counts)
        k = int(round(u))
        lower = sum(counts[: k + 1]) / total
        upper = sum(counts[k:]) / total
        return TestResult(u, rank_sum, min(1.0, 2 * min(lower, upper)), lower, "exact")

    n = na + nb
    mean = na * nb / 2
    tie_term = 0.0
    i = 0
    sorted_vals = sorted(pooled)
    while i < n:
        j = i
        while j + 1 < n and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        t = j - i + 1
        tie_term += t ** 3 - t
        i = j + 1
    var = na * nb / 12 * ((n + 1) - tie_term / (n * (n - 1)))
    if var <= 0:
        return TestResult(u, rank_sum, 1.0, 1.0, "normal_approximation")
    sd = math.sqrt(var)
    z_two = max(abs(u - mean) - 0.5, 0.0) / sd
    p_two = min(1.0, 2 * _norm_sf(z_two))
    p_less = _norm_cdf((u - mean + 0.5) / sd)
    return TestResult(u, rank_sum, p_two, min(1.0, p_less), "normal_approximation")


def _norm_cdf(z):
    return 0.5 * math.erfc(-z / math.sqrt(2))


def _norm_sf(z):
    return 0.5 * math.erfc(z / math.sqrt(2))
