"""Exact optimum for small free layers.

``exact_dp`` runs the subset recurrence

    f(empty) = 0
    f(S) = min_{v in S} f(S - v) + sum_{u in S - v} c[u][v]

where ``v`` is the rightmost vertex among ``S``. Subsets are processed one
popcount layer at a time with numpy. ``brute_force`` enumerates every
permutation and is only there to check the recurrence.
"""

import itertools
from math import comb

import numpy as np

from .errors import SizeError
from .instance import Ordering

DP_MAX_N2 = 24
BRUTE_MAX_N2 = 9
_CHUNK = 1 << 16


def exact_dp(table):
    """Return ``(optimum, ordering)``; ties resolve to the lowest-id last vertex."""
    n = table.n2
    if n > DP_MAX_N2:
        raise SizeError(f"exact_dp supports n2 <= {DP_MAX_N2}, got {n}")
    if n <= 1:
        return 0, Ordering.identity(n)
    c = table.c.astype(np.float64)
    full = (1 << n) - 1
    f = np.zeros(1 << n, dtype=np.int64)
    last = np.zeros(1 << n, dtype=np.int8)
    subsets = np.arange(1 << n, dtype=np.int64)
    popcount = np.zeros(1 << n, dtype=np.int8)
    for b in range(n):
        popcount += ((subsets >> b) & 1).astype(np.int8)
    by_layer = np.argsort(popcount, kind="stable")
    bounds = np.concatenate(([0], np.cumsum([comb(n, k) for k in range(n + 1)])))
    bit = np.int64(1) << np.arange(n, dtype=np.int64)
    big = np.iinfo(np.int64).max // 4
    for k in range(1, n + 1):
        layer = by_layer[bounds[k]:bounds[k + 1]]
        for start in range(0, len(layer), _CHUNK):
            block = layer[start:start + _CHUNK]
            member = (block[:, None] & bit[None, :]) != 0
            # cost of placing v last: sum_{u in S} c[u][v], with c[v][v] = 0
            cost = np.rint(member.astype(np.float64) @ c).astype(np.int64)
            prev = f[block[:, None] ^ bit[None, :]]
            cand = np.where(member, prev + cost, big)
            best = np.argmin(cand, axis=1)
            f[block] = cand[np.arange(len(block)), best]
            last[block] = best
    order = []
    s = full
    while s:
        v = int(last[s])
        order.append(v)
        s ^= 1 << v
    order.reverse()
    return int(f[full]), Ordering(tuple(order))


def brute_force(table):
    """Enumerate all permutations; return the lexicographically first optimum."""
    n = table.n2
    if n > BRUTE_MAX_N2:
        raise SizeError(f"brute_force supports n2 <= {BRUTE_MAX_N2}, got {n}")
    if n <= 1:
        return 0, Ordering.identity(n)
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    total = np.zeros(len(perms), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            total += table.c[perms[:, i], perms[:, j]]
    best = int(np.argmin(total))
    return int(total[best]), Ordering(tuple(perms[best].tolist()))
