"""Deterministic baselines: barycenter, median and sifting."""

import numpy as np

from .crossings import apply_jump, jump_delta_scan
from .instance import Ordering, as_perm

MAX_SIFTING_ROUNDS = 10


def barycenter_keys(inst):
    return [sum(nbrs) / len(nbrs) if nbrs else -1.0 for nbrs in inst.adjacency]


def median_keys(inst):
    return [nbrs[(len(nbrs) - 1) // 2] if nbrs else -1 for nbrs in inst.adjacency]


def barycenter(inst):
    """Order by mean neighbour position; isolated vertices first, ties by id."""
    keys = barycenter_keys(inst)
    return Ordering(tuple(sorted(range(inst.n2), key=lambda v: keys[v])))


def median(inst):
    """Order by left median neighbour position, then barycenter, then id."""
    med = median_keys(inst)
    bary = barycenter_keys(inst)
    return Ordering(tuple(sorted(range(inst.n2), key=lambda v: (med[v], bary[v]))))


def sifting(table, start):
    """Jump each vertex to its best position, highest degree first.

    A round visits vertices by decreasing degree (ties by id) and moves each
    to the leftmost position of minimum crossings, which may be where it
    already is. Rounds repeat until one gains nothing, at most
    ``MAX_SIFTING_ROUNDS`` times.
    """
    perm = as_perm(start).copy()
    n = len(perm)
    if n < 2:
        return Ordering(tuple(perm.tolist()))
    if table.degrees is not None:
        weight = np.asarray(table.degrees)
    else:
        # tables built from a bare matrix carry no degrees; rank by total pair weight
        weight = (table.c + table.c.T).sum(axis=1)
    visit = sorted(range(n), key=lambda v: (-weight[v], v))
    pos = np.empty(n, dtype=np.int64)
    for _ in range(MAX_SIFTING_ROUNDS):
        improved = 0
        for v in visit:
            pos[perm] = np.arange(n)
            i = int(pos[v])
            deltas = jump_delta_scan(table, perm, i)
            j = int(np.argmin(deltas))
            improved -= int(deltas[j])
            apply_jump(perm, i, j)
        if improved == 0:
            break
    return Ordering(tuple(perm.tolist()))
