"""Cross table, crossing counts, and incremental move deltas.

``c[u][v]`` counts the edge pairs ``(u, a), (v, b)`` with ``a > b``: the
crossings charged to the pair when ``u`` is placed left of ``v``. The crossing
number of an ordering is the sum of ``c`` over all pairs in ordering order.

All move deltas are expressed through the antisymmetric matrix
``gain[u][x] = c[x][u] - c[u][x]``, the change in crossings when ``u`` passes
from the left of ``x`` to its right.
"""

import time
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ParameterError
from .instance import as_perm


@dataclass(frozen=True, eq=False)
class CrossTable:
    n2: int
    c: np.ndarray
    build_ops: int = 0
    degrees: tuple = None
    build_seconds: float = field(default=0.0, compare=False)

    def __post_init__(self):
        self.c.setflags(write=False)

    @cached_property
    def gain(self):
        g = self.c.T - self.c
        g.setflags(write=False)
        return g

    @classmethod
    def from_matrix(cls, c):
        c = np.array(c, dtype=np.int64)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ParameterError("cross table must be square")
        return cls(c.shape[0], c)


def build_cross_table(inst):
    """Build the cross table by a two-pointer merge per unordered pair.

    One merge over ``N(u)`` and ``N(v)`` yields both ``c[u][v]`` and the number
    of common neighbours; ``c[v][u]`` follows from
    ``c[u][v] + c[v][u] = deg(u) deg(v) - |N(u) & N(v)|``.
    ``build_ops`` counts one step per table cell plus one per merge advance.
    """
    t0 = time.perf_counter()
    n2 = inst.n2
    adj = inst.adjacency
    c = np.zeros((n2, n2), dtype=np.int64)
    ops = n2 * n2
    for u in range(n2):
        nu = adj[u]
        du = len(nu)
        if du == 0:
            continue
        for v in range(u + 1, n2):
            nv = adj[v]
            dv = len(nv)
            if dv == 0:
                continue
            # for each a in N(u), count b in N(v) with b < a
            less = 0
            common = 0
            uv = 0
            j = 0
            for a in nu:
                while j < dv and nv[j] < a:
                    j += 1
                    less += 1
                    ops += 1
                if j < dv and nv[j] == a:
                    common += 1
                uv += less
                ops += 1
            c[u, v] = uv
            c[v, u] = du * dv - common - uv
    return CrossTable(n2, c, ops, inst.degrees, time.perf_counter() - t0)


def build_ops_bound(inst):
    """``n2^2 + sum_{u<v} (deg u + deg v)``, the scale ``build_ops`` is held to."""
    degs = inst.degrees
    return inst.n2 ** 2 + (inst.n2 - 1) * sum(degs)


def _check_size(table, perm):
    if len(perm) != table.n2:
        raise ParameterError(f"ordering has {len(perm)} vertices, table has {table.n2}")


def crossings_of(table, ordering):
    """Crossing number of ``ordering``: ``sum_{i<j} c[perm[i]][perm[j]]``."""
    perm = as_perm(ordering)
    _check_size(table, perm)
    if len(perm) < 2:
        return 0
    sub = table.c[np.ix_(perm, perm)]
    return int(np.triu(sub, 1).sum())


def count_crossings_direct(inst, ordering):
    """Count crossings from the edge list alone, by merge-sort inversion counting.

    Edges are listed as (fixed position, free position), sorted by fixed
    position then free position; every strict inversion in the resulting
    free-position sequence is one crossing.
    """
    perm = as_perm(ordering)
    if len(perm) != inst.n2:
        raise ParameterError(f"ordering has {len(perm)} vertices, instance has {inst.n2}")
    pos = np.empty(inst.n2, dtype=np.int64)
    pos[perm] = np.arange(inst.n2)
    seq = [p for _, p in sorted((a, int(pos[v])) for v, a in inst.edges)]
    _, inversions = _sort_count(seq)
    return inversions


def _sort_count(seq):
    if len(seq) <= 1:
        return seq, 0
    mid = len(seq) // 2
    left, x = _sort_count(seq[:mid])
    right, y = _sort_count(seq[mid:])
    merged = []
    count = x + y
    i = j = 0
    while i < len(left) and j < len(right):
        if right[j] < left[i]:
            merged.append(right[j])
            count += len(left) - i
            j += 1
        else:
            merged.append(left[i])
            i += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return merged, count


def _check_pos(n, *idx):
    for i in idx:
        if not 0 <= i < n:
            raise ParameterError(f"position {i} out of range [0, {n})")


def delta_adjacent_swap(table, ordering, i):
    perm = as_perm(ordering)
    _check_pos(len(perm) - 1, i)
    return int(table.gain[perm[i], perm[i + 1]])


def delta_exchange(table, ordering, i, j):
    perm = as_perm(ordering)
    _check_pos(len(perm), i, j)
    if i == j:
        raise ParameterError("exchange needs two distinct positions")
    if i > j:
        i, j = j, i
    u, v = perm[i], perm[j]
    mid = perm[i + 1:j]
    g = table.gain
    return int(g[u, v] + g[u, mid].sum() - g[v, mid].sum())


def delta_jump(table, ordering, i, j):
    """Delta of moving the element at position ``i`` so that it ends at ``j``."""
    perm = as_perm(ordering)
    _check_pos(len(perm), i, j)
    u = perm[i]
    if j > i:
        return int(table.gain[u, perm[i + 1:j + 1]].sum())
    if j < i:
        return -int(table.gain[u, perm[j:i]].sum())
    return 0


def jump_delta_scan(table, ordering, i):
    """``delta_jump(i, j)`` for every target ``j`` in O(n2) via running sums."""
    perm = as_perm(ordering)
    _check_pos(len(perm), i)
    row = table.gain[perm[i], perm]
    out = np.zeros(len(perm), dtype=np.int64)
    np.cumsum(row[i + 1:], out=out[i + 1:])
    if i > 0:
        out[:i] = -np.cumsum(row[:i][::-1])[::-1]
    return out


def jump_delta_matrix(table, ordering):
    """All jump deltas: row ``i`` equals ``jump_delta_scan(table, ordering, i)``."""
    perm = as_perm(ordering)
    n = len(perm)
    g = table.gain[np.ix_(perm, perm)]
    # prefix[i, t] = sum_{k < t} g[i, k]; the diagonal of g is zero
    prefix = np.zeros((n, n + 1), dtype=np.int64)
    np.cumsum(g, axis=1, out=prefix[:, 1:])
    rows = np.arange(n)[:, None]
    cols = np.arange(n)[None, :]
    base = prefix[np.arange(n), np.arange(n)][:, None]
    right = prefix[:, 1:] - base  # sum_{k<=j} - sum_{k<i}
    left = prefix[:, :-1] - base  # sum_{k<j} - sum_{k<i} = -sum_{j<=k<i}
    return np.where(cols > rows, right, np.where(cols < rows, left, 0))


def apply_jump(perm, i, j):
    """Move ``perm[i]`` to position ``j`` in place, shifting the elements between."""
    u = perm[i]
    if j > i:
        perm[i:j] = perm[i + 1:j + 1]
    elif j < i:
        perm[j + 1:i + 1] = perm[j:i]
    perm[j] = u


def apply_exchange(perm, i, j):
    perm[i], perm[j] = perm[j], perm[i]


def pairwise_lower_bound(table):
    """``sum_{u<v} min(c[u][v], c[v][u])``; never exceeds the optimum."""
    c = table.c
    return int(np.triu(np.minimum(c, c.T), 1).sum())
