"""Two-layer bipartite instances, orderings of the free layer, and their files.

The fixed layer is always ordered by id: fixed vertex ``a`` sits at position
``a``. An edge is a pair ``(free_id, fixed_id)``.

Instance file (text, LF line endings)::

    obcm 1
    <n1> <n2> <m>
    <free_id> <fixed_id>      # m lines, zero-based

Ordering file: ``n2`` lines, one free-vertex id per line, left to right.
"""

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Sequence, Tuple

import numpy as np

from .errors import FormatError, ParameterError
from .rng import make_rng

MAGIC = "obcm 1"


@dataclass(frozen=True)
class BipartiteInstance:
    n1: int
    n2: int
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0:
            raise ParameterError("layer sizes must be non-negative")
        edges = tuple(sorted((int(v), int(a)) for v, a in self.edges))
        for v, a in edges:
            if not (0 <= v < self.n2 and 0 <= a < self.n1):
                raise ParameterError(f"edge ({v}, {a}) out of range")
        for e, f in zip(edges, edges[1:]):
            if e == f:
                raise ParameterError(f"duplicate edge {e}")
        object.__setattr__(self, "edges", edges)

    @property
    def m(self):
        return len(self.edges)

    @cached_property
    def adjacency(self):
        """Per free vertex, the sorted tuple of fixed-layer neighbours."""
        adj = [[] for _ in range(self.n2)]
        for v, a in self.edges:
            adj[v].append(a)
        return tuple(tuple(nbrs) for nbrs in adj)

    @cached_property
    def degrees(self):
        return tuple(len(nbrs) for nbrs in self.adjacency)


@dataclass(frozen=True)
class Ordering:
    """Left-to-right permutation of free-layer vertices."""

    perm: Tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(v) for v in self.perm)
        if sorted(perm) != list(range(len(perm))):
            raise ParameterError("ordering is not a permutation of 0..n2-1")
        object.__setattr__(self, "perm", perm)

    def __len__(self):
        return len(self.perm)

    def __iter__(self):
        return iter(self.perm)

    def __getitem__(self, i):
        return self.perm[i]

    @property
    def n2(self):
        return len(self.perm)

    @cached_property
    def position(self):
        """``position[v]`` is the index of vertex ``v`` in ``perm``."""
        pos = [0] * len(self.perm)
        for i, v in enumerate(self.perm):
            pos[v] = i
        return tuple(pos)

    def array(self):
        return np.array(self.perm, dtype=np.int64)

    @classmethod
    def identity(cls, n2):
        return cls(tuple(range(n2)))


def as_perm(ordering):
    """Coerce an ``Ordering`` or any int sequence to an int64 array."""
    if isinstance(ordering, Ordering):
        return ordering.array()
    return np.asarray(ordering, dtype=np.int64)


def generate_random(n1, n2, p, seed):
    """Random bipartite graph with each of the ``n1*n2`` edges present w.p. ``p``.

    Edge decisions are made in fixed_id-major, free_id-minor order: the k-th
    uniform double drawn from the seed's PCG64 stream decides edge
    ``(k % n2, k // n2)``, and the edge is present iff the double is ``< p``.
    """
    if n1 < 0 or n2 < 0:
        raise ParameterError("layer sizes must be non-negative")
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"edge probability must lie in [0, 1], got {p}")
    rng = make_rng(seed)
    present = rng.random((n1, n2)) < p
    fixed, free = np.nonzero(present)
    return BipartiteInstance(n1, n2, tuple(zip(free.tolist(), fixed.tolist())))


def random_ordering(n2, seed):
    """Uniformly random ordering (Fisher-Yates shuffle of the identity)."""
    if n2 < 0:
        raise ParameterError("n2 must be non-negative")
    perm = np.arange(n2, dtype=np.int64)
    make_rng(seed).shuffle(perm)
    return Ordering(tuple(perm.tolist()))


def format_instance(inst):
    lines = [MAGIC, f"{inst.n1} {inst.n2} {inst.m}"]
    lines.extend(f"{v} {a}" for v, a in inst.edges)
    return "\n".join(lines) + "\n"


def parse_instance(text, path=None):
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()

    def fail(msg, lineno):
        raise FormatError(msg, path=path, line=lineno)

    if not lines or lines[0].strip() != MAGIC:
        fail(f"expected header {MAGIC!r}", 1)
    if len(lines) < 2:
        fail("missing size line", 2)
    sizes = _ints(lines[1], 3, 2, path)
    n1, n2, m = sizes
    if min(sizes) < 0:
        fail("sizes must be non-negative", 2)
    body = lines[2:]
    if len(body) != m:
        fail(f"header declares {m} edges, file has {len(body)}", 3 + min(len(body), m))
    seen = set()
    edges = []
    for offset, line in enumerate(body):
        lineno = 3 + offset
        v, a = _ints(line, 2, lineno, path)
        if not 0 <= v < n2:
            fail(f"free_id {v} out of range [0, {n2})", lineno)
        if not 0 <= a < n1:
            fail(f"fixed_id {a} out of range [0, {n1})", lineno)
        if (v, a) in seen:
            fail(f"duplicate edge {v} {a}", lineno)
        seen.add((v, a))
        edges.append((v, a))
    return BipartiteInstance(n1, n2, tuple(edges))


def _ints(line, count, lineno, path):
    parts = line.split()
    if len(parts) != count:
        raise FormatError(f"expected {count} integers, got {line!r}", path=path, line=lineno)
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise FormatError(f"non-integer field in {line!r}", path=path, line=lineno) from None


def read_instance(path):
    path = Path(path)
    return parse_instance(path.read_text(), path=path)


def write_instance(inst, path):
    Path(path).write_text(format_instance(inst), newline="\n")


def read_ordering(path, n2=None):
    path = Path(path)
    perm = []
    for lineno, line in enumerate(path.read_text().split("\n"), start=1):
        if not line.strip():
            continue
        try:
            perm.append(int(line))
        except ValueError:
            raise FormatError(f"not a vertex id: {line!r}", path=path, line=lineno) from None
    if n2 is not None and len(perm) != n2:
        raise FormatError(f"expected {n2} ids, found {len(perm)}", path=path)
    try:
        return Ordering(tuple(perm))
    except ParameterError as exc:
        raise FormatError(str(exc), path=path) from None


def format_ordering(ordering: Sequence[int]):
    return "".join(f"{v}\n" for v in ordering)


def write_ordering(ordering, path):
    Path(path).write_text(format_ordering(ordering), newline="\n")
