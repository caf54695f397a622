"""Randomised local search and (1+1) EAs over swap, exchange and jump moves,
plus the jump-scanning variants that pick the first, a random, or the best
acceptable jump per generation.

All searches are elitist and accept offspring that do not increase the
crossing number. Only strict improvements reset the stagnation counter.
"""

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .crossings import (
    apply_exchange,
    apply_jump,
    crossings_of,
    jump_delta_matrix,
    jump_delta_scan,
)
from .errors import ParameterError
from .instance import Ordering, as_perm
from .rng import Draws, make_rng

OPERATORS = ("swap", "exchange", "jump")
STRENGTHS = ("constant_one", "poisson")
STRATEGIES = ("first", "random", "best")


@dataclass(frozen=True)
class MutationConfig:
    operator: str
    strength: str = "constant_one"

    def __post_init__(self):
        if self.operator not in OPERATORS:
            raise ParameterError(f"unknown operator {self.operator!r}")
        if self.strength not in STRENGTHS:
            raise ParameterError(f"unknown strength {self.strength!r}")


@dataclass(frozen=True)
class StopRule:
    stagnation_limit: Optional[int] = None
    max_generations: Optional[int] = None
    target: Optional[int] = None

    def __post_init__(self):
        if self.stagnation_limit is None and self.max_generations is None:
            raise ParameterError("a stop rule needs a stagnation limit or a generation cap")

    @classmethod
    def stagnation(cls, n2, exponent=1.5, max_generations=None, target=None):
        """Stop after ``ceil(n2 ** exponent)`` generations without improvement."""
        return cls(math.ceil(n2 ** exponent), max_generations, target)


@dataclass(eq=True)
class RunTrace:
    algorithm: str
    seed: int
    events: list  # (generation, crossings), starting with generation 0
    final_ordering: Ordering
    final_crossings: int
    generations: int
    evaluations: int
    delta_ops: int
    preprocess_seconds: float = field(default=0.0, compare=False)
    search_seconds: float = field(default=0.0, compare=False)

    def generation_reaching(self, quality):
        """First generation whose best-so-far is ``<= quality``, else ``None``."""
        for gen, value in self.events:
            if value <= quality:
                return gen
        return None


def sample_strength(config, rng):
    """Number of elementary moves for one generation (``rng`` is a ``Draws``)."""
    if config.strength == "constant_one":
        return 1
    return 1 + rng.poisson1()


def _draw_move(operator, n, draws):
    if operator == "swap":
        i = draws.below(n - 1)
        return i, i + 1
    if operator == "exchange":
        i = draws.below(n)
        j = draws.below(n - 1)
        if j >= i:
            j += 1
        return (i, j) if i < j else (j, i)
    return draws.below(n), draws.below(n)


def _move_delta(gain, perm, operator, i, j):
    """Delta of one move on ``perm``; also returns the number of pair lookups."""
    if operator == "swap":
        return int(gain[perm[i], perm[j]]), 1
    if operator == "exchange":
        u, v = perm[i], perm[j]
        mid = perm[i + 1:j]
        return int(gain[u, v] + gain[u, mid].sum() - gain[v, mid].sum()), 2 * (j - i) - 1
    if j > i:
        return int(gain[perm[i], perm[i + 1:j + 1]].sum()), j - i
    if j < i:
        return -int(gain[perm[i], perm[j:i]].sum()), i - j
    return 0, 0


def _apply_move(perm, operator, i, j):
    if operator == "jump":
        apply_jump(perm, i, j)
    else:
        apply_exchange(perm, i, j)


def mutate(ordering, table, operator, k, rng, moves=None):
    """Apply ``k`` uniformly random moves of ``operator`` in sequence.

    ``rng`` is a ``Draws`` or a numpy ``Generator``. Returns the new ordering
    and the exact change in crossings. If ``moves`` is a list, the drawn
    ``(i, j)`` pairs are appended to it.
    """
    if operator not in OPERATORS:
        raise ParameterError(f"unknown operator {operator!r}")
    if k < 1:
        raise ParameterError("k must be at least 1")
    perm = as_perm(ordering).copy()
    n = len(perm)
    if n < 2:
        return Ordering(tuple(perm.tolist())), 0
    draws = rng if isinstance(rng, Draws) else Draws(rng)
    total = 0
    for _ in range(k):
        i, j = _draw_move(operator, n, draws)
        d, _ = _move_delta(table.gain, perm, operator, i, j)
        _apply_move(perm, operator, i, j)
        total += d
        if moves is not None:
            moves.append((i, j))
    return Ordering(tuple(perm.tolist())), total


def _stop(stop, gen, stagnant, current):
    if stop.max_generations is not None and gen >= stop.max_generations:
        return True
    if stop.stagnation_limit is not None and stagnant >= stop.stagnation_limit:
        return True
    return stop.target is not None and current <= stop.target


def run_search(table, config, stop, seed, start, name=None):
    """Elitist RLS / (1+1) EA from ``start``.

    Each generation samples ``k``, applies ``k`` random moves to a copy and
    keeps the copy if its crossing number is not larger.
    """
    name = name or _search_name(config)
    perm = as_perm(start).copy()
    n = len(perm)
    if n != table.n2:
        raise ParameterError(f"start has {n} vertices, table has {table.n2}")
    t0 = time.perf_counter()
    draws = Draws(make_rng(seed))
    gain = table.gain
    op = config.operator
    current = crossings_of(table, perm)
    events = [(0, current)]
    gen = stagnant = evaluations = delta_ops = 0
    while not _stop(stop, gen, stagnant, current):
        gen += 1
        k = sample_strength(config, draws)
        if n < 2:
            stagnant += 1
            continue
        if k == 1:
            i, j = _draw_move(op, n, draws)
            delta, ops = _move_delta(gain, perm, op, i, j)
            delta_ops += ops
            if delta <= 0:
                _apply_move(perm, op, i, j)
        else:
            child = perm.copy()
            delta = 0
            for _ in range(k):
                i, j = _draw_move(op, n, draws)
                d, ops = _move_delta(gain, child, op, i, j)
                _apply_move(child, op, i, j)
                delta += d
                delta_ops += ops
            if delta <= 0:
                perm = child
        evaluations += 1
        if delta < 0:
            current += delta
            stagnant = 0
            events.append((gen, current))
        else:
            stagnant += 1
    return RunTrace(
        algorithm=name,
        seed=int(seed),
        events=events,
        final_ordering=Ordering(tuple(perm.tolist())),
        final_crossings=current,
        generations=gen,
        evaluations=evaluations,
        delta_ops=delta_ops,
        preprocess_seconds=table.build_seconds,
        search_seconds=time.perf_counter() - t0,
    )


def _search_name(config):
    prefix = "rls" if config.strength == "constant_one" else "ea"
    return f"{prefix}-{config.operator}"


def _outward(i, n):
    """Targets ``i+1, i-1, i+2, i-2, ...`` within ``[0, n)``."""
    out = []
    for step in range(1, n):
        if i + step < n:
            out.append(i + step)
        if i - step >= 0:
            out.append(i - step)
    return np.array(out, dtype=np.int64)


def run_scanning_rls(table, strategy, stop, seed, start, name=None):
    """Jump RLS that scans jump deltas instead of sampling a single jump.

    ``first`` takes the first acceptable (non-increasing, non-identity) jump in
    scan order: vertices in a fresh random order, targets outward from the
    vertex's position alternating right and left. ``random`` picks uniformly
    among all acceptable jumps, ``best`` uniformly among the minimum-delta
    jumps. If nothing is acceptable the generation is a no-op.
    """
    if strategy not in STRATEGIES:
        raise ParameterError(f"unknown strategy {strategy!r}")
    name = name or {"first": "jfirls", "random": "jrirls", "best": "jsrls"}[strategy]
    perm = as_perm(start).copy()
    n = len(perm)
    if n != table.n2:
        raise ParameterError(f"start has {n} vertices, table has {table.n2}")
    t0 = time.perf_counter()
    rng = make_rng(seed)
    current = crossings_of(table, perm)
    events = [(0, current)]
    gen = stagnant = evaluations = delta_ops = 0
    outward = [_outward(i, n) for i in range(n)] if strategy == "first" else None
    off_diagonal = ~np.eye(n, dtype=bool)
    while not _stop(stop, gen, stagnant, current):
        gen += 1
        move = None
        if n >= 2:
            if strategy == "first":
                for pos in rng.permutation(n):
                    deltas = jump_delta_scan(table, perm, pos)
                    delta_ops += n
                    targets = outward[pos]
                    ok = np.flatnonzero(deltas[targets] <= 0)
                    if len(ok):
                        j = int(targets[ok[0]])
                        move = (int(pos), j, int(deltas[j]))
                        break
            else:
                matrix = jump_delta_matrix(table, perm)
                delta_ops += n * n
                if strategy == "random":
                    cand = np.flatnonzero((matrix <= 0) & off_diagonal)
                else:
                    low = matrix[off_diagonal].min()
                    cand = np.flatnonzero((matrix == low) & off_diagonal)
                    if low > 0:
                        cand = cand[:0]
                if len(cand):
                    pick = int(cand[rng.integers(len(cand))])
                    i, j = divmod(pick, n)
                    move = (i, j, int(matrix[i, j]))
        evaluations += 1
        if move is not None:
            i, j, delta = move
            apply_jump(perm, i, j)
            if delta < 0:
                current += delta
                stagnant = 0
                events.append((gen, current))
                continue
        stagnant += 1
    return RunTrace(
        algorithm=name,
        seed=int(seed),
        events=events,
        final_ordering=Ordering(tuple(perm.tolist())),
        final_crossings=current,
        generations=gen,
        evaluations=evaluations,
        delta_ops=delta_ops,
        preprocess_seconds=table.build_seconds,
        search_seconds=time.perf_counter() - t0,
    )


SEARCH_ALGORITHMS = {
    "rls-swap": MutationConfig("swap", "constant_one"),
    "rls-exchange": MutationConfig("exchange", "constant_one"),
    "rls-jump": MutationConfig("jump", "constant_one"),
    "ea-swap": MutationConfig("swap", "poisson"),
    "ea-exchange": MutationConfig("exchange", "poisson"),
    "ea-jump": MutationConfig("jump", "poisson"),
}
SCANNING_ALGORITHMS = {"jfirls": "first", "jrirls": "random", "jsrls": "best"}
