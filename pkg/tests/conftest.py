import itertools
import random

import numpy as np
import pytest

from obcm.instance import BipartiteInstance, generate_random


def edge_pair_crossings(inst, perm):
    """Oracle: test every pair of edges for a crossing."""
    pos = {v: i for i, v in enumerate(perm)}
    return sum(
        1
        for (v1, a1), (v2, a2) in itertools.combinations(inst.edges, 2)
        if (pos[v1] - pos[v2]) * (a1 - a2) < 0
    )


def edge_pair_table(inst):
    """Oracle: c[u][v] by enumerating edge pairs directly."""
    c = np.zeros((inst.n2, inst.n2), dtype=np.int64)
    for (u, a), (v, b) in itertools.permutations(inst.edges, 2):
        if u != v and a > b:
            c[u, v] += 1
    return c


def apply_jump_list(perm, i, j):
    perm = list(perm)
    u = perm.pop(i)
    perm.insert(j, u)
    return perm


def apply_exchange_list(perm, i, j):
    perm = list(perm)
    perm[i], perm[j] = perm[j], perm[i]
    return perm


def random_pool(count, seed, n1_range=(4, 12), n2_range=(2, 8), p_range=(0.1, 0.9)):
    """Deterministic pool of small random instances."""
    r = random.Random(seed)
    pool = []
    for _ in range(count):
        n1 = r.randint(*n1_range)
        n2 = r.randint(*n2_range)
        p = round(r.uniform(*p_range), 2)
        pool.append(generate_random(n1, n2, p, r.getrandbits(64)))
    return pool


@pytest.fixture
def e2():
    # u=0, v=1, w=2 on a fixed layer of four vertices
    return BipartiteInstance(4, 3, ((0, 2), (0, 3), (1, 1), (2, 0)))


@pytest.fixture
def k22():
    return generate_random(2, 2, 1.0, 0)


@pytest.fixture
def k33():
    return generate_random(3, 3, 1.0, 0)


@pytest.fixture
def empty5():
    return generate_random(5, 5, 0.0, 0)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[0][1:])):
            terminalreporter.write_line(line)
