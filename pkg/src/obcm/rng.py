"""Seeding policy.

Every random decision in the package is drawn from numpy's ``PCG64`` bit
generator (128-bit LCG state, 64-bit XSL-RR output), which numpy guarantees to
be stream-compatible across platforms and versions. Seeds are plain unsigned
64-bit integers. Child seeds for a benchmark cell are derived from the master
seed with ``SeedSequence`` keyed on (instance index, CRC-32 of a label,
repetition index), so they never depend on scheduling.
"""

import zlib

import numpy as np

from .errors import ParameterError

SEED_MASK = (1 << 64) - 1


def check_seed(seed):
    seed = int(seed)
    if not 0 <= seed <= SEED_MASK:
        raise ParameterError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def make_rng(seed):
    """Return a ``numpy.random.Generator`` backed by PCG64 for ``seed``."""
    return np.random.Generator(np.random.PCG64(check_seed(seed)))


def derive_seed(master, index, label, rep=0):
    """Child seed for cell ``(index, label, rep)`` under ``master``."""
    key = (int(index), zlib.crc32(label.encode("utf-8")), int(rep))
    ss = np.random.SeedSequence(check_seed(master), spawn_key=key)
    return int(ss.generate_state(1, dtype=np.uint64)[0])


class Draws:
    """Buffered integer draws from one generator.

    Scalar calls into ``Generator.integers`` cost microseconds each, which
    dominates a local-search generation. Values are drawn in blocks per bound;
    the stream is a deterministic function of the seed and the call sequence.
    """

    BLOCK = 4096

    def __init__(self, rng):
        self.rng = rng
        self._buf = {}
        self._poisson = None
        self._pos_poisson = 0

    def below(self, bound):
        """Uniform integer in ``[0, bound)``."""
        entry = self._buf.get(bound)
        if entry is None or entry[1] >= self.BLOCK:
            entry = [self.rng.integers(0, bound, size=self.BLOCK).tolist(), 0]
            self._buf[bound] = entry
        value = entry[0][entry[1]]
        entry[1] += 1
        return value

    def poisson1(self):
        """Poisson(1) sample."""
        if self._poisson is None or self._pos_poisson >= self.BLOCK:
            self._poisson = self.rng.poisson(1.0, size=self.BLOCK).tolist()
            self._pos_poisson = 0
        value = self._poisson[self._pos_poisson]
        self._pos_poisson += 1
        return value
