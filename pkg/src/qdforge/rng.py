"""Seeded, splittable random streams.

Every random decision in a run draws from a Philox stream whose 128-bit key
is the run seed and whose counter encodes *what* the stream is for::

    counter = [0, index, generation, purpose]

The lowest counter word is left at zero so that draws from one stream
advance only that word and never walk into a neighbouring stream. Offspring
``i`` of generation ``g`` therefore always sees the same numbers, no matter
in which order (or on which worker) offspring are produced.
"""
from __future__ import annotations

import numpy as np

CVT = 0
INIT = 1
SELECT = 2
OFFSPRING = 3


def stream(seed: int, purpose: int, generation: int = 0, index: int = 0) -> np.random.Generator:
    if seed < 0:
        raise ValueError("seed must be non-negative")
    bit_gen = np.random.Philox(key=int(seed), counter=[0, index, generation, purpose])
    return np.random.Generator(bit_gen)


class RunStreams:
    """Stream factory bound to one run seed."""

    def __init__(self, seed: int):
        self.seed = int(seed)

    def cvt(self) -> np.random.Generator:
        return stream(self.seed, CVT)

    def init(self) -> np.random.Generator:
        return stream(self.seed, INIT)

    def selection(self, generation: int) -> np.random.Generator:
        return stream(self.seed, SELECT, generation)

    def offspring(self, generation: int, index: int) -> np.random.Generator:
        return stream(self.seed, OFFSPRING, generation, index)
