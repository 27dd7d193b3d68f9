import numpy as np


class RandomStream:
    """
    Seedable random stream used by every sampler in the package.

    The generator is numpy's PCG64 (a 64-bit permuted congruential generator).
    A categorical draw consumes exactly one uniform and inverts the cumulative
    distribution, so a given seed always yields the same sequence of draws.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self.generator = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self, size: int | None = None):
        return self.generator.random(size)

    def categorical(self, probs: np.ndarray) -> int:
        cumulative = np.cumsum(probs)
        index = int(np.searchsorted(cumulative, self.generator.random(), side="right"))
        # rounding can leave cumulative[-1] a hair below 1
        return min(index, len(probs) - 1)

    def categorical_rows(self, probs: np.ndarray) -> np.ndarray:
        """One draw per row of a (batch, k) probability matrix."""
        cumulative = np.cumsum(probs, axis=1)
        u = self.generator.random(probs.shape[0])
        index = (u[:, None] >= cumulative).sum(axis=1)
        return np.minimum(index, probs.shape[1] - 1)


def run_seed(base_seed: int, run_index: int) -> int:
    return int(base_seed) + int(run_index)
