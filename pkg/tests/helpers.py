import numpy as np


def random_pair(rng, shape=(8, 8), low=0.0, high=1.0):
    p = rng.uniform(low, high, size=shape)
    y = (rng.random(shape) < rng.uniform(0.2, 0.8)).astype(float)
    return p, y


def disk(size=32, radius=10):
    yy, xx = np.mgrid[:size, :size]
    c = (size - 1) / 2
    return ((yy - c) ** 2 + (xx - c) ** 2 <= radius**2).astype(float)
