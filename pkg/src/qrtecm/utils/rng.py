"""Seeded, forkable random streams."""

import gmpy2
import numpy as np


def derive_seed(seed: int, *path: int) -> int:
    """128-bit seed for the stream at ``path`` below ``seed``.

    numpy's SeedSequence spawn keys give independent, reproducible children,
    so trial ``i`` always sees the same stream no matter which worker runs it.
    """
    words = np.random.SeedSequence(entropy=seed, spawn_key=tuple(path)).generate_state(4, np.uint32)
    out = 0
    for w in words:
        out = (out << 32) | int(w)
    return out


def stream(seed: int, *path: int) -> "gmpy2.random_state":
    return gmpy2.random_state(derive_seed(seed, *path))


def trial_stream(seed: int, round_index: int, trial_index: int) -> "gmpy2.random_state":
    return stream(seed, round_index, trial_index)
