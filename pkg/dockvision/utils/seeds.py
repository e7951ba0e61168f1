"""Deterministic seed derivation so parallel work never shares a random stream."""
import numpy as np


def derive_seed(master_seed: int, *keys: int) -> int:
    """A 64 bit seed derived from (master seed, key path), independent of call order."""
    sequence = np.random.SeedSequence([int(master_seed), *[int(k) for k in keys]])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def derive_rng(master_seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed(master_seed, *keys))
