"""Shared helpers for the test suite: seeded random states and specs."""

import numpy as np

from ergoflow import SystemBathSpec, random_state

__all__ = ["random_state", "random_spec", "rng_for"]


def rng_for(tag: str) -> np.random.Generator:
    """Deterministic per-suite generator; the tag keeps streams independent."""
    seed = int.from_bytes(tag.encode(), "little") % (2**31)
    return np.random.default_rng(seed)


def random_spec(rng: np.random.Generator, max_nbar: float = 2.0) -> SystemBathSpec:
    return SystemBathSpec(
        omega=rng.uniform(0.5, 2.0),
        gamma=rng.uniform(0.5, 2.0),
        nbar=rng.uniform(0.0, max_nbar),
    )
