"""Deterministic seed derivation.

Every random draw in the package flows through a numpy Generator obtained
from `generator(base_seed, *labels)`. Labels are mixed into the base seed
with a splitmix64-style permutation, so derived streams are stable across
platforms and Python processes (no reliance on hash()).
"""
from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1


def _mix(state: int) -> tuple[int, int]:
    # splitmix64 step: advance state, return (state, output)
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def derive_seed(base: int, *labels) -> int:
    """Mix string/int labels into ``base`` and return a 64-bit seed."""
    state = int(base) & _MASK
    state, _ = _mix(state)
    for label in labels:
        if isinstance(label, str):
            data = label.encode("utf-8")
        else:
            data = int(label).to_bytes(8, "little", signed=True)
        # absorb in 8-byte chunks
        for off in range(0, len(data), 8):
            chunk = int.from_bytes(data[off:off + 8], "little")
            state ^= chunk
            state, _ = _mix(state)
    _, out = _mix(state)
    return out


def generator(base: int, *labels) -> np.random.Generator:
    """PCG64 generator for the stream identified by (base, labels)."""
    return np.random.Generator(np.random.PCG64(derive_seed(base, *labels)))
