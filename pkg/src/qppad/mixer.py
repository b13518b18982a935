"""SplitMix64 mixing primitives.

Single source of truth for every deterministic stream in the package
(key schedule, dispatch, shot sampling), so that independent
implementations can interoperate bit-for-bit.
"""
from __future__ import annotations

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15


def finalize64(z: int) -> int:
    """Avalanche finalizer: xorshift-multiply chain, no increment."""
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix64(z: int) -> int:
    """Golden-ratio increment followed by the avalanche finalizer."""
    return finalize64((z + GOLDEN) & MASK64)


# vectorized twins, kept in uint64 so numpy wraps mod 2^64
_C1 = np.uint64(0xBF58476D1CE4E5B9)
_C2 = np.uint64(0x94D049BB133111EB)
GOLDEN_U = np.uint64(GOLDEN)


def finalize64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _C1
    z = (z ^ (z >> np.uint64(27))) * _C2
    return z ^ (z >> np.uint64(31))


def mix64_array(z: np.ndarray) -> np.ndarray:
    return finalize64_array(z + GOLDEN_U)


def stream_u64(state: int, n: int) -> tuple[np.ndarray, int]:
    """Produce the next ``n`` outputs of a SplitMix64 stream at ``state``.

    Returns ``(outputs, new_state)`` where outputs[i] equals the value a
    sequential generator would return on its (i+1)-th step. Equivalence
    with the scalar path is pinned by tests.
    """
    steps = np.arange(1, n + 1, dtype=np.uint64)
    out = finalize64_array(np.uint64(state) + GOLDEN_U * steps)
    new_state = (state + n * GOLDEN) & MASK64
    return out, new_state


def units_from_u64(words: np.ndarray) -> np.ndarray:
    """Map raw 64-bit words to floats in [0, 1): top 53 bits over 2^53."""
    return (words >> np.uint64(11)).astype(np.float64) * 2.0**-53
