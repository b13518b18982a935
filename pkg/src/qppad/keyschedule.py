"""Deterministic expansion of a pre-shared key into cipher randomness.

A single key file drives three independent byte streams, separated by
domain tags: PAD (Fisher-Yates shuffle randomness for the permutation
pad), DISPATCH (per-block pad indices), and SHOTS (key-derived sampling
streams). Both communicating sides derive identical streams from the
same key bytes, so the fold below is defined bit-exactly:

    state = 0x243F6A8885A308D3 XOR tag
    for each key byte b: state = mix64(state XOR b)

with mix64 the SplitMix64 increment-plus-avalanche from ``mixer``.
Subsequent outputs are plain SplitMix64 steps. No cryptographic strength
is claimed for this expander; it exists for reproducibility.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import KeyTooShort
from .mixer import GOLDEN, MASK64, finalize64, mix64, stream_u64

MIN_KEY_LEN = 32
_FOLD_INIT = 0x243F6A8885A308D3


class DomainTag(enum.IntEnum):
    PAD = 0x01
    DISPATCH = 0x02
    SHOTS = 0x03


@dataclass(frozen=True)
class KeyMaterial:
    """Opaque pre-shared key bytes, at least 32 of them."""

    data: bytes

    def __post_init__(self):
        if len(self.data) < MIN_KEY_LEN:
            raise KeyTooShort(
                f"key is {len(self.data)} bytes, minimum is {MIN_KEY_LEN}"
            )

    @classmethod
    def from_file(cls, path) -> "KeyMaterial":
        """Read a raw binary key file verbatim (no encoding, no trimming)."""
        with open(path, "rb") as fh:
            return cls(fh.read())

    def __len__(self) -> int:
        return len(self.data)


class Keystream:
    """Seeded SplitMix64 stream. Single-owner mutable state."""

    __slots__ = ("state", "tag")

    def __init__(self, state: int, tag: DomainTag):
        self.state = state & MASK64
        self.tag = tag

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return finalize64(self.state)

    def next_below(self, n: int) -> int:
        """Unbiased draw in 0..n-1 via rejection sampling on single bytes.

        Uses the low 8 bits of successive outputs; n must be in 2..256.
        """
        if not 2 <= n <= 256:
            raise ValueError("n must be in 2..256")
        limit = 256 - (256 % n)
        while True:
            b = self.next_u64() & 0xFF
            if b < limit:
                return b % n

    def draw_u64s(self, n: int) -> np.ndarray:
        """Vectorized batch equal to ``n`` sequential next_u64 calls."""
        words, self.state = stream_u64(self.state, n)
        return words


def seed(key: KeyMaterial, tag: DomainTag) -> Keystream:
    """Fold the key bytes into a domain-separated stream state."""
    s = _FOLD_INIT ^ int(tag)
    for b in key.data:
        s = mix64(s ^ b)
    return Keystream(s, tag)


def xor_randomize(data: bytes, key: KeyMaterial) -> bytes:
    """XOR the buffer with the key bytes repeated cyclically (self-inverse)."""
    if not data:
        return b""
    buf = np.frombuffer(data, dtype=np.uint8)
    kb = np.frombuffer(key.data, dtype=np.uint8)
    reps = -(-len(buf) // len(kb))
    return (buf ^ np.tile(kb, reps)[: len(buf)]).tobytes()


def fisher_yates_perm(ks: Keystream) -> tuple[int, int, int, int]:
    """One uniformly random permutation of (0, 1, 2, 3).

    Standard downward Fisher-Yates: for i = 3..1 swap p[i] with p[j],
    j drawn unbiased in 0..i. Consumes exactly three draws.
    """
    p = [0, 1, 2, 3]
    for i in range(3, 0, -1):
        j = ks.next_below(i + 1)
        p[i], p[j] = p[j], p[i]
    return tuple(p)


def build_dispatch(key: KeyMaterial, n_blocks: int, pad_size: int = 56) -> np.ndarray:
    """Per-block pad indices, identical on the encrypting and decrypting side.

    Each index is an unbiased draw below ``pad_size`` from the DISPATCH
    stream; one operator per state. Internally batched, but the values are
    exactly the sequence of successive ``next_below`` draws (accepted bytes
    in stream order).
    """
    if n_blocks < 0:
        raise ValueError("n_blocks must be >= 0")
    if not 2 <= pad_size <= 256:
        raise ValueError("pad_size must be in 2..256")
    ks = seed(key, DomainTag.DISPATCH)
    limit = 256 - (256 % pad_size)
    chunks: list[np.ndarray] = []
    have = 0
    while have < n_blocks:
        want = n_blocks - have
        batch = ks.draw_u64s(want + (want >> 3) + 16).astype(np.uint8)
        accepted = batch[batch < limit] % pad_size
        chunks.append(accepted)
        have += accepted.size
    return np.concatenate(chunks)[:n_blocks] if chunks else np.empty(0, dtype=np.uint8)
