"""Permutations of the 4 basis states, their unitaries, and the key-derived pad.

The pad holds 56 independently drawn elements of S4 (repetitions allowed)
together with their inverses; 56 draws at log2(24) bits each put the pad's
selection entropy above the 256-bit target.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .keyschedule import DomainTag, KeyMaterial, fisher_yates_perm, seed
from .mixer import mix64
from .qstate import Unitary4

PAD_SIZE = 56


@dataclass(frozen=True)
class Perm4:
    """An element of S4: map[v] is the image of basis index v."""

    map: tuple[int, int, int, int]

    def __post_init__(self):
        if sorted(self.map) != [0, 1, 2, 3]:
            raise ValueError(f"not a bijection on 0..3: {self.map}")

    def inverse(self) -> "Perm4":
        q = [0, 0, 0, 0]
        for v, img in enumerate(self.map):
            q[img] = v
        return Perm4(tuple(q))

    def compose(self, other: "Perm4") -> "Perm4":
        """self after other: (self∘other).map[v] = self.map[other.map[v]]."""
        return Perm4(tuple(self.map[other.map[v]] for v in range(4)))

    def __call__(self, v: int) -> int:
        return self.map[v]


IDENTITY_PERM = Perm4((0, 1, 2, 3))


def perm_to_unitary(p: Perm4) -> Unitary4:
    """Permutation matrix with M[r][c] = 1 iff r = map[c], so M|c> = |map[c]>."""
    m = np.zeros((4, 4), dtype=complex)
    for c in range(4):
        m[p.map[c], c] = 1.0
    return Unitary4(m)


def enumerate_s4() -> list[Perm4]:
    """All 24 permutations, in lexicographic order of their maps."""
    return [Perm4(m) for m in itertools.permutations(range(4))]


@dataclass(frozen=True)
class PermutationPad:
    """Key-derived sequence of 56 permutations plus elementwise inverses."""

    ops: tuple[Perm4, ...]
    inverse_ops: tuple[Perm4, ...] = field(init=False)

    def __post_init__(self):
        if len(self.ops) != PAD_SIZE:
            raise ValueError(f"pad must hold {PAD_SIZE} permutations")
        object.__setattr__(
            self, "inverse_ops", tuple(p.inverse() for p in self.ops)
        )

    @property
    def entropy_bits(self) -> float:
        """Selection entropy of the pad: one log2(24) term per entry."""
        return len(self.ops) * math.log2(24)

    def fingerprint(self) -> int:
        """64-bit digest of the concatenated maps, for key-agreement checks."""
        s = 0
        for p in self.ops:
            for v in p.map:
                s = mix64(s ^ v)
        return s

    def maps_array(self) -> np.ndarray:
        """(56, 4) uint8 table of forward maps, for batched pipelines."""
        return np.array([p.map for p in self.ops], dtype=np.uint8)

    def inverse_maps_array(self) -> np.ndarray:
        return np.array([p.map for p in self.inverse_ops], dtype=np.uint8)


def build_pad(key: KeyMaterial) -> PermutationPad:
    """Draw the 56 pad permutations from the key's PAD stream, in order."""
    ks = seed(key, DomainTag.PAD)
    return PermutationPad(tuple(Perm4(fisher_yates_perm(ks)) for _ in range(PAD_SIZE)))
