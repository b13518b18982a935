"""Fixed-dimension (4) complex statevectors and unitaries for a 2-qubit register.

Basis index convention used everywhere in this package: index v encodes the
basis state |b1 b0> with v = 2*b1 + b0, i.e. the two bits read left to right.
"""
from __future__ import annotations

import numpy as np

from .errors import NotBasisState
from .mixer import GOLDEN, MASK64, finalize64, mix64, stream_u64, units_from_u64

NORM_TOL = 1e-9   # accumulated pipelines
ALG_TOL = 1e-12   # exact algebraic identities


class Statevector4:
    """Normalized 4-amplitude state of a 2-qubit register. Immutable."""

    __slots__ = ("amps",)

    def __init__(self, amps, norm_tol: float = NORM_TOL):
        a = np.asarray(amps, dtype=complex)
        if a.shape != (4,):
            raise ValueError(f"expected 4 amplitudes, got shape {a.shape}")
        if not np.isfinite(a).all():
            raise ValueError("amplitudes must be finite")
        norm = float(np.sqrt(np.sum(np.abs(a) ** 2)))
        if abs(norm - 1.0) > norm_tol:
            raise ValueError(f"state norm {norm!r} deviates from 1 beyond {norm_tol}")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    def __setattr__(self, name, value):
        raise AttributeError("Statevector4 is immutable")

    def __repr__(self):
        return f"Statevector4({self.amps.tolist()!r})"


class Unitary4:
    """4x4 unitary operator, validated U†U = I on construction. Immutable."""

    __slots__ = ("m",)

    def __init__(self, m):
        a = np.asarray(m, dtype=complex)
        if a.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {a.shape}")
        if not np.isfinite(a).all():
            raise ValueError("matrix entries must be finite")
        err = np.abs(a.conj().T @ a - np.eye(4)).max()
        if err > ALG_TOL:
            raise ValueError(f"matrix is not unitary (max |U†U - I| = {err:g})")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "m", a)

    def __setattr__(self, name, value):
        raise AttributeError("Unitary4 is immutable")

    def __repr__(self):
        return f"Unitary4({self.m.tolist()!r})"


def basis_state(v: int) -> Statevector4:
    """The computational basis state |b1 b0> with v = 2*b1 + b0."""
    if not 0 <= v <= 3:
        raise ValueError("basis index must be in 0..3")
    a = np.zeros(4, dtype=complex)
    a[v] = 1.0
    return Statevector4(a)


def identity() -> Unitary4:
    return Unitary4(np.eye(4, dtype=complex))


def apply(u: Unitary4, psi: Statevector4) -> Statevector4:
    """Apply the operator: returns u·psi (norm preserved)."""
    return Statevector4(u.m @ psi.amps)


def dagger(u: Unitary4) -> Unitary4:
    """Hermitian conjugate (conjugate transpose)."""
    return Unitary4(u.m.conj().T)


def compose(a: Unitary4, b: Unitary4) -> Unitary4:
    """Operator product a·b, i.e. apply b first, then a."""
    return Unitary4(a.m @ b.m)


def probabilities(psi: Statevector4) -> np.ndarray:
    """Born-rule outcome probabilities |amps[v]|^2 for v = 0..3."""
    return np.abs(psi.amps) ** 2


class ShotRng:
    """Deterministic per-shot sampling source (SplitMix64 state).

    Single-owner mutable state: do not share one instance across
    concurrent samplers.
    """

    __slots__ = ("state",)

    def __init__(self, state: int):
        self.state = state & MASK64

    @classmethod
    def from_seed(cls, seed: int) -> "ShotRng":
        """Derive a stream from a user-facing seed via the shared mixer."""
        return cls(mix64(seed & MASK64))

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return finalize64(self.state)

    def next_unit(self) -> float:
        """Uniform deviate in [0, 1): top 53 bits of the next word / 2^53."""
        return (self.next_u64() >> 11) * 2.0**-53

    def draw_units(self, n: int) -> np.ndarray:
        """Vectorized batch of ``n`` uniform deviates, identical to ``n``
        sequential next_unit calls (state advances n steps)."""
        words, self.state = stream_u64(self.state, n)
        return units_from_u64(words)


def measure_shot(psi: Statevector4, rng: ShotRng) -> int:
    """One projective measurement: outcome v with probability |amps[v]|^2.

    Consumes exactly one uniform deviate from ``rng`` per call.
    """
    u = rng.next_unit()
    c = 0.0
    for v in range(3):
        c += abs(psi.amps[v]) ** 2
        if u < c:
            return v
    return 3


def collapse_expect_basis(psi: Statevector4, tol: float = NORM_TOL) -> int:
    """Return the basis index the state has (numerically) collapsed onto.

    The dominant outcome must carry probability >= 1 - tol; otherwise the
    state is a genuine superposition and NotBasisState is raised.
    """
    probs = probabilities(psi)
    v = int(np.argmax(probs))
    if probs[v] < 1.0 - tol:
        raise NotBasisState(
            f"max outcome probability {probs[v]:.6f} below 1 - {tol:g}"
        )
    return v


def phase_equivalent(psi: Statevector4, phi: Statevector4, tol: float = NORM_TOL) -> bool:
    """True iff psi = e^{i·theta}·phi for some global phase, within tol.

    The phase is estimated from the first amplitude of ``phi`` whose
    modulus exceeds tol, then checked per amplitude.
    """
    for k in range(4):
        if abs(phi.amps[k]) > tol:
            factor = psi.amps[k] / phi.amps[k]
            if abs(abs(factor) - 1.0) > tol:
                return False
            return bool(np.all(np.abs(psi.amps - factor * phi.amps) <= tol))
    return False
