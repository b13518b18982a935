"""The superposition operator, its conjugate, and the reference state set.

The cipher's superposition operator is

    H_hat = 1/2 * [[ 1,  1, -1, -1],
                   [ 1, -1, -i,  i],
                   [ 1, -1,  i, -i],
                   [ 1,  1,  1,  1]]

the unitary that diagonalizes the 4-cycle permutation (0→2, 1→0, 2→3, 3→1).
Applied to a basis state it yields one of four equal-magnitude superpositions
(the set S below), read directly off the matrix columns. In particular the
|00> amplitude of H_hat|10> is -1/2, not +1/2: transcriptions of these four
states occasionally carry a sign slip on that entry, so the matrix columns
are treated as definitive here and everywhere downstream.
"""
from __future__ import annotations

import numpy as np

from .errors import DiagonalizationFailure
from .pads import Perm4, perm_to_unitary
from .qstate import ALG_TOL, Statevector4, Unitary4, apply, basis_state, dagger

# 4-cycle whose diagonalization defines the superposition operator
P1_PERM = Perm4((2, 0, 3, 1))
P1_DIAGONAL = (1, -1, 1j, -1j)


def build_h_hat() -> Unitary4:
    """The superposition operator (columns are the four states of S)."""
    return Unitary4(
        0.5
        * np.array(
            [
                [1, 1, -1, -1],
                [1, -1, -1j, 1j],
                [1, -1, 1j, -1j],
                [1, 1, 1, 1],
            ],
            dtype=complex,
        )
    )


def build_h_hat_dagger() -> Unitary4:
    """Hermitian conjugate of the superposition operator (decryption side)."""
    return dagger(build_h_hat())


def build_hh_tensor() -> Unitary4:
    """Hadamard on each qubit (H⊗H): the textbook alternative, used in tests
    and demos only; the cipher always uses :func:`build_h_hat`."""
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    return Unitary4(np.kron(h, h))


def superposition_set() -> list[Statevector4]:
    """S: the four states H_hat|v> for v = 0..3, each with uniform outcome
    probabilities and pairwise distinct beyond global phase."""
    h = build_h_hat()
    return [apply(h, basis_state(v)) for v in range(4)]


def verify_p1_diagonalization(h: Unitary4 | None = None) -> Unitary4:
    """Check H_hat† · P1 · H_hat = diag(1, -1, i, -i) and return the diagonal.

    Raises DiagonalizationFailure if the triple product is not diagonal with
    exactly those entries, which would mean a corrupted operator definition.
    """
    if h is None:
        h = build_h_hat()
    p1 = perm_to_unitary(P1_PERM)
    d = h.m.conj().T @ p1.m @ h.m
    off = d - np.diag(np.diag(d))
    if np.abs(off).max() > ALG_TOL:
        raise DiagonalizationFailure(
            f"off-diagonal magnitude {np.abs(off).max():g} exceeds {ALG_TOL:g}"
        )
    if np.abs(np.diag(d) - np.array(P1_DIAGONAL)).max() > ALG_TOL:
        raise DiagonalizationFailure(f"unexpected diagonal {np.diag(d)!r}")
    return Unitary4(d)
