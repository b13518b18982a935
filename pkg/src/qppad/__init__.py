"""Permutation-pad cipher over simulated 2-qubit superposition states.

A pre-shared key drives three deterministic streams: XOR randomization of
the plaintext, Fisher-Yates generation of a 56-entry permutation pad, and
per-block dispatch of pad entries. Superposition mode lifts each 2-bit
block through the superposition operator before permuting; basis mode
permutes the block values directly. A bit-exact statevector stream format
(QPPS) stands in for the quantum channel, and an ENT-style analyzer
scores the randomness of every pipeline stage.
"""
from .cipher import (
    CipherStates,
    EncryptionContext,
    blocks_to_bytes,
    build_context,
    bytes_to_blocks,
    decrypt,
    decrypt_basis,
    deserialize,
    encrypt,
    encrypt_basis,
    sample_states,
    serialize,
    superposition_states,
    transform_states,
)
from .ent import EntReport, analyze, report_kv, report_table
from .errors import (
    BadBlockCount,
    BadMagic,
    BadVersion,
    DiagonalizationFailure,
    FormatError,
    InputTooShort,
    KeyTooShort,
    NormViolation,
    NotBasisState,
    QppError,
    TruncatedStream,
)
from .keyschedule import (
    DomainTag,
    KeyMaterial,
    Keystream,
    build_dispatch,
    fisher_yates_perm,
    seed,
    xor_randomize,
)
from .pads import PAD_SIZE, Perm4, PermutationPad, build_pad, enumerate_s4, perm_to_unitary
from .qstate import (
    ShotRng,
    Statevector4,
    Unitary4,
    apply,
    basis_state,
    collapse_expect_basis,
    compose,
    dagger,
    measure_shot,
    phase_equivalent,
    probabilities,
)
from .superposition import (
    build_h_hat,
    build_h_hat_dagger,
    build_hh_tensor,
    superposition_set,
    verify_p1_diagonalization,
)

__version__ = "0.1.0"
