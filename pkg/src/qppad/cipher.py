"""End-to-end permutation-pad pipelines and the simulated quantum channel.

Two modes share the key schedule, blocking, and dispatch:

* superposition mode: each randomized 2-bit block v is lifted to the
  superposition H_hat|v> and encrypted with a dispatched permutation
  operator; the ciphertext is a sequence of statevectors, carried in the
  QPPS stream format below (standing in for a quantum channel).
* basis mode: the dispatched permutation acts on the block value itself,
  yielding classical ciphertext bytes of the same length as the input.

Block processing is batched with numpy, but every pipeline is defined
(and tested) as the equivalent per-state operator chain from ``qstate``.

QPPS stream format (all integers little-endian):

    offset 0   4 bytes   magic "QPPS"
    offset 4   1 byte    version, currently 0x01
    offset 5   8 bytes   block count, unsigned
    offset 13  1 byte    trailing padding bit count of the final partial
                         byte (always 0 for whole-byte plaintexts)
    offset 14  per state: 4 amplitudes x (re, im) as IEEE-754 binary64

Deserialization is strict: wrong magic, unknown version, short payloads,
trailing bytes, and state norms off by more than 1e-6 are all rejected.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadBlockCount,
    BadMagic,
    BadVersion,
    FormatError,
    NormViolation,
    NotBasisState,
    TruncatedStream,
)
from .keyschedule import KeyMaterial, build_dispatch, xor_randomize
from .mixer import GOLDEN_U, MASK64, finalize64_array, mix64_array, units_from_u64
from .pads import PAD_SIZE, PermutationPad, build_pad
from .qstate import NORM_TOL, Statevector4, Unitary4
from .superposition import build_h_hat, build_h_hat_dagger

MAGIC = b"QPPS"
VERSION = 1
HEADER_LEN = 14
STATE_LEN = 64  # 4 amplitudes x 2 doubles x 8 bytes
COLLAPSE_TOL = 1e-9
WIRE_NORM_TOL = 1e-6


class CipherStates:
    """Ordered ciphertext statevectors, stored as one (n, 4) complex array.

    Indexing yields :class:`Statevector4` values; ``amps`` exposes the raw
    batch for vectorized pipelines. Immutable after construction.
    """

    __slots__ = ("amps", "pad_bits")

    def __init__(self, amps, pad_bits: int = 0, norm_tol: float = NORM_TOL):
        a = np.asarray(amps, dtype=complex)
        if a.ndim != 2 or a.shape[1] != 4:
            raise ValueError(f"expected an (n, 4) amplitude array, got {a.shape}")
        if not 0 <= pad_bits <= 7:
            raise ValueError("pad_bits must be in 0..7")
        if a.shape[0]:
            if not np.isfinite(a).all():
                raise ValueError("amplitudes must be finite")
            norms = np.sqrt((np.abs(a) ** 2).sum(axis=1))
            worst = float(np.abs(norms - 1.0).max())
            if worst > norm_tol:
                raise ValueError(f"state norm off by {worst:g} (> {norm_tol:g})")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)
        object.__setattr__(self, "pad_bits", pad_bits)

    def __setattr__(self, name, value):
        raise AttributeError("CipherStates is immutable")

    @property
    def block_count(self) -> int:
        return self.amps.shape[0]

    def __len__(self) -> int:
        return self.amps.shape[0]

    def __getitem__(self, i: int) -> Statevector4:
        return Statevector4(self.amps[i], norm_tol=WIRE_NORM_TOL)

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, CipherStates):
            return NotImplemented
        return self.pad_bits == other.pad_bits and np.array_equal(
            self.amps, other.amps
        )

    @classmethod
    def from_states(cls, states, pad_bits: int = 0) -> "CipherStates":
        if not states:
            return cls(np.zeros((0, 4), dtype=complex), pad_bits)
        return cls(np.stack([s.amps for s in states]), pad_bits)


@dataclass(frozen=True)
class EncryptionContext:
    """Key-derived material shared by one encryption/decryption run."""

    pad: PermutationPad
    dispatch: np.ndarray
    key: KeyMaterial

    def __post_init__(self):
        if self.dispatch.size and int(self.dispatch.max()) >= len(self.pad.ops):
            raise ValueError("dispatch index out of pad range")


def build_context(
    key: KeyMaterial, n_blocks: int, pad: PermutationPad | None = None
) -> EncryptionContext:
    """Derive the pad and dispatch list for ``n_blocks`` 2-bit blocks.

    ``pad`` overrides the key-derived pad (handy for tests); the dispatch
    list always comes from the key so both sides stay aligned.
    """
    if pad is None:
        pad = build_pad(key)
    return EncryptionContext(pad, build_dispatch(key, n_blocks, PAD_SIZE), key)


def bytes_to_blocks(data: bytes) -> np.ndarray:
    """Split bytes into 2-bit blocks, MSB-first, 4 blocks per byte."""
    buf = np.frombuffer(bytes(data), dtype=np.uint8)
    out = np.empty(buf.size * 4, dtype=np.uint8)
    out[0::4] = buf >> 6
    out[1::4] = (buf >> 4) & 3
    out[2::4] = (buf >> 2) & 3
    out[3::4] = buf & 3
    return out


def blocks_to_bytes(blocks) -> bytes:
    """Repack 2-bit blocks into bytes; exact inverse of bytes_to_blocks."""
    b = np.asarray(blocks, dtype=np.uint8)
    if b.size % 4:
        raise BadBlockCount(f"{b.size} blocks do not fill whole bytes")
    if b.size and int(b.max()) > 3:
        raise ValueError("block values must be 2-bit")
    q = b.reshape(-1, 4)
    return ((q[:, 0] << 6) | (q[:, 1] << 4) | (q[:, 2] << 2) | q[:, 3]).astype(
        np.uint8
    ).tobytes()


def superposition_states(key: KeyMaterial, plaintext: bytes) -> CipherStates:
    """States after randomization and H_hat, before any permutation.

    This is the pre-encryption stage the randomness report samples
    separately from the ciphertext.
    """
    blocks = bytes_to_blocks(xor_randomize(plaintext, key))
    h = build_h_hat()
    return CipherStates(h.m.T[blocks])


def encrypt(
    key: KeyMaterial, plaintext: bytes, pad: PermutationPad | None = None
) -> CipherStates:
    """Superposition-mode encryption.

    Per block v of the XOR-randomized plaintext, the output state is
    P_dispatch[i] · (H_hat |v>); with only 4 possible inputs and 56 pad
    entries the states are precomputed into a (56, 4) table and gathered.
    """
    blocks = bytes_to_blocks(xor_randomize(plaintext, key))
    ctx = build_context(key, blocks.size, pad)
    h = build_h_hat()
    # applying a permutation p to amplitudes is a gather by its inverse map
    inv_maps = ctx.pad.inverse_maps_array()          # (56, 4)
    table = h.m[inv_maps.astype(np.intp), :]         # (56, 4, 4): [j, r, v]
    amps = table.transpose(0, 2, 1)[ctx.dispatch.astype(np.intp), blocks.astype(np.intp), :]
    return CipherStates(amps)


def decrypt(key: KeyMaterial, cs: CipherStates, pad: PermutationPad | None = None) -> bytes:
    """Superposition-mode decryption: inverse pad operator, then the
    conjugate superposition operator, then collapse onto a basis state.

    Raises NotBasisState when any state fails to collapse (wrong key or
    corrupted stream) and BadBlockCount when the block count cannot form
    whole bytes.
    """
    ctx = build_context(key, cs.block_count, pad)
    if cs.block_count == 0:
        return b""
    fwd = ctx.pad.maps_array()[ctx.dispatch.astype(np.intp)]      # (n, 4)
    undone = np.take_along_axis(cs.amps, fwd.astype(np.intp), axis=1)
    hd = build_h_hat_dagger()
    plain_states = undone @ hd.m.T
    probs = np.abs(plain_states) ** 2
    blocks = probs.argmax(axis=1)
    pmax = np.take_along_axis(probs, blocks[:, None], axis=1)[:, 0]
    bad = np.nonzero(pmax < 1.0 - COLLAPSE_TOL)[0]
    if bad.size:
        raise NotBasisState(
            f"state {int(bad[0])} did not collapse "
            f"(max outcome probability {float(pmax[bad[0]]):.6f})"
        )
    return xor_randomize(blocks_to_bytes(blocks), key)


def encrypt_basis(
    key: KeyMaterial, plaintext: bytes, pad: PermutationPad | None = None
) -> bytes:
    """Basis-mode encryption: the dispatched permutation acts on the block
    value directly; ciphertext has the same length as the plaintext."""
    blocks = bytes_to_blocks(xor_randomize(plaintext, key))
    ctx = build_context(key, blocks.size, pad)
    maps = ctx.pad.maps_array()
    ct_blocks = maps[ctx.dispatch.astype(np.intp), blocks.astype(np.intp)]
    return blocks_to_bytes(ct_blocks)


def decrypt_basis(
    key: KeyMaterial, ciphertext: bytes, pad: PermutationPad | None = None
) -> bytes:
    """Inverse of encrypt_basis."""
    ct_blocks = bytes_to_blocks(ciphertext)
    ctx = build_context(key, ct_blocks.size, pad)
    inv = ctx.pad.inverse_maps_array()
    blocks = inv[ctx.dispatch.astype(np.intp), ct_blocks.astype(np.intp)]
    return xor_randomize(blocks_to_bytes(blocks), key)


def transform_states(cs: CipherStates, u: Unitary4) -> CipherStates:
    """Apply one unitary to every state (e.g. the adversary's H_hat†)."""
    return CipherStates(cs.amps @ u.m.T, cs.pad_bits)


def serialize(cs: CipherStates) -> bytes:
    """Encode ciphertext states into the QPPS byte stream (see module docs)."""
    header = (
        MAGIC
        + bytes([VERSION])
        + cs.block_count.to_bytes(8, "little")
        + bytes([cs.pad_bits])
    )
    payload = np.ascontiguousarray(cs.amps, dtype="<c16").view("<f8").tobytes()
    return header + payload


def deserialize(stream: bytes) -> CipherStates:
    """Decode a QPPS byte stream, rejecting anything malformed.

    Raises BadMagic, BadVersion, TruncatedStream on structural problems,
    NormViolation when a state norm is off by more than 1e-6, and the base
    FormatError for trailing bytes or a bad padding field.
    """
    if len(stream) < len(MAGIC):
        raise TruncatedStream("stream shorter than the magic")
    if stream[: len(MAGIC)] != MAGIC:
        raise BadMagic(f"expected {MAGIC!r}, got {stream[:4]!r}")
    if len(stream) < HEADER_LEN:
        raise TruncatedStream("incomplete header")
    version = stream[4]
    if version != VERSION:
        raise BadVersion(f"unsupported version {version}")
    block_count = int.from_bytes(stream[5:13], "little")
    pad_bits = stream[13]
    if pad_bits > 7:
        raise FormatError(f"pad_bits {pad_bits} out of range")
    body = stream[HEADER_LEN:]
    need = block_count * STATE_LEN
    if len(body) < need:
        raise TruncatedStream(f"payload holds {len(body)} bytes, need {need}")
    if len(body) > need:
        raise FormatError(f"{len(body) - need} trailing bytes after payload")
    amps = np.frombuffer(body, dtype="<f8").astype(np.float64).view(np.complex128)
    amps = amps.reshape(block_count, 4)
    if block_count:
        if not np.isfinite(amps).all():
            raise NormViolation("non-finite amplitude in payload")
        with np.errstate(over="ignore"):  # gross corruption may square to inf
            norms = np.sqrt((np.abs(amps) ** 2).sum(axis=1))
            worst = float(np.abs(norms - 1.0).max())
        if worst > WIRE_NORM_TOL:
            raise NormViolation(f"state norm off by {worst:g}")
    return CipherStates(amps, pad_bits, norm_tol=WIRE_NORM_TOL)


def sample_states(cs: CipherStates, shots_per_state: int, seed: int) -> bytes:
    """Measure every state ``shots_per_state`` times and pack the outcomes.

    State i is sampled from its own SplitMix64 stream seeded with
    mix64(seed XOR i), so sampling is order-independent and reproducible.
    Outcomes are packed 2 bits each, MSB-first, 4 per byte, states
    concatenated in order; the final byte is zero-padded.
    """
    if shots_per_state < 1:
        raise ValueError("shots_per_state must be >= 1")
    n = cs.block_count
    total = n * shots_per_state
    if total == 0:
        return b""
    cums = np.cumsum(np.abs(cs.amps) ** 2, axis=1)[:, :3]  # (n, 3)
    steps = np.arange(1, shots_per_state + 1, dtype=np.uint64) * GOLDEN_U
    seed_u = np.uint64(seed & MASK64)

    parts: list[np.ndarray] = []
    carry = np.empty(0, dtype=np.uint8)
    chunk = max(1, (1 << 22) // shots_per_state)
    for s0 in range(0, n, chunk):
        s1 = min(n, s0 + chunk)
        idx = np.arange(s0, s1, dtype=np.uint64)
        starts = mix64_array(seed_u ^ idx)
        units = units_from_u64(finalize64_array(starts[:, None] + steps[None, :]))
        outcomes = (units[:, None, :] >= cums[s0:s1, :, None]).sum(
            axis=1, dtype=np.uint8
        )
        flat = np.concatenate([carry, outcomes.reshape(-1)])
        whole = flat.size & ~3
        q = flat[:whole].reshape(-1, 4)
        parts.append(
            ((q[:, 0] << 6) | (q[:, 1] << 4) | (q[:, 2] << 2) | q[:, 3]).astype(np.uint8)
        )
        carry = flat[whole:]
    if carry.size:
        tail = np.zeros(4, dtype=np.uint8)
        tail[: carry.size] = carry
        parts.append(
            np.array([(tail[0] << 6) | (tail[1] << 4) | (tail[2] << 2) | tail[3]], dtype=np.uint8)
        )
    return np.concatenate(parts).tobytes()
