import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qppad import (
    BadBlockCount,
    BadMagic,
    BadVersion,
    CipherStates,
    FormatError,
    KeyMaterial,
    NormViolation,
    NotBasisState,
    Perm4,
    PermutationPad,
    ShotRng,
    TruncatedStream,
    analyze,
    apply,
    basis_state,
    blocks_to_bytes,
    build_dispatch,
    build_h_hat,
    build_h_hat_dagger,
    build_pad,
    bytes_to_blocks,
    decrypt,
    decrypt_basis,
    deserialize,
    encrypt,
    encrypt_basis,
    measure_shot,
    perm_to_unitary,
    sample_states,
    serialize,
    superposition_states,
    transform_states,
    xor_randomize,
)
from qppad.mixer import mix64
from tests.conftest import DATA_DIR, TEST_KEY

H = build_h_hat()

IDENTITY_PAD = PermutationPad(tuple(Perm4((0, 1, 2, 3)) for _ in range(56)))
FOUR_CYCLE_PAD = PermutationPad(tuple(Perm4((1, 2, 3, 0)) for _ in range(56)))


class TestBlocking:
    def test_zero_byte(self):
        assert bytes_to_blocks(b"\x00").tolist() == [0, 0, 0, 0]

    def test_msb_first(self):
        assert bytes_to_blocks(bytes([0b11011000])).tolist() == [3, 1, 2, 0]

    def test_blocks_to_bytes_cases(self):
        assert blocks_to_bytes([0, 0, 0, 0]) == b"\x00"
        assert blocks_to_bytes([3, 3, 3, 3]) == b"\xff"
        assert blocks_to_bytes([3, 1, 2, 0]) == b"\xd8"

    def test_bad_block_count(self):
        with pytest.raises(BadBlockCount):
            blocks_to_bytes([1, 2, 3])

    def test_roundtrip_random_buffers(self):
        rng = np.random.default_rng(17)
        for _ in range(1000):
            data = rng.bytes(int(rng.integers(0, 64)))
            assert blocks_to_bytes(bytes_to_blocks(data)) == data


class TestEncrypt:
    def test_empty_plaintext(self, key):
        cs = encrypt(key, b"")
        assert cs.block_count == 0 and len(cs) == 0

    def test_all_states_have_uniform_probabilities(self, key):
        cs = encrypt(key, b"some plaintext with structure \x00\xff")
        assert np.abs(np.abs(cs.amps) ** 2 - 0.25).max() < 1e-12

    def test_zero_block_encodes_to_super_superposition(self, key):
        # plaintext equal to the key prefix randomizes to all-zero blocks,
        # which every dispatched permutation leaves exactly in place
        cs = encrypt(key, TEST_KEY[:16])
        he0 = apply(H, basis_state(0))
        assert np.array_equal(cs.amps, np.tile(he0.amps, (64, 1)))

    def test_matches_per_state_operator_chain(self, key):
        msg = b"\x00\x1b\xd8\xff check"
        cs = encrypt(key, msg)
        pad = build_pad(key)
        blocks = bytes_to_blocks(xor_randomize(msg, key))
        dispatch = build_dispatch(key, blocks.size)
        for i, (v, j) in enumerate(zip(blocks, dispatch)):
            u = perm_to_unitary(pad.ops[j])
            want = apply(u, apply(H, basis_state(int(v))))
            assert np.abs(cs.amps[i] - want.amps).max() < 1e-15


class TestDecrypt:
    def test_roundtrip_random_pairs(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            k = KeyMaterial(rng.bytes(int(rng.integers(32, 72))))
            msg = rng.bytes(int(rng.integers(0, 300)))
            assert decrypt(k, encrypt(k, msg)) == msg

    @given(st.binary(max_size=120), st.binary(min_size=32, max_size=48))
    @settings(max_examples=60, deadline=None)
    def test_roundtrip_property(self, msg, kb):
        k = KeyMaterial(kb)
        assert decrypt(k, deserialize(serialize(encrypt(k, msg)))) == msg

    def test_sample_asset_roundtrips_byte_identical(self, key, asset_bytes):
        cs = encrypt(key, asset_bytes)
        assert decrypt(key, deserialize(serialize(cs))) == asset_bytes

    def test_wrong_key_never_silently_succeeds(self, key):
        rng = np.random.default_rng(31)
        msg = b"attack at dawn, again and again!"
        cs = encrypt(key, msg)
        for _ in range(100):
            wrong = KeyMaterial(rng.bytes(32))
            try:
                out = decrypt(wrong, cs)
            except NotBasisState:
                continue
            assert out != msg

    def test_matches_per_state_operator_chain(self, key):
        msg = b"per-state decrypt check"
        cs = encrypt(key, msg)
        pad = build_pad(key)
        dispatch = build_dispatch(key, cs.block_count)
        hd = build_h_hat_dagger()
        blocks = []
        for i in range(cs.block_count):
            inv_u = perm_to_unitary(pad.inverse_ops[dispatch[i]])
            psi = apply(hd, apply(inv_u, cs[i]))
            probs = np.abs(psi.amps) ** 2
            blocks.append(int(np.argmax(probs)))
            assert probs.max() > 1 - 1e-9
        assert xor_randomize(blocks_to_bytes(blocks), key) == msg


class TestBasisMode:
    def test_identity_pad_hook_exposes_randomized_plaintext(self, key):
        msg = b"hook check: identity pad means xor only"
        ct = encrypt_basis(key, msg, pad=IDENTITY_PAD)
        assert ct == xor_randomize(msg, key)

    def test_roundtrip_random_pairs(self):
        rng = np.random.default_rng(41)
        for _ in range(1000):
            k = KeyMaterial(rng.bytes(32))
            msg = rng.bytes(int(rng.integers(0, 80)))
            assert decrypt_basis(k, encrypt_basis(k, msg)) == msg

    def test_ciphertext_length_equals_plaintext_length(self, key, asset_bytes):
        assert len(encrypt_basis(key, asset_bytes[:4096])) == 4096

    def test_golden_single_zero_byte(self, key):
        assert encrypt_basis(key, b"\x00") == bytes.fromhex("82")

    def test_empty(self, key):
        assert encrypt_basis(key, b"") == b""
        assert decrypt_basis(key, b"") == b""

    def test_matches_brute_force_map_composition(self, key):
        # independent oracle: pure-integer bit fiddling, one byte at a time
        pad = build_pad(key)
        dispatch = build_dispatch(key, 4).tolist()
        for m in range(256):
            r = m ^ TEST_KEY[0]
            ct_byte = 0
            for i in range(4):
                v = (r >> (6 - 2 * i)) & 3
                ct_byte = (ct_byte << 2) | pad.ops[dispatch[i]].map[v]
            assert encrypt_basis(key, bytes([m])) == bytes([ct_byte])

    def test_basis_equals_measured_superposition_only_when_p_commutes(self, key):
        msg = b"\x1b" * 8
        hd = build_h_hat_dagger()
        # identity permutations commute with the superposition operator:
        # measuring H_hat†(ciphertext states) reproduces the basis ciphertext
        cs = encrypt(key, msg, pad=IDENTITY_PAD)
        measured = transform_states(cs, hd)
        blocks = np.abs(measured.amps).argmax(axis=1)
        assert blocks_to_bytes(blocks) == encrypt_basis(key, msg, pad=IDENTITY_PAD)
        # a 4-cycle does not: the transformed states are not basis states
        cs = encrypt(key, msg, pad=FOUR_CYCLE_PAD)
        measured = transform_states(cs, hd)
        probs = np.abs(measured.amps) ** 2
        assert probs.max(axis=1).min() < 0.75


class TestSerialization:
    def test_empty_stream_is_exactly_the_14_byte_header(self, key):
        blob = serialize(encrypt(key, b""))
        assert blob == bytes.fromhex("5150505301" + "00" * 9)
        assert len(blob) == 14

    def test_roundtrip_bit_exact(self, key):
        cs = encrypt(key, b"exact bits please")
        assert deserialize(serialize(cs)) == cs

    def test_length_formula(self, key):
        msg = b"x" * 123
        assert len(serialize(encrypt(key, msg))) == 14 + 64 * 4 * 123

    def test_bad_magic(self):
        with pytest.raises(BadMagic):
            deserialize(b"QQPS" + bytes(10))

    def test_bad_version(self, key):
        blob = bytearray(serialize(encrypt(key, b"v")))
        blob[4] = 2
        with pytest.raises(BadVersion):
            deserialize(bytes(blob))

    def test_truncated_header_and_payload(self, key):
        blob = serialize(encrypt(key, b"hello"))
        with pytest.raises(TruncatedStream):
            deserialize(blob[:3])
        with pytest.raises(TruncatedStream):
            deserialize(blob[:10])
        with pytest.raises(TruncatedStream):
            deserialize(blob[:-1])

    def test_trailing_bytes_rejected(self, key):
        blob = serialize(encrypt(key, b"hello"))
        with pytest.raises(FormatError):
            deserialize(blob + b"\x00")

    def test_pad_bits_out_of_range_rejected(self, key):
        blob = bytearray(serialize(encrypt(key, b"p")))
        blob[13] = 8
        with pytest.raises(FormatError):
            deserialize(bytes(blob))

    def test_exponent_byte_flip_is_detected(self, key):
        msg = b"fault injection target"
        blob = serialize(encrypt(key, msg))
        for float_index in (0, 3, 17):
            corrupted = bytearray(blob)
            corrupted[14 + 8 * float_index + 7] ^= 0xFF
            with pytest.raises((NormViolation, NotBasisState)):
                decrypt(key, deserialize(bytes(corrupted)))

    def test_golden_stream_file(self, key):
        blob = serialize(encrypt(key, b"QPP demo"))
        assert blob == (DATA_DIR / "golden.qpps").read_bytes()


class TestCipherStates:
    def test_norm_validated(self):
        with pytest.raises(ValueError):
            CipherStates(np.array([[1.0, 1.0, 0, 0]], dtype=complex))

    def test_pad_bits_range(self):
        with pytest.raises(ValueError):
            CipherStates(np.zeros((0, 4), dtype=complex), pad_bits=8)

    def test_indexing_yields_statevectors(self, key):
        cs = encrypt(key, b"\x12")
        assert isinstance(cs[0], type(basis_state(0)))
        assert len(list(cs)) == 4

    def test_immutable(self, key):
        cs = encrypt(key, b"\x12")
        with pytest.raises(ValueError):
            cs.amps[0, 0] = 9.0

    def test_from_states(self):
        sts = [basis_state(v) for v in range(4)]
        cs = CipherStates.from_states(sts)
        assert cs.block_count == 4
        assert np.array_equal(cs.amps[2], sts[2].amps)


class TestSampling:
    def test_basis_state_four_shots_is_0xaa(self):
        cs = CipherStates(np.array([[0, 0, 1, 0]], dtype=complex))
        assert sample_states(cs, 4, 12345) == b"\xaa"

    def test_deterministic_for_fixed_seed(self, key):
        cs = encrypt(key, b"determinism")
        a = sample_states(cs, 7, 0xC0FFEE)
        assert a == sample_states(cs, 7, 0xC0FFEE)
        assert a != sample_states(cs, 7, 0xC0FFED)

    def test_output_length(self, key):
        cs = encrypt(key, b"12345")  # 20 states
        assert len(sample_states(cs, 3, 1)) == -(-20 * 3 // 4)

    def test_matches_per_shot_measurement(self, key):
        cs = encrypt(key, b"\xf3\x07")
        seed_val = 0xC0FFEE
        outcomes = []
        for i in range(cs.block_count):
            rng = ShotRng(mix64(seed_val ^ i))
            outcomes.extend(measure_shot(cs[i], rng) for _ in range(3))
        want = bytearray()
        for i in range(0, len(outcomes), 4):
            quad = outcomes[i : i + 4] + [0] * (4 - len(outcomes[i : i + 4]))
            want.append(quad[0] << 6 | quad[1] << 4 | quad[2] << 2 | quad[3])
        assert sample_states(cs, 3, seed_val) == bytes(want)

    def test_uniform_states_sample_to_high_entropy(self, key):
        cs = encrypt(key, bytes(8192))
        report = analyze(sample_states(cs, 2, 0xC0FFEE))
        assert report.entropy > 7.97

    def test_golden_samples_file(self, key):
        cs = encrypt(key, b"QPP demo")
        assert sample_states(cs, 3, 0xC0FFEE) == (
            DATA_DIR / "golden_samples.bin"
        ).read_bytes()

    def test_shots_must_be_positive(self, key):
        with pytest.raises(ValueError):
            sample_states(encrypt(key, b"x"), 0, 1)


class TestAdversaryParity:
    def test_conjugated_ciphertext_samples_as_random_as_ciphertext(self, key):
        rng = np.random.default_rng(47)
        msg = rng.bytes(8192)
        cs = encrypt(key, msg)
        own = analyze(sample_states(cs, 1, 0xC0FFEE))
        adv = analyze(
            sample_states(transform_states(cs, build_h_hat_dagger()), 1, 0xC0FFEE)
        )
        assert abs(adv.entropy - own.entropy) <= 0.02


class TestSuperpositionStates:
    def test_pre_permutation_states_are_h_columns(self, key):
        msg = b"\x00\x55\xaa\xff"
        pre = superposition_states(key, msg)
        blocks = bytes_to_blocks(xor_randomize(msg, key))
        for i, v in enumerate(blocks):
            want = apply(H, basis_state(int(v)))
            assert np.array_equal(pre.amps[i], want.amps)
