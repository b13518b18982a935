"""Command-line front end: key generation, encryption, decryption, analysis.

Subcommands wire the library into the full experiment: ``keygen`` makes a
key file, ``encrypt``/``decrypt`` run either cipher mode over files,
``analyze`` prints the randomness statistics of any file, and ``demo``
renders the staged comparison table (original plaintext, randomized
plaintext, sampled superposition states, sampled ciphertext, plus the
adversary column obtained by applying the conjugate superposition operator
to every ciphertext state before sampling).

Demo sampling draws whole rounds (one shot of every state per round, fresh
derived seed each round) so that consecutive 2-bit outcomes in the sampled
file come from distinct states; total sampled bytes are capped at 1 MiB per
stage by reducing the round count for large inputs. The adversary stage is
always a single round: an eavesdropper cannot clone the transmitted states,
so one measurement per ciphertext state is all they ever get (repeating
rounds would also re-leak the deterministic outcomes of the diagonalized
pad entries and just amplify whatever structure the randomized plaintext
retains).
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from . import cipher, ent
from .errors import (
    BadBlockCount,
    FormatError,
    InputTooShort,
    KeyTooShort,
    NotBasisState,
    QppError,
)
from .keyschedule import MIN_KEY_LEN, KeyMaterial, xor_randomize
from .mixer import MASK64, mix64
from .pads import build_pad
from .superposition import build_h_hat_dagger

DEFAULT_SHOTS = 20000
DEFAULT_SEED = 0xC0FFEE
DEMO_SAMPLE_CAP = 1 << 20

EXIT_CODES = """\
exit codes:
  0  success
  1  I/O failure or unexpected error
  2  usage error
  3  key shorter than the 32-byte minimum
  4  malformed ciphertext stream (magic/version/truncation/norm)
  5  decryption failed to land on basis states (wrong key or corruption)
  6  input too small to analyze (minimum 6 bytes)
  7  block sequence does not fill whole bytes
"""


@dataclass
class CommandConfig:
    command: str
    key_path: str | None = None
    input_path: str | None = None
    output_path: str | None = None
    shots: int = DEFAULT_SHOTS
    seed: int = DEFAULT_SEED
    mode: str = "superposition"
    emit_samples: str | None = None
    report: str = "text"
    length: int = MIN_KEY_LEN


def _write_atomic(path: str, data: bytes) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def _read(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _parse_seed(text: str) -> int:
    return int(text, 16) & MASK64


def _default_seed() -> int:
    env = os.environ.get("QPP_SEED")
    return _parse_seed(env) if env else DEFAULT_SEED


def cmd_keygen(cfg: CommandConfig) -> int:
    if cfg.length < MIN_KEY_LEN:
        raise KeyTooShort(
            f"requested {cfg.length} bytes, minimum is {MIN_KEY_LEN}"
        )
    key_bytes = os.urandom(cfg.length)
    _write_atomic(cfg.output_path, key_bytes)
    pad = build_pad(KeyMaterial(key_bytes))
    print(f"pad fingerprint 0x{pad.fingerprint():016x}")
    return 0


def cmd_encrypt(cfg: CommandConfig) -> int:
    key = KeyMaterial.from_file(cfg.key_path)
    plaintext = _read(cfg.input_path)
    if cfg.mode == "basis":
        _write_atomic(cfg.output_path, cipher.encrypt_basis(key, plaintext))
        return 0
    cs = cipher.encrypt(key, plaintext)
    _write_atomic(cfg.output_path, cipher.serialize(cs))
    if cfg.emit_samples:
        _write_atomic(
            cfg.emit_samples, cipher.sample_states(cs, cfg.shots, cfg.seed)
        )
    return 0


def cmd_decrypt(cfg: CommandConfig) -> int:
    key = KeyMaterial.from_file(cfg.key_path)
    blob = _read(cfg.input_path)
    if cfg.mode == "basis":
        plaintext = cipher.decrypt_basis(key, blob)
    else:
        plaintext = cipher.decrypt(key, cipher.deserialize(blob))
    _write_atomic(cfg.output_path, plaintext)
    return 0


def cmd_analyze(cfg: CommandConfig) -> int:
    report = ent.analyze(_read(cfg.input_path))
    if cfg.report == "kv":
        print(ent.report_kv(report))
    else:
        print(ent.report_table({os.path.basename(cfg.input_path): report}))
    return 0


def _sample_rounds(
    cs: cipher.CipherStates, shots: int, seed: int, max_rounds: int | None = None
) -> bytes:
    """Round-based sampling: each round measures every state once."""
    per_round = -(-cs.block_count // 4)
    rounds = min(shots, max(1, DEMO_SAMPLE_CAP // max(1, per_round)))
    if max_rounds is not None:
        rounds = min(rounds, max_rounds)
    return b"".join(
        cipher.sample_states(cs, 1, mix64(seed ^ r)) for r in range(rounds)
    )


def cmd_demo(cfg: CommandConfig) -> int:
    key = KeyMaterial.from_file(cfg.key_path)
    plaintext = _read(cfg.input_path)

    randomized = xor_randomize(plaintext, key)
    pre_states = cipher.superposition_states(key, plaintext)
    cipher_states = cipher.encrypt(key, plaintext)
    adversary_states = cipher.transform_states(cipher_states, build_h_hat_dagger())

    stages = {
        "Original plaintext": ent.analyze(plaintext),
        "Randomized plaintext": ent.analyze(randomized),
        "Superposition states": ent.analyze(
            _sample_rounds(pre_states, cfg.shots, mix64(cfg.seed ^ 1))
        ),
        "Ciphertext": ent.analyze(
            _sample_rounds(cipher_states, cfg.shots, mix64(cfg.seed ^ 2))
        ),
        "Hdagger(ciphertext)": ent.analyze(
            _sample_rounds(adversary_states, cfg.shots, mix64(cfg.seed ^ 3),
                           max_rounds=1)
        ),
    }
    if cfg.report == "kv":
        keys = ["original", "randomized", "superposition", "ciphertext", "adversary"]
        for prefix, report in zip(keys, stages.values()):
            print(ent.report_kv(report, prefix))
    else:
        print(ent.report_table(stages))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qppad",
        description="Permutation-pad cipher over simulated 2-qubit states, "
        "with an ENT-style randomness analyzer.",
        epilog=EXIT_CODES,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="write a fresh random key file")
    p.add_argument("--length", type=int, default=MIN_KEY_LEN,
                   help=f"key length in bytes, >= {MIN_KEY_LEN} (default)")
    p.add_argument("--out", required=True, help="key file to write")

    p = sub.add_parser("encrypt", help="encrypt a file")
    p.add_argument("--key", required=True, help="key file (>= 32 raw bytes)")
    p.add_argument("--in", dest="input", required=True, help="plaintext file")
    p.add_argument("--out", required=True,
                   help="output: QPPS stream (superposition) or raw bytes (basis)")
    p.add_argument("--mode", choices=("superposition", "basis"),
                   default="superposition")
    p.add_argument("--emit-samples", metavar="PATH",
                   help="also write measurement samples of the ciphertext states")
    p.add_argument("--shots", type=int, default=DEFAULT_SHOTS,
                   help="measurements per state for --emit-samples")
    p.add_argument("--seed", type=_parse_seed, default=None, metavar="HEX",
                   help="sampling seed (hex; default 0xC0FFEE or $QPP_SEED)")

    p = sub.add_parser("decrypt", help="decrypt a file")
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="input", required=True,
                   help="QPPS stream (superposition) or raw ciphertext (basis)")
    p.add_argument("--out", required=True, help="recovered plaintext file")
    p.add_argument("--mode", choices=("superposition", "basis"),
                   default="superposition")

    p = sub.add_parser("analyze", help="print randomness statistics of a file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--report", choices=("text", "kv"), default="text")

    p = sub.add_parser("demo", help="staged randomness comparison table")
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--shots", type=int, default=DEFAULT_SHOTS,
                   help="sampling rounds requested per stage (capped at 1 MiB)")
    p.add_argument("--seed", type=_parse_seed, default=None, metavar="HEX")
    p.add_argument("--report", choices=("text", "kv"), default="text")

    return parser


def _config_from_args(args: argparse.Namespace) -> CommandConfig:
    cfg = CommandConfig(command=args.command)
    cfg.key_path = getattr(args, "key", None)
    cfg.input_path = getattr(args, "input", None)
    cfg.output_path = getattr(args, "out", None)
    cfg.mode = getattr(args, "mode", "superposition")
    cfg.emit_samples = getattr(args, "emit_samples", None)
    cfg.report = getattr(args, "report", "text")
    cfg.length = getattr(args, "length", MIN_KEY_LEN)
    cfg.shots = getattr(args, "shots", DEFAULT_SHOTS)
    seed = getattr(args, "seed", None)
    cfg.seed = seed if seed is not None else _default_seed()
    if cfg.shots < 1:
        raise ValueError("--shots must be >= 1")
    # validate paths before any computation
    for path in (cfg.key_path, cfg.input_path):
        if path is not None and not os.path.isfile(path):
            raise FileNotFoundError(f"no such file: {path}")
    for path in (cfg.output_path, cfg.emit_samples):
        if path is not None:
            parent = os.path.dirname(os.path.abspath(path))
            if not os.path.isdir(parent):
                raise FileNotFoundError(f"output directory missing: {parent}")
    return cfg


_HANDLERS = {
    "keygen": cmd_keygen,
    "encrypt": cmd_encrypt,
    "decrypt": cmd_decrypt,
    "analyze": cmd_analyze,
    "demo": cmd_demo,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        if cfg.command == "encrypt" and cfg.mode == "basis" and cfg.emit_samples:
            parser.error("--emit-samples requires superposition mode")
        return _HANDLERS[cfg.command](cfg)
    except KeyTooShort as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FormatError as exc:
        print(f"error: malformed stream: {exc}", file=sys.stderr)
        return 4
    except NotBasisState as exc:
        print(f"error: decryption failed: {exc}", file=sys.stderr)
        return 5
    except InputTooShort as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 6
    except BadBlockCount as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 7
    except (OSError, ValueError, QppError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
