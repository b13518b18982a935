"""Exception types shared across the package."""


class QppError(Exception):
    """Base class for all qppad errors."""


class KeyTooShort(QppError):
    """Key material is shorter than the 32-byte minimum."""


class NotBasisState(QppError):
    """A state expected to collapse onto a single basis state did not.

    Raised during decryption when the dominant outcome probability falls
    below the tolerance, which signals a wrong key or corrupted states.
    """


class BadBlockCount(QppError):
    """A 2-bit block sequence cannot be repacked into whole bytes."""


class FormatError(QppError):
    """Base class for ciphertext stream (QPPS) format violations."""


class BadMagic(FormatError):
    """Stream does not start with the QPPS magic."""


class BadVersion(FormatError):
    """Stream declares an unsupported format version."""


class TruncatedStream(FormatError):
    """Stream ended before the declared number of states."""


class NormViolation(FormatError):
    """A deserialized state's norm deviates from 1 beyond tolerance."""


class DiagonalizationFailure(QppError):
    """The superposition operator failed to diagonalize the reference 4-cycle."""


class InputTooShort(QppError):
    """Buffer too small for the randomness statistics (minimum 6 bytes)."""
