"""Salted one-time key schedule.

The plaintext digest supplies a 32-bit salt; SHA-256(passphrase || salt) is
the seed from which the row/column permutation keys and the principal byte
key are expanded. A single changed pixel therefore yields unrelated keys
under the same passphrase.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .image_io import RgbImage

DEFAULT_ROUNDS = 3
ROW_LABEL = b"V_KEY"
COL_LABEL = b"H_KEY"


def _as_bytes(passphrase) -> bytes:
    if isinstance(passphrase, str):
        return passphrase.encode("utf-8")
    return bytes(passphrase)


def compute_image_digest(image: RgbImage) -> bytes:
    """SHA-256 of the planar byte stream (R, G, B; each row-major)."""
    h = hashlib.sha256()
    for layer in image.layers:
        h.update(np.ascontiguousarray(layer).tobytes())
    return h.digest()


def extract_salt(digest: bytes) -> bytes:
    """Last four bytes of a digest."""
    if len(digest) != 32:
        raise ValueError(f"digest must be 32 bytes, got {len(digest)}")
    return bytes(digest[-4:])


def derive_seed(passphrase, salt: bytes) -> bytes:
    """SHA-256(passphrase || salt)."""
    pw = _as_bytes(passphrase)
    if not pw:
        raise ValueError("passphrase must not be empty")
    if len(salt) != 4:
        raise ValueError(f"salt must be 4 bytes, got {len(salt)}")
    return hashlib.sha256(pw + bytes(salt)).digest()


def _blocks(seed: bytes):
    counter = 0
    while True:
        yield hashlib.sha256(seed + counter.to_bytes(4, "big")).digest()
        counter += 1


def keystream(seed: bytes, count: int) -> bytes:
    """Counter-mode expansion: SHA-256(seed || i) for i = 0, 1, ..., truncated."""
    if count < 0:
        raise ValueError("count must be non-negative")
    out = bytearray()
    blocks = _blocks(seed)
    while len(out) < count:
        out += next(blocks)
    return bytes(out[:count])


def _words(seed: bytes):
    # consecutive 4-byte big-endian words of keystream(seed, .)
    for block in _blocks(seed):
        for i in range(0, 32, 4):
            yield int.from_bytes(block[i : i + 4], "big")


def derive_permutation(seed: bytes, domain_size: int, label: bytes) -> np.ndarray:
    """Keyed Fisher-Yates shuffle of ``range(domain_size)``.

    Index draws come from the keystream of SHA-256(seed || label), read as
    32-bit big-endian words; out-of-range words are rejected so every
    permutation is equally likely.
    """
    if domain_size < 1:
        raise ValueError("domain_size must be at least 1")
    words = _words(hashlib.sha256(seed + bytes(label)).digest())
    perm = list(range(domain_size))
    for i in range(domain_size - 1, 0, -1):
        span = i + 1
        limit = (1 << 32) - (1 << 32) % span
        w = next(words)
        while w >= limit:
            w = next(words)
        j = w % span
        perm[i], perm[j] = perm[j], perm[i]
    return np.array(perm, dtype=np.intp)


def build_p_key(v_key, h_key) -> np.ndarray:
    """Principal key: ``((v_key[i] + 1) * (h_key[j] + 1)) mod 256``."""
    a = np.asarray(v_key, dtype=np.int64) + 1
    b = np.asarray(h_key, dtype=np.int64) + 1
    return (np.outer(a, b) % 256).astype(np.uint8)


def rotl8(x, bits: int):
    """Circular left rotation of every byte in ``x``."""
    x = np.asarray(x, dtype=np.uint8)
    bits %= 8
    if bits == 0:
        return x.copy()
    return ((x << bits) | (x >> (8 - bits))).astype(np.uint8)


def rotate_layer_key(p_key, bits: int) -> np.ndarray:
    """Layer key for G (3 bits) or B (6 bits); 0 returns the R key."""
    if bits not in (0, 3, 6):
        raise ValueError(f"layer key rotation must be 0, 3 or 6 bits, got {bits}")
    return rotl8(p_key, bits)


@dataclass(frozen=True, eq=False)
class KeyMaterial:
    salt: bytes
    v_key: np.ndarray
    h_key: np.ndarray
    p_key0: np.ndarray
    p_key3: np.ndarray
    p_key6: np.ndarray
    rounds: int = DEFAULT_ROUNDS

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.v_key), len(self.h_key)

    @property
    def layer_keys(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Keys for R, G, B in that order."""
        return self.p_key0, self.p_key3, self.p_key6

    def __eq__(self, other):
        if not isinstance(other, KeyMaterial):
            return NotImplemented
        return (
            self.salt == other.salt
            and self.rounds == other.rounds
            and all(
                np.array_equal(getattr(self, f), getattr(other, f))
                for f in ("v_key", "h_key", "p_key0", "p_key3", "p_key6")
            )
        )


def derive_keys(passphrase, salt: bytes, shape: tuple[int, int], rounds: int = DEFAULT_ROUNDS) -> KeyMaterial:
    """Expand ``(passphrase, salt)`` into key material for an M x N image."""
    if rounds < 1 or rounds > 255:
        raise ValueError(f"rounds must be in [1, 255], got {rounds}")
    m, n = shape
    seed = derive_seed(passphrase, salt)
    v_key = derive_permutation(seed, m, ROW_LABEL)
    h_key = derive_permutation(seed, n, COL_LABEL)
    p0 = build_p_key(v_key, h_key)
    return KeyMaterial(
        salt=bytes(salt),
        v_key=v_key,
        h_key=h_key,
        p_key0=p0,
        p_key3=rotate_layer_key(p0, 3),
        p_key6=rotate_layer_key(p0, 6),
        rounds=rounds,
    )


def keys_for_image(passphrase, image: RgbImage, rounds: int = DEFAULT_ROUNDS) -> KeyMaterial:
    """One-time keys for ``image``: the salt is taken from its own digest."""
    salt = extract_salt(compute_image_digest(image))
    return derive_keys(passphrase, salt, image.shape, rounds)
