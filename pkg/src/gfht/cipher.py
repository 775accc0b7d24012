"""GFHT round function, multi-round encryption and the envelope format.

One round XORs a layer with its key matrix (gene fusion) and then gathers
rows and columns through the permutation keys (horizontal gene transfer).
Decryption runs the rounds backwards with the inverse permutations.

The envelope carries no authentication tag: a wrong passphrase decrypts to
noise rather than raising.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .image_io import Layer, RgbImage
from .keys import DEFAULT_ROUNDS, KeyMaterial, derive_keys, keys_for_image

MAGIC = b"GFHT"
VERSION = 1
_HEADER = struct.Struct(">4sBBII4s")


class EnvelopeError(ValueError):
    """Malformed or truncated envelope bytes."""


def _check_perms(layer: Layer, v_key, h_key):
    m, n = layer.shape
    if len(v_key) != m or len(h_key) != n:
        raise ValueError(
            f"permutation lengths ({len(v_key)}, {len(h_key)}) do not match layer shape {layer.shape}"
        )


def crossover(layer: Layer, v_key, h_key) -> Layer:
    """``out[m, p] = layer[v_key[m], h_key[p]]``."""
    layer = np.asarray(layer)
    _check_perms(layer, v_key, h_key)
    return layer[np.ix_(v_key, h_key)]


def inverse_crossover(layer: Layer, v_key, h_key) -> Layer:
    layer = np.asarray(layer)
    _check_perms(layer, v_key, h_key)
    return layer[np.ix_(np.argsort(v_key), np.argsort(h_key))]


def encrypt_round(layer: Layer, layer_key, v_key, h_key) -> Layer:
    """XOR with the layer key, then crossover."""
    layer = np.asarray(layer, dtype=np.uint8)
    layer_key = np.asarray(layer_key, dtype=np.uint8)
    if layer.shape != layer_key.shape:
        raise ValueError(f"layer {layer.shape} and key {layer_key.shape} differ in shape")
    return crossover(layer ^ layer_key, v_key, h_key)


def decrypt_round(layer: Layer, layer_key, v_key, h_key) -> Layer:
    layer_key = np.asarray(layer_key, dtype=np.uint8)
    out = inverse_crossover(np.asarray(layer, dtype=np.uint8), v_key, h_key)
    if out.shape != layer_key.shape:
        raise ValueError(f"layer {out.shape} and key {layer_key.shape} differ in shape")
    return out ^ layer_key


@dataclass(frozen=True)
class CipherEnvelope:
    """Ciphertext plus everything except the passphrase needed to decrypt it.

    Wire layout (big-endian)::

        "GFHT" | version:u8 | rounds:u8 | height:u32 | width:u32 | salt:4 | payload

    ``payload`` is the encrypted R, G, B layers, each row-major.
    """

    rounds: int
    height: int
    width: int
    salt: bytes
    payload: bytes
    version: int = VERSION

    def __post_init__(self):
        if self.rounds < 1 or self.rounds > 255:
            raise EnvelopeError(f"rounds must be in [1, 255], got {self.rounds}")
        if len(self.salt) != 4:
            raise EnvelopeError("salt must be 4 bytes")
        if len(self.payload) != 3 * self.height * self.width:
            raise EnvelopeError(
                f"payload is {len(self.payload)} bytes, expected {3 * self.height * self.width}"
            )

    @classmethod
    def from_image(cls, image: RgbImage, salt: bytes, rounds: int) -> "CipherEnvelope":
        return cls(rounds, image.height, image.width, bytes(salt), image.planar_bytes())

    @property
    def image(self) -> RgbImage:
        """The ciphertext as an image (useful for the statistical tests)."""
        arr = np.frombuffer(self.payload, dtype=np.uint8).reshape(3, self.height, self.width)
        return RgbImage(arr[0].copy(), arr[1].copy(), arr[2].copy())

    def to_bytes(self) -> bytes:
        head = _HEADER.pack(MAGIC, self.version, self.rounds, self.height, self.width, self.salt)
        return head + self.payload

    @classmethod
    def from_bytes(cls, data: bytes) -> "CipherEnvelope":
        if len(data) < _HEADER.size:
            raise EnvelopeError(f"envelope truncated: {len(data)} bytes")
        magic, version, rounds, height, width, salt = _HEADER.unpack_from(data)
        if magic != MAGIC:
            raise EnvelopeError(f"bad magic {magic!r}")
        if version != VERSION:
            raise EnvelopeError(f"unsupported envelope version {version}")
        if height == 0 or width == 0:
            raise EnvelopeError("zero-dimension envelope")
        payload = bytes(data[_HEADER.size :])
        return cls(rounds, height, width, salt, payload, version)


def encrypt_layers(image: RgbImage, keys: KeyMaterial) -> RgbImage:
    if image.shape != keys.shape:
        raise ValueError(f"key shape {keys.shape} does not match image shape {image.shape}")
    out = []
    for layer, key in zip(image.layers, keys.layer_keys):
        for _ in range(keys.rounds):
            layer = encrypt_round(layer, key, keys.v_key, keys.h_key)
        out.append(layer)
    return RgbImage(*out)


def decrypt_layers(image: RgbImage, keys: KeyMaterial) -> RgbImage:
    if image.shape != keys.shape:
        raise ValueError(f"key shape {keys.shape} does not match image shape {image.shape}")
    out = []
    for layer, key in zip(image.layers, keys.layer_keys):
        for _ in range(keys.rounds):
            layer = decrypt_round(layer, key, keys.v_key, keys.h_key)
        out.append(layer)
    return RgbImage(*out)


def encrypt(image: RgbImage, keys: KeyMaterial) -> CipherEnvelope:
    """Run ``keys.rounds`` rounds on every layer and package the result."""
    return CipherEnvelope.from_image(encrypt_layers(image, keys), keys.salt, keys.rounds)


def encrypt_image(image: RgbImage, passphrase, rounds: int = DEFAULT_ROUNDS) -> CipherEnvelope:
    """Encrypt with one-time keys salted by the image's own digest."""
    return encrypt(image, keys_for_image(passphrase, image, rounds))


def decrypt(envelope: CipherEnvelope, passphrase) -> RgbImage:
    keys = derive_keys(passphrase, envelope.salt, (envelope.height, envelope.width), envelope.rounds)
    return decrypt_layers(envelope.image, keys)
