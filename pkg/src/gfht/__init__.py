"""GFHT genetic image cipher and a randomness-evaluation toolkit."""

from .cipher import CipherEnvelope, decrypt, encrypt, encrypt_image
from .image_io import RgbImage, blue_as_grayscale, load_image, save_image
from .keys import KeyMaterial, derive_keys, keys_for_image

__all__ = [
    "CipherEnvelope",
    "KeyMaterial",
    "RgbImage",
    "blue_as_grayscale",
    "decrypt",
    "derive_keys",
    "encrypt",
    "encrypt_image",
    "keys_for_image",
    "load_image",
    "save_image",
]

__version__ = "0.1.0"
