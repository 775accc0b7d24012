"""Loading, saving and channel decomposition of 8-bit RGB images.

Layers are plain ``uint8`` numpy arrays of shape (M, N), row-major. PPM (P6)
is the byte-exact interchange format; PNG goes through Pillow.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from PIL import Image

Layer = np.ndarray


class ImageFormatError(ValueError):
    """Raised for unreadable or unsupported image data."""


def as_layer(data) -> Layer:
    """Validate ``data`` as a 2-D byte matrix and return it as ``uint8``."""
    arr = np.asarray(data)
    if arr.ndim != 2:
        raise ValueError(f"layer must be 2-D, got shape {arr.shape}")
    if arr.size and (arr.min() < 0 or arr.max() > 255):
        raise ValueError("layer values must lie in [0, 255]")
    return arr.astype(np.uint8, copy=False)


@dataclass(frozen=True, eq=False)
class RgbImage:
    """Three equally shaped byte layers."""

    red: Layer
    green: Layer
    blue: Layer

    def __post_init__(self):
        layers = [as_layer(x) for x in (self.red, self.green, self.blue)]
        if not (layers[0].shape == layers[1].shape == layers[2].shape):
            raise ValueError("red, green and blue layers must share one shape")
        for name, layer in zip(("red", "green", "blue"), layers):
            object.__setattr__(self, name, layer)

    @classmethod
    def from_array(cls, pixels) -> "RgbImage":
        """Build from an (M, N, 3) interleaved array or an (M, N) grayscale one."""
        arr = np.asarray(pixels)
        if arr.ndim == 2:
            return cls(arr, arr.copy(), arr.copy())
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise ValueError(f"expected (M, N, 3) pixels, got {arr.shape}")
        return cls(arr[..., 0].copy(), arr[..., 1].copy(), arr[..., 2].copy())

    @property
    def shape(self) -> tuple[int, int]:
        return self.red.shape

    @property
    def height(self) -> int:
        return self.red.shape[0]

    @property
    def width(self) -> int:
        return self.red.shape[1]

    @property
    def layers(self) -> tuple[Layer, Layer, Layer]:
        return self.red, self.green, self.blue

    def to_array(self) -> np.ndarray:
        """Interleaved (M, N, 3) pixel array."""
        return np.stack(self.layers, axis=-1)

    def planar_bytes(self) -> bytes:
        """R layer row-major, then G, then B."""
        return b"".join(np.ascontiguousarray(x).tobytes() for x in self.layers)

    def replace(self, row: int, col: int, channel: int, value: int) -> "RgbImage":
        """Copy of the image with one channel value overwritten."""
        layers = [x.copy() for x in self.layers]
        layers[channel][row, col] = value
        return RgbImage(*layers)

    def __eq__(self, other):
        if not isinstance(other, RgbImage):
            return NotImplemented
        return all(np.array_equal(a, b) for a, b in zip(self.layers, other.layers))


def _read_token(buf: bytes, pos: int) -> tuple[bytes, int]:
    # netpbm header tokens are whitespace separated; '#' starts a comment line
    n = len(buf)
    while pos < n:
        c = buf[pos : pos + 1]
        if c == b"#":
            while pos < n and buf[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not buf[pos : pos + 1].isspace() and buf[pos : pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise ImageFormatError("truncated PNM header")
    return buf[start:pos], pos


def _parse_pnm(buf: bytes) -> np.ndarray:
    magic, pos = _read_token(buf, 0)
    if magic not in (b"P5", b"P6"):
        raise ImageFormatError(f"unsupported PNM variant {magic!r}")
    fields = []
    for _ in range(3):
        tok, pos = _read_token(buf, pos)
        try:
            fields.append(int(tok))
        except ValueError:
            raise ImageFormatError(f"bad PNM header field {tok!r}") from None
    width, height, maxval = fields
    if maxval != 255:
        raise ImageFormatError(f"unsupported bit depth (maxval {maxval})")
    if width <= 0 or height <= 0:
        raise ImageFormatError("zero-dimension image")
    pos += 1  # single whitespace byte before the raster
    channels = 3 if magic == b"P6" else 1
    size = width * height * channels
    raster = buf[pos : pos + size]
    if len(raster) != size:
        raise ImageFormatError(f"raster has {len(raster)} bytes, expected {size}")
    arr = np.frombuffer(raster, dtype=np.uint8)
    return arr.reshape(height, width, channels) if channels == 3 else arr.reshape(height, width)


def _pil_to_array(img: Image.Image) -> np.ndarray:
    if img.mode in ("I", "I;16", "I;16B", "I;16L", "F", "RGB;16") or img.mode.startswith("I;"):
        raise ImageFormatError(f"unsupported bit depth (mode {img.mode})")
    if img.mode in ("1", "L", "LA"):
        arr = np.asarray(img.convert("L"))
    else:
        arr = np.asarray(img.convert("RGB"))
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ImageFormatError("zero-dimension image")
    return arr


def load_image(path) -> RgbImage:
    """Read a binary PPM/PGM or PNG file into an :class:`RgbImage`.

    Grayscale sources are replicated into all three layers; PNG alpha is
    dropped.
    """
    with open(path, "rb") as fh:
        buf = fh.read()
    if buf[:2] in (b"P5", b"P6"):
        return RgbImage.from_array(_parse_pnm(buf))
    try:
        with Image.open(path) as img:
            img.load()
            return RgbImage.from_array(_pil_to_array(img))
    except (Image.UnidentifiedImageError, SyntaxError) as exc:
        raise ImageFormatError(f"cannot decode {path}: {exc}") from exc


def encode_ppm(image: RgbImage) -> bytes:
    """Serialize to P6 bytes."""
    h, w = image.shape
    if h == 0 or w == 0:
        raise ValueError("cannot encode a zero-dimension image")
    header = f"P6\n{w} {h}\n255\n".encode("ascii")
    return header + image.to_array().tobytes()


def save_image(image: RgbImage, path, fmt: str | None = None) -> None:
    """Write ``image`` as P6 (default) or PNG (``.png`` suffix or ``fmt='png'``)."""
    if fmt is None:
        fmt = "png" if os.fspath(path).lower().endswith(".png") else "ppm"
    h, w = image.shape
    if h == 0 or w == 0:
        raise ValueError("cannot save a zero-dimension image")
    if fmt == "png":
        Image.fromarray(image.to_array(), mode="RGB").save(path, format="PNG")
    elif fmt == "ppm":
        with open(path, "wb") as fh:
            fh.write(encode_ppm(image))
    else:
        raise ValueError(f"unknown format {fmt!r}")


def blue_as_grayscale(image: RgbImage) -> Layer:
    """The blue layer, used as the grayscale stand-in for comparisons."""
    return image.blue
