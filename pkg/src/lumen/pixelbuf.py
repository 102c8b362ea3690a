"""Raster containers, binary PNM (P5/P6) I/O and JFIF YCbCr conversion."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .errors import BadHeader, BadMagic, DimensionMismatch, Truncated, UnsupportedMaxval

_WHITESPACE = b" \t\n\r\v\f"

# rows: Y, Cb, Cr (offsets added separately)
RGB_TO_YCC = np.array(
    [
        [0.299, 0.587, 0.114],
        [-0.168736, -0.331264, 0.5],
        [0.5, -0.418688, -0.081312],
    ]
)


def round_half_away(x):
    """Round to the nearest integer, ties away from zero (numpy rounds ties to even)."""
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def to_uint8(x) -> np.ndarray:
    """Round half away from zero and clamp into [0, 255]."""
    return np.clip(round_half_away(x), 0, 255).astype(np.uint8)


def _frozen_u8(data, ndim: int) -> np.ndarray:
    arr = np.asarray(data)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("image must be at least 1x1")
    if arr.dtype != np.uint8:
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise ValueError("samples must lie in [0, 255]")
        if np.issubdtype(arr.dtype, np.floating) and not np.all(arr == np.floor(arr)):
            raise ValueError("samples must be integral")
        arr = arr.astype(np.uint8)
    arr = np.array(arr, dtype=np.uint8, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit grayscale image; ``pixels`` has shape (height, width)."""

    pixels: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pixels", _frozen_u8(self.pixels, 2))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def data(self) -> bytes:
        return self.pixels.tobytes()

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(np.array_equal(self.pixels, other.pixels))

    def __repr__(self):
        return f"GrayImage({self.width}x{self.height})"


@dataclass(frozen=True, eq=False)
class RgbImage:
    """8-bit RGB image; ``pixels`` has shape (height, width, 3)."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = _frozen_u8(self.pixels, 3)
        if arr.shape[2] != 3:
            raise ValueError(f"expected 3 channels, got {arr.shape[2]}")
        object.__setattr__(self, "pixels", arr)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def data(self) -> bytes:
        return self.pixels.tobytes()

    def __eq__(self, other):
        if not isinstance(other, RgbImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(np.array_equal(self.pixels, other.pixels))

    def __repr__(self):
        return f"RgbImage({self.width}x{self.height})"


Image = Union[GrayImage, RgbImage]


@dataclass(frozen=True, eq=False)
class YccPlanes:
    """Real-valued Y, Cb, Cr planes, each of shape (height, width). Never clamped."""

    y: np.ndarray
    cb: np.ndarray
    cr: np.ndarray

    def __post_init__(self):
        planes = [np.asarray(p, dtype=np.float64) for p in (self.y, self.cb, self.cr)]
        if planes[0].ndim != 2 or any(p.shape != planes[0].shape for p in planes):
            raise DimensionMismatch("Y, Cb and Cr planes must share one 2-d shape")
        if not all(np.all(np.isfinite(p)) for p in planes):
            raise ValueError("planes must be finite")
        for name, p in zip(("y", "cb", "cr"), planes):
            object.__setattr__(self, name, p)

    @property
    def width(self) -> int:
        return self.y.shape[1]

    @property
    def height(self) -> int:
        return self.y.shape[0]


def _next_token(buf: bytes, pos: int) -> tuple[bytes, int]:
    n = len(buf)
    while pos < n:
        c = buf[pos : pos + 1]
        if c == b"#":
            while pos < n and buf[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif c in _WHITESPACE:
            pos += 1
        else:
            break
    start = pos
    while pos < n and buf[pos : pos + 1] not in _WHITESPACE and buf[pos : pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise BadHeader("header ended prematurely")
    return buf[start:pos], pos


def _positive_int(token: bytes, what: str) -> int:
    if not token.isdigit():
        raise BadHeader(f"non-numeric {what}: {token!r}")
    value = int(token)
    if value <= 0:
        raise BadHeader(f"{what} must be positive, got {value}")
    return value


def read_pnm(buf: bytes) -> Image:
    """Decode a binary PGM (P5) or PPM (P6) file with maxval 255."""
    buf = bytes(buf)
    magic = buf[:2]
    if magic not in (b"P5", b"P6"):
        raise BadMagic(f"unsupported magic {magic!r}; only P5 and P6 are accepted")
    pos = 2
    if len(buf) > 2 and buf[2:3] not in _WHITESPACE and buf[2:3] != b"#":
        raise BadMagic(f"unsupported magic {buf[:3]!r}")
    tok, pos = _next_token(buf, pos)
    width = _positive_int(tok, "width")
    tok, pos = _next_token(buf, pos)
    height = _positive_int(tok, "height")
    tok, pos = _next_token(buf, pos)
    maxval = _positive_int(tok, "maxval")
    if maxval != 255:
        raise UnsupportedMaxval(f"maxval must be 255, got {maxval}")
    if pos >= len(buf) or buf[pos : pos + 1] not in _WHITESPACE:
        raise Truncated("missing whitespace after maxval")
    pos += 1

    channels = 1 if magic == b"P5" else 3
    need = width * height * channels
    payload = buf[pos : pos + need]
    if len(payload) < need:
        raise Truncated(f"expected {need} sample bytes, found {len(payload)}")
    samples = np.frombuffer(payload, dtype=np.uint8)
    if channels == 1:
        return GrayImage(samples.reshape(height, width))
    return RgbImage(samples.reshape(height, width, 3))


def write_pnm(image: Image) -> bytes:
    """Encode to the canonical ``P5``/``P6`` form: magic, dims and maxval each on their own line."""
    magic = b"P5" if isinstance(image, GrayImage) else b"P6"
    header = b"%s\n%d %d\n255\n" % (magic, image.width, image.height)
    return header + image.data


def load(path) -> Image:
    return read_pnm(Path(path).read_bytes())


def rgb_to_ycbcr(img: RgbImage) -> YccPlanes:
    rgb = img.pixels.astype(np.float64)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    (yr, yg, yb), (br, bg, bb), (rr, rg, rb) = RGB_TO_YCC
    # rows sum to 1, 0, 0 only in exact arithmetic; pin grays to (v, 128, 128)
    y = yr * r + yg * g + yb * b
    cb = br * r + bg * g + bb * b + 128.0
    cr = rr * r + rg * g + rb * b + 128.0
    achromatic = (r == g) & (g == b)
    y = np.where(achromatic, r, y)
    cb = np.where(achromatic, 128.0, cb)
    cr = np.where(achromatic, 128.0, cr)
    return YccPlanes(y, cb, cr)


def ycbcr_to_rgb_real(p: YccPlanes) -> np.ndarray:
    """Inverse JFIF transform without quantization; shape (h, w, 3)."""
    cb = p.cb - 128.0
    cr = p.cr - 128.0
    r = p.y + 1.402 * cr
    g = p.y - 0.344136 * cb - 0.714136 * cr
    b = p.y + 1.772 * cb
    return np.stack([r, g, b], axis=-1)


def ycbcr_to_rgb(p: YccPlanes) -> RgbImage:
    return RgbImage(to_uint8(ycbcr_to_rgb_real(p)))
