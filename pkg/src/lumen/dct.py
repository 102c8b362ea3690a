"""Colour enhancement by scaling 8x8 block-DCT coefficients of the YCbCr planes."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .pixelbuf import RgbImage, YccPlanes, rgb_to_ycbcr, ycbcr_to_rgb

N = 8
DC_WHITE = 8.0 * 255.0  # orthonormal DC of an all-255 block
CHROMA_NEUTRAL_DC = 8.0 * 128.0
CHROMA_GAIN_RANGE = (0.5, 2.0)
DC_EPS = 1e-6
DEFAULT_ETA = 0.75


def dct_matrix(n: int = N) -> np.ndarray:
    """Orthonormal DCT-II basis; row ``k`` is the ``k``-th cosine."""
    k = np.arange(n)[:, None]
    x = np.arange(n)[None, :]
    c = np.cos(np.pi * (2 * x + 1) * k / (2 * n)) * math.sqrt(2.0 / n)
    c[0] /= math.sqrt(2.0)
    return c


_C = dct_matrix()


def dct8_forward(samples) -> np.ndarray:
    """2-d orthonormal DCT-II of one 8x8 block, or of a stack ``(..., 8, 8)``."""
    return _C @ np.asarray(samples, dtype=np.float64) @ _C.T


def dct8_inverse(coeffs) -> np.ndarray:
    return _C.T @ np.asarray(coeffs, dtype=np.float64) @ _C


def zigzag_order(n: int = N) -> list[tuple[int, int]]:
    """JPEG zigzag traversal: anti-diagonals, alternating direction, starting at (0, 0)."""
    order = []
    for s in range(2 * n - 1):
        diag = [(i, s - i) for i in range(n) if 0 <= s - i < n]
        # even diagonals run bottom-left to top-right
        order.extend(reversed(diag) if s % 2 == 0 else diag)
    return order


class MappingKind(str, enum.Enum):
    TWISTING = "twisting"
    ETA = "eta"
    S_CURVE = "s"


@dataclass(frozen=True)
class MappingFunction:
    """Monotone map of [0, 1] onto itself fixing both endpoints.

    * twisting: ``x (2 - x)``
    * eta: ``x ** eta`` (brightening for eta < 1)
    * s: ``3x^2 - 2x^3``
    """

    kind: MappingKind
    eta: float = DEFAULT_ETA

    def __post_init__(self):
        object.__setattr__(self, "kind", MappingKind(self.kind))
        if not (self.eta > 0 and math.isfinite(self.eta)):
            raise ParameterError(f"eta must be positive, got {self.eta!r}")

    @classmethod
    def parse(cls, text: str) -> "MappingFunction":
        """Parse ``twisting``, ``s``, ``eta`` or ``eta:<exponent>``."""
        name, _, arg = text.strip().lower().partition(":")
        aliases = {"s-curve": "s", "s_function": "s", "twist": "twisting"}
        name = aliases.get(name, name)
        try:
            kind = MappingKind(name)
        except ValueError:
            raise ParameterError(f"unknown mapping {text!r}; expected twisting, eta[:exp] or s") from None
        if arg and kind is not MappingKind.ETA:
            raise ParameterError(f"mapping {name!r} takes no argument")
        if arg:
            try:
                eta = float(arg)
            except ValueError:
                raise ParameterError(f"bad eta exponent {arg!r}") from None
            return cls(kind, eta)
        return cls(kind)

    @property
    def label(self) -> str:
        if self.kind is MappingKind.ETA and self.eta != DEFAULT_ETA:
            return f"eta:{self.eta:g}"
        return self.kind.value

    def __call__(self, x):
        return mapping_eval(self, x)


def mapping_eval(fn: MappingFunction, x):
    x = np.asarray(x, dtype=np.float64)
    if fn.kind is MappingKind.TWISTING:
        return x * (2.0 - x)
    if fn.kind is MappingKind.ETA:
        return np.power(x, fn.eta)
    return x * x * (3.0 - 2.0 * x)


class EnhanceMode(str, enum.Enum):
    DC = "dc"
    DC_AC = "dc-ac"
    DC_AC_CHROMA = "dc-ac-chroma"


def map_dc(dc, fn) -> tuple:
    """Map luminance DC values through ``fn``; returns ``(new_dc, gain)``.

    Blocks with DC at or below 1e-6 are left alone with unit gain.
    """
    dc = np.asarray(dc, dtype=np.float64)
    x = np.clip(dc / DC_WHITE, 0.0, 1.0)
    dark = dc <= DC_EPS
    mapped = np.where(dark, dc, DC_WHITE * fn(x))
    with np.errstate(divide="ignore", invalid="ignore"):
        gain = np.where(dark, 1.0, mapped / np.where(dark, 1.0, dc))
    if mapped.ndim == 0:
        return float(mapped), float(gain)
    return mapped, gain


@dataclass(frozen=True)
class BlockPartition:
    """An edge-replicated plane cut into 8x8 blocks, shape ``(rows, cols, 8, 8)``."""

    blocks: np.ndarray
    orig_w: int
    orig_h: int

    @property
    def padded_w(self) -> int:
        return self.blocks.shape[1] * N

    @property
    def padded_h(self) -> int:
        return self.blocks.shape[0] * N

    @classmethod
    def from_plane(cls, plane: np.ndarray) -> "BlockPartition":
        h, w = plane.shape
        ph, pw = -(-h // N) * N, -(-w // N) * N
        padded = np.pad(np.asarray(plane, dtype=np.float64), ((0, ph - h), (0, pw - w)), mode="edge")
        blocks = padded.reshape(ph // N, N, pw // N, N).swapaxes(1, 2)
        return cls(blocks, w, h)

    def to_plane(self) -> np.ndarray:
        rows, cols = self.blocks.shape[:2]
        plane = self.blocks.swapaxes(1, 2).reshape(rows * N, cols * N)
        return plane[: self.orig_h, : self.orig_w]

    def map(self, fn) -> "BlockPartition":
        return BlockPartition(fn(self.blocks), self.orig_w, self.orig_h)


def scale_coefficients(y, cb, cr, fn: MappingFunction, mode: EnhanceMode):
    """Apply the mode's coefficient rule to stacked DCT blocks ``(rows, cols, 8, 8)``.

    Returns new ``(y, cb, cr)`` coefficient stacks and the per-block luminance gain.
    """
    mode = EnhanceMode(mode)
    dc, gain = map_dc(y[..., 0, 0], fn)
    gain = np.asarray(gain)
    y = y.copy()
    if mode is EnhanceMode.DC:
        y[..., 0, 0] = dc
    else:
        y *= gain[..., None, None]
        # written back exactly rather than via gain * dc
        y[..., 0, 0] = dc
    if mode is EnhanceMode.DC_AC_CHROMA:
        lam = np.clip(gain, *CHROMA_GAIN_RANGE)[..., None, None]
        cb = _scale_chroma(cb, lam)
        cr = _scale_chroma(cr, lam)
    return y, cb, cr, gain


def _scale_chroma(c, lam):
    out = c * lam
    out[..., 0, 0] = CHROMA_NEUTRAL_DC + lam[..., 0, 0] * (c[..., 0, 0] - CHROMA_NEUTRAL_DC)
    return out


def enhance_planes(planes: YccPlanes, fn: MappingFunction, mode: EnhanceMode) -> YccPlanes:
    parts = [BlockPartition.from_plane(p) for p in (planes.y, planes.cb, planes.cr)]
    coeffs = [dct8_forward(p.blocks) for p in parts]
    y, cb, cr, _ = scale_coefficients(*coeffs, fn, mode)
    out = [
        BlockPartition(dct8_inverse(c), p.orig_w, p.orig_h).to_plane()
        for c, p in zip((y, cb, cr), parts)
    ]
    return YccPlanes(*out)


def enhance_color(img: RgbImage, fn: MappingFunction, mode: EnhanceMode) -> RgbImage:
    """Enhance a colour image by scaling block-DCT coefficients of its YCbCr planes.

    ``mode`` selects which coefficients change:

    ``dc``
        luminance DC only, ``DC' = 2040 * fn(DC / 2040)``;
    ``dc-ac``
        luminance DC as above and every AC scaled by ``DC' / DC``;
    ``dc-ac-chroma``
        additionally scales the co-located Cb/Cr deviations from neutral
        (DC about 1024, AC about 0) by the same gain clipped to [0.5, 2].
    """
    return ycbcr_to_rgb(enhance_planes(rgb_to_ycbcr(img), fn, EnhanceMode(mode)))
