"""Background detection and Weber-law logarithmic enhancement of grayscale images.

Three background estimates are provided:

* ``blocks``: per-tile minimum/maximum over an ``l1`` x ``l2`` tiling,
* ``eroded``: the midpoint of the erosion and dilation at scale ``mu``,
* ``reconstruction``: the opening by reconstruction at scale ``mu``.

Every estimate feeds the same gray-level map ``g = b + k * ln(v + 1)`` with
``k = (255 - b) / ln(256)``, which sends 0 to ``b`` and 255 to 255.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np

from . import metrics
from .errors import BadBlockSize, DimensionMismatch, ParameterError
from .morphology import dilate_array, erode_array, opening_by_reconstruction_array
from .pixelbuf import GrayImage, to_uint8

LN256 = math.log(256.0)

METHODS = ("blocks", "eroded", "reconstruction")


def weber_k(m):
    """Gain of the log map for background (or block minimum) ``m``."""
    return (255.0 - np.asarray(m, dtype=np.float64)) / LN256


def weber_log_map(v, base, k):
    """``base + k * ln(v + 1)``; scalars or broadcastable arrays."""
    return base + k * np.log1p(np.asarray(v, dtype=np.float64))


@dataclass(frozen=True)
class BlockGrid:
    """Per-tile statistics of an ``l1`` (wide) by ``l2`` (tall) tiling.

    Arrays are indexed ``[block_row, block_col]``. Tiles in the last row and
    column take whatever remains when the image size is not a multiple of
    the tile size.
    """

    block_w: int
    block_h: int
    width: int
    height: int
    m: np.ndarray
    M: np.ndarray

    @property
    def tau(self) -> np.ndarray:
        return (self.m.astype(np.float64) + self.M) / 2.0

    @property
    def k(self) -> np.ndarray:
        return weber_k(self.m.astype(np.float64))

    @property
    def n(self) -> int:
        return self.m.size

    def slices(self):
        """Yield ``(block_row, block_col, row_slice, col_slice)`` in raster order."""
        for i, y0 in enumerate(range(0, self.height, self.block_h)):
            for j, x0 in enumerate(range(0, self.width, self.block_w)):
                yield i, j, slice(y0, y0 + self.block_h), slice(x0, x0 + self.block_w)

    def expand(self, values: np.ndarray) -> np.ndarray:
        """Broadcast per-block ``values`` back to a full-resolution plane."""
        full = np.repeat(np.repeat(values, self.block_h, axis=0), self.block_w, axis=1)
        return full[: self.height, : self.width]


def block_stats(f: GrayImage, l1: int, l2: int) -> BlockGrid:
    for name, size, limit in (("l1", l1, f.width), ("l2", l2, f.height)):
        if isinstance(size, bool) or int(size) != size or not 1 <= size <= limit:
            raise BadBlockSize(f"{name}={size!r} must be an integer in [1, {limit}]")
    l1, l2 = int(l1), int(l2)
    rows = -(-f.height // l2)
    cols = -(-f.width // l1)
    # pad with edge values so remainder tiles keep their own min/max
    a = np.pad(f.pixels, ((0, rows * l2 - f.height), (0, cols * l1 - f.width)), mode="edge")
    tiles = a.reshape(rows, l2, cols, l1)
    return BlockGrid(l1, l2, f.width, f.height, tiles.min(axis=(1, 3)), tiles.max(axis=(1, 3)))


def enhance_blocks(f: GrayImage, l1: int, l2: int) -> GrayImage:
    grid = block_stats(f, l1, l2)
    base = grid.expand(grid.m).astype(np.float64)
    out = weber_log_map(f.pixels, base, weber_k(base))
    return GrayImage(to_uint8(out))


@dataclass(frozen=True, eq=False)
class BackgroundMap:
    tau: np.ndarray
    method: str

    def __post_init__(self):
        tau = np.array(self.tau, dtype=np.float64)
        if tau.ndim != 2:
            raise ValueError("background map must be 2-d")
        if tau.size and (tau.min() < 0 or tau.max() > 255):
            raise ValueError("background values must lie in [0, 255]")
        tau.setflags(write=False)
        object.__setattr__(self, "tau", tau)

    @property
    def width(self) -> int:
        return self.tau.shape[1]

    @property
    def height(self) -> int:
        return self.tau.shape[0]

    def to_image(self) -> GrayImage:
        return GrayImage(to_uint8(self.tau))


def _check_scale(mu) -> int:
    if isinstance(mu, bool) or int(mu) != mu or mu < 1:
        raise ParameterError(f"mu must be an integer >= 1, got {mu!r}")
    return int(mu)


def background_erosion_dilation(f: GrayImage, mu: int) -> BackgroundMap:
    mu = _check_scale(mu)
    lo = erode_array(f.pixels, mu).astype(np.float64)
    hi = dilate_array(f.pixels, mu).astype(np.float64)
    return BackgroundMap((lo + hi) / 2.0, "eroded")


def background_reconstruction(f: GrayImage, mu: int) -> BackgroundMap:
    mu = _check_scale(mu)
    return BackgroundMap(opening_by_reconstruction_array(f.pixels, mu), "reconstruction")


def background_blocks(f: GrayImage, l1: int, l2: int) -> BackgroundMap:
    """Block criterion (m + M) / 2 broadcast to every pixel of its tile."""
    grid = block_stats(f, l1, l2)
    return BackgroundMap(grid.expand(grid.tau), "blocks")


def enhance_with_background(f: GrayImage, bg: BackgroundMap) -> GrayImage:
    if bg.tau.shape != f.pixels.shape:
        raise DimensionMismatch(f"background is {bg.width}x{bg.height}, image is {f.width}x{f.height}")
    out = weber_log_map(f.pixels, bg.tau, weber_k(bg.tau))
    return GrayImage(to_uint8(out))


Param = Union[int, tuple]


def enhance(f: GrayImage, method: str, param: Param) -> tuple[GrayImage, BackgroundMap]:
    """Run one method; ``param`` is ``mu`` for morphological methods, ``(l1, l2)`` for blocks."""
    if method == "blocks":
        l1, l2 = param
        return enhance_blocks(f, l1, l2), background_blocks(f, l1, l2)
    if method == "eroded":
        bg = background_erosion_dilation(f, param)
    elif method == "reconstruction":
        bg = background_reconstruction(f, param)
    else:
        raise ParameterError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
    return enhance_with_background(f, bg), bg


class SweepEntry(NamedTuple):
    param: Param
    image: GrayImage
    report: metrics.MetricsReport


def score_against(f: GrayImage, out: GrayImage) -> metrics.MetricsReport:
    report = metrics.MetricsReport()
    metrics.measure(report, "ssim", lambda: metrics.ssim(f, out))
    metrics.measure(report, "normalized_entropy", lambda: metrics.normalized_entropy(f, out))
    return report


def enhance_sweep(f: GrayImage, method: str, params: Sequence[Param]) -> list[SweepEntry]:
    """Enhance ``f`` once per parameter and score every result against ``f``."""
    params = list(params)
    if not params:
        raise ParameterError("parameter list is empty")
    entries = []
    for p in params:
        try:
            out, _ = enhance(f, method, p)
        except ParameterError as exc:
            err = type(exc)(f"{method} with parameter {p!r}: {exc}")
            err.param = p
            raise err from exc
        entries.append(SweepEntry(p, out, score_against(f, out)))
    return entries
