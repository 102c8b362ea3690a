"""Image quality scores: SSIM, entropy, Weber contrast, colorfulness/CEF and JPQM."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Callable, Optional

import numpy as np

from .errors import (
    AchromaticReference,
    DimensionMismatch,
    LumenError,
    TooSmall,
    ZeroMinimum,
    ZeroReferenceEntropy,
)
from .pixelbuf import GrayImage, RgbImage

SSIM_WINDOW = 8
SSIM_K1 = 0.01
SSIM_K2 = 0.03
DYNAMIC_RANGE = 255

# no-reference JPEG quality model constants
JPQM_ALPHA = -245.9
JPQM_BETA = 261.9
JPQM_GAMMA = (-0.0240, 0.0160, 0.0064)
JPQM_FLOOR = 1e-8
JPQM_MIN_SIDE = 17


@dataclass
class MetricsReport:
    """Named scores for one (reference, result) pair.

    Metrics that were not requested stay ``None``. A requested metric whose
    guard tripped is left ``None`` and its error code is kept in ``errors``.
    """

    ssim: Optional[float] = None
    entropy_bits: Optional[float] = None
    normalized_entropy: Optional[float] = None
    jpqm: Optional[float] = None
    cef: Optional[float] = None
    weber_c: Optional[float] = None
    errors: dict = field(default_factory=dict)

    def present(self) -> dict:
        return {
            f.name: getattr(self, f.name)
            for f in fields(self)
            if f.name != "errors" and getattr(self, f.name) is not None
        }


def measure(report: MetricsReport, name: str, fn: Callable[[], float]) -> MetricsReport:
    """Store ``fn()`` under ``name``, or its error code if the metric is undefined."""
    try:
        setattr(report, name, float(fn()))
    except LumenError as exc:
        report.errors[name] = exc.code
    return report


def _window_sums(a: np.ndarray, n: int) -> np.ndarray:
    # exact integer box sums over every n x n window (stride 1)
    c = np.zeros((a.shape[0] + 1, a.shape[1] + 1), dtype=np.int64)
    c[1:, 1:] = a.cumsum(0).cumsum(1)
    return c[n:, n:] - c[:-n, n:] - c[n:, :-n] + c[:-n, :-n]


def ssim_map(x: GrayImage, y: GrayImage, window: int = SSIM_WINDOW) -> np.ndarray:
    """Per-window SSIM over all ``window`` x ``window`` windows at stride 1.

    Window statistics are population moments (divide by window**2). They are
    accumulated as exact integer sums, so ``ssim_map(x, x)`` is exactly one.
    """
    if x.pixels.shape != y.pixels.shape:
        raise DimensionMismatch(f"{x!r} vs {y!r}")
    if x.width < window or x.height < window:
        raise TooSmall(f"SSIM needs at least {window}x{window} pixels, got {x.width}x{x.height}")
    a = x.pixels.astype(np.int64)
    b = y.pixels.astype(np.int64)
    n = window * window
    sa, sb = _window_sums(a, window), _window_sums(b, window)
    saa, sbb, sab = _window_sums(a * a, window), _window_sums(b * b, window), _window_sums(a * b, window)

    nn = float(n * n)
    mu_a, mu_b = sa / n, sb / n
    var_a = (n * saa - sa * sa) / nn
    var_b = (n * sbb - sb * sb) / nn
    cov = (n * sab - sa * sb) / nn

    c1 = (SSIM_K1 * DYNAMIC_RANGE) ** 2
    c2 = (SSIM_K2 * DYNAMIC_RANGE) ** 2
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return num / den


def ssim(x: GrayImage, y: GrayImage) -> float:
    return float(np.mean(ssim_map(x, y)))


def histogram(f: GrayImage) -> np.ndarray:
    return np.bincount(f.pixels.ravel(), minlength=256)


def entropy(f: GrayImage) -> float:
    """Shannon entropy of the 256-bin gray-level histogram, in bits."""
    counts = histogram(f)
    p = counts[counts > 0] / f.pixels.size
    return float(-np.sum(p * np.log2(p))) + 0.0


def normalized_entropy(original: GrayImage, treated: GrayImage) -> float:
    ref = entropy(original)
    if ref <= 0:
        raise ZeroReferenceEntropy("reference image is constant, its entropy is zero")
    return entropy(treated) / ref


def weber_contrast(f) -> float:
    """(L_max - L_min) / L_min over an image or any array-like region."""
    values = np.asarray(f.pixels if isinstance(f, (GrayImage, RgbImage)) else f, dtype=np.float64)
    lo, hi = float(values.min()), float(values.max())
    if lo <= 0:
        raise ZeroMinimum("minimum luminance is zero; Weber contrast is undefined")
    return (hi - lo) / lo


def colorfulness(img: RgbImage) -> float:
    """Opponent-channel colorfulness: sqrt(var_rg + var_yb) + 0.3 * sqrt(mean_rg^2 + mean_yb^2)."""
    rgb = img.pixels.reshape(-1, 3).astype(np.float64)
    rg = rgb[:, 0] - rgb[:, 1]
    yb = 0.5 * (rgb[:, 0] + rgb[:, 1]) - rgb[:, 2]
    spread = math.sqrt(rg.var() + yb.var())
    centre = math.sqrt(rg.mean() ** 2 + yb.mean() ** 2)
    return spread + 0.3 * centre


def cef(original: RgbImage, enhanced: RgbImage) -> float:
    """Colorfulness enhancement factor of ``enhanced`` relative to ``original``."""
    ref = colorfulness(original)
    if ref <= 0:
        raise AchromaticReference("reference image has no color")
    return colorfulness(enhanced) / ref


def _jpqm_features(f: np.ndarray) -> tuple[float, float, float]:
    # along axis 1; block boundaries sit between pixel columns 8j-1 and 8j
    d = np.diff(f, axis=1)
    rows, cols = f.shape
    boundary = d[:, 7 : cols - 1 : 8]
    n_boundary = cols // 8 - 1
    blockiness = np.abs(boundary[:, :n_boundary]).mean()
    activity = (8.0 * np.abs(d).mean() - blockiness) / 7.0
    crossings = (d[:, :-1] * d[:, 1:]) < 0
    zero_cross = crossings.mean()
    return float(blockiness), float(activity), float(zero_cross)


def jpqm_features(f: GrayImage) -> tuple[float, float, float]:
    """Blockiness, activity and zero-crossing rate averaged over both orientations."""
    if f.width < JPQM_MIN_SIDE or f.height < JPQM_MIN_SIDE:
        raise TooSmall(f"JPQM needs at least {JPQM_MIN_SIDE}x{JPQM_MIN_SIDE} pixels")
    a = f.pixels.astype(np.float64)
    bh, ah, zh = _jpqm_features(a)
    bv, av, zv = _jpqm_features(a.T)
    return tuple(max((h + v) / 2.0, JPQM_FLOOR) for h, v in ((bh, bv), (ah, av), (zh, zv)))


def jpqm(f: GrayImage) -> float:
    """No-reference JPEG quality score (higher is better)."""
    b, a, z = jpqm_features(f)
    g1, g2, g3 = JPQM_GAMMA
    return JPQM_ALPHA + JPQM_BETA * b**g1 * a**g2 * z**g3
