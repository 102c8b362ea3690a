"""Regenerate the natural-image PNM fixtures under tests/data from scikit-image's sample data.

Usage: python tools/make_fixtures.py   (needs the ``fixtures`` extra)
"""

from pathlib import Path

import numpy as np
from skimage import data

from lumen.pixelbuf import GrayImage, RgbImage, write_pnm

OUT = Path(__file__).resolve().parents[1] / "tests" / "data"
SIDE = 128

GRAY = ["camera", "moon", "coins", "clock", "brick", "grass", "gravel", "page", "text", "microaneurysms"]
COLOR = ["astronaut", "coffee", "chelsea", "rocket", "immunohistochemistry", "hubble_deep_field"]


def shrink(a: np.ndarray) -> np.ndarray:
    """Centre-crop to a square and box-average down to about SIDE pixels."""
    h, w = a.shape[:2]
    s = min(h, w)
    y0, x0 = (h - s) // 2, (w - s) // 2
    a = a[y0 : y0 + s, x0 : x0 + s].astype(np.float64)
    f = max(1, s // SIDE)
    s = (s // f) * f
    a = a[:s, :s]
    a = a.reshape(s // f, f, s // f, f, *a.shape[2:]).mean(axis=(1, 3))
    return np.clip(np.floor(a + 0.5), 0, 255).astype(np.uint8)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name in GRAY:
        img = GrayImage(shrink(getattr(data, name)()))
        (OUT / f"{name}.pgm").write_bytes(write_pnm(img))
    for name in COLOR:
        img = RgbImage(shrink(getattr(data, name)()[..., :3]))
        (OUT / f"{name}.ppm").write_bytes(write_pnm(img))


if __name__ == "__main__":
    main()
