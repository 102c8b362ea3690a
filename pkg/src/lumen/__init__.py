"""Low-light image enhancement.

Grayscale images are brightened with a Weber-law logarithmic map driven by
a morphological background estimate; colour images by scaling 8x8 block-DCT
coefficients of their YCbCr planes. Quality metrics (SSIM, entropy, JPQM,
colorfulness) score the results.
"""

from .dct import EnhanceMode, MappingFunction, enhance_color
from .errors import LumenError
from .metrics import MetricsReport, cef, colorfulness, entropy, jpqm, normalized_entropy, ssim, weber_contrast
from .pixelbuf import GrayImage, RgbImage, YccPlanes, read_pnm, write_pnm
from .weber import (
    BackgroundMap,
    background_erosion_dilation,
    background_reconstruction,
    enhance_blocks,
    enhance_sweep,
    enhance_with_background,
)

__version__ = "0.1.0"

__all__ = [
    "BackgroundMap",
    "EnhanceMode",
    "GrayImage",
    "LumenError",
    "MappingFunction",
    "MetricsReport",
    "RgbImage",
    "YccPlanes",
    "background_erosion_dilation",
    "background_reconstruction",
    "cef",
    "colorfulness",
    "enhance_blocks",
    "enhance_color",
    "enhance_sweep",
    "enhance_with_background",
    "entropy",
    "jpqm",
    "normalized_entropy",
    "read_pnm",
    "ssim",
    "weber_contrast",
    "write_pnm",
]
