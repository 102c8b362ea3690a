import sys
from pathlib import Path

import numpy as np
import pytest

from lumen.pixelbuf import GrayImage, RgbImage, load

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"


def gray_fixture_paths():
    return sorted(DATA.glob("*.pgm"))


def color_fixture_paths():
    return sorted(DATA.glob("*.ppm"))


def darken(img, gamma=2.5):
    """Simulate poor lighting: ``255 * (v / 255) ** gamma``, rounded."""
    out = np.floor(255.0 * (img.pixels / 255.0) ** gamma + 0.5)
    return type(img)(out.astype(np.uint8))


def random_gray(rng, h=16, w=16):
    return GrayImage(rng.integers(0, 256, (h, w), dtype=np.uint8))


def random_rgb(rng, h=16, w=16):
    return RgbImage(rng.integers(0, 256, (h, w, 3), dtype=np.uint8))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def natural_gray():
    return [load(p) for p in gray_fixture_paths()]


@pytest.fixture(scope="session")
def natural_color():
    return [load(p) for p in color_fixture_paths()]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
