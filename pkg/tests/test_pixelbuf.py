import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from lumen.errors import BadHeader, BadMagic, Truncated, UnsupportedMaxval
from lumen.pixelbuf import (
    GrayImage,
    RgbImage,
    YccPlanes,
    read_pnm,
    rgb_to_ycbcr,
    round_half_away,
    write_pnm,
    ycbcr_to_rgb,
)


def test_read_p5_basic():
    img = read_pnm(b"P5\n2 2\n255\n" + bytes([0, 128, 255, 7]))
    assert isinstance(img, GrayImage)
    assert (img.width, img.height) == (2, 2)
    assert img.pixels.tolist() == [[0, 128], [255, 7]]


def test_read_header_comments_and_whitespace():
    buf = b"P6 # a comment\n# another\n 2\t1 \n255\n" + bytes([1, 2, 3, 4, 5, 6])
    img = read_pnm(buf)
    assert isinstance(img, RgbImage)
    assert img.pixels.tolist() == [[[1, 2, 3], [4, 5, 6]]]


def test_write_canonical_forms():
    assert write_pnm(GrayImage(np.zeros((1, 1)))) == b"P5\n1 1\n255\n\x00"
    rgb = RgbImage(np.array([[[1, 2, 3], [4, 5, 6]]]))
    assert write_pnm(rgb) == b"P6\n2 1\n255\n" + bytes([1, 2, 3, 4, 5, 6])


@pytest.mark.parametrize(
    "buf, err",
    [
        (b"P3\n1 1\n255\n0 0 0", BadMagic),
        (b"P2\n1 1\n255\n0", BadMagic),
        (b"P55\n1 1\n255\n\x00", BadMagic),
        (b"P5\nx 1\n255\n\x00", BadHeader),
        (b"P5\n0 1\n255\n", BadHeader),
        (b"P5\n1\n", BadHeader),
        (b"P5\n1 1\n65535\n\x00\x00", UnsupportedMaxval),
        (b"P5\n1 1\n15\n\x00", UnsupportedMaxval),
        (b"P5\n2 2\n255\n\x00\x00\x00", Truncated),
        (b"P6\n1 1\n255\n\x00\x00", Truncated),
    ],
)
def test_read_errors(buf, err):
    with pytest.raises(err):
        read_pnm(buf)


def test_image_invariants_enforced():
    with pytest.raises(ValueError):
        GrayImage(np.array([[256]]))
    with pytest.raises(ValueError):
        GrayImage(np.zeros((0, 3)))
    with pytest.raises(ValueError):
        RgbImage(np.zeros((2, 2, 4)))
    img = GrayImage(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        img.pixels[0, 0] = 1


@settings(max_examples=60, deadline=None)
@given(arrays(np.uint8, st.tuples(st.integers(1, 9), st.integers(1, 9))))
def test_gray_roundtrip(a):
    img = GrayImage(a)
    buf = write_pnm(img)
    assert read_pnm(buf) == img
    assert write_pnm(read_pnm(buf)) == buf


@settings(max_examples=60, deadline=None)
@given(arrays(np.uint8, st.tuples(st.integers(1, 9), st.integers(1, 9), st.just(3))))
def test_rgb_roundtrip(a):
    img = RgbImage(a)
    buf = write_pnm(img)
    assert read_pnm(buf) == img
    assert write_pnm(read_pnm(buf)) == buf


def test_round_half_away():
    assert round_half_away([0.5, 1.5, 2.5, -0.5, -2.5, 2.4999]).tolist() == [1, 2, 3, -1, -3, 2]


def _ycc(rgb):
    p = rgb_to_ycbcr(RgbImage(np.array([[rgb]])))
    return p.y[0, 0], p.cb[0, 0], p.cr[0, 0]


def test_forward_known_values():
    assert _ycc((255, 255, 255)) == (255.0, 128.0, 128.0)
    assert _ycc((128, 128, 128)) == (128.0, 128.0, 128.0)
    # oracle: 76.245, 84.97232, 255.5
    assert _ycc((255, 0, 0)) == pytest.approx(oracles.rgb_to_ycc(255, 0, 0), abs=1e-9)
    assert _ycc((255, 0, 0)) == pytest.approx((76.245, 84.97232, 255.5), abs=1e-9)


def test_inverse_known_values():
    planes = YccPlanes(np.array([[255.0, 0.0]]), np.array([[128.0, 0.0]]), np.array([[128.0, 0.0]]))
    rgb = ycbcr_to_rgb(planes).pixels[0]
    assert rgb[0].tolist() == [255, 255, 255]
    # oracle: G = 0.344136*128 + 0.714136*128 = 135.46 -> 135; R, B clamp to 0
    assert rgb[1].tolist() == list(oracles.ycc_to_rgb(0, 0, 0)) == [0, 135, 0]


def test_achromatic_exact():
    v = np.arange(256, dtype=np.uint8)
    p = rgb_to_ycbcr(RgbImage(np.stack([v, v, v], -1)[None]))
    assert np.array_equal(p.y[0], v.astype(float))
    assert np.all(p.cb == 128.0) and np.all(p.cr == 128.0)


def test_roundtrip_within_one_grid_and_random():
    grid = np.array(list(itertools.product(range(0, 256, 17), repeat=3)), dtype=np.uint8)
    rng = np.random.default_rng(7)
    rand = rng.integers(0, 256, (100_000, 3), dtype=np.uint8)
    for px in (grid, rand):
        img = RgbImage(px[None])
        back = ycbcr_to_rgb(rgb_to_ycbcr(img))
        assert np.abs(back.pixels.astype(int) - img.pixels).max() <= 1


def test_inverse_matches_scalar_oracle(rng):
    y, cb, cr = (rng.uniform(-20, 280, (6, 6)) for _ in range(3))
    got = ycbcr_to_rgb(YccPlanes(y, cb, cr)).pixels
    for i in range(6):
        for j in range(6):
            assert tuple(got[i, j]) == oracles.ycc_to_rgb(y[i, j], cb[i, j], cr[i, j])
