"""Slow, direct reference implementations used only by the tests.

None of these share code with the package: each follows the textbook
definition as literally as practical.
"""

import math
from collections import Counter

import numpy as np


def erode(a, mu):
    """Window minimum via explicit offsets over the (2mu+1)^2 square, domain-restricted."""
    h, w = a.shape
    out = np.full((h, w), 255, dtype=np.int64)
    big = np.full((h + 2 * mu, w + 2 * mu), 10**6, dtype=np.int64)
    big[mu : mu + h, mu : mu + w] = a
    for dy in range(2 * mu + 1):
        for dx in range(2 * mu + 1):
            out = np.minimum(out, big[dy : dy + h, dx : dx + w])
    return out.astype(np.uint8)


def dilate(a, mu):
    h, w = a.shape
    out = np.zeros((h, w), dtype=np.int64)
    big = np.full((h + 2 * mu, w + 2 * mu), -(10**6), dtype=np.int64)
    big[mu : mu + h, mu : mu + w] = a
    for dy in range(2 * mu + 1):
        for dx in range(2 * mu + 1):
            out = np.maximum(out, big[dy : dy + h, dx : dx + w])
    return out.astype(np.uint8)


def erode_pixelwise(a, mu):
    h, w = a.shape
    out = np.empty_like(a)
    for y in range(h):
        for x in range(w):
            out[y, x] = min(
                int(a[yy, xx])
                for yy in range(max(0, y - mu), min(h, y + mu + 1))
                for xx in range(max(0, x - mu), min(w, x + mu + 1))
            )
    return out


def reconstruct(marker, mask):
    """Plain iteration g <- min(dilate(g, 1), mask) until nothing changes."""
    g = np.array(marker, dtype=np.uint8)
    while True:
        nxt = np.minimum(dilate(g, 1), mask)
        if np.array_equal(nxt, g):
            return g
        g = nxt


def opening_by_reconstruction(a, mu):
    return reconstruct(erode(a, mu), a)


def dct2_direct(x):
    """Orthonormal 2-d DCT-II straight from its double-sum definition."""
    n = x.shape[0]
    out = np.zeros((n, n))
    for u in range(n):
        for v in range(n):
            au = math.sqrt(1 / n) if u == 0 else math.sqrt(2 / n)
            av = math.sqrt(1 / n) if v == 0 else math.sqrt(2 / n)
            s = 0.0
            for i in range(n):
                for j in range(n):
                    s += x[i, j] * math.cos(math.pi * (2 * i + 1) * u / (2 * n)) * math.cos(
                        math.pi * (2 * j + 1) * v / (2 * n)
                    )
            out[u, v] = au * av * s
    return out


def _basis(n=8):
    # b[u, v, i, j] straight from the definition
    a = np.array([math.sqrt(1 / n)] + [math.sqrt(2 / n)] * (n - 1))
    idx = np.arange(n)
    cos = np.cos(np.pi * (2 * idx[None, :] + 1) * idx[:, None] / (2 * n))  # [u, i]
    return np.einsum("u,v,ui,vj->uvij", a, a, cos, cos)


BASIS8 = _basis()


def dct2_basis(blocks):
    """Same definition vectorised over a stack (..., 8, 8); O(N^4) per block."""
    return np.einsum("uvij,...ij->...uv", BASIS8, blocks)


def idct2_basis(coeffs):
    return np.einsum("uvij,...uv->...ij", BASIS8, coeffs)


def ssim(x, y, n=8):
    c1 = (0.01 * 255) ** 2
    c2 = (0.03 * 255) ** 2
    x = x.astype(np.float64)
    y = y.astype(np.float64)
    vals = []
    for i in range(x.shape[0] - n + 1):
        for j in range(x.shape[1] - n + 1):
            a = x[i : i + n, j : j + n]
            b = y[i : i + n, j : j + n]
            ma, mb = a.mean(), b.mean()
            va, vb = ((a - ma) ** 2).mean(), ((b - mb) ** 2).mean()
            cov = ((a - ma) * (b - mb)).mean()
            vals.append((2 * ma * mb + c1) * (2 * cov + c2) / ((ma**2 + mb**2 + c1) * (va + vb + c2)))
    return sum(vals) / len(vals)


def entropy(a):
    counts = Counter(int(v) for v in np.asarray(a).ravel())
    total = sum(counts.values())
    return -sum(c / total * math.log2(c / total) for c in counts.values())


def colorfulness(rgb):
    px = [tuple(int(c) for c in p) for p in np.asarray(rgb).reshape(-1, 3)]
    rg = [r - g for r, g, b in px]
    yb = [(r + g) / 2 - b for r, g, b in px]

    def mean(v):
        return sum(v) / len(v)

    def var(v):
        m = mean(v)
        return sum((t - m) ** 2 for t in v) / len(v)

    return math.sqrt(var(rg) + var(yb)) + 0.3 * math.sqrt(mean(rg) ** 2 + mean(yb) ** 2)


def jpqm(img):
    """No-reference JPEG quality score, written out loop by loop (1-based boundary columns 8, 16, ...)."""
    f = [[float(v) for v in row] for row in np.asarray(img)]
    m_rows, n_cols = len(f), len(f[0])

    def orientation(rows, ncols):
        m = len(rows)
        d = [[row[j + 1] - row[j] for j in range(ncols - 1)] for row in rows]
        nb = ncols // 8 - 1
        b = sum(abs(d[i][8 * k - 1]) for i in range(m) for k in range(1, nb + 1)) / (m * nb)
        mean_abs = sum(abs(v) for r in d for v in r) / (m * (ncols - 1))
        a = (8 * mean_abs - b) / 7
        z = sum(1 for r in d for j in range(ncols - 2) if r[j] * r[j + 1] < 0) / (m * (ncols - 2))
        return b, a, z

    bh, ah, zh = orientation(f, n_cols)
    cols = [[f[i][j] for i in range(m_rows)] for j in range(n_cols)]
    bv, av, zv = orientation(cols, m_rows)
    b = max((bh + bv) / 2, 1e-8)
    a = max((ah + av) / 2, 1e-8)
    z = max((zh + zv) / 2, 1e-8)
    return -245.9 + 261.9 * b**-0.0240 * a**0.0160 * z**0.0064


def rgb_to_ycc(r, g, b):
    y = 0.299 * r + 0.587 * g + 0.114 * b
    cb = -0.168736 * r - 0.331264 * g + 0.5 * b + 128
    cr = 0.5 * r - 0.418688 * g - 0.081312 * b + 128
    return y, cb, cr


def ycc_to_rgb(y, cb, cr):
    def q(v):
        v = math.floor(abs(v) + 0.5) * (1 if v >= 0 else -1)
        return min(255, max(0, v))

    return (
        q(y + 1.402 * (cr - 128)),
        q(y - 0.344136 * (cb - 128) - 0.714136 * (cr - 128)),
        q(y + 1.772 * (cb - 128)),
    )
