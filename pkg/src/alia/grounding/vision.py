"""Pixel-level perception: canonical color classification and the Sobel
stripedness test, both computed over an object's masked grid."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy import ndimage

from ..config import EngineConfig
from .world import PixelGrid

CANONICAL_COLORS = ("red", "orange", "yellow", "green", "blue", "purple",
                    "black", "gray", "white")

# hue spans in degrees; red wraps around 0
_HUE_BINS = (("red", 345.0, 15.0), ("orange", 15.0, 45.0),
             ("yellow", 45.0, 75.0), ("green", 75.0, 165.0),
             ("blue", 165.0, 255.0), ("purple", 255.0, 345.0))


def rgb_to_hsi(rgb: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Hue in degrees [0,360), saturation (max-min)/max, intensity = max."""
    rgb = np.asarray(rgb, dtype=float)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    maxc = rgb.max(axis=-1)
    minc = rgb.min(axis=-1)
    delta = maxc - minc
    hue = np.zeros_like(maxc)
    nz = delta > 0
    rm = nz & (maxc == r)
    gm = nz & (maxc == g) & ~rm
    bm = nz & ~rm & ~gm
    hue[rm] = (60.0 * ((g[rm] - b[rm]) / delta[rm])) % 360.0
    hue[gm] = 60.0 * ((b[gm] - r[gm]) / delta[gm] + 2.0)
    hue[bm] = 60.0 * ((r[bm] - g[bm]) / delta[bm] + 4.0)
    sat = np.where(maxc > 0, delta / np.where(maxc > 0, maxc, 1.0), 0.0)
    return hue % 360.0, sat, maxc


def pixel_colors(rgb: np.ndarray, cfg: EngineConfig) -> np.ndarray:
    """Index into CANONICAL_COLORS per pixel. Total: every (h,s,i) triple
    lands in exactly one bin."""
    hue, sat, inten = rgb_to_hsi(rgb)
    out = np.empty(hue.shape, dtype=np.int8)
    colorful = (sat >= cfg.sat_min) & (inten >= cfg.int_lo) & (inten <= cfg.int_hi)
    for idx, (_name, lo, hi) in enumerate(_HUE_BINS):
        if lo > hi:  # wrapping bin
            sel = colorful & ((hue >= lo) | (hue < hi))
        else:
            sel = colorful & (hue >= lo) & (hue < hi)
        out[sel] = idx
    black = ~colorful & (inten < cfg.black_max)
    white = ~colorful & (inten > cfg.white_min)
    gray = ~colorful & ~black & ~white
    out[black] = CANONICAL_COLORS.index("black")
    out[gray] = CANONICAL_COLORS.index("gray")
    out[white] = CANONICAL_COLORS.index("white")
    return out


def classify_colors(grid: PixelGrid, cfg: EngineConfig) -> List[Tuple[str, float]]:
    """Histogram the masked pixels; report every canonical color holding at
    least `color_share_min` of the mask, in canonical order."""
    idx = pixel_colors(grid.rgb, cfg)[grid.mask]
    total = idx.size
    counts = np.bincount(idx, minlength=len(CANONICAL_COLORS))
    out = []
    for i, name in enumerate(CANONICAL_COLORS):
        share = counts[i] / total
        if share >= cfg.color_share_min:
            out.append((name, float(share)))
    return out


@dataclass
class StripeReport:
    striped: bool
    lines: int          # retained components
    coverage: float     # fraction of the mask covered by retained edges


def stripedness(grid: PixelGrid, cfg: EngineConfig) -> StripeReport:
    """Sobel edges, thresholded at a fraction of their own maximum, grouped
    by 8-connected components; long components vote for stripes."""
    intensity = grid.rgb.mean(axis=2)
    gx = ndimage.sobel(intensity, axis=1, mode="reflect")
    gy = ndimage.sobel(intensity, axis=0, mode="reflect")
    mag = np.hypot(gx, gy)
    mag = np.where(grid.mask, mag, 0.0)
    peak = float(mag.max())
    if peak <= 0.0:
        return StripeReport(False, 0, 0.0)
    edges = (mag > cfg.sobel_ratio * peak) & grid.mask
    labels, n = ndimage.label(edges, structure=np.ones((3, 3), dtype=int))
    rows = np.any(grid.mask, axis=1).nonzero()[0]
    cols = np.any(grid.mask, axis=0).nonzero()[0]
    diag = math.hypot(rows[-1] - rows[0] + 1, cols[-1] - cols[0] + 1)
    kept = 0
    kept_pixels = 0
    for comp, sl in enumerate(ndimage.find_objects(labels), start=1):
        if sl is None:
            continue
        h = sl[0].stop - sl[0].start
        w = sl[1].stop - sl[1].start
        if max(h, w) >= cfg.stripe_extent_frac * diag:
            kept += 1
            kept_pixels += int(np.count_nonzero(labels[sl] == comp))
    coverage = kept_pixels / int(np.count_nonzero(grid.mask))
    striped = kept >= cfg.stripe_min_lines and coverage >= cfg.stripe_coverage_min
    return StripeReport(striped, kept, coverage)
