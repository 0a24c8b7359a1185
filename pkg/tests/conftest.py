"""Shared generators for randomized property tests.

Everything is seeded through numpy Generators so failures reproduce; the
helpers return plain library objects and never peek at internals.
"""

import math

import numpy as np
import pytest

from stieltjes import Classification, Derivator


def random_derivator(rng, window=(0.0, 1.0), max_segments=5, max_jumps=3,
                     allow_flat=True, jump_scale=1.0):
    """A random derivator: random breakpoint grid, slopes, and jumps."""
    left, right = window
    n_seg = int(rng.integers(1, max_segments + 1))
    cuts = np.sort(rng.uniform(left, right, size=n_seg - 1))
    bp = np.unique(np.concatenate(([left], cuts, [right])))
    slopes = rng.exponential(1.0, size=bp.size - 1)
    if allow_flat:
        slopes[rng.random(slopes.size) < 0.3] = 0.0
    n_j = int(rng.integers(0, max_jumps + 1))
    pts = np.unique(rng.uniform(left, right, size=n_j))
    pts = pts[(pts > left) & (pts < right)]
    sizes = rng.exponential(jump_scale, size=pts.size) + 1e-3
    return Derivator(window, breakpoints=bp, slopes=slopes,
                     jumps=zip(pts, sizes), anchor=float(rng.normal()))


def random_cover(rng, window=(0.0, 1.0), max_intervals=6):
    """A random finite cover of half-open intervals inside the window."""
    left, right = window
    n = int(rng.integers(1, max_intervals + 1))
    cover = []
    for _ in range(n):
        a, b = np.sort(rng.uniform(left, right, size=2))
        if a == b:
            continue
        cover.append((float(a), float(b)))
    if not cover:
        cover.append((left, (left + right) / 2.0))
    return cover


def random_classification(rng, window=(0.0, 1.0), max_intervals=3, max_points=4):
    """A random *maximal* classification inside the window.

    Interval closures are kept strictly separated (so no two can merge) and
    discontinuities are placed outside all interval interiors; sometimes a
    shared endpoint of two touching intervals carries a discontinuity, which
    also keeps the configuration maximal.
    """
    left, right = window
    span = right - left
    n_iv = int(rng.integers(0, max_intervals + 1))
    pts = np.sort(rng.uniform(left + 0.02 * span, right - 0.02 * span, size=2 * n_iv))
    intervals = []
    for k in range(n_iv):
        a, b = pts[2 * k], pts[2 * k + 1]
        if b - a > 1e-3 * span and (not intervals or a - intervals[-1][1] > 1e-3 * span):
            intervals.append((float(a), float(b)))

    # occasionally weld two intervals at a discontinuity point
    welded = None
    if len(intervals) >= 2 and rng.random() < 0.3:
        welded = intervals[0][1]
        intervals[1] = (welded, intervals[1][1])

    n_pt = int(rng.integers(0, max_points + 1))
    points = []
    for _ in range(n_pt):
        d = float(rng.uniform(left + 0.01 * span, right - 0.01 * span))
        if any(a < d < b for a, b in intervals):
            continue  # would sit inside a constancy interval
        if any(math.isclose(d, q, rel_tol=0, abs_tol=1e-12) for q in points):
            continue
        points.append(d)
    if welded is not None and all(not math.isclose(welded, q, abs_tol=1e-12) for q in points):
        points.append(welded)

    return Classification(constancy=intervals, discontinuities=points)


def random_smooth_function(rng):
    """A bounded smooth scalar function with moderate derivatives."""
    a, b, c = rng.normal(size=3)
    w = rng.uniform(0.5, 3.0)
    phase = rng.uniform(0, 2 * np.pi)
    return lambda t: a + b * math.sin(w * t + phase) + 0.5 * c * t * t


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
