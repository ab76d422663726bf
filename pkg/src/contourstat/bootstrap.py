"""Nonpivotal nonparametric bootstrap confidence regions for the extrinsic mean.

Each resample draws n indices with replacement, recomputes the extrinsic
mean, and records its chord distance to the full-sample mean.  The
(1 - alpha) empirical quantile of those distances is the region radius: the
confidence region is the chord-distance ball of that radius around the
sample mean.  Resamples use independent substreams keyed by (seed, index),
so the result is identical for any number of worker threads.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import FocalDistributionError
from .shape_space import DEFAULT_GAP_TOL, Preshape, chord_distance, extrinsic_mean

__all__ = ["BootstrapRegion", "resample_mean", "bootstrap_region", "align_rotation"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BootstrapRegion:
    """Bootstrap distances, quantile radius, and the means inside the region.

    ``radius`` is the 1-based order statistic at index ceil((1 - alpha) B) of
    the sorted distances; ``included`` flags the resampled means whose
    distance does not exceed it.
    """

    sample_mean: Preshape
    boot_means: tuple[Preshape, ...]
    distances: np.ndarray
    radius: float
    alpha: float
    included: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.distances, dtype=np.float64)
        inc = np.asarray(self.included, dtype=bool)
        b = len(self.boot_means)
        if len(d) != b or len(inc) != b:
            raise ValueError("distances/included must have one entry per resample")
        if np.any(d < 0):
            raise ValueError("distances must be nonnegative")
        order_index = _quantile_index(self.alpha, b)
        if self.radius != float(np.sort(d)[order_index - 1]):
            raise ValueError("radius is not the stated order statistic of the distances")
        if not np.array_equal(inc, d <= self.radius):
            raise ValueError("included mask does not match distance <= radius")
        object.__setattr__(self, "distances", _freeze(d))
        object.__setattr__(self, "included", _freeze(inc))


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, copy=True)
    out.flags.writeable = False
    return out


def _quantile_index(alpha: float, b: int) -> int:
    """1-based order statistic index ceil((1 - alpha) B), robust to fp in the product."""
    return int(math.ceil((1.0 - alpha) * b - 1e-9))


def _substream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


def resample_mean(
    sample: Sequence[Preshape],
    rng: np.random.Generator,
    gap_tol: float = DEFAULT_GAP_TOL,
    max_retries: int = 100,
) -> Preshape:
    """Extrinsic mean of one bootstrap resample (n draws with replacement).

    A degenerate resample whose mean matrix has a focal spectrum is retried
    with the next draws from ``rng``; after ``max_retries`` failures the
    focal error is logged and re-raised.
    """
    n = len(sample)
    if n == 0:
        raise ValueError("empty sample")
    for attempt in range(max_retries + 1):
        idx = rng.integers(0, n, size=n)
        try:
            return extrinsic_mean([sample[i] for i in idx], gap_tol)[0]
        except FocalDistributionError as err:
            last = err
            logger.debug("focal resample on attempt %d: %s", attempt + 1, err)
    logger.error("resample_mean gave up after %d retries: %s", max_retries, last)
    raise last


def bootstrap_region(
    sample: Sequence[Preshape],
    B: int = 400,
    alpha: float = 0.05,
    seed: int = 0,
    threads: int | None = None,
    gap_tol: float = DEFAULT_GAP_TOL,
) -> BootstrapRegion:
    """Bootstrap confidence region for the extrinsic mean shape.

    Deterministic given ``seed`` and independent of ``threads`` (resample i
    always uses the substream keyed by (seed, i), and the reduction is
    ordered by resample index).  ``threads`` defaults to the SHAPE_THREADS
    environment variable, else 1.
    """
    if len(sample) < 2:
        raise ValueError(f"need at least 2 shapes, got {len(sample)}")
    if B < 50:
        raise ValueError(f"need B >= 50 resamples, got {B}")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if threads is None:
        threads = int(os.environ.get("SHAPE_THREADS", "1"))
    mean, _ = extrinsic_mean(sample, gap_tol)

    def one(i: int) -> Preshape:
        return resample_mean(sample, _substream(seed, i), gap_tol)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            boot = list(pool.map(one, range(B)))
    else:
        boot = [one(i) for i in range(B)]
    dist = np.array([chord_distance(b, mean) for b in boot])
    radius = float(np.sort(dist)[_quantile_index(alpha, B) - 1])
    return BootstrapRegion(
        sample_mean=mean,
        boot_means=tuple(boot),
        distances=dist,
        radius=radius,
        alpha=alpha,
        included=dist <= radius,
    )


def align_rotation(shape: Preshape, reference: Preshape) -> Preshape:
    """Rotate a shape's representative so it overlays the reference.

    Multiplies by the unit scalar e^{i theta}, theta = arg <shape, reference>
    with <x, y> = x^H y, which makes <reference, aligned> real and
    nonnegative; this is the chord-distance-optimal alignment.  When the
    inner product is zero every rotation is equally good and the shape is
    returned unchanged.
    """
    ip = np.vdot(shape.coords, reference.coords)
    if ip == 0:
        return shape
    return Preshape(shape.coords * (ip / abs(ip)))
