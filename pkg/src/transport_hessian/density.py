"""Grid densities on a compact interval, their CDFs and quantile functions.

Every density is sampled at N+1 uniform nodes over [support_lo, support_hi] and is
piecewise linear between nodes. The CDF is the cumulative trapezoid integral, and the
quantile function inverts it by monotone linear interpolation on the midpoint y-grid
y_j = (j - 1/2)/M. Quantile derivatives come from the identity
dF^-1/dy = 1 / p(F^-1(y)), never from differencing the quantile values.

All objects are immutable (frozen dataclasses over read-only arrays).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    DegenerateSamples,
    InvalidParameter,
    InvalidSupport,
    NonPositiveDensity,
    NotNormalizable,
    TooFewNodes,
    TooFewSamples,
)

logger = logging.getLogger(__name__)

MIN_NODES = 9
MIN_QUANTILES = 16
MIN_SAMPLES = 50
POSITIVITY_FLOOR = 1e-12
NORMALIZATION_TOLERANCE = 1e-3
HISTOGRAM_FLOOR = 1e-6


def frozen_array(values: np.ndarray) -> np.ndarray:
    out = np.array(values, dtype=float, copy=True)
    out.setflags(write=False)
    return out


def cumulative_trapezoid(values: np.ndarray, spacing: float) -> np.ndarray:
    """Running trapezoid integral starting at 0 on the first node."""
    values = np.asarray(values, dtype=float)
    increments = 0.5 * spacing * (values[1:] + values[:-1])
    return np.concatenate(([0.0], np.cumsum(increments)))


@dataclass(frozen=True)
class GridDensity:
    support_lo: float
    support_hi: float
    values: np.ndarray
    p_min: float

    @property
    def n(self) -> int:
        """Number of grid intervals N."""
        return len(self.values) - 1

    @property
    def length(self) -> float:
        return self.support_hi - self.support_lo

    @property
    def spacing(self) -> float:
        return self.length / self.n

    @property
    def unit_nodes(self) -> np.ndarray:
        # Node positions relative to the support; translation-free by construction.
        return np.arange(self.n + 1, dtype=float) / self.n

    @property
    def nodes(self) -> np.ndarray:
        return self.support_lo + self.length * self.unit_nodes

    def integral(self) -> float:
        return float(np.trapezoid(self.values, dx=self.spacing))

    def evaluate(self, x) -> np.ndarray:
        """Linear interpolation of the density, zero off the support."""
        x = np.asarray(x, dtype=float)
        unit = (x - self.support_lo) / self.length
        return np.interp(unit, self.unit_nodes, self.values, left=0.0, right=0.0)

    def evaluate_unit(self, unit) -> np.ndarray:
        """Density at support-relative positions in [0, 1]."""
        return np.interp(np.asarray(unit, dtype=float), self.unit_nodes, self.values)


@dataclass(frozen=True)
class CdfFunction:
    support_lo: float
    support_hi: float
    knots: np.ndarray

    @property
    def unit_nodes(self) -> np.ndarray:
        n = len(self.knots) - 1
        return np.arange(n + 1, dtype=float) / n

    def evaluate(self, x) -> np.ndarray:
        """Piecewise-linear CDF; 0 left of the support and 1 right of it."""
        x = np.asarray(x, dtype=float)
        unit = (x - self.support_lo) / (self.support_hi - self.support_lo)
        return np.interp(unit, self.unit_nodes, self.knots, left=0.0, right=1.0)

    def evaluate_unit(self, unit) -> np.ndarray:
        return np.interp(np.asarray(unit, dtype=float), self.unit_nodes, self.knots)

    def invert_unit(self, y) -> np.ndarray:
        """Support-relative position u in [0, 1] with F(lo + u*L) = y."""
        return np.interp(np.asarray(y, dtype=float), self.knots, self.unit_nodes)


@dataclass(frozen=True)
class QuantileFunction:
    y_grid: np.ndarray
    values: np.ndarray
    derivative: np.ndarray

    @property
    def m(self) -> int:
        return len(self.y_grid)

    def density_values(self) -> np.ndarray:
        """Density at each quantile value, recovered as 1/derivative."""
        return 1.0 / self.derivative


def midpoint_grid(m: int) -> np.ndarray:
    if m < MIN_QUANTILES:
        raise InvalidParameter(f"quantile grid needs at least {MIN_QUANTILES} points, got {m}")
    return (np.arange(m, dtype=float) + 0.5) / m


def build_density(
    values: Sequence[float] | np.ndarray,
    support_lo: float,
    support_hi: float,
    *,
    normalize: bool = False,
) -> GridDensity:
    """Validate and normalise nodal density values on [support_lo, support_hi].

    Without `normalize` the trapezoid mass must already be within 1e-3 of 1; the
    values are rescaled to unit mass either way.
    """
    arr = np.asarray(values, dtype=float).ravel()
    lo, hi = float(support_lo), float(support_hi)
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise InvalidSupport(f"support must satisfy lo < hi, got [{lo}, {hi}]")
    if arr.size < MIN_NODES:
        raise TooFewNodes(f"density needs at least {MIN_NODES} nodes, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise NotNormalizable("density values contain non-finite entries")
    if np.any(arr < 0.0):
        raise NonPositiveDensity("density values must be non-negative")

    spacing = (hi - lo) / (arr.size - 1)
    mass = float(np.trapezoid(arr, dx=spacing))
    if not math.isfinite(mass) or mass <= 0.0:
        raise NotNormalizable(f"density mass must be positive and finite, got {mass}")
    if not normalize and abs(mass - 1.0) > NORMALIZATION_TOLERANCE:
        raise NotNormalizable(f"density mass {mass:.6g} is not within {NORMALIZATION_TOLERANCE} of 1")

    floor = POSITIVITY_FLOOR * float(arr.mean())
    if float(arr.min()) < floor:
        raise NonPositiveDensity(
            f"density drops to {float(arr.min()):.3g}, below the floor {floor:.3g}"
        )

    normalized = arr / mass
    return GridDensity(
        support_lo=lo,
        support_hi=hi,
        values=frozen_array(normalized),
        p_min=float(normalized.min()),
    )


def sample_density(
    fn: Callable[[np.ndarray], np.ndarray],
    support_lo: float,
    support_hi: float,
    n: int,
    *,
    normalize: bool = True,
) -> GridDensity:
    """Evaluate `fn` on N+1 uniform nodes and build the density."""
    nodes = support_lo + (support_hi - support_lo) * np.arange(n + 1, dtype=float) / n
    values = np.broadcast_to(np.asarray(fn(nodes), dtype=float), nodes.shape)
    return build_density(values, support_lo, support_hi, normalize=normalize)


def cdf(p: GridDensity) -> CdfFunction:
    # unit spacing: the knots are normalised, and this keeps them independent of the support
    running = cumulative_trapezoid(p.values, 1.0)
    knots = running / running[-1]
    knots[0] = 0.0
    knots[-1] = 1.0
    return CdfFunction(support_lo=p.support_lo, support_hi=p.support_hi, knots=frozen_array(knots))


def quantile(p: GridDensity, m: int) -> QuantileFunction:
    y = midpoint_grid(m)
    unit = cdf(p).invert_unit(y)
    values = p.support_lo + p.length * unit
    derivative = 1.0 / p.evaluate_unit(unit)
    return QuantileFunction(y_grid=frozen_array(y), values=frozen_array(values), derivative=frozen_array(derivative))


def from_samples(samples: Sequence[float] | np.ndarray, bins: Optional[int] = None) -> GridDensity:
    """Padded histogram density of raw samples.

    Nodes sit at bin centres of a histogram over [min, max] widened by one bin on
    each side; counts below 1e-6 of the peak are floored before renormalising.
    """
    arr = np.asarray(samples, dtype=float).ravel()
    if arr.size < MIN_SAMPLES:
        raise TooFewSamples(f"need at least {MIN_SAMPLES} samples, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise NotNormalizable("samples contain non-finite entries")
    lo, hi = float(arr.min()), float(arr.max())
    if lo == hi:
        raise DegenerateSamples(f"all {arr.size} samples equal {lo}")

    count = int(bins) if bins is not None else int(math.ceil(math.sqrt(arr.size)))
    if count < MIN_NODES - 2:
        raise InvalidParameter(f"bins must be at least {MIN_NODES - 2}, got {count}")
    width = (hi - lo) / count
    # last bin is closed, so the largest sample stays inside [lo, hi]
    inner, _ = np.histogram(arr, bins=count, range=(lo, hi))
    counts = np.concatenate(([0], inner, [0]))
    heights = counts / (arr.size * width)
    heights = np.maximum(heights, HISTOGRAM_FLOOR * float(heights.max()))

    logger.debug("histogram density: %d samples, %d bins, width %.6g", arr.size, count, width)
    return build_density(heights, lo - 0.5 * width, hi + 0.5 * width, normalize=True)


def translate(p: GridDensity, c: float) -> GridDensity:
    return GridDensity(
        support_lo=p.support_lo + c,
        support_hi=p.support_hi + c,
        values=p.values,
        p_min=p.p_min,
    )


def dilate(p: GridDensity, s: float) -> GridDensity:
    """Rescale about the origin: p_s(x) = p(x/s)/s on [s*lo, s*hi]."""
    if not (s > 0.0 and math.isfinite(s)):
        raise InvalidParameter(f"dilation factor must be positive, got {s}")
    values = p.values / s
    return GridDensity(
        support_lo=p.support_lo * s,
        support_hi=p.support_hi * s,
        values=frozen_array(values),
        p_min=float(values.min()),
    )


__all__ = [
    "GridDensity",
    "CdfFunction",
    "QuantileFunction",
    "build_density",
    "sample_density",
    "cdf",
    "quantile",
    "from_samples",
    "translate",
    "dilate",
    "frozen_array",
    "midpoint_grid",
    "cumulative_trapezoid",
]
