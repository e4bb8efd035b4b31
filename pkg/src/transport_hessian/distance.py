"""Transport information Hessian distances and their comparison distances.

Dist_H is computed two ways: on the shared midpoint y-grid from quantile
derivatives (inverse CDF formulation), and on q's own x-grid through the Monge map
T = F_p^-1 ∘ F_q (mapping formulation). y-integrals use the midpoint rule and
x-integrals use the trapezoid rule throughout.

Dist_H vanishes on translates, so it is a pseudo-metric on densities.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .density import (
    GridDensity,
    QuantileFunction,
    frozen_array,
    cdf,
    midpoint_grid,
    quantile,
)
from .entropy import EntropyModel, h_eval, h_inverse
from .errors import InvalidParameter

logger = logging.getLogger(__name__)

T_MATCH_TOLERANCE = 1e-12


@dataclass(frozen=True)
class MongeMap:
    source_grid: np.ndarray
    values: np.ndarray
    derivative: np.ndarray


@dataclass(frozen=True)
class GeodesicPath:
    t_grid: np.ndarray
    quantiles: tuple[QuantileFunction, ...]

    def at(self, t: float) -> QuantileFunction:
        """Quantile function at a time on the path grid; other times raise."""
        matches = np.flatnonzero(np.isclose(self.t_grid, t, rtol=0.0, atol=T_MATCH_TOLERANCE))
        if matches.size == 0:
            raise InvalidParameter(f"t = {t!r} is not on the path's time grid")
        return self.quantiles[int(matches[0])]


def _l2_midpoint(a: np.ndarray, b: np.ndarray) -> float:
    # (a - b)**2 == (b - a)**2 bitwise, so the result is exactly symmetric.
    return math.sqrt(float(np.mean(np.square(a - b))))


def dist_h_between(e: EntropyModel, a: QuantileFunction, b: QuantileFunction) -> float:
    """Dist_H between two quantile functions sampled on the same y-grid."""
    if a.m != b.m:
        raise InvalidParameter(f"quantile grids differ in size: {a.m} vs {b.m}")
    return _l2_midpoint(h_eval(e, a.derivative), h_eval(e, b.derivative))


def dist_h_quantile(e: EntropyModel, p: GridDensity, q: GridDensity, m: int) -> float:
    return dist_h_between(e, quantile(p, m), quantile(q, m))


def monge_map(p: GridDensity, q: GridDensity) -> MongeMap:
    """Monotone map T = F_p^-1 ∘ F_q on q's grid with ∇T = q(x) / p(T(x))."""
    unit = cdf(p).invert_unit(cdf(q).knots)
    values = p.support_lo + p.length * unit
    derivative = q.values / p.evaluate_unit(unit)
    return MongeMap(source_grid=frozen_array(q.nodes), values=frozen_array(values), derivative=frozen_array(derivative))


def dist_h_map(e: EntropyModel, p: GridDensity, q: GridDensity, *, inverse: bool = False) -> float:
    """Mapping formulation of Dist_H on q's support.

    With `inverse=True` the integral runs over p's support with T^-1 = F_q^-1 ∘ F_p,
    the equivalent form in terms of the inverse map.
    """
    if inverse:
        p, q = q, p
    t_map = monge_map(p, q)
    inner = h_eval(e, t_map.derivative / q.values)
    outer = h_eval(e, 1.0 / q.values)
    return math.sqrt(max(float(np.trapezoid(np.square(inner - outer) * q.values, dx=q.spacing)), 0.0))


def dist_wasserstein(p: GridDensity, q: GridDensity, m: int) -> float:
    return _l2_midpoint(quantile(p, m).values, quantile(q, m).values)


def dist_wasserstein_map(p: GridDensity, q: GridDensity) -> float:
    """Dist_T from ∫ |T(x) - x|^2 q(x) dx over q's grid."""
    t_map = monge_map(p, q)
    displacement = t_map.values - t_map.source_grid
    return math.sqrt(float(np.trapezoid(np.square(displacement) * q.values, dx=q.spacing)))


def dist_hellinger(p: GridDensity, q: GridDensity) -> float:
    """Hellinger distance sqrt(∫ (√p - √q)^2 dx) over the union of supports.

    Off the intersection of supports only one density is nonzero, so that part of
    the integral is the mass each density keeps outside the intersection. Disjoint
    supports give √2 exactly.
    """
    lo = max(p.support_lo, q.support_lo)
    hi = min(p.support_hi, q.support_hi)
    if hi <= lo:
        return math.sqrt(2.0)
    spacing = min(p.spacing, q.spacing)
    n = max(int(math.ceil((hi - lo) / spacing)), 1)
    x = lo + (hi - lo) * np.arange(n + 1, dtype=float) / n
    x[-1] = hi
    # clipped so rounding at a shared endpoint never falls off a support
    unit_p = np.clip((x - p.support_lo) / p.length, 0.0, 1.0)
    unit_q = np.clip((x - q.support_lo) / q.length, 0.0, 1.0)
    root_gap = np.sqrt(p.evaluate_unit(unit_p)) - np.sqrt(q.evaluate_unit(unit_q))
    inside = float(np.trapezoid(np.square(root_gap), dx=(hi - lo) / n))
    cdf_p, cdf_q = cdf(p), cdf(q)
    outside_p = 1.0 - float(cdf_p.evaluate_unit(unit_p[-1]) - cdf_p.evaluate_unit(unit_p[0]))
    outside_q = 1.0 - float(cdf_q.evaluate_unit(unit_q[-1]) - cdf_q.evaluate_unit(unit_q[0]))
    return math.sqrt(max(inside + outside_p + outside_q, 0.0))


def geodesic(
    e: EntropyModel,
    p: GridDensity,
    q: GridDensity,
    t_grid: Sequence[float],
    m: int,
) -> GeodesicPath:
    """Hessian geodesic from q (t=0) to p (t=1) in quantile coordinates.

    h of the quantile derivative is affine in t. Quantile values are integrated with
    the midpoint rule from a left endpoint interpolated linearly between the two
    extrapolated endpoint quantiles at y = 0.
    """
    ts = np.asarray(t_grid, dtype=float)
    if ts.ndim != 1 or ts.size == 0:
        raise InvalidParameter("t_grid must be a non-empty vector")
    if np.any(ts < 0.0) or np.any(ts > 1.0):
        raise InvalidParameter("geodesic times must lie in [0, 1]")

    qp, qq = quantile(p, m), quantile(q, m)
    hp, hq = h_eval(e, qp.derivative), h_eval(e, qq.derivative)
    step = 1.0 / m
    left_p = qp.values[0] - 0.5 * step * qp.derivative[0]
    left_q = qq.values[0] - 0.5 * step * qq.derivative[0]
    y = midpoint_grid(m)

    path = []
    for t in ts:
        if t == 0.0:
            path.append(qq)
            continue
        if t == 1.0:
            path.append(qp)
            continue
        derivative = np.asarray(h_inverse(e, t * hp + (1.0 - t) * hq), dtype=float)
        left = t * left_p + (1.0 - t) * left_q
        values = left + step * (np.cumsum(derivative) - 0.5 * derivative)
        path.append(QuantileFunction(y_grid=frozen_array(y), values=frozen_array(values), derivative=frozen_array(derivative)))

    logger.debug("geodesic: %d times, %d quantile points, entropy %s", ts.size, m, e.label)
    return GeodesicPath(t_grid=frozen_array(ts), quantiles=tuple(path))


def distance_matrix(
    e: EntropyModel,
    densities: Sequence[GridDensity],
    m: int,
    *,
    max_workers: int = 1,
) -> np.ndarray:
    """Symmetric Dist_H matrix with zero diagonal; pairs may run on a thread pool."""
    count = len(densities)
    quantiles = [quantile(p, m) for p in densities]
    pairs = [(i, j) for i in range(count) for j in range(i + 1, count)]

    def work(pair: tuple[int, int]) -> float:
        i, j = pair
        return dist_h_between(e, quantiles[i], quantiles[j])

    if max_workers > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(work, pairs))
    else:
        results = [work(pair) for pair in pairs]

    matrix = np.zeros((count, count))
    for (i, j), value in zip(pairs, results):
        matrix[i, j] = value
        matrix[j, i] = value
    return matrix


__all__ = [
    "MongeMap",
    "GeodesicPath",
    "dist_h_between",
    "dist_h_quantile",
    "dist_h_map",
    "monge_map",
    "dist_wasserstein",
    "dist_wasserstein_map",
    "dist_hellinger",
    "geodesic",
    "distance_matrix",
]
