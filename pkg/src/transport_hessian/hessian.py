"""Hessian bilinear form of an f-entropy in Wasserstein space.

A tangent perturbation σ (mean zero) is paired with a potential Φ through
σ = -(p Φ')'. In one dimension this integrates exactly to p Φ' = -∫_lo^x σ, and the
Neumann condition Φ'(lo) = Φ'(hi) = 0 follows from ∫σ = 0. The Hessian form is
∫ (Φ'')^2 f''(p) p^2 dx; the Wasserstein metric itself is ∫ (Φ')^2 p dx.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .density import GridDensity, build_density, cumulative_trapezoid, frozen_array
from .distance import dist_h_quantile, dist_wasserstein
from .entropy import EntropyModel
from .errors import (
    DensityError,
    InvalidParameter,
    NotMeanZero,
    PerturbedDensityInvalid,
)

logger = logging.getLogger(__name__)

MEAN_ZERO_TOLERANCE = 1e-10


@dataclass(frozen=True)
class TangentPerturbation:
    values: np.ndarray


@dataclass(frozen=True)
class TangentPotential:
    gradient: np.ndarray
    hessian_diag: np.ndarray


def tangent_perturbation(p: GridDensity, values: Sequence[float] | np.ndarray) -> TangentPerturbation:
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size != p.n + 1:
        raise InvalidParameter(f"perturbation has {arr.size} values, density grid has {p.n + 1}")
    if not np.all(np.isfinite(arr)):
        raise NotMeanZero("perturbation values must be finite")
    mean = float(np.trapezoid(arr, dx=p.spacing))
    if abs(mean) > MEAN_ZERO_TOLERANCE:
        raise NotMeanZero(f"perturbation integrates to {mean:.3g}, expected 0")
    return TangentPerturbation(values=frozen_array(arr))


def cosine_perturbation(p: GridDensity) -> TangentPerturbation:
    """p_min · π² · cos(π (x - lo) / L): mean zero and Neumann-compatible.

    p + ε s stays positive for every ε < 1/π².
    """
    shape = np.cos(math.pi * p.unit_nodes)
    return tangent_perturbation(p, p.p_min * math.pi**2 * shape)


def solve_potential(p: GridDensity, s: TangentPerturbation) -> TangentPotential:
    if s.values.size != p.n + 1:
        raise InvalidParameter(f"perturbation has {s.values.size} values, density grid has {p.n + 1}")
    mean = float(np.trapezoid(s.values, dx=p.spacing))
    if abs(mean) > MEAN_ZERO_TOLERANCE:
        raise NotMeanZero(f"perturbation integrates to {mean:.3g}, expected 0")
    gradient = -cumulative_trapezoid(s.values, p.spacing) / p.values
    hessian_diag = np.gradient(gradient, p.spacing)
    return TangentPotential(gradient=frozen_array(gradient), hessian_diag=frozen_array(hessian_diag))


def hessian_form(e: EntropyModel, p: GridDensity, s: TangentPerturbation) -> float:
    potential = solve_potential(p, s)
    weight = np.asarray(e.f_second(p.values), dtype=float) * np.square(p.values)
    return float(np.trapezoid(np.square(potential.hessian_diag) * weight, dx=p.spacing))


def wasserstein_form(p: GridDensity, s: TangentPerturbation) -> float:
    potential = solve_potential(p, s)
    return float(np.trapezoid(np.square(potential.gradient) * p.values, dx=p.spacing))


def _perturbed(p: GridDensity, s: TangentPerturbation, eps: float) -> GridDensity:
    values = p.values + eps * s.values
    if float(values.min()) <= 0.0:
        raise PerturbedDensityInvalid(f"p + {eps:g}·σ is not positive (min {float(values.min()):.3g})")
    try:
        return build_density(values, p.support_lo, p.support_hi)
    except DensityError as exc:
        raise PerturbedDensityInvalid(f"p + {eps:g}·σ is not a valid density: {exc}") from exc


def _residuals(
    squared_distance: Callable[[GridDensity], float],
    limit: float,
    p: GridDensity,
    s: TangentPerturbation,
    eps_list: Sequence[float],
) -> list[tuple[float, float]]:
    eps_values = sorted((float(eps) for eps in eps_list), reverse=True)
    if any(not (eps > 0.0 and math.isfinite(eps)) for eps in eps_values):
        raise InvalidParameter("perturbation sizes must be positive and finite")
    out = []
    for eps in eps_values:
        shifted = _perturbed(p, s, eps)
        out.append((eps, abs(squared_distance(shifted) / eps**2 - limit)))
    return out


def _default_quantiles(p: GridDensity, m: Optional[int]) -> int:
    return m if m is not None else max(2048, p.n)


def taylor_residual(
    e: EntropyModel,
    p: GridDensity,
    s: TangentPerturbation,
    eps_list: Sequence[float],
    *,
    m: Optional[int] = None,
) -> list[tuple[float, float]]:
    """|Dist_H(p, p + εσ)^2 / ε^2 - Hess(σ, σ)| for each ε, largest ε first."""
    m = _default_quantiles(p, m)
    limit = hessian_form(e, p, s)
    pairs = _residuals(lambda shifted: dist_h_quantile(e, p, shifted, m) ** 2, limit, p, s, eps_list)
    logger.debug("taylor residuals for %s: hessian form %.12g, %s", e.label, limit, pairs)
    return pairs


def wasserstein_taylor_residual(
    p: GridDensity,
    s: TangentPerturbation,
    eps_list: Sequence[float],
    *,
    m: Optional[int] = None,
) -> list[tuple[float, float]]:
    """|Dist_T(p, p + εσ)^2 / ε^2 - g_T(σ, σ)| for each ε, largest ε first."""
    m = _default_quantiles(p, m)
    limit = wasserstein_form(p, s)
    return _residuals(lambda shifted: dist_wasserstein(p, shifted, m) ** 2, limit, p, s, eps_list)


def observed_orders(pairs: Sequence[tuple[float, float]]) -> list[float]:
    """Observed convergence order between successive (ε, residual) pairs."""
    orders = []
    for (eps_a, res_a), (eps_b, res_b) in zip(pairs[:-1], pairs[1:]):
        if res_a <= 0.0 or res_b <= 0.0:
            orders.append(math.nan)
            continue
        orders.append(math.log(res_a / res_b) / math.log(eps_a / eps_b))
    return orders


__all__ = [
    "TangentPerturbation",
    "TangentPotential",
    "tangent_perturbation",
    "cosine_perturbation",
    "solve_potential",
    "hessian_form",
    "wasserstein_form",
    "taylor_residual",
    "wasserstein_taylor_residual",
    "observed_orders",
]
