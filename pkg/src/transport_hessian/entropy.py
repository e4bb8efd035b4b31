"""f-entropies and their h-functions.

The transport Hessian geometry of F(p) = ∫ f(p(x)) dx depends on f only through f''.
It enters through the one-dimensional function

    h(y) = ∫_1^y sqrt(f''(1/z)) z^(-3/2) dz,

which is strictly increasing with h(1) = 0. The named kinds all belong to the
γ-family f''(p) = p^(-γ), for which h(y) = (y^a - 1)/a with a = (γ - 1)/2
(a = 0 reads as log y). Boltzmann, quadratic, cross and reciprocal are γ = 1, 0, 2, 3.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .density import GridDensity
from .errors import (
    DomainError,
    HInversionOutOfRange,
    InvalidGamma,
    NonConvex,
    QuadratureDivergence,
    UndefinedEntropyFunction,
)

logger = logging.getLogger(__name__)

ArrayFn = Callable[[np.ndarray], np.ndarray]

QUADRATURE_TOLERANCE = 1e-10
QUADRATURE_MAX_DEPTH = 40
INVERSION_TOLERANCE = 1e-12
_CONVEXITY_PROBES = np.logspace(-8.0, 8.0, 65)
_BRACKET_LIMIT = 1e300
_MAX_BISECTIONS = 200


class EntropyKind(str, enum.Enum):
    boltzmann = "boltzmann"
    quadratic = "quadratic"
    cross = "cross"
    reciprocal = "reciprocal"
    gamma = "gamma"
    custom = "custom"


# Equivalent γ for the named kinds; custom has none.
_KIND_GAMMA = {
    EntropyKind.boltzmann: 1.0,
    EntropyKind.quadratic: 0.0,
    EntropyKind.cross: 2.0,
    EntropyKind.reciprocal: 3.0,
}


@dataclass(frozen=True)
class EntropyModel:
    kind: EntropyKind
    f_second: ArrayFn
    f: Optional[ArrayFn] = None
    h_closed: Optional[ArrayFn] = None
    h_inverse_closed: Optional[ArrayFn] = None
    gamma: Optional[float] = None

    @property
    def label(self) -> str:
        if self.kind is EntropyKind.gamma:
            return f"gamma:{self.gamma:g}"
        return self.kind.value


def _power_h(a: float) -> ArrayFn:
    if a == 0.0:
        return np.log
    if a == 1.0:
        return lambda y: np.asarray(y, dtype=float) - 1.0
    return lambda y: (np.power(np.asarray(y, dtype=float), a) - 1.0) / a


def _power_h_inverse(a: float) -> ArrayFn:
    """Inverse of _power_h(a); raises when v leaves the range of h."""
    if a == 0.0:
        return np.exp

    def inverse(v):
        base = 1.0 + a * np.asarray(v, dtype=float)
        if np.any(base <= 0.0):
            bound = -1.0 / a
            side = "below" if a < 0 else "above"
            raise HInversionOutOfRange(f"h-value must stay {side} {bound:g} for this entropy")
        if a == 1.0:
            return base
        return np.power(base, 1.0 / a)

    return inverse


def _gamma_f(gamma: float) -> ArrayFn:
    scale = 1.0 / ((1.0 - gamma) * (2.0 - gamma))
    return lambda p: scale * np.power(np.asarray(p, dtype=float), 2.0 - gamma)


def _named_functions(kind: EntropyKind) -> tuple[ArrayFn, ArrayFn]:
    if kind is EntropyKind.boltzmann:
        return (lambda p: np.asarray(p, dtype=float) * np.log(p)), (lambda p: 1.0 / np.asarray(p, dtype=float))
    if kind is EntropyKind.quadratic:
        return (lambda p: 0.5 * np.square(p)), (lambda p: np.ones_like(np.asarray(p, dtype=float)))
    if kind is EntropyKind.cross:
        return (lambda p: -np.log(p)), (lambda p: np.power(np.asarray(p, dtype=float), -2.0))
    return (lambda p: 0.5 / np.asarray(p, dtype=float)), (lambda p: np.power(np.asarray(p, dtype=float), -3.0))


def make_entropy(
    kind: EntropyKind | str,
    *,
    gamma: Optional[float] = None,
    f_second: Optional[ArrayFn] = None,
    f: Optional[ArrayFn] = None,
) -> EntropyModel:
    """Build an entropy model; custom kinds need `f_second` (and `f` for entropy values)."""
    kind = EntropyKind(kind)
    if kind is EntropyKind.gamma:
        if gamma is None or not math.isfinite(gamma) or gamma in (1.0, 2.0):
            raise InvalidGamma(f"gamma entropy needs a finite γ outside {{1, 2}}, got {gamma}")
        g = float(gamma)
        a = 0.5 * (g - 1.0)
        return EntropyModel(
            kind=kind,
            f=_gamma_f(g),
            f_second=lambda p: np.power(np.asarray(p, dtype=float), -g),
            h_closed=_power_h(a),
            h_inverse_closed=_power_h_inverse(a),
            gamma=g,
        )
    if kind is EntropyKind.custom:
        if f_second is None:
            raise NonConvex("custom entropy requires an f'' callable")
        with np.errstate(all="ignore"):
            probes = np.asarray(f_second(_CONVEXITY_PROBES), dtype=float)
        probes = np.broadcast_to(probes, _CONVEXITY_PROBES.shape)
        if not np.all(np.isfinite(probes)) or np.any(probes <= 0.0):
            raise NonConvex("custom f'' must be finite and positive on (1e-8, 1e8)")
        return EntropyModel(kind=kind, f=f, f_second=f_second)

    fn, second = _named_functions(kind)
    a = 0.5 * (_KIND_GAMMA[kind] - 1.0)
    return EntropyModel(
        kind=kind,
        f=fn,
        f_second=second,
        h_closed=_power_h(a),
        h_inverse_closed=_power_h_inverse(a),
    )


def parse_entropy(spec: str, gamma: Optional[float] = None) -> EntropyModel:
    """Parse `kind` or `gamma:<γ>`; an explicit `gamma` argument wins over the suffix."""
    name, _, suffix = spec.strip().partition(":")
    name = name.strip().lower()
    if name == EntropyKind.custom.value:
        raise ValueError("custom entropies are only available through the library API")
    if suffix and gamma is None:
        try:
            gamma = float(suffix)
        except ValueError as exc:
            raise InvalidGamma(f"cannot parse γ from {spec!r}") from exc
    return make_entropy(name, gamma=gamma)


# quadrature


def _integrand(f_second: ArrayFn) -> Callable[[float], float]:
    def g(z: float) -> float:
        return math.sqrt(float(f_second(1.0 / z))) * z ** -1.5

    return g


def adaptive_simpson(
    fn: Callable[[float], float],
    a: float,
    b: float,
    tol: float = QUADRATURE_TOLERANCE,
    max_depth: int = QUADRATURE_MAX_DEPTH,
) -> float:
    """Adaptive Simpson with Richardson correction; raises when it cannot converge."""
    if a == b:
        return 0.0
    if a > b:
        return -adaptive_simpson(fn, b, a, tol, max_depth)

    def simpson(fa: float, fm: float, fb: float, h: float) -> float:
        return h / 3.0 * (fa + 4.0 * fm + fb)

    def refine(lo, hi, flo, fmid, fhi, whole, depth, tol_here):
        mid = 0.5 * (lo + hi)
        h = 0.5 * (hi - lo)
        fl = fn(0.5 * (lo + mid))
        fr = fn(0.5 * (mid + hi))
        left = simpson(flo, fl, fmid, 0.5 * h)
        right = simpson(fmid, fr, fhi, 0.5 * h)
        correction = (left + right - whole) / 15.0
        if not math.isfinite(correction):
            raise QuadratureDivergence(f"integrand is not finite on [{lo:.6g}, {hi:.6g}]")
        if abs(correction) < tol_here:
            return left + right + correction
        if depth >= max_depth:
            raise QuadratureDivergence(
                f"no convergence on [{lo:.6g}, {hi:.6g}] after {max_depth} bisections"
            )
        return refine(lo, mid, flo, fl, fmid, left, depth + 1, 0.5 * tol_here) + refine(
            mid, hi, fmid, fr, fhi, right, depth + 1, 0.5 * tol_here
        )

    try:
        fa, fb, fm = fn(a), fn(b), fn(0.5 * (a + b))
    except (ArithmeticError, ValueError) as exc:
        raise QuadratureDivergence(f"integrand undefined on [{a:.6g}, {b:.6g}]: {exc}") from exc
    if not all(math.isfinite(v) for v in (fa, fm, fb)):
        raise QuadratureDivergence(f"integrand is not finite on [{a:.6g}, {b:.6g}]")
    try:
        return refine(a, b, fa, fm, fb, simpson(fa, fm, fb, 0.5 * (b - a)), 0, tol)
    except (ArithmeticError, ValueError) as exc:
        raise QuadratureDivergence(f"integrand undefined on [{a:.6g}, {b:.6g}]: {exc}") from exc


def _check_argument(y: float) -> float:
    y = float(y)
    if not (y > 0.0 and math.isfinite(y)):
        raise DomainError(f"h is defined for positive finite arguments, got {y}")
    return y


def h_numeric(f_second: ArrayFn, y: float) -> float:
    """h(y) by adaptive quadrature; negative integral over [y, 1] when y < 1."""
    y = _check_argument(y)
    if y == 1.0:
        return 0.0
    g = _integrand(f_second)
    if y > 1.0:
        return adaptive_simpson(g, 1.0, y)
    return -adaptive_simpson(g, y, 1.0)


def h_numeric_many(f_second: ArrayFn, ys) -> np.ndarray:
    """Vectorised h via cumulative quadrature between sorted distinct arguments."""
    ys = np.asarray(ys, dtype=float)
    if ys.size == 0:
        return np.zeros_like(ys)
    if not np.all(np.isfinite(ys)) or np.any(ys <= 0.0):
        raise DomainError("h is defined for positive finite arguments")
    unique, inverse = np.unique(ys.ravel(), return_inverse=True)
    g = _integrand(f_second)
    out = np.zeros_like(unique)

    above = unique > 1.0
    if np.any(above):
        points = np.concatenate(([1.0], unique[above]))
        span = points[-1] - 1.0
        pieces = [
            adaptive_simpson(g, lo, hi, QUADRATURE_TOLERANCE * max((hi - lo) / span, 1e-6))
            for lo, hi in zip(points[:-1], points[1:])
        ]
        out[above] = np.cumsum(pieces)

    below = unique < 1.0
    if np.any(below):
        points = np.concatenate(([1.0], unique[below][::-1]))
        span = 1.0 - points[-1]
        pieces = [
            adaptive_simpson(g, lo, hi, QUADRATURE_TOLERANCE * max((hi - lo) / span, 1e-6))
            for hi, lo in zip(points[:-1], points[1:])
        ]
        out[below] = -np.cumsum(pieces)[::-1]

    return out[inverse].reshape(ys.shape)


def h_eval(e: EntropyModel, y):
    """h at a scalar or array argument; closed form when the model has one."""
    if np.ndim(y) == 0:
        y = _check_argument(y)
        if e.h_closed is not None:
            return float(e.h_closed(y))
        return h_numeric(e.f_second, y)
    ys = np.asarray(y, dtype=float)
    if e.h_closed is None:
        return h_numeric_many(e.f_second, ys)
    if not np.all(np.isfinite(ys)) or np.any(ys <= 0.0):
        raise DomainError("h is defined for positive finite arguments")
    return np.asarray(e.h_closed(ys), dtype=float)


def h_inverse(e: EntropyModel, v):
    """Inverse of h; closed form for named kinds, log-space bisection otherwise."""
    scalar = np.ndim(v) == 0
    values = np.atleast_1d(np.asarray(v, dtype=float))
    if not np.all(np.isfinite(values)):
        raise HInversionOutOfRange("h-values must be finite")
    if e.h_inverse_closed is not None:
        with np.errstate(over="ignore"):
            out = np.asarray(e.h_inverse_closed(values), dtype=float)
        if not np.all(np.isfinite(out)) or np.any(out <= 0.0):
            raise HInversionOutOfRange("h-value maps outside the positive reals")
    else:
        out = _bisect_inverse(e, values)
    return float(out[0]) if scalar else out


def _bisect_inverse(e: EntropyModel, targets: np.ndarray) -> np.ndarray:
    lo, hi = 1.0, 1.0
    while h_eval(e, lo) > targets.min():
        lo *= 0.5
        if lo < 1.0 / _BRACKET_LIMIT:
            raise HInversionOutOfRange(f"h-value {targets.min():.6g} is below the range of h")
    while h_eval(e, hi) < targets.max():
        hi *= 2.0
        if hi > _BRACKET_LIMIT:
            raise HInversionOutOfRange(f"h-value {targets.max():.6g} is above the range of h")

    log_lo = np.full_like(targets, math.log(lo))
    log_hi = np.full_like(targets, math.log(hi))
    for _ in range(_MAX_BISECTIONS):
        if not np.any(np.expm1(log_hi - log_lo) > INVERSION_TOLERANCE):
            break
        log_mid = 0.5 * (log_lo + log_hi)
        below = h_eval(e, np.exp(log_mid)) < targets
        log_lo = np.where(below, log_mid, log_lo)
        log_hi = np.where(below, log_hi, log_mid)
    return np.exp(0.5 * (log_lo + log_hi))


def f_entropy_value(e: EntropyModel, p: GridDensity) -> float:
    if e.f is None:
        raise UndefinedEntropyFunction(f"{e.label} entropy has no f; only f'' was supplied")
    return float(np.trapezoid(np.asarray(e.f(p.values), dtype=float), dx=p.spacing))


__all__ = [
    "EntropyKind",
    "EntropyModel",
    "make_entropy",
    "parse_entropy",
    "adaptive_simpson",
    "h_numeric",
    "h_numeric_many",
    "h_eval",
    "h_inverse",
    "f_entropy_value",
]
