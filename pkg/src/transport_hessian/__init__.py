"""Transport information Hessian distances between one-dimensional densities."""

__version__ = "0.1.0"

from .density import (  # noqa: E402
    CdfFunction,
    GridDensity,
    QuantileFunction,
    build_density,
    cdf,
    dilate,
    from_samples,
    midpoint_grid,
    quantile,
    sample_density,
    translate,
)
from .distance import (  # noqa: E402
    GeodesicPath,
    MongeMap,
    dist_h_between,
    dist_h_map,
    dist_h_quantile,
    dist_hellinger,
    dist_wasserstein,
    dist_wasserstein_map,
    distance_matrix,
    geodesic,
)
from .entropy import (  # noqa: E402
    EntropyKind,
    EntropyModel,
    f_entropy_value,
    h_eval,
    h_inverse,
    h_numeric,
    h_numeric_many,
    make_entropy,
    parse_entropy,
)
from .errors import TransportHessianError  # noqa: E402
from .hessian import (  # noqa: E402
    TangentPerturbation,
    TangentPotential,
    cosine_perturbation,
    hessian_form,
    observed_orders,
    solve_potential,
    tangent_perturbation,
    taylor_residual,
    wasserstein_form,
    wasserstein_taylor_residual,
)

__all__ = [
    "__version__",
    "CdfFunction",
    "GridDensity",
    "QuantileFunction",
    "build_density",
    "cdf",
    "dilate",
    "from_samples",
    "midpoint_grid",
    "quantile",
    "sample_density",
    "translate",
    "GeodesicPath",
    "MongeMap",
    "dist_h_between",
    "dist_h_map",
    "dist_h_quantile",
    "dist_hellinger",
    "dist_wasserstein",
    "dist_wasserstein_map",
    "distance_matrix",
    "geodesic",
    "EntropyKind",
    "EntropyModel",
    "f_entropy_value",
    "h_eval",
    "h_inverse",
    "h_numeric",
    "h_numeric_many",
    "make_entropy",
    "parse_entropy",
    "TransportHessianError",
    "TangentPerturbation",
    "TangentPotential",
    "cosine_perturbation",
    "hessian_form",
    "observed_orders",
    "solve_potential",
    "tangent_perturbation",
    "taylor_residual",
    "wasserstein_form",
    "wasserstein_taylor_residual",
]
