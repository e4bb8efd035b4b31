import os
import sys

import numpy as np
import pytest

# Add service root and src to sys.path so `transport_hessian` imports work when running tests from repo root
CURRENT_DIR = os.path.dirname(__file__)
SERVICE_ROOT = os.path.abspath(os.path.join(CURRENT_DIR, os.pardir))
SRC_ROOT = os.path.join(SERVICE_ROOT, "src")
DATA_ROOT = os.path.join(SERVICE_ROOT, "data", "densities")

for path in reversed([SERVICE_ROOT, SRC_ROOT]):
    if path not in sys.path:
        sys.path.insert(0, path)

from transport_hessian.density import build_density, sample_density  # noqa: E402


def smooth_values(coefficients, n):
    """1 + Σ a_k cos(kπu) on N+1 unit nodes; positive whenever Σ|a_k| < 1."""
    u = np.arange(n + 1, dtype=float) / n
    values = np.ones_like(u)
    for k, a in enumerate(coefficients, start=1):
        values += a * np.cos(k * np.pi * u)
    return values


@pytest.fixture(scope="session")
def data_root():
    return DATA_ROOT


@pytest.fixture(scope="session")
def uniform_unit():
    return build_density(np.ones(1025), 0.0, 1.0)


@pytest.fixture(scope="session")
def uniform_half():
    return build_density(np.full(1025, 2.0), 0.0, 0.5)


@pytest.fixture(scope="session")
def make_linear():
    def factory(n=1024):
        return sample_density(lambda x: (2.0 / 3.0) * (1.0 + x), 0.0, 1.0, n, normalize=False)

    return factory


@pytest.fixture(scope="session")
def make_smooth():
    """Factory for smooth positive densities from cosine coefficients."""

    def factory(coefficients, lo=0.0, hi=1.0, n=1024):
        return build_density(smooth_values(coefficients, n), lo, hi, normalize=True)

    return factory


@pytest.fixture(scope="session")
def random_pairs():
    def factory(count, n, seed=20240611):
        rng = np.random.default_rng(seed)
        pairs = []
        for _ in range(count):
            densities = []
            for _ in range(2):
                coefficients = rng.uniform(-1.0, 1.0, size=4)
                coefficients *= 0.8 / np.abs(coefficients).sum()
                lo = float(rng.uniform(-1.0, 1.0))
                hi = lo + float(rng.uniform(0.5, 2.0))
                densities.append(build_density(smooth_values(coefficients, n), lo, hi, normalize=True))
            pairs.append(tuple(densities))
        return pairs

    return factory
