"""Distance from a ground user to its nearest platform under hard-core
placement: exact-form and approximate densities, plus empirical sampling.

Distances are slant distances r = sqrt(h^2 + L^2) where h is the planar
nearest distance and L the common platform altitude, so both densities
vanish below r = L.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .pointprocess import (
    MhcpParams,
    matern_retention_mask,
    mhcp_density,
    sample_ppp_xy,
    substream,
)
from .specfun import QuadratureSpec, integrate

log = logging.getLogger(__name__)

_MAX_RESAMPLE_ATTEMPTS = 10_000


@dataclass(frozen=True)
class DistancePdfParams:
    """Inputs of the nearest-platform distance densities."""

    lambda_parent: float
    lambda_retained: float
    delta: float
    altitude: float

    def __post_init__(self) -> None:
        if not (self.altitude > 0 and math.isfinite(self.altitude)):
            raise ValueError(f"altitude must be positive, got {self.altitude}")
        expected = mhcp_density(MhcpParams(self.lambda_parent, self.delta))
        if abs(self.lambda_retained - expected) > 1e-12:
            raise ValueError(
                f"lambda_retained={self.lambda_retained} is inconsistent with "
                f"lambda_parent={self.lambda_parent}, delta={self.delta} "
                f"(expected {expected})"
            )

    @classmethod
    def from_parent(cls, lambda_parent: float, delta: float, altitude: float) -> "DistancePdfParams":
        lam_b = mhcp_density(MhcpParams(lambda_parent, delta))
        return cls(lambda_parent, lam_b, delta, altitude)


def lens_area(x: float, delta: float) -> float:
    """Overlap area of two radius-delta disks whose centers are x apart.

    2 delta^2 acos(x / 2 delta) - (x / 2) sqrt(4 delta^2 - x^2) for
    0 < x <= 2 delta, zero beyond (continuous at the boundary), and the
    full disk area at x = 0.
    """
    if x < 0:
        raise ValueError(f"separation must be nonnegative, got {x}")
    if delta < 0:
        raise ValueError(f"delta must be nonnegative, got {delta}")
    if delta == 0.0 or x > 2.0 * delta:
        return 0.0
    if x == 0.0:
        return math.pi * delta**2
    return 2.0 * delta**2 * math.acos(x / (2.0 * delta)) - 0.5 * x * math.sqrt(
        4.0 * delta**2 - x * x
    )


def _retention_ratio(z: float) -> float:
    """(1 - e^-z) / z, series branch near the removable singularity at 0."""
    if abs(z) < 1e-6:
        return 1.0 - z / 2.0 + z * z / 6.0
    return -math.expm1(-z) / z


def _effective_intensity(y: float, params: DistancePdfParams) -> float:
    """Thinned intensity the exact form assigns at slant distance y."""
    h = math.sqrt(max(y * y - params.altitude**2, 0.0))
    z = params.lambda_parent * (math.pi * params.delta**2 - lens_area(h, params.delta))
    return params.lambda_parent * _retention_ratio(z)


def pdf_exact(
    r: float, params: DistancePdfParams, quad: QuadratureSpec | None = None
) -> float:
    """Exact-form density of the nearest-platform slant distance.

    Evaluates the hard-core retention kernel inside a void-probability
    exponent: 2 pi r lam_eff(r) * exp(-int_L^r 2 pi y lam_eff(y) dy), where
    lam_eff carries the lens-area retention ratio.  At delta = 0 the kernel
    is identically 1 and this reduces exactly to ``pdf_approx`` with the
    parent density.  Zero below the altitude.
    """
    if quad is None:
        quad = QuadratureSpec()
    L = params.altitude
    if r < L:
        return 0.0
    inner = integrate(
        lambda y: 2.0 * math.pi * y * _effective_intensity(y, params), L, r, quad
    )
    return 2.0 * math.pi * r * _effective_intensity(r, params) * math.exp(-inner)


def pdf_approx(r: float, lambda_retained: float, L: float) -> float:
    """Rayleigh-type approximate density 2 lam_B pi r exp(-lam_B pi (r^2 - L^2)).

    Integrates to exactly 1 on [L, inf); zero below L.
    """
    if lambda_retained <= 0:
        raise ValueError(f"lambda_retained must be positive, got {lambda_retained}")
    if L <= 0:
        raise ValueError(f"altitude must be positive, got {L}")
    if r < L:
        return 0.0
    rate = lambda_retained * math.pi
    return 2.0 * rate * r * math.exp(-rate * (r * r - L * L))


def cdf_approx(r: float, lambda_retained: float, L: float) -> float:
    """Closed-form distribution function of ``pdf_approx``."""
    if r < L:
        return 0.0
    return -math.expm1(-lambda_retained * math.pi * (r * r - L * L))


def pdf_grid_span(lambda_retained: float) -> float:
    """Width of the evaluation window [L, L + 5 / sqrt(lam_B pi)]; covers
    all but ~e^-25 of the approximate distribution's mass."""
    return 5.0 / math.sqrt(lambda_retained * math.pi)


def sample_platforms_xy(
    rng: np.random.Generator, lambda_parent: float, delta: float, region_radius: float
) -> tuple[np.ndarray, np.ndarray]:
    """One platform realization: parent PPP on an enlarged disk of radius
    R + delta, hard-core thinning, then cropping to radius R.

    Sampling on the enlarged window keeps thinning near the boundary
    unbiased (every kept point sees its full competitor neighborhood).
    Draw order: Poisson count, radii, angles, marks.
    """
    window = region_radius + delta
    x, y = sample_ppp_xy(lambda_parent, window, rng)
    marks = rng.random(x.size)
    keep = matern_retention_mask(x, y, marks, delta)
    x, y = x[keep], y[keep]
    inside = x * x + y * y <= region_radius**2
    return x[inside], y[inside]


def sample_nearest_distance(
    params: DistancePdfParams, region_radius: float, rng_seed
) -> float:
    """Draw one nearest-platform slant distance for a user at the origin.

    Samples a hard-core platform realization and returns
    sqrt(h^2 + L^2) for the nearest planar distance h.  Empty realizations
    (probability ~ e^{-lam_B pi R^2}) are resampled from an incremented
    sub-seed; resamples are logged.
    """
    if region_radius <= 0:
        raise ValueError(f"region_radius must be positive, got {region_radius}")
    if isinstance(rng_seed, np.random.Generator):
        # continued draws from the caller's stream serve as resamples
        rng_for = lambda attempt: rng_seed
    else:
        path = rng_seed if isinstance(rng_seed, tuple) else (int(rng_seed),)
        rng_for = lambda attempt: substream(*path, attempt)
    for attempt in range(_MAX_RESAMPLE_ATTEMPTS):
        rng = rng_for(attempt)
        x, y = sample_platforms_xy(rng, params.lambda_parent, params.delta, region_radius)
        if x.size:
            break
    else:
        raise RuntimeError(
            f"no non-empty realization after {_MAX_RESAMPLE_ATTEMPTS} attempts"
        )
    if attempt:
        log.debug("resampled %d empty realization(s) for seed %r", attempt, rng_seed)
    h2 = float(np.min(x * x + y * y))
    return math.sqrt(h2 + params.altitude**2)
