"""Planar point processes on a disk: homogeneous PPP sampling and
Matern type-II hard-core thinning, plus the retained-density formula.

All sampling is driven by numpy Generators.  Any function taking an
``rng_seed`` accepts either a nonnegative integer seed or an existing
``numpy.random.Generator``; seeds are expanded with ``substream`` so that
derived streams are reproducible and independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class EmptyPatternError(ValueError):
    """Raised when an operation needs at least one point and got none."""


def substream(base_seed: int, *path: int) -> np.random.Generator:
    """Derive an independent generator from a base seed and an index path.

    The mixing rule is ``default_rng(SeedSequence((base_seed, *path)))``;
    identical (base_seed, path) pairs always yield the same stream.
    """
    return np.random.default_rng(np.random.SeedSequence((base_seed, *path)))


def as_generator(rng_seed) -> np.random.Generator:
    if isinstance(rng_seed, np.random.Generator):
        return rng_seed
    if isinstance(rng_seed, (int, np.integer)):
        return substream(int(rng_seed))
    if isinstance(rng_seed, tuple):
        return substream(*rng_seed)
    raise TypeError(f"rng_seed must be an int, tuple or Generator, got {rng_seed!r}")


@dataclass(frozen=True)
class Point:
    """A planar location in meters."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"coordinates must be finite, got ({self.x}, {self.y})")

    def distance_to(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class PointPattern:
    """A finite point set on the disk of radius ``region_radius`` at the origin."""

    points: tuple[Point, ...]
    region_radius: float

    def __post_init__(self) -> None:
        if not (self.region_radius > 0 and math.isfinite(self.region_radius)):
            raise ValueError(f"region_radius must be positive, got {self.region_radius}")
        r2 = self.region_radius**2 * (1.0 + 1e-12)
        for p in self.points:
            if p.x * p.x + p.y * p.y > r2:
                raise ValueError(f"point {p} lies outside the radius-{self.region_radius} disk")

    def __len__(self) -> int:
        return len(self.points)

    def as_xy(self) -> tuple[np.ndarray, np.ndarray]:
        x = np.array([p.x for p in self.points], dtype=float)
        y = np.array([p.y for p in self.points], dtype=float)
        return x, y

    @classmethod
    def from_xy(cls, x: np.ndarray, y: np.ndarray, region_radius: float) -> "PointPattern":
        pts = tuple(Point(float(a), float(b)) for a, b in zip(x, y))
        return cls(points=pts, region_radius=region_radius)


@dataclass(frozen=True)
class MhcpParams:
    """Parent density and hard-core distance of a Matern type-II process."""

    lambda_parent: float
    delta: float

    def __post_init__(self) -> None:
        if not (self.lambda_parent > 0 and math.isfinite(self.lambda_parent)):
            raise ValueError(f"lambda_parent must be positive, got {self.lambda_parent}")
        if not (self.delta >= 0 and math.isfinite(self.delta)):
            raise ValueError(f"delta must be nonnegative, got {self.delta}")


def sample_ppp_xy(
    density: float, region_radius: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Array-level PPP draw on the disk; count first, then polar positions."""
    if density < 0 or not math.isfinite(density):
        raise ValueError(f"density must be nonnegative, got {density}")
    if region_radius <= 0 or not math.isfinite(region_radius):
        raise ValueError(f"region_radius must be positive, got {region_radius}")
    n = int(rng.poisson(density * math.pi * region_radius**2))
    radius = region_radius * np.sqrt(rng.random(n))
    angle = rng.random(n) * (2.0 * math.pi)
    return radius * np.cos(angle), radius * np.sin(angle)


def sample_ppp(density: float, region_radius: float, rng_seed) -> PointPattern:
    """Sample a homogeneous PPP of the given intensity on the disk.

    The point count is Poisson(density * pi * R^2) and positions are i.i.d.
    uniform on the disk; deterministic given the seed.
    """
    rng = as_generator(rng_seed)
    x, y = sample_ppp_xy(density, region_radius, rng)
    return PointPattern.from_xy(x, y, region_radius)


def matern_retention_mask(
    x: np.ndarray, y: np.ndarray, marks: np.ndarray, delta: float
) -> np.ndarray:
    """Type-II retention: a point survives iff no other point within delta
    carries a strictly smaller mark (ties broken by index, lower index wins).
    """
    n = x.size
    keep = np.ones(n, dtype=bool)
    if delta <= 0 or n < 2:
        return keep
    dx = x[:, None] - x[None, :]
    dy = y[:, None] - y[None, :]
    close = dx * dx + dy * dy <= delta * delta
    np.fill_diagonal(close, False)
    idx = np.arange(n)
    dominates = (marks[None, :] < marks[:, None]) | (
        (marks[None, :] == marks[:, None]) & (idx[None, :] < idx[:, None])
    )
    removed = (close & dominates).any(axis=1)
    return ~removed


def mhcp_thin(parents: PointPattern, delta: float, rng_seed) -> PointPattern:
    """Thin a parent pattern to a Matern type-II hard-core pattern.

    Each parent receives an independent uniform [0, 1) mark; the output has
    minimum pairwise distance >= delta.
    """
    if delta < 0 or not math.isfinite(delta):
        raise ValueError(f"delta must be nonnegative, got {delta}")
    rng = as_generator(rng_seed)
    marks = rng.random(len(parents))
    x, y = parents.as_xy()
    keep = matern_retention_mask(x, y, marks, delta)
    return PointPattern(
        points=tuple(p for p, k in zip(parents.points, keep) if k),
        region_radius=parents.region_radius,
    )


def mhcp_density(params: MhcpParams) -> float:
    """Retained intensity of a type-II hard-core process.

    (1 - exp(-pi * lambda_parent * delta^2)) / (pi * delta^2), continuously
    extended to lambda_parent at delta = 0.
    """
    if params.delta == 0.0:
        return params.lambda_parent
    exclusion_area = math.pi * params.delta**2
    return -math.expm1(-params.lambda_parent * exclusion_area) / exclusion_area


def nearest_point_distance(origin: Point, pattern: PointPattern) -> float:
    """Minimum Euclidean distance from ``origin`` to any pattern point."""
    if len(pattern) == 0:
        raise EmptyPatternError("pattern has no points; nothing to associate with")
    x, y = pattern.as_xy()
    return float(np.sqrt(np.min((x - origin.x) ** 2 + (y - origin.y) ** 2)))
