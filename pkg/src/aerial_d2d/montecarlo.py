"""Brute-force network realization engine.

Produces empirical estimates (with standard errors) of the quantities the
closed forms predict: the D2D-use probability of either decision scheme,
the averaged threshold D2D distance, and the nearest-platform distance
histogram.

Reproducibility model: replicates are processed in fixed blocks of
``BLOCK_SIZE``; block b of stream tag t draws from
``substream(base_seed, t, b)``, and all within-block draws follow a fixed
order.  Replicate outcomes therefore depend only on (base_seed,
replicate_index), never on the worker count: workers pick up whole blocks
and partial results are reduced in block order, so estimates are
bit-identical for any worker_count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import CarrierConfig, EnvironmentProfile, d2d_attenuation
from .modeselect import (
    LinkState,
    ModeDecision,
    PowerConfig,
    Scheme,
    SchemeConfig,
    mean_height_attenuation,
    mean_threshold_distance,
    rsss_decide,
    tdds_decide,
    threshold_distance,
)
from .nearestdist import pdf_grid_span, sample_platforms_xy
from .pointprocess import MhcpParams, mhcp_density, substream

BLOCK_SIZE = 1024

# Stream tags keep the estimators' randomness disjoint for one base seed.
_STREAM_P_D2D = 1
_STREAM_DTH_UL = 2
_STREAM_DTH_DL = 3
_STREAM_HIST = 4

_MAX_BLOCK_RESAMPLES = 10_000


@dataclass(frozen=True)
class DeploymentConfig:
    """Densities and geometry of one network snapshot."""

    lambda_parent: float
    delta: float
    region_radius: float
    altitude: float
    lambda_tx: float = 1e-3
    lambda_rx: float = 1e-3

    def __post_init__(self) -> None:
        if not (self.lambda_parent > 0 and math.isfinite(self.lambda_parent)):
            raise ValueError(f"lambda_parent must be positive, got {self.lambda_parent}")
        if not (self.delta >= 0 and math.isfinite(self.delta)):
            raise ValueError(f"delta must be nonnegative, got {self.delta}")
        if not self.region_radius > 0:
            raise ValueError(f"region_radius must be positive, got {self.region_radius}")
        if not self.altitude > 0:
            raise ValueError(f"altitude must be positive, got {self.altitude}")
        if self.lambda_tx < 0 or self.lambda_rx < 0:
            raise ValueError("user densities must be nonnegative")

    @property
    def lambda_retained(self) -> float:
        return mhcp_density(MhcpParams(self.lambda_parent, self.delta))


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one experiment needs: deployment, channel, powers,
    scheme, replicate budget and seeding."""

    deployment: DeploymentConfig
    env: EnvironmentProfile
    carrier: CarrierConfig
    power: PowerConfig
    scheme: SchemeConfig
    n_replicates: int
    base_seed: int
    worker_count: int = 1

    def __post_init__(self) -> None:
        if self.n_replicates < 1:
            raise ValueError(f"n_replicates must be >= 1, got {self.n_replicates}")
        if self.base_seed < 0:
            raise ValueError(f"base_seed must be nonnegative, got {self.base_seed}")
        if self.worker_count < 1:
            raise ValueError(f"worker_count must be >= 1, got {self.worker_count}")
        if not math.isclose(self.scheme.region_radius, self.deployment.region_radius):
            raise ValueError(
                "scheme.region_radius and deployment.region_radius disagree: "
                f"{self.scheme.region_radius} vs {self.deployment.region_radius}"
            )
        if not math.isclose(self.scheme.altitude, self.deployment.altitude):
            raise ValueError(
                "scheme.altitude and deployment.altitude disagree: "
                f"{self.scheme.altitude} vs {self.deployment.altitude}"
            )


@dataclass(frozen=True)
class EstimateWithCI:
    """A point estimate with its standard error and sample size."""

    mean: float
    std_error: float
    n: int

    def __post_init__(self) -> None:
        if self.std_error < 0:
            raise ValueError(f"std_error must be nonnegative, got {self.std_error}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")


@dataclass(frozen=True)
class HistogramBin:
    center: float
    width: float
    density: float
    std_error: float


def _block_sizes(n: int) -> list[int]:
    full, rem = divmod(n, BLOCK_SIZE)
    return [BLOCK_SIZE] * full + ([rem] if rem else [])


def _run_blocks(worker_fn, config, stream_args, n: int, workers: int) -> list:
    """Apply worker_fn(config, stream_args, block_index, block_n) to every
    block, in-process or on a process pool, returning results in block order."""
    sizes = _block_sizes(n)
    tasks = [(config, stream_args, b, size) for b, size in enumerate(sizes)]
    if workers <= 1 or len(tasks) == 1:
        return [worker_fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker_fn, *zip(*tasks), chunksize=max(1, len(tasks) // (4 * workers))))


def _nearest_from_origin_block(
    config: DeploymentConfig, stream: int, block: int, block_n: int, base_seed: int
) -> tuple[np.ndarray, int]:
    """Slant distances from the origin to the nearest platform for one
    block of independent realizations.  Empty cropped realizations are
    redrawn from the same block stream; the resample count is returned."""
    rng = substream(base_seed, stream, block)
    if config.delta == 0.0:
        return _nearest_from_origin_block_ppp(config, rng, block_n)
    out = np.empty(block_n, dtype=float)
    resamples = 0
    for i in range(block_n):
        for attempt in range(_MAX_BLOCK_RESAMPLES):
            x, y = sample_platforms_xy(
                rng, config.lambda_parent, config.delta, config.region_radius
            )
            if x.size:
                break
            resamples += 1
        else:
            raise RuntimeError("no non-empty realization after resampling")
        out[i] = math.sqrt(float(np.min(x * x + y * y)) + config.altitude**2)
    return out, resamples


def _nearest_from_origin_block_ppp(
    config: DeploymentConfig, rng: np.random.Generator, block_n: int
) -> tuple[np.ndarray, int]:
    """No hard core: the whole block is drawn at once (counts, then radii),
    and only radial coordinates matter for the distance to the origin."""
    area = math.pi * config.region_radius**2
    L2 = config.altitude**2
    nearest_h = np.full(block_n, np.inf)
    pending = np.ones(block_n, dtype=bool)
    resamples = 0
    for _ in range(_MAX_BLOCK_RESAMPLES):
        idx = np.flatnonzero(pending)
        if idx.size == 0:
            break
        counts = rng.poisson(config.lambda_parent * area, idx.size)
        total = int(counts.sum())
        radii = config.region_radius * np.sqrt(rng.random(total))
        offsets = np.concatenate(([0], np.cumsum(counts)[:-1]))
        has = counts > 0
        if total:
            mins = np.minimum.reduceat(radii, offsets[has])
            nearest_h[idx[has]] = mins
        pending[idx[has]] = False
        resamples += int((~has).sum())
    else:
        raise RuntimeError("no non-empty realization after resampling")
    return np.sqrt(nearest_h**2 + L2), resamples


def _dth_block(config: ExperimentConfig, stream_args, block: int, block_n: int):
    """One block of threshold-distance samples: independent uplink and
    downlink nearest distances, reduced through the instantaneous rule with
    the mean-height attenuation standing in for both link gains."""
    dep = config.deployment
    r_ul, res_ul = _nearest_from_origin_block(
        dep, _STREAM_DTH_UL, block, block_n, config.base_seed
    )
    r_dl, res_dl = _nearest_from_origin_block(
        dep, _STREAM_DTH_DL, block, block_n, config.base_seed
    )
    a_mean = mean_height_attenuation(
        dep.lambda_retained, dep.altitude, config.env, config.carrier
    )
    a_dd = d2d_attenuation(config.carrier)
    dth = threshold_distance(
        r_ul, r_dl, config.power, a_mean, a_mean, a_dd, config.env.alpha
    )
    return float(np.sum(dth)), float(np.sum(dth * dth)), block_n, res_ul + res_dl


def estimate_mean_threshold_distance(config: ExperimentConfig) -> EstimateWithCI:
    """Sample mean (with standard error) of the instantaneous threshold
    distance over independently realized platform snapshots.

    Each sample draws the uplink and downlink nearest distances from two
    independent realizations, matching the independence assumed by the
    closed form it validates.
    """
    results = _run_blocks(
        _dth_block, config, None, config.n_replicates, config.worker_count
    )
    total = sum(r[0] for r in results)
    total_sq = sum(r[1] for r in results)
    n = sum(r[2] for r in results)
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0)
    return EstimateWithCI(mean=mean, std_error=math.sqrt(var / n), n=n)


def _nearest_to_point(
    x: np.ndarray, y: np.ndarray, px: float, py: float, altitude: float
) -> float | None:
    if x.size == 0:
        return None
    h2 = float(np.min((x - px) ** 2 + (y - py) ** 2))
    return math.sqrt(h2 + altitude * altitude)


def _p_d2d_block(config: ExperimentConfig, d_bar_th: float, block: int, block_n: int):
    """One block of mode decisions.

    Per replicate, in fixed draw order: platform realization (count, radii,
    angles, marks), receiver position (radius, angle), association uniform.
    The transmitter sits at the disk center.  Replicates with no platform
    count the transmitter as unassociated.
    """
    dep = config.deployment
    rng = substream(config.base_seed, _STREAM_P_D2D, block)
    a_dd = d2d_attenuation(config.carrier)
    alpha = config.env.alpha
    p_assoc = config.scheme.association_probability
    decide = tdds_decide if config.scheme.scheme is Scheme.TDDS else rsss_decide
    counts = {mode: 0 for mode in ModeDecision}
    for _ in range(block_n):
        x, y = sample_platforms_xy(rng, dep.lambda_parent, dep.delta, dep.region_radius)
        while True:
            rx_r = dep.region_radius * math.sqrt(rng.random())
            rx_a = 2.0 * math.pi * rng.random()
            if rx_r > 0.0:
                break
        px, py = rx_r * math.cos(rx_a), rx_r * math.sin(rx_a)
        assoc_draw = rng.random()
        link = LinkState(
            d=rx_r,
            r_ul=_nearest_to_point(x, y, 0.0, 0.0, dep.altitude),
            r_dl=_nearest_to_point(x, y, px, py, dep.altitude),
            tx_associated=bool(x.size) and assoc_draw < p_assoc,
            rss_dd=config.power.p_dd * a_dd * rx_r**-alpha,
        )
        counts[decide(link, d_bar_th, config.power)] += 1
    return counts[ModeDecision.D2D], block_n


def estimate_d2d_probability(config: ExperimentConfig) -> EstimateWithCI:
    """Fraction of replicates choosing direct mode, with binomial standard
    error sqrt(m (1 - m) / n).

    The averaged threshold distance fed to the decision rule is the
    analytic closed form for the configured deployment, so the estimate
    validates the probability expressions against the same threshold they
    use.
    """
    d_bar_th = mean_threshold_distance(
        config.power,
        config.deployment.lambda_retained,
        config.deployment.altitude,
        config.env,
        config.carrier,
    )
    results = _run_blocks(
        _p_d2d_block, config, d_bar_th, config.n_replicates, config.worker_count
    )
    d2d = sum(r[0] for r in results)
    n = sum(r[1] for r in results)
    mean = d2d / n
    return EstimateWithCI(
        mean=mean, std_error=math.sqrt(mean * (1.0 - mean) / n), n=n
    )


def _hist_block(config: ExperimentConfig, stream_args, block: int, block_n: int):
    values, resamples = _nearest_from_origin_block(
        config.deployment, _STREAM_HIST, block, block_n, config.base_seed
    )
    return values, resamples


def sample_nearest_distances(config: ExperimentConfig) -> tuple[np.ndarray, int]:
    """n_replicates nearest-platform slant distances for a user at the
    origin, plus the number of empty realizations that were redrawn."""
    results = _run_blocks(
        _hist_block, config, None, config.n_replicates, config.worker_count
    )
    values = np.concatenate([r[0] for r in results])
    resamples = sum(r[1] for r in results)
    return values, resamples


def nearest_distance_histogram(
    config: ExperimentConfig, n_bins: int
) -> list[HistogramBin]:
    """Normalized histogram (unit integral over its range) of nearest
    slant distances on [L, L + 5 / sqrt(lam_B pi)].

    Per-bin standard errors are binomial on the empirical bin frequency,
    scaled to density units.
    """
    if n_bins < 2:
        raise ValueError(f"n_bins must be >= 2, got {n_bins}")
    values, _ = sample_nearest_distances(config)
    dep = config.deployment
    lo = dep.altitude
    hi = dep.altitude + pdf_grid_span(dep.lambda_retained)
    density, edges = np.histogram(values, bins=n_bins, range=(lo, hi), density=True)
    widths = np.diff(edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    n_in_range = max(int(((values >= lo) & (values <= hi)).sum()), 1)
    p_hat = density * widths
    se = np.sqrt(np.clip(p_hat * (1.0 - p_hat), 0.0, None) / n_in_range) / widths
    return [
        HistogramBin(center=float(c), width=float(w), density=float(d), std_error=float(s))
        for c, w, d, s in zip(centers, widths, density, se)
    ]
