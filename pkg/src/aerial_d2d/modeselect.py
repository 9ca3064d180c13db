"""Mode selection between direct device-to-device and platform-relayed
transmission: threshold distances, the two decision algorithms (TDDS and
RSSS), and their closed-form D2D-use probabilities.

The threshold D2D distance is the transmitter-receiver separation at which
the direct link's received power equals the weaker of the two platform
links; decisions compare the actual separation (or the direct received
power) against averaged thresholds so nodes need no per-link signalling.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channel import CarrierConfig, EnvironmentProfile, atg_attenuation, d2d_attenuation
from .specfun import upper_incomplete_gamma_scaled


class Scheme(enum.Enum):
    TDDS = "TDDS"
    RSSS = "RSSS"


class ModeDecision(enum.Enum):
    D2D = "d2d"
    STANDARD = "standard"
    NO_SERVICE = "no_service"


@dataclass(frozen=True)
class PowerConfig:
    """Transmit powers (watts) and the received-power threshold that gates
    unassisted D2D use."""

    p_dd: float
    p_ul: float
    p_dl: float
    rss_threshold: float

    def __post_init__(self) -> None:
        for name in ("p_dd", "p_ul", "p_dl", "rss_threshold"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive, got {v}")


@dataclass(frozen=True)
class SchemeConfig:
    """Which decision scheme runs, plus the geometry it is evaluated in."""

    scheme: Scheme
    association_probability: float
    region_radius: float
    altitude: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.association_probability <= 1.0:
            raise ValueError(
                f"association_probability must lie in [0, 1], got {self.association_probability}"
            )
        if not self.region_radius > 0:
            raise ValueError(f"region_radius must be positive, got {self.region_radius}")
        if not self.altitude > 0:
            raise ValueError(f"altitude must be positive, got {self.altitude}")


@dataclass(frozen=True)
class LinkState:
    """Geometry and association state of one transmitter-receiver pair.

    r_ul and r_dl are the slant distances to the endpoints' nearest
    platforms, None when no platform exists.
    """

    d: float
    r_ul: float | None
    r_dl: float | None
    tx_associated: bool
    rss_dd: float

    def __post_init__(self) -> None:
        if not (self.d > 0 and math.isfinite(self.d)):
            raise ValueError(f"pair distance must be positive, got {self.d}")
        if self.rss_dd < 0:
            raise ValueError(f"rss_dd must be nonnegative, got {self.rss_dd}")


def rss_threshold_distance(power: PowerConfig, a_dd: float, alpha: float) -> float:
    """Largest separation at which the direct link still meets the
    received-power threshold: (p_dd * a_dd / rss_threshold)^(1/alpha)."""
    return (power.p_dd * a_dd / power.rss_threshold) ** (1.0 / alpha)


def threshold_distance(
    r_ul,
    r_dl,
    power: PowerConfig,
    a_ul: float,
    a_dl: float,
    a_dd: float,
    alpha: float,
):
    """Separation at which direct RSS equals the weaker platform-link RSS.

    Branches on which platform link is weaker; both branches agree when the
    uplink and downlink RSS coincide.  Accepts scalars or numpy arrays for
    r_ul / r_dl and returns the matching shape.
    """
    r_ul_arr = np.asarray(r_ul, dtype=float)
    r_dl_arr = np.asarray(r_dl, dtype=float)
    rss_ul = power.p_ul * a_ul * r_ul_arr**-2.0
    rss_dl = power.p_dl * a_dl * r_dl_arr**-2.0
    via_ul = (power.p_dd * a_dd / (power.p_ul * a_ul)) ** (1.0 / alpha) * r_ul_arr ** (
        2.0 / alpha
    )
    via_dl = (power.p_dd * a_dd / (power.p_dl * a_dl)) ** (1.0 / alpha) * r_dl_arr ** (
        2.0 / alpha
    )
    out = np.where(rss_dl >= rss_ul, via_ul, via_dl)
    if np.isscalar(r_ul) and np.isscalar(r_dl):
        return float(out)
    return out


def mean_height_attenuation(
    lambda_retained: float, L: float, env: EnvironmentProfile, carrier: CarrierConfig
) -> float:
    """Platform-link attenuation evaluated at the mean horizontal distance
    1 / (2 sqrt(lambda_retained)); the shared stand-in for both link gains
    in the averaged threshold-distance closed form."""
    if lambda_retained <= 0:
        raise ValueError(f"lambda_retained must be positive, got {lambda_retained}")
    h_bar = 1.0 / (2.0 * math.sqrt(lambda_retained))
    return atg_attenuation(h_bar, L, env, carrier)


def mean_threshold_distance(
    power: PowerConfig,
    lambda_retained: float,
    L: float,
    env: EnvironmentProfile,
    carrier: CarrierConfig,
) -> float:
    """Closed form for the average threshold D2D distance at altitude L.

    2 [p_dd A_dd / (pi lam_B p_ul A~)]^(1/alpha) *
    [e^x Gamma(s, x) - e^{2x} (p_ul / (p_ul + p_dl))^s Gamma(s, beta x)]
    with s = (alpha + 1) / alpha, x = lam_B pi L^2 and
    beta = (p_ul + p_dl) / p_ul, evaluated through exponentially scaled
    gamma tails so it stays finite at large altitudes.

    Known limitation: the derivation doubles the uplink half of the
    underlying double integral, which is exact only for p_ul == p_dl.  For
    unequal powers the value deviates from direct numerical integration
    (grossly so when p_ul > p_dl); the test suite measures and reports the
    deviation rather than correcting it here.
    """
    if lambda_retained <= 0:
        raise ValueError(f"lambda_retained must be positive, got {lambda_retained}")
    if L <= 0:
        raise ValueError(f"altitude must be positive, got {L}")
    alpha = env.alpha
    s = (alpha + 1.0) / alpha
    a_dd = d2d_attenuation(carrier)
    a_mean = mean_height_attenuation(lambda_retained, L, env, carrier)
    x = lambda_retained * math.pi * L * L
    beta = (power.p_ul + power.p_dl) / power.p_ul
    power_ratio = (power.p_ul / (power.p_ul + power.p_dl)) ** s
    bracket = upper_incomplete_gamma_scaled(s, x) - math.exp(
        (2.0 - beta) * x
    ) * power_ratio * upper_incomplete_gamma_scaled(s, beta * x)
    prefactor = 2.0 * (
        power.p_dd * a_dd / (math.pi * lambda_retained * power.p_ul * a_mean)
    ) ** (1.0 / alpha)
    return prefactor * bracket


def tdds_decide(link: LinkState, d_bar_th: float, power: PowerConfig) -> ModeDecision:
    """Distance-first rule: direct mode within the averaged threshold
    distance; otherwise relay through the platform when associated; an
    unassociated pair may still go direct if its received power clears the
    threshold, else it has no service."""
    if link.d <= d_bar_th:
        return ModeDecision.D2D
    if link.tx_associated:
        return ModeDecision.STANDARD
    if link.rss_dd >= power.rss_threshold:
        return ModeDecision.D2D
    return ModeDecision.NO_SERVICE


def rsss_decide(link: LinkState, d_bar_th: float, power: PowerConfig) -> ModeDecision:
    """Received-power-first rule: direct mode whenever the direct link
    clears the threshold; otherwise relay when the pair is far apart and
    associated.  The remaining combinations fall through to no service."""
    if link.rss_dd >= power.rss_threshold:
        return ModeDecision.D2D
    if link.d > d_bar_th and link.tx_associated:
        return ModeDecision.STANDARD
    return ModeDecision.NO_SERVICE


def _clamp01(v: float) -> float:
    return min(max(v, 0.0), 1.0)


def d2d_probability_tdds(
    d_bar_th: float,
    scheme: SchemeConfig,
    power: PowerConfig,
    a_dd: float,
    alpha: float,
) -> float:
    """Probability that a uniformly placed receiver pairs up in direct mode
    under the distance-first rule.

    The transmitter sits at the disk center, the receiver is uniform on the
    disk of radius R, and association is an independent Bernoulli(p) event,
    so the four cases are disk-area ratios of the averaged threshold
    distance and the received-power cutoff distance.  Clamped to [0, 1]
    against floating-point edge cases.
    """
    r_bar = rss_threshold_distance(power, a_dd, alpha)
    R = scheme.region_radius
    p = scheme.association_probability
    d2 = d_bar_th * d_bar_th
    R2 = R * R
    if d_bar_th <= r_bar <= R:
        v = d2 / R2 + (r_bar * r_bar - d2) * (1.0 - p) / R2
    elif d_bar_th <= R < r_bar:
        v = d2 / R2 + (1.0 - d2 / R2) * (1.0 - p)
    elif r_bar <= d_bar_th <= R:
        v = d2 / R2
    else:
        v = 1.0
    return _clamp01(v)


def d2d_probability_rsss(
    scheme: SchemeConfig, power: PowerConfig, a_dd: float, alpha: float
) -> float:
    """Probability of direct mode under the received-power-first rule:
    the area ratio of the power-cutoff disk, saturating at 1 once the
    cutoff distance reaches the region radius.

    The saturation condition is expressed on distances (cutoff <= R), which
    keeps the two cases continuous at the boundary.
    """
    r_bar = rss_threshold_distance(power, a_dd, alpha)
    R = scheme.region_radius
    if r_bar <= R:
        return _clamp01(r_bar * r_bar / (R * R))
    return 1.0
