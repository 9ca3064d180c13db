"""Binding of endpoints to their nearest platforms and assembly of
LinkState records for the decision rules.

Uplink and downlink associate independently, each to the platform nearest
its own endpoint.  Whether the transmitter is "associated" combines an
exogenous Bernoulli draw with platform availability: with no platforms the
transmitter is never associated, whatever the draw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import CarrierConfig, EnvironmentProfile, d2d_attenuation, rss
from .modeselect import LinkState, PowerConfig
from .pointprocess import Point, PointPattern, as_generator


@dataclass(frozen=True)
class AssociationRecord:
    """An endpoint's nearest platform, or None when none exists."""

    endpoint: Point
    platform: Point | None
    horizontal_distance_m: float | None
    slant_distance_m: float | None


def nearest_association(
    endpoint: Point, platforms: PointPattern, altitude: float
) -> AssociationRecord:
    """Nearest-platform association with slant distance sqrt(h^2 + L^2)."""
    if altitude <= 0:
        raise ValueError(f"altitude must be positive, got {altitude}")
    if len(platforms) == 0:
        return AssociationRecord(endpoint, None, None, None)
    best = min(platforms.points, key=endpoint.distance_to)
    h = endpoint.distance_to(best)
    return AssociationRecord(endpoint, best, h, math.hypot(h, altitude))


def build_link_state(
    tx: Point,
    rx: Point,
    platforms: PointPattern,
    altitude: float,
    env: EnvironmentProfile,
    carrier: CarrierConfig,
    power: PowerConfig,
    p_assoc: float,
    rng_seed,
) -> LinkState:
    """Assemble the LinkState for one transmitter-receiver pair.

    The association draw is Bernoulli(p_assoc), independent of geometry.
    Raises ValueError for a coincident pair (d = 0), whose direct-link
    power law is undefined.
    """
    if not 0.0 <= p_assoc <= 1.0:
        raise ValueError(f"p_assoc must lie in [0, 1], got {p_assoc}")
    d = tx.distance_to(rx)
    if d == 0.0:
        raise ValueError("degenerate pair: transmitter and receiver coincide")
    ul = nearest_association(tx, platforms, altitude)
    dl = nearest_association(rx, platforms, altitude)
    rng = as_generator(rng_seed)
    associated = len(platforms) > 0 and bool(rng.random() < p_assoc)
    return LinkState(
        d=d,
        r_ul=ul.slant_distance_m,
        r_dl=dl.slant_distance_m,
        tx_associated=associated,
        rss_dd=rss(power.p_dd, d2d_attenuation(carrier), d, env.alpha),
    )
