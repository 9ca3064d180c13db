"""Air-to-ground and device-to-device channel models.

Distance-based path loss only: an elevation-angle sigmoid gives the
line-of-sight probability, LOS/NLOS excess losses are mixed by that
probability, and received powers follow a plain power law.  Powers and
attenuations are carried in linear units (watts, dimensionless gains);
decibels appear only at presentation boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SPEED_OF_LIGHT = 299792458.0


@dataclass(frozen=True)
class EnvironmentProfile:
    """Sigmoid LOS constants, excess losses and D2D path-loss exponent
    for one environment class."""

    a: float
    b: float
    eta_los_db: float
    eta_nlos_db: float
    alpha: float

    def __post_init__(self) -> None:
        if not (self.a > 0 and self.b > 0):
            raise ValueError(f"sigmoid constants must be positive, got a={self.a}, b={self.b}")
        if not (self.eta_nlos_db >= self.eta_los_db >= 0):
            raise ValueError(
                "excess losses must satisfy eta_nlos_db >= eta_los_db >= 0, "
                f"got {self.eta_los_db}, {self.eta_nlos_db}"
            )
        if not self.alpha > 2:
            raise ValueError(f"path-loss exponent must exceed 2, got {self.alpha}")


@dataclass(frozen=True)
class CarrierConfig:
    """Carrier frequency and the speed-of-light convention in use.

    c defaults to the exact SI value; pass 3e8 to reproduce hand
    calculations that round it.
    """

    f_c: float
    c: float = SPEED_OF_LIGHT

    def __post_init__(self) -> None:
        if not (self.f_c > 0 and math.isfinite(self.f_c)):
            raise ValueError(f"carrier frequency must be positive, got {self.f_c}")
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ValueError(f"speed of light must be positive, got {self.c}")


ENVIRONMENTS: dict[str, EnvironmentProfile] = {
    "high_rise_urban": EnvironmentProfile(a=27.23, b=0.08, eta_los_db=2.3, eta_nlos_db=34.0, alpha=3.5),
    "dense_urban": EnvironmentProfile(a=12.08, b=0.11, eta_los_db=1.6, eta_nlos_db=23.0, alpha=3.1),
    "urban": EnvironmentProfile(a=4.88, b=0.43, eta_los_db=1.0, eta_nlos_db=20.0, alpha=2.9),
    "suburban": EnvironmentProfile(a=4.88, b=0.43, eta_los_db=0.1, eta_nlos_db=21.0, alpha=2.7),
}


def get_environment(name: str) -> EnvironmentProfile:
    try:
        return ENVIRONMENTS[name]
    except KeyError:
        known = ", ".join(sorted(ENVIRONMENTS))
        raise KeyError(f"unknown environment {name!r}; known presets: {known}") from None


def los_probability(
    h: float, L: float, env: EnvironmentProfile, angle_unit: str = "degrees"
) -> float:
    """Line-of-sight probability for a ground user at horizontal distance h
    from a platform at altitude L.

    The elevation angle arctan(L / h) enters the sigmoid in degrees by
    default: the preset constants (a = 27.23 etc.) are calibrated for
    degrees, and a radian reading would drive the probability to ~0
    everywhere.  ``angle_unit="radians"`` is available for experimentation.
    """
    if L <= 0:
        raise ValueError(f"altitude must be positive, got {L}")
    if h < 0:
        raise ValueError(f"horizontal distance must be nonnegative, got {h}")
    theta = math.atan2(L, h)
    if angle_unit == "degrees":
        theta = math.degrees(theta)
    elif angle_unit != "radians":
        raise ValueError(f"angle_unit must be 'degrees' or 'radians', got {angle_unit!r}")
    return 1.0 / (1.0 + env.a * math.exp(-env.b * (theta - env.a)))


def atg_pathloss_db(
    h: float, L: float, env: EnvironmentProfile, carrier: CarrierConfig
) -> float:
    """Air-to-ground path loss in dB over the slant distance sqrt(h^2 + L^2):
    free-space term plus the LOS-probability-weighted excess losses."""
    p_los = los_probability(h, L, env)
    r = math.hypot(h, L)
    return (
        20.0 * math.log10(4.0 * math.pi * carrier.f_c / carrier.c)
        + 20.0 * math.log10(r)
        + p_los * env.eta_los_db
        + (1.0 - p_los) * env.eta_nlos_db
    )


def atg_attenuation(
    h: float, L: float, env: EnvironmentProfile, carrier: CarrierConfig
) -> float:
    """Linear power-gain prefactor A(h, L) of the air-to-ground link, such
    that received power is p_tx * A(h, L) * r^-2."""
    p_los = los_probability(h, L, env)
    excess_db = p_los * (env.eta_los_db - env.eta_nlos_db) + env.eta_nlos_db
    return (carrier.c / (4.0 * math.pi * carrier.f_c)) ** 2 * 10.0 ** (-excess_db / 10.0)


def d2d_attenuation(carrier: CarrierConfig) -> float:
    """Linear prefactor of the device-to-device power law, (c / 4 pi f_c)^2."""
    return (carrier.c / (4.0 * math.pi * carrier.f_c)) ** 2


def rss(p_tx: float, attenuation: float, distance: float, exponent: float) -> float:
    """Received signal strength p_tx * attenuation * distance^-exponent (watts).

    Use exponent = alpha with the D2D prefactor for direct links, and
    exponent = 2 with A(h, L) for platform links.
    """
    if p_tx < 0:
        raise ValueError(f"transmit power must be nonnegative, got {p_tx}")
    if distance <= 0:
        raise ValueError(f"distance must be positive, got {distance}")
    if exponent <= 0:
        raise ValueError(f"exponent must be positive, got {exponent}")
    return p_tx * attenuation * distance**-exponent
