"""Flat key/value experiment configuration files.

Format: one ``section.key = value`` pair per line, ``#`` comments, blank
lines ignored.  Keys are dotted lowercase names grouped by section
(deployment.*, env.*, carrier.*, power.*, scheme.*, mc.*, sweep.*, pdf.*).
Transmit powers and thresholds are written in dBm (the conventional unit
for thresholds) and converted to watts on load; the conversion is echoed
in every run manifest.

Values that drive sweeps (scheme.name, env.name, power.rss_th_dbm) may be
comma-separated lists.
"""

from __future__ import annotations

import math
from pathlib import Path

from .channel import ENVIRONMENTS, CarrierConfig, EnvironmentProfile, get_environment
from .modeselect import PowerConfig, Scheme
from .montecarlo import DeploymentConfig


class ConfigError(ValueError):
    """A missing, malformed, duplicated or unrecognized configuration key.

    The message always starts with the offending key so command-line
    diagnostics can name it directly.
    """


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) / 1000.0


def watts_to_dbm(watts: float) -> float:
    if watts <= 0:
        raise ValueError(f"power must be positive, got {watts}")
    return 10.0 * math.log10(watts * 1000.0)


class Config:
    """Parsed key/value pairs with typed access and usage tracking.

    ``check_unused`` reports keys that no command consumed, which catches
    typos like ``deployment.lamda_parent``.
    """

    def __init__(self, pairs: dict[str, str], source: str = "<memory>"):
        self._pairs = pairs
        self._source = source
        self._used: set[str] = set()

    @classmethod
    def from_text(cls, text: str, source: str = "<memory>") -> "Config":
        pairs: dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(
                    f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}"
                )
            key, value = (part.strip() for part in line.split("=", 1))
            if not key:
                raise ConfigError(f"{source}:{lineno}: empty key")
            if key in pairs:
                raise ConfigError(f"{key}: duplicated (second occurrence on line {lineno})")
            pairs[key] = value
        return cls(pairs, source)

    @classmethod
    def from_file(cls, path: str | Path) -> "Config":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"{path}: unreadable config file ({exc})") from exc
        return cls.from_text(text, source=str(path))

    def __contains__(self, key: str) -> bool:
        return key in self._pairs

    def raw(self) -> dict[str, str]:
        return dict(self._pairs)

    def _get(self, key: str) -> str:
        if key not in self._pairs:
            raise ConfigError(f"{key}: required")
        self._used.add(key)
        return self._pairs[key]

    def get_str(self, key: str, default: str | None = None) -> str:
        if key not in self._pairs:
            if default is None:
                raise ConfigError(f"{key}: required")
            return default
        return self._get(key)

    def get_float(self, key: str, default: float | None = None) -> float:
        if key not in self._pairs:
            if default is None:
                raise ConfigError(f"{key}: required")
            return default
        value = self._get(key)
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"{key}: not a number: {value!r}") from None

    def get_int(self, key: str, default: int | None = None) -> int:
        if key not in self._pairs:
            if default is None:
                raise ConfigError(f"{key}: required")
            return default
        value = self._get(key)
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"{key}: not an integer: {value!r}") from None

    def get_float_list(self, key: str) -> list[float]:
        value = self._get(key)
        try:
            return [float(part.strip()) for part in value.split(",") if part.strip()]
        except ValueError:
            raise ConfigError(f"{key}: not a comma list of numbers: {value!r}") from None

    def get_str_list(self, key: str) -> list[str]:
        value = self._get(key)
        return [part.strip() for part in value.split(",") if part.strip()]

    def check_unused(self) -> None:
        unused = sorted(set(self._pairs) - self._used)
        if unused:
            raise ConfigError(f"{unused[0]}: unrecognized key (unused: {', '.join(unused)})")


def load_deployment(cfg: Config) -> DeploymentConfig:
    try:
        return DeploymentConfig(
            lambda_parent=cfg.get_float("deployment.lambda_parent"),
            delta=cfg.get_float("deployment.delta"),
            region_radius=cfg.get_float("deployment.region_radius"),
            altitude=cfg.get_float("deployment.altitude"),
            lambda_tx=cfg.get_float("deployment.lambda_tx", 1e-3),
            lambda_rx=cfg.get_float("deployment.lambda_rx", 1e-3),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"deployment.*: {exc}") from exc


def load_carrier(cfg: Config) -> CarrierConfig:
    try:
        return CarrierConfig(
            f_c=cfg.get_float("carrier.f_c_hz"),
            c=cfg.get_float("carrier.c", 299792458.0),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"carrier.*: {exc}") from exc


def load_environments(cfg: Config) -> list[tuple[str, EnvironmentProfile]]:
    """Named presets via env.name (possibly a list) or one explicit profile
    via env.alpha / env.a / env.b / env.eta_los_db / env.eta_nlos_db."""
    if "env.name" in cfg:
        names = cfg.get_str_list("env.name")
        out = []
        for name in names:
            try:
                out.append((name, get_environment(name)))
            except KeyError as exc:
                raise ConfigError(f"env.name: {exc.args[0]}") from None
        return out
    try:
        profile = EnvironmentProfile(
            a=cfg.get_float("env.a"),
            b=cfg.get_float("env.b"),
            eta_los_db=cfg.get_float("env.eta_los_db"),
            eta_nlos_db=cfg.get_float("env.eta_nlos_db"),
            alpha=cfg.get_float("env.alpha"),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"env.*: {exc}") from exc
    return [("custom", profile)]


def load_powers(cfg: Config) -> list[tuple[float, PowerConfig]]:
    """One PowerConfig per configured threshold, as (rss_th_dbm, config)."""
    p_dd = dbm_to_watts(cfg.get_float("power.p_dd_dbm"))
    p_ul = dbm_to_watts(cfg.get_float("power.p_ul_dbm"))
    p_dl = dbm_to_watts(cfg.get_float("power.p_dl_dbm"))
    thresholds = cfg.get_float_list("power.rss_th_dbm")
    if not thresholds:
        raise ConfigError("power.rss_th_dbm: required")
    try:
        return [
            (dbm, PowerConfig(p_dd=p_dd, p_ul=p_ul, p_dl=p_dl, rss_threshold=dbm_to_watts(dbm)))
            for dbm in thresholds
        ]
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"power.*: {exc}") from exc


def load_schemes(cfg: Config) -> list[Scheme]:
    names = cfg.get_str_list("scheme.name")
    out = []
    for name in names:
        try:
            out.append(Scheme(name.upper()))
        except ValueError:
            raise ConfigError(
                f"scheme.name: unknown scheme {name!r} (expected TDDS or RSSS)"
            ) from None
    if not out:
        raise ConfigError("scheme.name: required")
    return out


def load_association_probability(cfg: Config) -> float:
    p = cfg.get_float("scheme.association_probability")
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"scheme.association_probability: must lie in [0, 1], got {p}")
    return p


def environment_names() -> list[str]:
    return sorted(ENVIRONMENTS)
