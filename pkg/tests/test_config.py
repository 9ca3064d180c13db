import math

import pytest

from aerial_d2d.config import (
    Config,
    ConfigError,
    dbm_to_watts,
    load_carrier,
    load_deployment,
    load_environments,
    load_powers,
    load_schemes,
    watts_to_dbm,
)
from aerial_d2d.modeselect import Scheme

GOOD = """
# comment line
deployment.lambda_parent = 2e-5
deployment.delta = 100   # inline comment
deployment.region_radius = 500
deployment.altitude = 100
carrier.f_c_hz = 2.5e9
env.name = high_rise_urban
power.p_dd_dbm = 23
power.p_ul_dbm = 0
power.p_dl_dbm = 0
power.rss_th_dbm = -90, -100
scheme.name = TDDS, RSSS
scheme.association_probability = 0.5
"""


class TestParser:
    def test_parses_values_and_comments(self):
        cfg = Config.from_text(GOOD)
        assert cfg.get_float("deployment.lambda_parent") == 2e-5
        assert cfg.get_float("deployment.delta") == 100.0

    def test_missing_key_message_names_the_key(self):
        cfg = Config.from_text("deployment.delta = 100")
        with pytest.raises(ConfigError, match=r"deployment\.lambda_parent: required"):
            load_deployment(cfg)

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigError, match="duplicated"):
            Config.from_text("a.b = 1\na.b = 2")

    def test_malformed_line_rejected(self):
        with pytest.raises(ConfigError, match="expected 'key = value'"):
            Config.from_text("just some words")

    def test_bad_number_names_key(self):
        cfg = Config.from_text("deployment.lambda_parent = banana")
        with pytest.raises(ConfigError, match=r"deployment\.lambda_parent: not a number"):
            cfg.get_float("deployment.lambda_parent")

    def test_unused_key_reported(self):
        cfg = Config.from_text("deployment.lamda_parent = 1e-5")  # typo
        with pytest.raises(ConfigError, match="unrecognized"):
            cfg.check_unused()

    def test_float_list(self):
        cfg = Config.from_text("power.rss_th_dbm = -90, -100, -110")
        assert cfg.get_float_list("power.rss_th_dbm") == [-90.0, -100.0, -110.0]

    def test_defaults(self):
        cfg = Config.from_text("")
        assert cfg.get_int("mc.workers", 1) == 1
        assert cfg.get_float("carrier.c", 299792458.0) == 299792458.0


class TestUnitConversion:
    def test_dbm_to_watts_reference_points(self):
        assert dbm_to_watts(0.0) == pytest.approx(1e-3, rel=1e-12)
        assert dbm_to_watts(30.0) == pytest.approx(1.0, rel=1e-12)
        assert dbm_to_watts(-90.0) == pytest.approx(1e-12, rel=1e-12)

    def test_round_trip(self):
        for dbm in (-120.0, -90.0, 0.0, 23.0, 46.0):
            assert watts_to_dbm(dbm_to_watts(dbm)) == pytest.approx(dbm, abs=1e-10)

    def test_watts_to_dbm_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            watts_to_dbm(0.0)


class TestLoaders:
    def test_full_good_config(self):
        cfg = Config.from_text(GOOD)
        dep = load_deployment(cfg)
        assert dep.lambda_retained == pytest.approx(1.48495e-5, rel=1e-4)
        carrier = load_carrier(cfg)
        assert carrier.f_c == 2.5e9
        envs = load_environments(cfg)
        assert envs[0][0] == "high_rise_urban"
        powers = load_powers(cfg)
        assert len(powers) == 2
        assert powers[0][0] == -90.0
        assert powers[0][1].p_dd == pytest.approx(dbm_to_watts(23.0))
        schemes = load_schemes(cfg)
        assert schemes == [Scheme.TDDS, Scheme.RSSS]

    def test_explicit_environment(self):
        cfg = Config.from_text(
            "env.alpha = 3.0\nenv.a = 10\nenv.b = 0.2\n"
            "env.eta_los_db = 1\nenv.eta_nlos_db = 20\n"
        )
        (name, env), = load_environments(cfg)
        assert name == "custom"
        assert env.alpha == 3.0

    def test_unknown_environment_named(self):
        cfg = Config.from_text("env.name = underwater")
        with pytest.raises(ConfigError, match="env.name"):
            load_environments(cfg)

    def test_unknown_scheme_named(self):
        cfg = Config.from_text("scheme.name = FANCY")
        with pytest.raises(ConfigError, match="scheme.name"):
            load_schemes(cfg)

    def test_invalid_deployment_value_wrapped(self):
        cfg = Config.from_text(
            "deployment.lambda_parent = -1\ndeployment.delta = 0\n"
            "deployment.region_radius = 500\ndeployment.altitude = 100\n"
        )
        with pytest.raises(ConfigError, match="deployment"):
            load_deployment(cfg)
