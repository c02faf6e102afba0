"""Run-configuration parsing, path resolution, and overrides."""
from pathlib import Path

import pytest

from multisweep import ConfigError, load_config, parse_config

MINIMAL = "map = floor.txt\nlog = passes.csv\nhorizon_s = 1\nhorizon_t = 2\n"


def test_minimal_config_defaults():
    cfg = parse_config(MINIMAL, base_dir="/base")
    assert cfg.map_path == str(Path("/base/floor.txt"))
    assert cfg.log_path == str(Path("/base/passes.csv"))
    assert cfg.robots == 1
    assert cfg.horizon == (1.0, 2.0)
    assert cfg.output_dir == str(Path("/base/out"))
    assert cfg.render == ()
    assert cfg.epoch == 0.0
    assert cfg.branch_cap == 10_000
    assert cfg.max_expansions == 1_000_000
    assert cfg.fixed_scale is False
    assert cfg.sim.travel_speed == 1.0
    assert cfg.sim.rng_seed == 0


def test_full_config_parses():
    text = MINIMAL + (
        "robots = 3\nseed = 9\nout = results\nrender = dirtmap, routes\n"
        "epoch = 0.5\ntravel_speed = 2\nmove_power = 0.01\nclean_power = 0.04\n"
        "overhead_per_robot = 0\nbranch_cap = 32\nmax_expansions = 500\nfixed_scale = yes\n"
    )
    cfg = parse_config(text, base_dir=".")
    assert cfg.robots == 3
    assert cfg.sim.rng_seed == 9
    assert cfg.render == ("dirtmap", "routes")
    assert cfg.epoch == 0.5
    assert cfg.sim.travel_speed == 2.0
    assert cfg.sim.overhead_per_robot == 0.0
    assert cfg.branch_cap == 32
    assert cfg.max_expansions == 500
    assert cfg.fixed_scale is True


def test_comments_and_blanks_ignored():
    cfg = parse_config("# hall A\n\n" + MINIMAL)
    assert cfg.robots == 1


def test_absolute_paths_not_rebased():
    cfg = parse_config(MINIMAL + "out = /tmp/fixed\n", base_dir="/base")
    assert cfg.output_dir == str(Path("/tmp/fixed"))


@pytest.mark.parametrize(
    "line, hint",
    [
        ("color = blue\n", "unknown key"),
        ("robots = 3\nrobots = 4\n", "duplicate"),
        ("robots = none\n", "cannot parse"),
        ("robots = 0\n", "at least 1"),
        ("branch_cap = 0\n", "at least 1"),
        ("max_expansions = 0\n", "at least 1"),
        ("render = dirtmap, sparkle\n", "unknown render flag"),
        ("fixed_scale = maybe\n", "cannot parse"),
        ("travel_speed = -1\n", "positive"),
    ],
)
def test_invalid_values_rejected(line, hint):
    with pytest.raises(ConfigError, match=hint):
        parse_config(MINIMAL + line)


def test_missing_required_keys():
    with pytest.raises(ConfigError, match="missing required key"):
        parse_config("map = floor.txt\nlog = passes.csv\nhorizon_s = 1\n")
    with pytest.raises(ConfigError, match="missing required key"):
        parse_config("")


def test_backwards_horizon_rejected():
    with pytest.raises(ConfigError, match="after end"):
        parse_config("map = m\nlog = l\nhorizon_s = 5\nhorizon_t = 1\n")


def test_not_key_value_rejected():
    with pytest.raises(ConfigError, match="line 1"):
        parse_config("robots: 3\n" + MINIMAL)


def test_empty_path_rejected():
    with pytest.raises(ConfigError, match="non-empty"):
        parse_config("map =\nlog = l\nhorizon_s = 1\nhorizon_t = 2\n")


def test_overrides_replace_and_skip_none():
    cfg = parse_config(
        MINIMAL + "robots = 2\n",
        base_dir="/base",
        overrides={"robots": 5, "seed": None, "out": "elsewhere"},
    )
    assert cfg.robots == 5
    assert cfg.sim.rng_seed == 0
    # override paths resolve against the caller, not the config file
    assert cfg.output_dir == "elsewhere"


def test_override_unknown_key_rejected():
    with pytest.raises(ConfigError, match="unknown override"):
        parse_config(MINIMAL, overrides={"sparkle": 1})


def test_override_fixed_scale_bool():
    cfg = parse_config(MINIMAL, overrides={"fixed_scale": True})
    assert cfg.fixed_scale is True


def test_load_config_resolves_against_file_directory(tmp_path):
    sub = tmp_path / "scenarios"
    sub.mkdir()
    (sub / "run.cfg").write_text(MINIMAL)
    cfg = load_config(sub / "run.cfg")
    assert cfg.map_path == str(sub / "floor.txt")
    assert cfg.output_dir == str(sub / "out")


def test_load_config_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_config(tmp_path / "absent.cfg")
