"""Plain-text key=value run configuration.

Blank lines and '#' comments are ignored; unknown and duplicate keys are
rejected. Paths are resolved relative to the config file's directory; values
supplied as CLI overrides are taken as written (relative to the working
directory).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, DomainError
from .sim import SimParams

RENDER_FLAGS = ("dirtmap", "partition", "routes", "timemap")

_KEYS = frozenset(
    {
        "map",
        "log",
        "robots",
        "horizon_s",
        "horizon_t",
        "epoch",
        "seed",
        "out",
        "render",
        "travel_speed",
        "move_power",
        "clean_power",
        "overhead_per_robot",
        "branch_cap",
        "max_expansions",
        "fixed_scale",
    }
)


@dataclass(frozen=True)
class RunConfig:
    map_path: str
    log_path: str
    robots: int
    horizon: tuple[float, float]
    sim: SimParams
    output_dir: str
    render: tuple[str, ...] = ()
    epoch: float = 0.0
    branch_cap: int = 10_000
    max_expansions: int = 1_000_000
    fixed_scale: bool = False


def _get(kv: dict, key: str, default, convert):
    if key not in kv:
        return default
    try:
        return convert(kv[key])
    except ValueError:
        raise ConfigError(f"key {key}: cannot parse {kv[key]!r}") from None


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(low)


def parse_config(text: str, base_dir: str | Path = ".", overrides: dict | None = None) -> RunConfig:
    """Build a RunConfig from key=value text. overrides maps config keys to
    replacement values (strings or natives) applied after parsing the file."""
    kv: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in kv:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        kv[key] = val

    base = Path(base_dir)

    def _path(key: str, raw: str, rebase: bool) -> str:
        if not raw:
            raise ConfigError(f"key {key}: path must be non-empty")
        p = Path(raw)
        if rebase and not p.is_absolute():
            p = base / p
        return str(p)

    rebased = {k: True for k in ("map", "log", "out")}
    if overrides:
        for key, val in overrides.items():
            if val is None:
                continue
            if key not in _KEYS:
                raise ConfigError(f"unknown override key {key!r}")
            kv[key] = str(val)
            rebased[key] = False  # override paths are relative to the caller

    for required in ("map", "log", "horizon_s", "horizon_t"):
        if required not in kv:
            raise ConfigError(f"missing required key {required!r}")

    robots = _get(kv, "robots", 1, int)
    if robots < 1:
        raise ConfigError(f"robots must be at least 1, got {robots}")
    s = _get(kv, "horizon_s", None, float)
    t = _get(kv, "horizon_t", None, float)
    if s > t:
        raise ConfigError(f"horizon start {s} after end {t}")
    branch_cap = _get(kv, "branch_cap", 10_000, int)
    if branch_cap < 1:
        raise ConfigError(f"branch_cap must be at least 1, got {branch_cap}")
    max_expansions = _get(kv, "max_expansions", 1_000_000, int)
    if max_expansions < 1:
        raise ConfigError(f"max_expansions must be at least 1, got {max_expansions}")

    render_raw = kv.get("render", "")
    render = tuple(flag.strip() for flag in render_raw.split(",") if flag.strip())
    for flag in render:
        if flag not in RENDER_FLAGS:
            raise ConfigError(f"unknown render flag {flag!r} (choose from {', '.join(RENDER_FLAGS)})")

    try:
        sim = SimParams(
            travel_speed=_get(kv, "travel_speed", 1.0, float),
            move_power=_get(kv, "move_power", 0.02, float),
            clean_power=_get(kv, "clean_power", 0.05, float),
            overhead_per_robot=_get(kv, "overhead_per_robot", 1.0, float),
            rng_seed=_get(kv, "seed", 0, int),
        )
    except DomainError as e:
        raise ConfigError(str(e)) from None

    return RunConfig(
        map_path=_path("map", kv["map"], rebased.get("map", True)),
        log_path=_path("log", kv["log"], rebased.get("log", True)),
        robots=robots,
        horizon=(s, t),
        sim=sim,
        output_dir=_path("out", kv.get("out", "out"), rebased.get("out", True)),
        render=render,
        epoch=_get(kv, "epoch", 0.0, float),
        branch_cap=branch_cap,
        max_expansions=max_expansions,
        fixed_scale=_get(kv, "fixed_scale", False, _parse_bool),
    )


def load_config(path: str | Path, overrides: dict | None = None) -> RunConfig:
    """Read and parse a config file; relative paths inside it resolve against
    its own directory."""
    p = Path(path)
    text = p.read_text()
    return parse_config(text, p.parent, overrides)
