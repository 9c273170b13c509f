"""Run configuration: a TOML file with explicit unit suffixes.

Every physical quantity in a config file carries its unit (e.g.
``noise = "-100 dBm/Hz"``, ``bs_density = "10 /km^2"``); values are
converted to SI base units at load time so the numerical modules never
see a unit ambiguity.  Bare numbers are accepted only for dimensionless
fields.
"""

from __future__ import annotations

import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .latency import GammaParams, LatencyDist, PipelineConfig
from .specfun import DEFAULT_POLICY, EvalPolicy
from .uplink import NetworkConfig

__all__ = [
    "ConfigError",
    "RunConfig",
    "parse_quantity",
    "load_config",
    "default_config_path",
]


class ConfigError(ValueError):
    """Raised for unreadable, ill-typed, or ill-united configuration."""


# Multiplicative conversions to SI base units, keyed by normalized suffix.
# dB-scaled units are handled separately in parse_quantity.
_UNIT_SCALE = {
    "": 1.0,
    "w": 1.0,
    "mw": 1e-3,
    "w/hz": 1.0,
    "hz": 1.0,
    "khz": 1e3,
    "mhz": 1e6,
    "ghz": 1e9,
    "b": 1.0,
    "kb": 1e3,
    "mb": 1e6,
    "gb": 1e9,
    "s": 1.0,
    "ms": 1e-3,
    "/s": 1.0,
    "/m^2": 1.0,
    "/m2": 1.0,
    "/km^2": 1e-6,
    "/km2": 1e-6,
}

_QUANTITY_RE = re.compile(r"^\s*([+-]?\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)\s*(.*?)\s*$")


def parse_quantity(value: float | int | str, where: str = "value") -> float:
    """Convert a config scalar to SI units.

    Accepts bare numbers (taken as already SI) or strings of the form
    "<number> <unit>".  dBm and dBm/Hz are converted from the log scale.
    """
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a number or quantity string, got a bool")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"{where}: expected a number or quantity string, "
                          f"got {type(value).__name__}")
    match = _QUANTITY_RE.match(value)
    if not match:
        raise ConfigError(f"{where}: cannot parse quantity {value!r}")
    number = float(match.group(1))
    unit = match.group(2)
    key = unit.lower()
    if key in ("dbm", "dbm/hz"):
        return 10.0 ** ((number - 30.0) / 10.0)
    if key == "dbw":
        return 10.0 ** (number / 10.0)
    if key in _UNIT_SCALE:
        return number * _UNIT_SCALE[key]
    raise ConfigError(f"{where}: unknown unit {unit!r} in {value!r}")


@dataclass(frozen=True)
class RunConfig:
    """Everything a command-line run needs, already in SI units."""

    network: NetworkConfig
    pipeline: PipelineConfig | None = None
    fits: dict[float, GammaParams] | None = None
    seeds: tuple[int, ...] = (12345,)
    output_format: str = "csv"
    policy: EvalPolicy = DEFAULT_POLICY
    source: str = "<builtin>"

    def require_fits(self) -> dict[float, GammaParams]:
        if not self.fits:
            raise ConfigError(f"{self.source}: no [fits] table in the configuration")
        return self.fits

    def require_pipeline(self) -> PipelineConfig:
        if self.pipeline is None:
            raise ConfigError(f"{self.source}: no [pipeline] table in the configuration")
        return self.pipeline


def default_config_path() -> Path:
    """Path of the packaged default configuration file."""
    return Path(__file__).parent / "data" / "default.toml"


def _network_from_table(table: dict, where: str) -> NetworkConfig:
    quantities = {
        "tx_power": "tx_power",
        "noise": "noise_psd",
        "bandwidth": "bandwidth",
        "packet_size": "packet_size",
        "bs_density": "bs_density",
        "source_density": "source_density",
        "gen_rate": "gen_rate",
    }
    kwargs = {}
    for key, value in table.items():
        if key in quantities:
            kwargs[quantities[key]] = parse_quantity(value, f"{where}.{key}")
        elif key in ("pathloss_exponent", "target_stp"):
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ConfigError(f"{where}.{key}: expected a bare number")
            kwargs[key] = float(value)
        else:
            raise ConfigError(f"{where}.{key}: unknown field")
    try:
        return NetworkConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _dist_from_table(table: dict, where: str) -> LatencyDist:
    if not isinstance(table, dict) or "kind" not in table:
        raise ConfigError(f"{where}: expected a table with a 'kind' field")
    kind = table["kind"]
    try:
        if kind == "constant":
            return LatencyDist.constant(parse_quantity(table["value"], f"{where}.value"))
        if kind == "exponential":
            return LatencyDist.exponential(parse_quantity(table["mean"], f"{where}.mean"))
        if kind == "gamma":
            return LatencyDist.gamma(float(table["shape"]), float(table["rate"]))
    except KeyError as exc:
        raise ConfigError(f"{where}: missing field {exc.args[0]!r} for kind {kind!r}")
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    raise ConfigError(f"{where}.kind: unknown distribution kind {kind!r}")


def _pipeline_from_table(table: dict, where: str) -> PipelineConfig:
    kwargs = {}
    for key, value in table.items():
        if key in ("endorse", "validate"):
            kwargs[f"{key}_latency"] = _dist_from_table(value, f"{where}.{key}")
        elif key in ("order_overhead", "block_timeout"):
            kwargs[key] = parse_quantity(value, f"{where}.{key}")
        elif key == "tx_rate":
            kwargs[key] = parse_quantity(value, f"{where}.{key}")
        elif key in ("block_size", "key_count"):
            if not isinstance(value, int) or isinstance(value, bool):
                raise ConfigError(f"{where}.{key}: expected an integer")
            kwargs[key] = value
        elif key == "target_key_fraction":
            kwargs[key] = float(value)
        else:
            raise ConfigError(f"{where}.{key}: unknown field")
    try:
        return PipelineConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _fits_from_table(table: dict, where: str) -> dict[float, GammaParams]:
    fits = {}
    for key, value in table.items():
        try:
            zeta = float(key)
        except ValueError:
            raise ConfigError(f"{where}.{key}: key must be a target STP number")
        if not (0.0 < zeta <= 1.0):
            raise ConfigError(f"{where}.{key}: target STP must lie in (0, 1]")
        if (not isinstance(value, list) or len(value) != 2
                or not all(isinstance(x, (int, float)) for x in value)):
            raise ConfigError(f"{where}.{key}: expected [shape, rate]")
        try:
            fits[zeta] = GammaParams(float(value[0]), float(value[1]))
        except ValueError as exc:
            raise ConfigError(f"{where}.{key}: {exc}") from exc
    return fits


def load_config(path: str | Path | None = None) -> RunConfig:
    """Load and validate a run configuration.

    With no path, the packaged defaults are used.  All unit conversion
    happens here; every error names the offending config key.
    """
    cfg_path = default_config_path() if path is None else Path(path)
    try:
        raw = cfg_path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"{cfg_path}: cannot read config: {exc}") from exc
    try:
        doc = tomllib.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"{cfg_path}: invalid TOML: {exc}") from exc

    known = {"network", "pipeline", "fits", "run", "eval"}
    for key in doc:
        if key not in known:
            raise ConfigError(f"{cfg_path}: unknown top-level table [{key}]")
    if "network" not in doc:
        raise ConfigError(f"{cfg_path}: missing required [network] table")

    network = _network_from_table(doc["network"], f"{cfg_path}:network")
    pipeline = (_pipeline_from_table(doc["pipeline"], f"{cfg_path}:pipeline")
                if "pipeline" in doc else None)
    fits = _fits_from_table(doc["fits"], f"{cfg_path}:fits") if "fits" in doc else None

    run = doc.get("run", {})
    seeds = run.get("seeds", [12345])
    if (not isinstance(seeds, list) or not seeds
            or not all(isinstance(s, int) and not isinstance(s, bool) for s in seeds)):
        raise ConfigError(f"{cfg_path}:run.seeds: expected a nonempty list of integers")
    output_format = run.get("format", "csv")
    if output_format not in ("csv", "json"):
        raise ConfigError(f"{cfg_path}:run.format: expected 'csv' or 'json', "
                          f"got {output_format!r}")

    ev = doc.get("eval", {})
    try:
        policy = EvalPolicy(
            rel_tol=float(ev.get("rel_tol", DEFAULT_POLICY.rel_tol)),
            max_terms=int(ev.get("max_terms", DEFAULT_POLICY.max_terms)),
        )
    except ValueError as exc:
        raise ConfigError(f"{cfg_path}:eval: {exc}") from exc

    for zeta, params in (fits or {}).items():
        if not (math.isfinite(params.shape) and math.isfinite(params.rate)):
            raise ConfigError(f"{cfg_path}:fits.{zeta}: parameters must be finite")

    return RunConfig(network=network, pipeline=pipeline, fits=fits,
                     seeds=tuple(seeds), output_format=output_format,
                     policy=policy, source=str(cfg_path))
