"""Run configuration: defaults < config file < LINNIKPAIR_* environment < flags."""
from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from pathlib import Path

ENV_PREFIX = "LINNIKPAIR_"
FORMATS = ("json", "table", "csv")

SEED_SCALE = {"prime_limit": 10**6, "frakj_exact_N": 10**4}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = 128
    prime_limit: int = 10**6
    workers: int = 1
    output: str | None = None
    format: str = "table"
    frakj_exact_N: int = 10**4
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ConfigError(f"precision_bits must be >= 64, got {self.precision_bits}")
        if self.prime_limit < 10**3:
            raise ConfigError(f"prime_limit must be >= 1000, got {self.prime_limit}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")


_KEYS = {f.name for f in fields(RunConfig)}


def _coerce(key: str, raw: str):
    if key in ("precision_bits", "prime_limit", "workers", "frakj_exact_N"):
        try:
            return int(float(raw)) if "e" in raw.lower() else int(raw)
        except ValueError as exc:
            raise ConfigError(f"{key}: expected an integer, got {raw!r}") from exc
    if key == "tolerances":
        return parse_tolerances(raw)
    if key == "output":
        return raw or None
    return raw


def parse_tolerances(raw) -> dict[str, Fraction]:
    """``name=value,name=value`` (or an iterable of ``name=value``)."""
    items = raw.split(",") if isinstance(raw, str) else list(raw)
    out = {}
    for item in items:
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ConfigError(f"tolerance override {item!r} is not name=value")
        name, val = item.split("=", 1)
        try:
            out[name.strip()] = Fraction(val.strip())
        except ValueError as exc:
            raise ConfigError(f"bad tolerance value in {item!r}") from exc
    return out


def read_config_file(path) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment. Unknown keys are errors."""
    out = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, val = (x.strip() for x in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _coerce(key, val)
    return out


def read_env(environ=None) -> dict:
    environ = os.environ if environ is None else environ
    out = {}
    for name, val in environ.items():
        if not name.startswith(ENV_PREFIX):
            continue
        key = name[len(ENV_PREFIX):].lower()
        if key == "frakj_exact_n":
            key = "frakj_exact_N"
        if key not in _KEYS:
            continue  # other LINNIKPAIR_ variables (e.g. the backend switch) are not config
        out[key] = _coerce(key, val)
    return out


def resolve(config_file=None, environ=None, flags: dict | None = None, seed_scale: bool = False) -> RunConfig:
    layers: dict = {}
    if config_file:
        layers.update(read_config_file(config_file))
    layers.update(read_env(environ))
    for k, v in (flags or {}).items():
        if v is None:
            continue
        if k not in _KEYS:
            raise ConfigError(f"unknown setting {k!r}")
        layers[k] = v
    if seed_scale:
        layers.update(SEED_SCALE)
    cfg = RunConfig()
    try:
        return replace(cfg, **layers)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
