"""Versioned JSON experiment configuration with line-precise validation errors."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from .gevrey import GevreyParams
from .lattice import TruncatedLattice

SCHEMA_VERSION = 1

DEFAULT_NUS = (10**-1.5, 1e-2, 10**-2.5, 1e-3, 10**-3.5)

# key -> (accepted types, required)
_TOP = {
    "schema_version": ((int,), True),
    "initial": ((dict,), True),
    "s": ((int, float), True),
    "r": ((int, float), True),
    "tau0": ((int, float), True),
    "dim": ((int,), True),
    "N": ((int,), True),
    "dt": ((int, float), False),
    "T": ((int, float), True),
    "nus": ((list,), False),
    "schedule": ((dict,), False),
    "output_dir": ((str,), False),
    "checkpoint_stride": ((int,), False),
    "M": ((int,), False),
    "assert": ((list,), False),
}
_INITIAL = {
    "generator": ((str,), False),
    "exact": ((str,), False),
    "seed": ((int,), False),
    "decay": ((list,), False),
    "amplitude": ((int, float), False),
}
_SCHEDULE = {
    "source": ((str,), True),
    "C": ((int, float), False),
    "C1": ((int, float), False),
    "C2": ((int, float), False),
}


class ConfigError(ValueError):
    """Schema violation, reported as ``source:line: message``."""


@dataclass(frozen=True)
class ExperimentConfig:
    s: float
    r: float
    tau0: float
    dim: int
    N: int
    T: float
    dt: float = 1e-3
    nus: tuple = DEFAULT_NUS
    initial: dict = field(default_factory=lambda: {"generator": "random_gevrey", "seed": 0})
    schedule: dict = field(default_factory=lambda: {"source": "pilot", "C": 1.0})
    output_dir: str | None = None
    checkpoint_stride: int = 0
    M: int | None = None
    asserts: tuple | None = None

    def __post_init__(self):
        nus = tuple(float(x) for x in self.nus)
        object.__setattr__(self, "nus", nus)
        if len(nus) < 2:
            raise ConfigError("nus: need at least two viscosities")
        if any(b >= a for a, b in zip(nus, nus[1:])):
            raise ConfigError("nus: list must be strictly decreasing")
        if any(x <= 0 for x in nus):
            raise ConfigError("nus: viscosities must be positive (the Euler run is implicit)")
        if self.dim == 3 and self.r <= 4.5:
            raise ConfigError(f"r: 3D runs need r > 9/2, got {self.r}")
        GevreyParams(self.s, self.r, self.tau0)
        if self.tau0 <= 0:
            raise ConfigError("tau0: must be positive")
        TruncatedLattice(self.dim, self.N)
        src = self.schedule.get("source")
        if src not in ("pilot", "configured", "frozen"):
            raise ConfigError(f"schedule.source: expected pilot|configured|frozen, got {src!r}")
        if src == "configured" and not ("C1" in self.schedule and "C2" in self.schedule):
            raise ConfigError("schedule: configured source needs C1 and C2")

    @property
    def seed(self):
        return self.initial.get("seed")

    @property
    def lattice(self) -> TruncatedLattice:
        return TruncatedLattice(self.dim, self.N)

    @property
    def params(self) -> GevreyParams:
        return GevreyParams(self.s, self.r, self.tau0)

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return replace(self, initial={**self.initial, "seed": int(seed)})

    def to_dict(self) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "initial": dict(self.initial),
            "s": self.s, "r": self.r, "tau0": self.tau0,
            "dim": self.dim, "N": self.N, "dt": self.dt, "T": self.T,
            "nus": list(self.nus),
            "schedule": dict(self.schedule),
            "checkpoint_stride": self.checkpoint_stride,
        }
        if self.output_dir is not None:
            d["output_dir"] = self.output_dir
        if self.M is not None:
            d["M"] = self.M
        if self.asserts is not None:
            d["assert"] = list(self.asserts)
        return d

    @classmethod
    def from_dict(cls, d: dict, text: str | None = None, source: str = "<config>"):
        _check_keys(d, _TOP, "", text, source)
        if d["schema_version"] != SCHEMA_VERSION:
            raise ConfigError(_where(text, source, "schema_version")
                              + f"unsupported schema_version {d['schema_version']}")
        _check_keys(d["initial"], _INITIAL, "initial.", text, source)
        if ("exact" in d["initial"]) == ("generator" in d["initial"]):
            raise ConfigError(_where(text, source, "initial")
                              + "initial: give exactly one of 'generator' or 'exact'")
        if "schedule" in d:
            _check_keys(d["schedule"], _SCHEDULE, "schedule.", text, source)
        kw = {k: d[k] for k in ("s", "r", "tau0", "dim", "N", "T")}
        for k in ("dt", "output_dir", "checkpoint_stride", "M"):
            if k in d:
                kw[k] = d[k]
        if "nus" in d:
            kw["nus"] = tuple(d["nus"])
        if "assert" in d:
            kw["asserts"] = tuple(d["assert"])
        kw["initial"] = dict(d["initial"])
        if "schedule" in d:
            kw["schedule"] = dict(d["schedule"])
        try:
            return cls(**kw)
        except ConfigError as exc:
            key = str(exc).split(":", 1)[0].split(".")[-1]
            raise ConfigError(_where(text, source, key) + str(exc)) from None
        except ValueError as exc:
            raise ConfigError(f"{source}: {exc}") from None


def _line_of(text: str | None, key: str) -> int | None:
    if not text:
        return None
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _where(text, source, key) -> str:
    line = _line_of(text, key)
    return f"{source}:{line}: " if line else f"{source}: "


def _check_keys(d: dict, schema: dict, prefix: str, text, source) -> None:
    for key in d:
        if key not in schema:
            raise ConfigError(_where(text, source, key) + f"unknown key '{prefix}{key}'")
    for key, (types, required) in schema.items():
        if key not in d:
            if required:
                raise ConfigError(f"{source}: missing required key '{prefix}{key}'")
            continue
        v = d[key]
        if isinstance(v, bool) or not isinstance(v, types):
            names = "|".join(t.__name__ for t in types)
            raise ConfigError(_where(text, source, key)
                              + f"'{prefix}{key}' must be {names}, got {type(v).__name__}")


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"{path}: config file not found")
    text = path.read_text()
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})") from None
    if not isinstance(d, dict):
        raise ConfigError(f"{path}:1: top level must be a JSON object")
    return ExperimentConfig.from_dict(d, text, str(path))
