"""Run configuration: a flat ``key = value`` TOML file checked against SCHEMA.

Every key is optional except ``N``, ``L`` and ``beta``. Unknown keys are
rejected. :func:`dump_config` writes the canonical form (all keys, schema
order), so a canonical file round-trips byte for byte.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, fields, replace

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .ensemble import EnsembleSpec, Observable
from .errors import ConfigError
from .green import GreenModel, Variant
from .system import ChainSpec

_REQUIRED = object()


@dataclass(frozen=True)
class Key:
    name: str
    kind: str  # int | float | str | int_list | str_list
    default: object
    doc: str
    choices: tuple = ()


SCHEMA = (
    Key("N", "int", _REQUIRED, "number of emitters (>= 1)"),
    Key("L", "float", _REQUIRED, "lattice spacing [lambda]"),
    Key("l", "float", 0.0, "maximal displacement [lambda]"),
    Key("beta", "float", _REQUIRED, "waveguide coupling efficiency in [0,1]"),
    Key("gamma0", "float", 1.0, "radiative linewidth [gamma0 units]"),
    Key("gamma_deph", "float", 0.0, "dephasing rate [gamma0]"),
    Key("model", "str", "far-field", "Green function variant", tuple(v.value for v in Variant)),
    Key("seed", "int", 0, "64-bit seed (master seed for ensembles)"),
    Key("realizations", "int", 1, "ensemble size M"),
    Key("on_error", "str", "abort", "failed-realization policy", ("abort", "skip")),
    Key("observables", "str_list", ["transmission", "absorption", "spectrum", "participation", "localization"],
        "ensemble observables", tuple(o.value for o in Observable)),
    Key("delta_min", "float", -10.0, "detuning grid start [gamma0]"),
    Key("delta_max", "float", 10.0, "detuning grid end [gamma0]"),
    Key("delta_points", "int", 401, "detuning grid size"),
    Key("q_min", "float", 0.0, "drive wavenumber grid start [k]"),
    Key("q_max", "float", 3.0, "drive wavenumber grid end [k]"),
    Key("q_points", "int", 301, "drive wavenumber grid size"),
    Key("ensemble_q", "int", 0, "1 to also average dispersion maps in ensembles"),
    Key("sweep_N", "int_list", [], "emitter numbers for respond sweeps (empty: no sweep)"),
    Key("sweep_hold", "str", "Z", "quantity held fixed in sweeps: Z = N L or L", ("Z", "L")),
)
_BY_NAME = {k.name: k for k in SCHEMA}


@dataclass(frozen=True)
class RunConfig:
    N: int
    L: float
    beta: float
    l: float = 0.0
    gamma0: float = 1.0
    gamma_deph: float = 0.0
    model: str = "far-field"
    seed: int = 0
    realizations: int = 1
    on_error: str = "abort"
    observables: tuple = ("transmission", "absorption", "spectrum", "participation", "localization")
    delta_min: float = -10.0
    delta_max: float = 10.0
    delta_points: int = 401
    q_min: float = 0.0
    q_max: float = 3.0
    q_points: int = 301
    ensemble_q: int = 0
    sweep_N: tuple = ()
    sweep_hold: str = "Z"

    def chain_spec(self) -> ChainSpec:
        return ChainSpec(self.N, self.L, self.l, self.beta, self.gamma0, self.gamma_deph)

    def green_model(self) -> GreenModel:
        return GreenModel.from_spec(self.chain_spec(), Variant(self.model))

    def deltas(self) -> np.ndarray:
        return np.linspace(self.delta_min, self.delta_max, self.delta_points)

    def qs(self) -> np.ndarray:
        return np.linspace(self.q_min, self.q_max, self.q_points)

    def ensemble_spec(self) -> EnsembleSpec:
        return EnsembleSpec(self.chain_spec(), self.realizations, self.seed, frozenset(self.observables),
                            self.deltas(), self.qs() if self.ensemble_q else None, Variant(self.model),
                            self.on_error)

    def with_seed(self, seed: int) -> "RunConfig":
        return replace(self, seed=int(seed))

    def digest(self) -> str:
        return hashlib.sha256(dump_config(self).encode()).hexdigest()


def _line_of(text: str, key: str):
    pat = re.compile(rf"^\s*(?:{re.escape(key)}|\"{re.escape(key)}\")\s*=", re.M)
    m = pat.search(text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _coerce(key: Key, value, line):
    def bad(msg):
        return ConfigError(msg, key.name, line)

    if key.kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise bad(f"{key.name} must be an integer")
        return value
    if key.kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise bad(f"{key.name} must be a number")
        if not np.isfinite(value):
            raise bad(f"{key.name} must be finite")
        return float(value)
    if key.kind == "str":
        if not isinstance(value, str):
            raise bad(f"{key.name} must be a string")
        if key.choices and value not in key.choices:
            raise bad(f"{key.name} must be one of {', '.join(key.choices)}")
        return value
    if key.kind in ("int_list", "str_list"):
        want = int if key.kind == "int_list" else str
        if not isinstance(value, list) or any(isinstance(v, bool) or not isinstance(v, want) for v in value):
            raise bad(f"{key.name} must be a list of {want.__name__}s")
        if key.choices and any(v not in key.choices for v in value):
            raise bad(f"{key.name} entries must be among {', '.join(key.choices)}")
        return tuple(value)
    raise AssertionError(key.kind)


_CONSTRAINTS = (
    ("N", lambda c: c.N >= 1, "N must be >= 1"),
    ("L", lambda c: c.L > 0, "L must be positive"),
    ("l", lambda c: c.l >= 0, "l must be non-negative"),
    ("beta", lambda c: 0.0 <= c.beta <= 1.0, "beta must lie in [0,1]"),
    ("gamma0", lambda c: c.gamma0 > 0, "gamma0 must be positive"),
    ("gamma_deph", lambda c: c.gamma_deph >= 0, "gamma_deph must be non-negative"),
    ("seed", lambda c: 0 <= c.seed < 2**64, "seed must be an unsigned 64-bit integer"),
    ("realizations", lambda c: c.realizations >= 1, "realizations must be >= 1"),
    ("delta_points", lambda c: c.delta_points >= 1, "delta_points must be >= 1"),
    ("delta_max", lambda c: c.delta_max >= c.delta_min, "delta_max must be >= delta_min"),
    ("q_points", lambda c: c.q_points >= 1, "q_points must be >= 1"),
    ("q_max", lambda c: c.q_max >= c.q_min, "q_max must be >= q_min"),
    ("ensemble_q", lambda c: c.ensemble_q in (0, 1), "ensemble_q must be 0 or 1"),
    ("sweep_N", lambda c: all(n >= 1 for n in c.sweep_N), "sweep_N entries must be >= 1"),
)


def parse_config(text: str) -> RunConfig:
    """Parse and validate configuration text; raises ConfigError with key and line."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ConfigError(f"malformed configuration: {exc}", line=int(m.group(1)) if m else None) from exc
    values = {}
    for name, value in raw.items():
        line = _line_of(text, name)
        if name not in _BY_NAME:
            raise ConfigError("unknown key", name, line)
        values[name] = _coerce(_BY_NAME[name], value, line)
    for key in SCHEMA:
        if key.default is _REQUIRED and key.name not in values:
            raise ConfigError("required key missing", key.name)
    cfg = RunConfig(**values)
    for name, ok, msg in _CONSTRAINTS:
        if not ok(cfg):
            raise ConfigError(msg, name, _line_of(text, name))
    return cfg


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _fmt(value) -> str:
    if isinstance(value, bool):
        raise TypeError("booleans are not part of the schema")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    raise TypeError(type(value))


def dump_config(cfg: RunConfig) -> str:
    """Canonical text form: every schema key, one per line, schema order."""
    vals = {f.name: getattr(cfg, f.name) for f in fields(cfg)}
    return "".join(f"{key.name} = {_fmt(vals[key.name])}\n" for key in SCHEMA)
