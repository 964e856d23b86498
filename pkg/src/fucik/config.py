"""Run configuration: an INI document with one section per module.

Precedence, lowest first: built-in defaults, the config file, command-line
flags.  Unknown sections or keys are rejected.  :func:`dumps` writes a
canonical form, so ``dumps(loads(dumps(c))) == dumps(c)``.
"""

from __future__ import annotations

import configparser
import hashlib
from dataclasses import dataclass, field, fields, replace
from typing import Optional

from .core import FucikParams
from .errors import FucikError

COMMANDS = ("eig", "point", "trace", "certify", "oracle", "validate")
SOLVER_KEYS = {
    "point_tol": float,
    "stationarity_tol": float,
    "stage_tol": float,
    "max_iter": int,
    "eps0": float,
    "eps_decay": float,
    "eps_min": float,
    "warm_eps_factor": float,
    "keep_seeds": int,
    "seed_fraction": float,
    "polish": bool,
}

DEFAULT_N = {"interval": 799, "square": 199, "rectangle": 199, "disk": 201, "ball": 41, "cube": 41}
DEFAULT_SIZE = {k: 3.141592653589793 for k in DEFAULT_N}
DEFAULT_SIZE["disk"] = 2.404825557695773


class ConfigError(FucikError):
    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


@dataclass
class RunConfig:
    command: str = "trace"
    kind: str = "interval"
    size: list = field(default_factory=list)  # empty: resolved per kind
    n: list = field(default_factory=list)
    beta: Optional[float] = None
    beta_min: Optional[float] = None
    beta_max: Optional[float] = None
    points: int = 20
    beta_grid: list = field(default_factory=list)
    y: list = field(default_factory=list)
    k: int = 2
    seeds: str = "warm"  # warm: warm-started sweep; cold: multi-seed every point
    parallel: bool = False
    out_dir: str = "fucik-out"
    figures: bool = True
    solver: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}", "run.command")
        if self.seeds not in ("warm", "cold"):
            raise ConfigError("seeds must be 'warm' or 'cold'", "run.seeds")
        for key in self.solver:
            if key not in SOLVER_KEYS:
                raise ConfigError(f"unknown solver key {key!r}", f"solver.{key}")

    def resolved(self) -> "RunConfig":
        """Fill the per-kind defaults for ``size`` and ``n``."""
        kind = self.kind.lower()
        if kind not in DEFAULT_N:
            raise ConfigError(f"unknown domain kind {self.kind!r}", "grid.kind")
        return replace(self, kind=kind,
                       size=list(self.size) or [DEFAULT_SIZE[kind]],
                       n=list(self.n) or [DEFAULT_N[kind]])

    def params(self, beta: float = 1.0) -> FucikParams:
        return FucikParams(beta=beta, **self.solver)

    def digest(self) -> str:
        return hashlib.sha256(dumps(self).encode("utf-8")).hexdigest()[:16]

    def merged(self, **overrides) -> "RunConfig":
        """Copy with every non-None override applied."""
        solver = dict(self.solver)
        solver.update(overrides.pop("solver", None) or {})
        clean = {k: v for k, v in overrides.items() if v is not None}
        unknown = set(clean) - {f.name for f in fields(self)}
        if unknown:
            raise ConfigError(f"unknown option(s) {sorted(unknown)}")
        return replace(self, solver=solver, **clean)


# section -> key -> attribute
_LAYOUT = {
    "run": ["command", "seeds", "parallel"],
    "grid": ["kind", "size", "n"],
    "fucik_core": ["beta"],
    "tracer": ["beta_min", "beta_max", "points"],
    "oracle1d": ["beta_grid"],
    "asymptotics": ["y", "k"],
    "output": ["out_dir", "figures"],
}
_LISTS = {"size": float, "n": int, "beta_grid": float, "y": float}
_SCALARS = {"beta": float, "beta_min": float, "beta_max": float, "points": int, "k": int,
            "parallel": bool, "figures": bool}


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return ", ".join(_fmt(x) for x in v)
    return str(v)


def _parse_bool(text: str, loc: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "yes", "1", "on"):
        return True
    if t in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}", loc)


def _convert(kind, text: str, loc: str):
    try:
        if kind is bool:
            return _parse_bool(text, loc)
        return kind(text.strip())
    except ValueError as exc:
        raise ConfigError(f"cannot parse {text!r} as {kind.__name__}", loc) from exc


def dumps(cfg: RunConfig) -> str:
    lines = []
    for section, keys in _LAYOUT.items():
        body = []
        for key in keys:
            v = getattr(cfg, key)
            if v is None or (isinstance(v, list) and not v):
                continue
            body.append(f"{key} = {_fmt(v)}")
        if body:
            lines.append(f"[{section}]")
            lines.extend(body)
            lines.append("")
    if cfg.solver:
        lines.append("[solver]")
        for key in sorted(cfg.solver):
            lines.append(f"{key} = {_fmt(cfg.solver[key])}")
        lines.append("")
    return "\n".join(lines)


def loads(text: str, base: Optional[RunConfig] = None) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=",))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        lineno = getattr(exc, "lineno", None)
        raise ConfigError(str(exc).splitlines()[0], f"line {lineno}" if lineno else "") from exc
    values: dict = {}
    solver: dict = {}
    for section in cp.sections():
        if section == "solver":
            for key, raw in cp.items(section):
                loc = f"solver.{key}"
                if key not in SOLVER_KEYS:
                    raise ConfigError(f"unknown key {key!r}", loc)
                solver[key] = _convert(SOLVER_KEYS[key], raw, loc)
            continue
        if section not in _LAYOUT:
            raise ConfigError(f"unknown section [{section}]", section)
        for key, raw in cp.items(section):
            loc = f"{section}.{key}"
            if key not in _LAYOUT[section]:
                raise ConfigError(f"unknown key {key!r}", loc)
            if key in _LISTS:
                parts = [s for s in raw.replace(",", " ").split() if s]
                values[key] = [_convert(_LISTS[key], s, loc) for s in parts]
            elif key in _SCALARS:
                values[key] = _convert(_SCALARS[key], raw, loc)
            else:
                values[key] = raw.strip()
    cfg = base or RunConfig()
    try:
        return cfg.merged(solver=solver, **values)
    except ConfigError:
        raise
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return loads(text)
    except ConfigError as exc:
        raise ConfigError(str(exc), str(path)) from exc
