"""Run configuration: dataclass sections read from and echoed to TOML."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import tomli

from .errors import UsageError
from .profiles import make_profile
from .singularity import FitConfig


@dataclass
class U0Config:
    kind: str = "gaussian"
    amplitude: float = -1.2
    center: float = 0.0
    width: float = 1.0
    # used by kind = "table"
    x: list = field(default_factory=list)
    u: list = field(default_factory=list)

    def profile(self):
        if self.kind == "gaussian":
            return make_profile("gaussian", amplitude=self.amplitude,
                                center=self.center, width=self.width)
        if self.kind == "peakon":
            return make_profile("peakon", amplitude=self.amplitude, center=self.center)
        if self.kind == "zero":
            return make_profile("zero")
        if self.kind == "table":
            return make_profile("table", x=self.x, u=self.u)
        raise UsageError(f"unknown u0 kind {self.kind!r}")


@dataclass
class GridConfig:
    L: float = 20.0
    N: int = 4096


@dataclass
class TimeConfig:
    dt: float = 1e-3
    t_end: float = 2.2
    snapshot_every: int = 50


@dataclass
class AnalysisConfig:
    theta1: object = "auto"
    theta2: float = 1e-3
    r_min_factor: float = 5.0
    local_cells: int = 3
    levels: int = 4
    ratio: float = 4.0
    span: float = 32.0

    def fit_config(self) -> FitConfig:
        theta1 = None if self.theta1 == "auto" else float(self.theta1)
        return FitConfig(r_min_factor=self.r_min_factor, local_cells=self.local_cells,
                         levels=self.levels, ratio=self.ratio, span=self.span,
                         theta1=theta1, theta2=self.theta2)


@dataclass
class CompareConfig:
    slope_cap: float = 50.0
    jac_floor: float = 1e-3


@dataclass
class RunConfig:
    u0: U0Config = field(default_factory=U0Config)
    grid: GridConfig = field(default_factory=GridConfig)
    time: TimeConfig = field(default_factory=TimeConfig)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    compare: CompareConfig = field(default_factory=CompareConfig)

    def validate(self) -> "RunConfig":
        if self.grid.N < 16:
            raise UsageError("grid.N must be >= 16")
        if not self.grid.L > 0:
            raise UsageError("grid.L must be positive")
        if not self.time.dt > 0 or not self.time.t_end > 0:
            raise UsageError("time.dt and time.t_end must be positive")
        if self.time.snapshot_every < 1:
            raise UsageError("time.snapshot_every must be >= 1")
        if self.analysis.theta1 != "auto":
            try:
                if not float(self.analysis.theta1) > 0:
                    raise ValueError
            except (TypeError, ValueError):
                raise UsageError("analysis.theta1 must be 'auto' or positive") from None
        self.u0.profile()
        return self

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        sections = {f.name: f.type for f in dataclasses.fields(cls)}
        kwargs = {}
        for name, values in data.items():
            if name not in sections:
                raise UsageError(f"unknown config section [{name}]")
            if not isinstance(values, dict):
                raise UsageError(f"[{name}] must be a table")
            sec_cls = _SECTION_TYPES[name]
            known = {f.name: f for f in dataclasses.fields(sec_cls)}
            for key in values:
                if key not in known:
                    raise UsageError(f"unknown key {name}.{key}")
            kwargs[name] = sec_cls(**{k: _cast(known[k], v) for k, v in values.items()})
        return cls(**kwargs).validate()

    @classmethod
    def load(cls, path) -> "RunConfig":
        with open(path, "rb") as fh:
            try:
                data = tomli.load(fh)
            except tomli.TOMLDecodeError as exc:
                raise UsageError(f"cannot parse {path}: {exc}") from None
        return cls.from_dict(data)

    def set(self, dotted: str, raw: str) -> None:
        """Apply a ``section.key=value`` override; the value is read as a
        TOML literal, falling back to a bare string."""
        section, _, key = dotted.partition(".")
        sec = getattr(self, section, None) if key else None
        fields = ({f.name: f for f in dataclasses.fields(sec)}
                  if dataclasses.is_dataclass(sec) else {})
        if key not in fields:
            raise UsageError(f"unknown config key {dotted!r}")
        try:
            value = tomli.loads(f"v = {raw}")["v"]
        except tomli.TOMLDecodeError:
            value = raw
        setattr(sec, key, _cast(fields[key], value))

    def to_toml(self) -> str:
        lines = []
        for sec in dataclasses.fields(self):
            lines.append(f"[{sec.name}]")
            obj = getattr(self, sec.name)
            for f in dataclasses.fields(obj):
                lines.append(f"{f.name} = {_toml_value(getattr(obj, f.name))}")
            lines.append("")
        return "\n".join(lines)

    def write(self, path) -> None:
        Path(path).write_text(self.to_toml())


_SECTION_TYPES = {
    "u0": U0Config, "grid": GridConfig, "time": TimeConfig,
    "analysis": AnalysisConfig, "compare": CompareConfig,
}


def _cast(f, value):
    if f.type in ("int", int):
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        if not isinstance(value, int) or isinstance(value, bool):
            raise UsageError(f"{f.name} must be an integer")
        return value
    if f.type in ("float", float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise UsageError(f"{f.name} must be a number")
        return float(value)
    if f.type in ("list", list):
        if not isinstance(value, list):
            raise UsageError(f"{f.name} must be a list")
        return [float(v) for v in value]
    return value


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, list):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise UsageError(f"cannot serialise {v!r}")
