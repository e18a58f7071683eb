"""Run configuration: parsing, validation and initial-profile assembly.

Two input encodings are accepted and produce identical RunConfig objects:

* an INI-style plain-text file (sections, ``key = value`` entries; values
  are Python literals, so lists like ``modes = [[1, 0.0, 1.0]]`` work),
  with the init variant selected by the section name ``[init.fourier]``,
  ``[init.peakon]``, ``[init.multipeakon]`` or ``[init.samples]``;
* a JSON file with the same section structure nested one level deep,
  e.g. ``{"init": {"fourier": {...}}}``.

Exactly one init variant must be present, and any referenced sample file
must exist at parse time.
"""

from __future__ import annotations

import ast
import configparser
import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Optional

import numpy as np

from .evolution import SolverConfig
from .field import PeriodicField, PeriodicGrid
from .peakon import PeakonConfig, multipeakon_field, one_peakon, shockpeakon_field

INIT_VARIANTS = ("fourier", "peakon", "multipeakon", "samples")
SWEEP_AXES = ("lambda", "mean", "amplitude", "n")


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


@dataclass(frozen=True)
class FourierInit:
    mean: float = 0.0
    modes: tuple = ()  # entries (k, cos_amp, sin_amp)


@dataclass(frozen=True)
class PeakonInit:
    c: float = 1.0


@dataclass(frozen=True)
class MultipeakonInit:
    p: tuple = ()
    q: tuple = ()
    s: Optional[tuple] = None


@dataclass(frozen=True)
class SamplesInit:
    path: str = ""


@dataclass
class SweepSpec:
    axes: dict  # axis name -> list of values, in SWEEP_AXES order
    simulate: bool = True


@dataclass
class RunConfig:
    lam: float = 2.0
    n: int = 256
    init: object = dc_field(default_factory=FourierInit)
    solver: SolverConfig = dc_field(default_factory=SolverConfig)
    w_gate: float = -50.0
    out_dir: str = "out"
    prefix: str = "run"
    sweep: Optional[SweepSpec] = None


def _literal(text: str):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def _load_sections(path: Path) -> dict:
    """Read either encoding into {section: {key: value}} with dotted
    init sections normalized to {"init": {"variant": {...}}}."""
    text = path.read_text()
    if path.suffix == ".json" or text.lstrip().startswith("{"):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON config: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("JSON config must be an object of sections")
        return raw
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"invalid config file: {exc}") from exc
    out: dict = {}
    for section in parser.sections():
        entries = {k: _literal(v) for k, v in parser.items(section)}
        if section.startswith("init."):
            out.setdefault("init", {})[section.split(".", 1)[1]] = entries
        else:
            out[section] = entries
    return out


def _build_init(init_section: dict, base_dir: Path):
    if not isinstance(init_section, dict):
        raise ConfigError("init section must map a variant name to its fields")
    present = [v for v in INIT_VARIANTS if v in init_section]
    unknown = [v for v in init_section if v not in INIT_VARIANTS]
    if unknown:
        raise ConfigError(f"unknown init variant(s): {unknown}")
    if len(present) != 1:
        raise ConfigError(
            f"exactly one init variant required, found {present or 'none'}"
        )
    name = present[0]
    body = init_section[name]
    if name == "fourier":
        modes = tuple(
            (int(k), float(ca), float(sa)) for k, ca, sa in body.get("modes", [])
        )
        return FourierInit(mean=float(body.get("mean", 0.0)), modes=modes)
    if name == "peakon":
        return PeakonInit(c=float(body.get("c", 1.0)))
    if name == "multipeakon":
        s = body.get("s")
        return MultipeakonInit(
            p=tuple(body.get("p", ())),
            q=tuple(body.get("q", ())),
            s=tuple(s) if s is not None else None,
        )
    path = base_dir / str(body.get("path", ""))
    if not path.is_file():
        raise ConfigError(f"samples file does not exist: {path}")
    return SamplesInit(path=str(path))


def _build_sweep(section: dict) -> SweepSpec:
    axes = {}
    for axis in SWEEP_AXES:
        if axis in section:
            vals = section[axis]
            if not isinstance(vals, (list, tuple)) or not vals:
                raise ConfigError(f"sweep axis {axis!r} must be a nonempty list")
            axes[axis] = list(vals)
    if not axes:
        raise ConfigError(f"sweep section needs at least one axis of {SWEEP_AXES}")
    simulate = bool(section.get("simulate", True))
    return SweepSpec(axes=axes, simulate=simulate)


def parse_config(path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file does not exist: {path}")
    sections = _load_sections(path)
    cfg = RunConfig()
    model = sections.get("model", {})
    cfg.lam = float(model.get("lambda", cfg.lam))
    grid = sections.get("grid", {})
    try:
        cfg.n = int(grid.get("n", cfg.n))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"grid.n must be an integer: {exc}") from exc
    if "init" not in sections:
        raise ConfigError("missing init section")
    cfg.init = _build_init(sections["init"], path.parent)
    time_sec = sections.get("time", {})
    blowup_sec = sections.get("blowup", {})
    defaults = SolverConfig()
    try:
        cfg.solver = SolverConfig(
            dt0=float(time_sec.get("dt0", defaults.dt0)),
            rel_tol=float(time_sec.get("rel_tol", defaults.rel_tol)),
            abs_tol=float(time_sec.get("abs_tol", defaults.abs_tol)),
            slope_stop=float(blowup_sec.get("slope_stop", defaults.slope_stop)),
            dt_min=float(time_sec.get("dt_min", defaults.dt_min)),
            t_max=float(time_sec.get("t_max", defaults.t_max)),
            record_every=int(time_sec.get("record_every", defaults.record_every)),
            cfl=float(time_sec.get("cfl", defaults.cfl)),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid solver settings: {exc}") from exc
    cfg.w_gate = float(blowup_sec.get("w_gate", cfg.w_gate))
    if cfg.w_gate >= 0:
        raise ConfigError("blowup.w_gate must be negative")
    outputs = sections.get("outputs", {})
    cfg.out_dir = str(outputs.get("dir", cfg.out_dir))
    cfg.prefix = str(outputs.get("prefix", cfg.prefix))
    if "sweep" in sections:
        cfg.sweep = _build_sweep(sections["sweep"])
    return cfg


def build_initial(cfg: RunConfig) -> PeriodicField:
    """Assemble the initial profile on the configured grid."""
    init = cfg.init
    if isinstance(init, SamplesInit):
        try:
            values = np.loadtxt(init.path, delimiter=",", ndmin=1)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read samples CSV: {exc}") from exc
        values = np.atleast_1d(values.squeeze())
        if values.ndim != 1:
            raise ConfigError("samples CSV must hold a single column of reals")
        try:
            grid = PeriodicGrid(values.size)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return PeriodicField(grid, values)
    try:
        grid = PeriodicGrid(cfg.n)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if isinstance(init, FourierInit):
        x = grid.x
        vals = np.full(grid.n, init.mean)
        for k, ca, sa in init.modes:
            vals += ca * np.cos(2 * np.pi * k * x) + sa * np.sin(2 * np.pi * k * x)
        return PeriodicField(grid, vals)
    if isinstance(init, PeakonInit):
        return one_peakon(init.c, grid)
    if isinstance(init, MultipeakonInit):
        try:
            pk = PeakonConfig(p=init.p, q=init.q, s=init.s)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if init.s is None:
            return multipeakon_field(pk, grid)
        return shockpeakon_field(pk, grid)
    raise ConfigError(f"unsupported init variant: {init!r}")
