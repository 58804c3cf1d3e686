"""Run and sweep configuration: ``[section]`` / ``key = value`` files and figure presets.

Schema (all keys optional; defaults in brackets)::

    [chain]
    n_sites = 60
    epsilon = 0
    coupling = power_law          # power_law | nearest_neighbor | custom | focusing
    strength = 1                  # V (peak bond for ``focusing``)
    exponent = 3                  # power_law only
    bonds_file = bonds.txt        # custom only; one V_{n,n+1} per line
    center_bond = 0.36            # focusing only
    boundary = open               # open | periodic
    dephasing_rate = 0

    [initial]
    theta = pi/2                  # numeric expressions with ``pi`` are accepted
    a = 0.5
    rho_l = 0.5
    rho_r = 0.5
    left_site = 30                # 1-based, [N // 2]

    [propagation]
    t_max = 12
    dt = 0.005
    output_stride = 10

    [outputs]
    trajectory_csv = trajectory.csv
    summary_csv = summary.csv

    [sweep]
    parameter = theta             # theta | gamma
    values = 0, 0.1, 0.2          # explicit list, or:
    start = -pi/2
    stop = pi/2
    count = 19
"""

from __future__ import annotations

import ast
import configparser
import math
import operator
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .couplings import Boundary, NearestNeighbor, PowerLaw, focusing_profile, load_profile
from .dynamics import PropagationConfig
from .model import ChainSpec, InitialCondition, wrap_phase


class ConfigError(ValueError):
    pass


SECTIONS = {
    "chain": {"n_sites", "epsilon", "coupling", "strength", "exponent", "bonds_file",
              "center_bond", "boundary", "dephasing_rate"},
    "initial": {"theta", "a", "rho_l", "rho_r", "left_site"},
    "propagation": {"t_max", "dt", "output_stride"},
    "outputs": {"trajectory_csv", "summary_csv"},
    "sweep": {"parameter", "values", "start", "stop", "count"},
}

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}
_NAMES = {"pi": math.pi}


def parse_number(text: str) -> float:
    """Evaluate a numeric literal or arithmetic expression such as ``-pi/4``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            return _UNOPS[type(node.op)](ev(node.operand))
        raise ValueError(f"unsupported expression: {text!r}")

    try:
        return ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ZeroDivisionError) as exc:
        raise ValueError(f"bad number {text!r}: {exc}") from None


@dataclass(frozen=True)
class RunConfig:
    chain: ChainSpec
    initial: InitialCondition = InitialCondition()
    propagation: PropagationConfig = PropagationConfig()
    trajectory_csv: str = "trajectory.csv"
    summary_csv: str = "summary.csv"


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple[float, ...]
    base: RunConfig
    summary_csv: str = "sweep.csv"

    def __post_init__(self):
        if self.parameter not in ("theta", "gamma"):
            raise ConfigError(f"sweep parameter must be 'theta' or 'gamma', got {self.parameter!r}")
        if not self.values:
            raise ConfigError("sweep needs at least one value")
        if self.parameter == "theta":
            object.__setattr__(self, "values", tuple(wrap_phase(v) for v in self.values))
        elif any(v < 0 for v in self.values):
            raise ConfigError("dephasing rates must be >= 0")

    def point(self, value: float) -> RunConfig:
        base = self.base
        if self.parameter == "theta":
            return replace(base, initial=replace(base.initial, theta=value))
        return replace(base, chain=replace(base.chain, dephasing_rate=value))


def linear_grid(start: float, stop: float, count: int) -> tuple[float, ...]:
    if count < 1:
        raise ConfigError(f"grid count must be >= 1, got {count}")
    if count == 1:
        return (float(start),)
    return tuple(np.linspace(start, stop, count).tolist())


# Values are strings so presets go through the same parser as files.
PRESETS: dict[str, dict[str, dict[str, str]]] = {
    "fig1a": {"chain": {"n_sites": "60", "coupling": "power_law"},
              "initial": {"theta": "pi/2"},
              "propagation": {"t_max": "12"}},
    "fig1c": {"chain": {"n_sites": "60", "coupling": "power_law"},
              "initial": {"theta": "0"},
              "propagation": {"t_max": "12"}},
    "fig1f": {"chain": {"n_sites": "60", "coupling": "power_law", "dephasing_rate": "0.3"},
              "initial": {"theta": "pi/2"},
              "propagation": {"t_max": "12"}},
    "fig2": {"chain": {"n_sites": "60", "coupling": "nearest_neighbor"},
             "initial": {"theta": "pi/2"},
             "propagation": {"t_max": "12", "output_stride": "100"},
             "sweep": {"parameter": "theta", "start": "-pi/2", "stop": "pi/2", "count": "19"}},
    "fig2-inset": {"chain": {"n_sites": "60", "coupling": "nearest_neighbor"},
                   "initial": {"theta": "pi/2"},
                   "propagation": {"t_max": "12"},
                   "sweep": {"parameter": "gamma", "values": "0, 0.1, 0.2, 0.3, 0.5"}},
    "fig3": {"chain": {"n_sites": "60", "coupling": "focusing"},
             "initial": {"theta": "-pi/2"},
             "propagation": {"t_max": "40", "output_stride": "20"}},
}


def _section(raw: configparser.ConfigParser, name: str) -> dict[str, str]:
    return dict(raw[name]) if raw.has_section(name) else {}


def _get(sec: dict, key: str, default, where: str, conv=parse_number):
    if key not in sec:
        return default
    try:
        return conv(sec[key])
    except ValueError as exc:
        raise ConfigError(f"{where}.{key}: {exc}") from None


def _as_int(text: str) -> int:
    value = parse_number(text)
    if value != int(value):
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


def _build_chain(sec: dict, base_dir: Path) -> ChainSpec:
    n_sites = _get(sec, "n_sites", 60, "chain", _as_int)
    kind = sec.get("coupling", "power_law").strip().lower()
    strength = _get(sec, "strength", 1.0, "chain")
    if kind == "power_law":
        coupling = PowerLaw(strength, _get(sec, "exponent", 3.0, "chain"))
    elif kind == "nearest_neighbor":
        coupling = NearestNeighbor(strength)
    elif kind == "custom":
        if "bonds_file" not in sec:
            raise ConfigError("chain.bonds_file is required for custom coupling")
        path = base_dir / sec["bonds_file"].strip()
        try:
            coupling = load_profile(path)
        except OSError as exc:
            raise ConfigError(f"chain.bonds_file: {exc}") from None
    elif kind == "focusing":
        coupling = focusing_profile(n_sites, strength, _get(sec, "center_bond", None, "chain"))
    else:
        raise ConfigError(f"chain.coupling: unknown model {kind!r}")
    return ChainSpec(
        n_sites=n_sites,
        epsilon=_get(sec, "epsilon", 0.0, "chain"),
        coupling=coupling,
        boundary=Boundary(sec.get("boundary", "open").strip().lower()),
        dephasing_rate=_get(sec, "dephasing_rate", 0.0, "chain"),
    )


def parse_sections(raw: configparser.ConfigParser, base_dir: Path = Path(".")) -> tuple[RunConfig, SweepSpec | None]:
    for name in raw.sections():
        if name not in SECTIONS:
            raise ConfigError(f"unknown section [{name}]")
        unknown = set(raw[name]) - SECTIONS[name]
        if unknown:
            raise ConfigError(f"[{name}]: unknown keys {sorted(unknown)}")

    init_sec = _section(raw, "initial")
    prop_sec = _section(raw, "propagation")
    out_sec = _section(raw, "outputs")
    try:
        chain = _build_chain(_section(raw, "chain"), base_dir)
        initial = InitialCondition(
            theta=_get(init_sec, "theta", 0.0, "initial"),
            a=_get(init_sec, "a", 0.5, "initial"),
            rho_l=_get(init_sec, "rho_l", 0.5, "initial"),
            rho_r=_get(init_sec, "rho_r", 0.5, "initial"),
            left_site=_get(init_sec, "left_site", None, "initial", _as_int),
        )
        initial.resolve_left_site(chain.n_sites)
        propagation = PropagationConfig(
            t_max=_get(prop_sec, "t_max", 12.0, "propagation"),
            dt=_get(prop_sec, "dt", 0.005, "propagation"),
            output_stride=_get(prop_sec, "output_stride", 10, "propagation", _as_int),
        )
    except ConfigError:
        raise
    except (ValueError, IndexError) as exc:
        raise ConfigError(str(exc)) from None

    run = RunConfig(
        chain=chain,
        initial=initial,
        propagation=propagation,
        trajectory_csv=out_sec.get("trajectory_csv", "trajectory.csv").strip(),
        summary_csv=out_sec.get("summary_csv", "summary.csv").strip(),
    )

    sweep = None
    if raw.has_section("sweep"):
        sec = _section(raw, "sweep")
        parameter = sec.get("parameter", "theta").strip().lower()
        if "values" in sec:
            try:
                values = tuple(parse_number(v) for v in sec["values"].split(",") if v.strip())
            except ValueError as exc:
                raise ConfigError(f"sweep.values: {exc}") from None
        elif {"start", "stop", "count"} <= set(sec):
            values = linear_grid(
                _get(sec, "start", None, "sweep"),
                _get(sec, "stop", None, "sweep"),
                _get(sec, "count", None, "sweep", _as_int),
            )
        else:
            raise ConfigError("[sweep] needs either 'values' or 'start', 'stop' and 'count'")
        sweep = SweepSpec(parameter, values, run, summary_csv="sweep.csv")
    return run, sweep


def load(
    path: str | Path | None = None,
    preset: str | None = None,
    overrides: list[str] | tuple[str, ...] = (),
) -> tuple[RunConfig, SweepSpec | None]:
    """Merge a preset, a config file and ``section.key=value`` overrides, in that order."""
    raw = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    base_dir = Path(".")
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        raw.read_dict(PRESETS[preset])
    if path is not None:
        path = Path(path)
        try:
            with open(path) as fh:
                raw.read_file(fh, source=str(path))
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        except configparser.Error as exc:
            raise ConfigError(str(exc)) from None
        base_dir = path.parent
    for item in overrides:
        key, sep, value = item.partition("=")
        section, dot, option = key.strip().partition(".")
        if not sep or not dot:
            raise ConfigError(f"override must look like section.key=value, got {item!r}")
        if not raw.has_section(section):
            raw.add_section(section)
        raw.set(section, option, value.strip())
    return parse_sections(raw, base_dir)
