"""Scenario files.

Grammar (INI style, ``#`` or ``;`` comments)::

    [scenario]
    duration = 8.0
    schedule = 0.5:deg(10), 2.5:deg(-10), 4.5:deg(5)

    [controller]
    reaching_law = st_exp

Sections: ``scenario``, ``controller``, ``propulsion``, ``geometry``,
``sensors``, ``actuator``, ``airframe``, ``atmosphere``, ``truth``. Every
key maps onto a field of the corresponding config object; omitted keys take
their defaults, unknown keys are rejected. Real numbers may be written as
``deg(x)``, which converts degrees to radians.
"""

from __future__ import annotations

import configparser
import dataclasses
import math
import re
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Iterable

from ..aero import PerturbationProfile, WingGeometry
from ..atmosphere import LAYER_BOUNDARY_M, SEA_LEVEL_TEMPERATURE_K
from ..plant import ActuatorConfig, AirframeConfig, SensorConfig
from ..propulsion import PropulsionConfig
from ..smc import ControllerConfig, ReachingLaw


class ScenarioError(ValueError):
    """Parse or validation failure in a scenario file."""


@dataclass(frozen=True)
class AtmosphereConfig:
    sea_level_temperature_k: float = SEA_LEVEL_TEMPERATURE_K
    layer_boundary_m: float = LAYER_BOUNDARY_M


@dataclass(frozen=True)
class TruthConfig:
    """Where the truth tables come from: ``source`` is ``default``, ``zero`` or a file path."""

    source: str = "default"
    seed: int = 0
    reference_station: float = 0.53
    cl_alpha_amplitude: float = 0.25
    cp_shift_amplitude: float = 0.10
    jitter: float = 0.02

    def profile(self) -> PerturbationProfile:
        if self.source == "zero":
            return PerturbationProfile.zero()
        return PerturbationProfile(self.cl_alpha_amplitude, self.cp_shift_amplitude, self.jitter)


DEFAULT_SCHEDULE = (
    (0.5, math.radians(10.0)),
    (2.5, math.radians(-10.0)),
    (4.5, math.radians(5.0)),
)


@dataclass(frozen=True)
class Scenario:
    command_schedule: tuple[tuple[float, float], ...] = DEFAULT_SCHEDULE
    duration: float = 8.0
    launch_altitude: float = 1000.0
    launch_speed: float = 250.0
    dt: float = 1e-4
    seed: int = 0
    noise_enabled: bool = False
    output_decimation: int = 10
    controller_every: int = 1
    controller: ControllerConfig = field(default_factory=ControllerConfig)
    propulsion: PropulsionConfig = field(default_factory=PropulsionConfig)
    geometry: WingGeometry = field(default_factory=WingGeometry)
    sensors: SensorConfig = field(default_factory=SensorConfig)
    actuator: ActuatorConfig = field(default_factory=ActuatorConfig)
    airframe: AirframeConfig = field(default_factory=AirframeConfig)
    atmosphere: AtmosphereConfig = field(default_factory=AtmosphereConfig)
    truth: TruthConfig = field(default_factory=TruthConfig)

    def __post_init__(self) -> None:
        sched = tuple((float(t), float(a)) for t, a in self.command_schedule)
        object.__setattr__(self, "command_schedule", sched)
        if not self.duration > 0.0:
            raise ScenarioError("scenario.duration must be positive")
        if not self.dt > 0.0:
            raise ScenarioError("scenario.dt must be positive")
        if self.output_decimation < 1:
            raise ScenarioError("scenario.output_decimation must be at least 1")
        if self.controller_every < 1:
            raise ScenarioError("scenario.controller_every must be at least 1")
        if not self.launch_speed > 0.0:
            raise ScenarioError("scenario.launch_speed must be positive")
        if not 0.0 <= self.launch_altitude <= 25_000.0:
            raise ScenarioError("scenario.launch_altitude must lie in [0, 25000] m")
        for i, (t, _) in enumerate(sched):
            if not 0.0 <= t <= self.duration:
                raise ScenarioError(
                    f"scenario.schedule: edge {i} at t={t} lies outside [0, {self.duration}]"
                )
            if i and t <= sched[i - 1][0]:
                raise ScenarioError(
                    f"scenario.schedule: times must increase strictly, but edge {i - 1} "
                    f"(t={sched[i - 1][0]}) is followed by edge {i} (t={t})"
                )

    def with_law(self, law: ReachingLaw | str) -> Scenario:
        return replace(self, controller=self.controller.with_law(law))

    def alpha_cmd_at(self, t: float) -> float:
        value = 0.0
        for te, a in self.command_schedule:
            if te <= t:
                value = a
            else:
                break
        return value


_SECTIONS: dict[str, type] = {
    "controller": ControllerConfig,
    "propulsion": PropulsionConfig,
    "geometry": WingGeometry,
    "sensors": SensorConfig,
    "actuator": ActuatorConfig,
    "airframe": AirframeConfig,
    "atmosphere": AtmosphereConfig,
    "truth": TruthConfig,
}

_SCENARIO_KEYS = {
    "schedule": "command_schedule",
    "duration": "duration",
    "launch_altitude": "launch_altitude",
    "launch_speed": "launch_speed",
    "dt": "dt",
    "seed": "seed",
    "noise_enabled": "noise_enabled",
    "output_decimation": "output_decimation",
    "controller_every": "controller_every",
}

_DEG = re.compile(r"^deg\(\s*([^()]+?)\s*\)$")
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _parse_real(text: str, where: str) -> float:
    text = text.strip()
    m = _DEG.match(text)
    try:
        if m:
            return math.radians(float(m.group(1)))
        return float(text)
    except ValueError:
        raise ScenarioError(f"{where}: {text!r} is not a number") from None


def _parse_value(text: str, kind: Any, where: str) -> Any:
    text = text.strip()
    if kind in ("float", float, "Optional[float]"):
        if kind == "Optional[float]" and text.lower() in ("", "none", "default"):
            return None
        return _parse_real(text, where)
    if kind in ("int", int):
        try:
            return int(text)
        except ValueError:
            raise ScenarioError(f"{where}: {text!r} is not an integer") from None
    if kind in ("bool", bool):
        low = text.lower()
        if low in _TRUE:
            return True
        if low in _FALSE:
            return False
        raise ScenarioError(f"{where}: {text!r} is not a boolean")
    if kind in ("ReachingLaw", ReachingLaw):
        try:
            return ReachingLaw(text.lower())
        except ValueError:
            names = " | ".join(law.value for law in ReachingLaw)
            raise ScenarioError(f"{where}: unknown reaching law {text!r} (expected {names})") from None
    return text


def parse_schedule(text: str, where: str = "scenario.schedule") -> tuple[tuple[float, float], ...]:
    text = text.strip()
    if not text:
        return ()
    edges = []
    for i, item in enumerate(text.split(",")):
        if ":" not in item:
            raise ScenarioError(f"{where}: entry {i} {item.strip()!r} is not of the form t:alpha")
        t_txt, a_txt = item.split(":", 1)
        edges.append((_parse_real(t_txt, f"{where}[{i}].time"),
                      _parse_real(a_txt, f"{where}[{i}].alpha")))
    return tuple(edges)


def _field_kinds(cls: type) -> dict[str, Any]:
    return {f.name: f.type for f in fields(cls) if f.init}


def parse_sections(text: str) -> dict[str, dict[str, str]]:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"),
                                       strict=True, empty_lines_in_values=False)
    parser.optionxform = str  # keep keys case-sensitive
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError as exc:
        raise ScenarioError(f"line {exc.lineno}: key outside of any [section]") from None
    except configparser.ParsingError as exc:
        lines = ", ".join(str(ln) for ln, _ in exc.errors)
        raise ScenarioError(f"line {lines}: malformed entry (expected 'key = value')") from None
    except (configparser.DuplicateSectionError, configparser.DuplicateOptionError) as exc:
        raise ScenarioError(f"line {exc.lineno}: {exc.message}") from None
    raw: dict[str, dict[str, str]] = {}
    for name in parser.sections():
        if name != "scenario" and name not in _SECTIONS:
            raise ScenarioError(f"unknown section [{name}]")
        raw[name] = dict(parser.items(name))
    return raw


def apply_overrides(raw: dict[str, dict[str, str]], overrides: Iterable[str]) -> dict[str, dict[str, str]]:
    """Apply ``section.key=value`` strings on top of parsed (not yet validated) sections."""
    out = {k: dict(v) for k, v in raw.items()}
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ScenarioError(f"override {item!r} is not of the form section.key=value")
        path, value = item.split("=", 1)
        section, key = path.strip().split(".", 1)
        out.setdefault(section, {})[key.strip()] = value.strip()
    return out


def build_scenario(raw: dict[str, dict[str, str]]) -> Scenario:
    kwargs: dict[str, Any] = {}
    scen_kinds = _field_kinds(Scenario)
    for key, value in raw.get("scenario", {}).items():
        if key not in _SCENARIO_KEYS:
            raise ScenarioError(f"unknown key scenario.{key}")
        name = _SCENARIO_KEYS[key]
        if name == "command_schedule":
            kwargs[name] = parse_schedule(value)
        else:
            kwargs[name] = _parse_value(value, scen_kinds[name], f"scenario.{key}")
    for section, cls in _SECTIONS.items():
        if section not in raw:
            continue
        kinds = _field_kinds(cls)
        sub: dict[str, Any] = {}
        for key, value in raw[section].items():
            if key not in kinds:
                raise ScenarioError(f"unknown key {section}.{key}")
            sub[key] = _parse_value(value, kinds[key], f"{section}.{key}")
        try:
            kwargs[section] = cls(**sub)
        except ScenarioError:
            raise
        except ValueError as exc:
            raise ScenarioError(str(exc)) from None
    for section in raw:
        if section != "scenario" and section not in _SECTIONS:
            raise ScenarioError(f"unknown section [{section}]")
    try:
        return Scenario(**kwargs)
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None


def load_scenario(text: str, overrides: Iterable[str] = ()) -> Scenario:
    return build_scenario(apply_overrides(parse_sections(text), overrides))


def load_scenario_file(path: str | Path, overrides: Iterable[str] = ()) -> Scenario:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {p}: {exc.strerror}") from None
    scenario = load_scenario(text, overrides)
    src = scenario.truth.source
    if src not in ("default", "zero") and not Path(src).is_absolute():
        scenario = replace(scenario, truth=replace(scenario.truth, source=str(p.parent / src)))
    return scenario


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, ReachingLaw):
        return value.value
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dump_scenario(scenario: Scenario) -> str:
    """Serialise every field; ``load_scenario(dump_scenario(s)) == s``."""
    lines = ["[scenario]"]
    sched = ", ".join(f"{t!r}:{a!r}" for t, a in scenario.command_schedule)
    lines.append(f"schedule = {sched}")
    for key, name in _SCENARIO_KEYS.items():
        if name == "command_schedule":
            continue
        lines.append(f"{key} = {_format(getattr(scenario, name))}")
    for section in _SECTIONS:
        obj = getattr(scenario, section)
        lines.append("")
        lines.append(f"[{section}]")
        for f in dataclasses.fields(obj):
            if f.init:
                lines.append(f"{f.name} = {_format(getattr(obj, f.name))}")
    return "\n".join(lines) + "\n"
