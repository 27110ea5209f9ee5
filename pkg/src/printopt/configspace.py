"""Print-configuration space: parameters, encoding, sampling, serialization.

Twelve slicer parameters plus a discrete build orientation. The encoded
form is a vector in [0, 1]^30 (scaled floats and integers, one-hot
categoricals) consumed by the surrogate; ``decode`` is the only way
vectors become configurations, so every evaluated configuration is a
decode image and quantization is consistent everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np
from scipy.stats import qmc

from .errors import ConfigDocumentError
from .mesh.core import ORIENTATION_ANGLES, Orientation


@dataclass(frozen=True)
class FloatSpec:
    name: str
    lo: float
    hi: float


@dataclass(frozen=True)
class IntSpec:
    name: str
    lo: int
    hi: int


@dataclass(frozen=True)
class CatSpec:
    name: str
    choices: tuple


SPECS: tuple = (
    FloatSpec("layer_height", 0.05, 0.30),
    FloatSpec("first_layer_height", 0.10, 0.35),
    IntSpec("perimeters", 1, 6),
    IntSpec("top_solid_layers", 0, 8),
    IntSpec("bottom_solid_layers", 0, 8),
    FloatSpec("infill_density", 0.0, 1.0),
    CatSpec("infill_pattern", ("rectilinear", "grid", "gyroid", "honeycomb")),
    CatSpec("support_material", ("off", "on")),
    FloatSpec("brim_width", 0.0, 10.0),
    FloatSpec("max_volumetric_speed", 2.0, 20.0),
    FloatSpec("elephant_foot_compensation", 0.0, 0.5),
    CatSpec("seam_placement", ("aligned", "nearest", "random")),
    CatSpec("orientation_x", ORIENTATION_ANGLES),
    CatSpec("orientation_y", ORIENTATION_ANGLES),
    CatSpec("orientation_z", ORIENTATION_ANGLES),
)

SAMPLE_DIM = len(SPECS)  # one Sobol coordinate per parameter


def _build_slices() -> dict[str, slice]:
    slices = {}
    at = 0
    for spec in SPECS:
        width = len(spec.choices) if isinstance(spec, CatSpec) else 1
        slices[spec.name] = slice(at, at + width)
        at += width
    return slices


ENCODED_SLICES = _build_slices()
ENCODED_DIM = ENCODED_SLICES[SPECS[-1].name].stop

PARAM_NAMES = tuple(s.name for s in SPECS)


@dataclass(frozen=True)
class PrintConfig:
    """One print setup. Lengths in mm, infill density as a fraction."""

    layer_height: float = 0.20
    first_layer_height: float = 0.20
    perimeters: int = 2
    top_solid_layers: int = 5
    bottom_solid_layers: int = 4
    infill_density: float = 0.15
    infill_pattern: str = "grid"
    support_material: bool = False
    brim_width: float = 0.0
    max_volumetric_speed: float = 11.0
    elephant_foot_compensation: float = 0.2
    seam_placement: str = "aligned"
    orientation: Orientation = Orientation()

    def with_orientation(self, orientation: Orientation) -> "PrintConfig":
        return replace(self, orientation=orientation)


def default_config() -> PrintConfig:
    return PrintConfig()


def _get(config: PrintConfig, name: str):
    if name == "orientation_x":
        return config.orientation.x
    if name == "orientation_y":
        return config.orientation.y
    if name == "orientation_z":
        return config.orientation.z
    if name == "support_material":
        return "on" if config.support_material else "off"
    return getattr(config, name)


def _construct(values: dict) -> PrintConfig:
    orientation = Orientation(
        x=values.pop("orientation_x"),
        y=values.pop("orientation_y"),
        z=values.pop("orientation_z"),
    )
    values["support_material"] = values["support_material"] == "on"
    return PrintConfig(orientation=orientation, **values)


def validate(config: PrintConfig) -> list[str]:
    """Bound and cross-parameter checks; returns human-readable violations."""
    problems = []
    for spec in SPECS:
        value = _get(config, spec.name)
        if isinstance(spec, CatSpec):
            if value not in spec.choices:
                problems.append(
                    f"{spec.name}: {value!r} is not one of {list(spec.choices)}"
                )
        elif isinstance(spec, IntSpec):
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                problems.append(f"{spec.name}: expected an integer, got {value!r}")
            elif not spec.lo <= value <= spec.hi:
                problems.append(
                    f"{spec.name}: {value} outside [{spec.lo}, {spec.hi}]"
                )
        else:
            if not np.isfinite(value):
                problems.append(f"{spec.name}: {value!r} is not finite")
            elif not spec.lo <= value <= spec.hi:
                problems.append(
                    f"{spec.name}: {value} outside [{spec.lo}, {spec.hi}]"
                )
    if np.isfinite(config.first_layer_height) and np.isfinite(config.layer_height):
        if config.first_layer_height < 0.5 * config.layer_height:
            problems.append(
                "first_layer_height: must be at least half the layer height "
                f"({config.first_layer_height} < 0.5 * {config.layer_height})"
            )
    return problems


def encode(config: PrintConfig) -> np.ndarray:
    """Map a configuration to [0, 1]^30."""
    x = np.zeros(ENCODED_DIM)
    for spec in SPECS:
        sl = ENCODED_SLICES[spec.name]
        value = _get(config, spec.name)
        if isinstance(spec, CatSpec):
            x[sl.start + spec.choices.index(value)] = 1.0
        else:
            x[sl.start] = (value - spec.lo) / (spec.hi - spec.lo)
    return x


def decode(x: np.ndarray) -> PrintConfig:
    """Map any real vector to a valid configuration.

    Out-of-range coordinates clamp, integers round half-even, one-hot
    groups pick the first maximum, and the first-layer height is raised
    to half the layer height when needed.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (ENCODED_DIM,):
        raise ValueError(f"expected shape ({ENCODED_DIM},), got {x.shape}")
    values: dict = {}
    for spec in SPECS:
        sl = ENCODED_SLICES[spec.name]
        if isinstance(spec, CatSpec):
            values[spec.name] = spec.choices[int(np.argmax(x[sl]))]
        elif isinstance(spec, IntSpec):
            raw = spec.lo + x[sl.start] * (spec.hi - spec.lo)
            values[spec.name] = int(np.clip(np.round(raw), spec.lo, spec.hi))
        else:
            raw = spec.lo + x[sl.start] * (spec.hi - spec.lo)
            values[spec.name] = float(np.clip(raw, spec.lo, spec.hi))
    values["first_layer_height"] = max(
        values["first_layer_height"], 0.5 * values["layer_height"]
    )
    return _construct(values)


def snap(X: np.ndarray) -> np.ndarray:
    """Vectorized encode(decode(row)) over a batch of encoded vectors."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    out = np.zeros_like(X)
    for spec in SPECS:
        sl = ENCODED_SLICES[spec.name]
        if isinstance(spec, CatSpec):
            winner = np.argmax(X[:, sl], axis=1)
            out[np.arange(len(X)), sl.start + winner] = 1.0
        elif isinstance(spec, IntSpec):
            raw = spec.lo + X[:, sl.start] * (spec.hi - spec.lo)
            val = np.clip(np.round(raw), spec.lo, spec.hi)
            out[:, sl.start] = (val - spec.lo) / (spec.hi - spec.lo)
        else:
            raw = spec.lo + X[:, sl.start] * (spec.hi - spec.lo)
            val = np.clip(raw, spec.lo, spec.hi)
            out[:, sl.start] = (val - spec.lo) / (spec.hi - spec.lo)
    lh_spec = SPECS[0]
    flh_spec = SPECS[1]
    lh_at = ENCODED_SLICES["layer_height"].start
    flh_at = ENCODED_SLICES["first_layer_height"].start
    lh_val = np.clip(
        lh_spec.lo + X[:, lh_at] * (lh_spec.hi - lh_spec.lo), lh_spec.lo, lh_spec.hi
    )
    flh_val = np.clip(
        flh_spec.lo + X[:, flh_at] * (flh_spec.hi - flh_spec.lo), flh_spec.lo, flh_spec.hi
    )
    flh_val = np.maximum(flh_val, 0.5 * lh_val)
    out[:, flh_at] = (flh_val - flh_spec.lo) / (flh_spec.hi - flh_spec.lo)
    return out


def sobol_sample(n: int, seed: int) -> list[PrintConfig]:
    """Scrambled Sobol designs over the parameter space.

    For a fixed seed the first k points are a prefix of the first m > k,
    so warm starts of different lengths stay nested.
    """
    sampler = qmc.Sobol(d=SAMPLE_DIM, scramble=True, seed=seed)
    u = sampler.random(n)
    configs = []
    for row in u:
        values: dict = {}
        for j, spec in enumerate(SPECS):
            if isinstance(spec, CatSpec):
                k = min(int(row[j] * len(spec.choices)), len(spec.choices) - 1)
                values[spec.name] = spec.choices[k]
            elif isinstance(spec, IntSpec):
                span = spec.hi - spec.lo + 1
                values[spec.name] = min(spec.lo + int(row[j] * span), spec.hi)
            else:
                values[spec.name] = spec.lo + row[j] * (spec.hi - spec.lo)
        values["first_layer_height"] = max(
            values["first_layer_height"], 0.5 * values["layer_height"]
        )
        configs.append(_construct(values))
    return configs


def to_dict(config: PrintConfig) -> dict:
    out = {}
    for spec in SPECS:
        value = _get(config, spec.name)
        if spec.name == "support_material":
            value = value == "on"
        out[spec.name] = value
    return out


def from_dict(doc: dict) -> PrintConfig:
    """Build a configuration from a mapping, reporting every problem at once."""
    problems = []
    values: dict = {}
    known = {s.name: s for s in SPECS}
    for key in doc:
        if key not in known:
            problems.append(f"unknown parameter {key!r}")
    for spec in SPECS:
        if spec.name not in doc:
            problems.append(f"missing parameter {spec.name!r}")
            continue
        raw = doc[spec.name]
        try:
            values[spec.name] = _coerce(spec, raw)
        except (TypeError, ValueError) as exc:
            problems.append(f"{spec.name}: {exc}")
    if len(values) == len(SPECS):
        try:
            config = _construct(dict(values))
        except ValueError as exc:
            problems.append(str(exc))
        else:
            problems.extend(validate(config))
            if not problems:
                return config
    raise ConfigDocumentError(problems)


def _coerce(spec, raw):
    if isinstance(spec, CatSpec):
        if spec.name == "support_material" and isinstance(raw, bool):
            return "on" if raw else "off"
        if spec.name.startswith("orientation"):
            return int(raw)
        if not isinstance(raw, str):
            raise TypeError(f"expected a string, got {raw!r}")
        return raw
    if isinstance(spec, IntSpec):
        if isinstance(raw, bool) or not isinstance(raw, (int, float, str)):
            raise TypeError(f"expected an integer, got {raw!r}")
        value = float(raw)
        if value != int(value):
            raise ValueError(f"expected an integer, got {raw!r}")
        return int(value)
    return float(raw)


def to_flat(config: PrintConfig) -> str:
    """Slicer-style ``name = value`` lines."""
    lines = []
    for spec in SPECS:
        value = _get(config, spec.name)
        if isinstance(value, float):
            value = f"{value:g}"
        lines.append(f"{spec.name} = {value}")
    return "\n".join(lines) + "\n"


def from_flat(text: str) -> PrintConfig:
    doc: dict = {}
    problems = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#") or stripped.startswith(";"):
            continue
        if "=" not in stripped:
            problems.append(f"line {lineno}: expected 'name = value'")
            continue
        key, _, value = stripped.partition("=")
        doc[key.strip()] = value.strip()
    if problems:
        raise ConfigDocumentError(problems)
    typed: dict = {}
    known = {s.name: s for s in SPECS}
    for key, value in doc.items():
        spec = known.get(key)
        if spec is None:
            typed[key] = value
        elif isinstance(spec, CatSpec):
            typed[key] = value
        else:
            try:
                typed[key] = float(value) if isinstance(spec, FloatSpec) else int(value)
            except ValueError:
                typed[key] = value  # let from_dict report it
    return from_dict(typed)


def configs_equal(a: PrintConfig, b: PrintConfig, names: Iterable[str] | None = None) -> bool:
    """Exact equality on the given parameters (all when names is None)."""
    for name in names if names is not None else PARAM_NAMES:
        if _get(a, name) != _get(b, name):
            return False
    return True
