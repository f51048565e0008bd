"""Flat ``key = value`` sweep configuration.

Blank lines and everything after ``#`` are ignored.  Every key has a
default reproducing the Cs experiment (2 um strip, barrier at 0.28 cm/s,
four laser settings); an empty value means "use the default".
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .operational import CONVENTIONS
from .quantities import CM_PER_S, CS133_MASS, HBAR, height_from_velocity

SPECIES = {"Cs": CS133_MASS}

DEFAULT_LASERS = ((2500.0, 1.57), (250.0, 0.5), (25.0, 0.16), (2.5, 0.05))

# kept as the reference value; the physical Cs D2 linewidth is about 3.3e7 s^-1,
# so the 1/gamma columns are the ones to compare across gamma choices
DEFAULT_GAMMA = 33.3e-6

DEFAULT_TEXT = """\
# dwelltime sweep configuration (defaults: Cs, 2 um strip, 0.28 cm/s barrier)
units = si                 # si | natural (hbar = 1)
species = Cs               # named species, ignored when mass is set
mass =                     # kg; overrides species
region_length = 2e-6       # m
barrier_velocity = 0.28    # threshold speed in grid_units, V0 = m v^2 / 2
barrier_height =           # J; overrides barrier_velocity
grid_min = 0.05
grid_max = 1.0
grid_points = 400
grid_units = cm/s          # cm/s | m/s
gamma = 33.3e-6            # s^-1, decay rate of the transition
wavelength = 852e-9        # m, documentation only
lasers = 2500:1.57, 250:0.5, 25:0.16, 2.5:0.05   # delta/gamma : omega/gamma
convention = barrier-is-lightshift
fig2_points = 41
fig2_ratio_min = 1e-5      # smallest V_I / V_R on the absorption sweep
fig2_ratio_max = 1e-1
"""


class ConfigError(ValueError):
    """Invalid configuration; ``line`` and ``key`` locate the problem."""

    def __init__(self, message, key=None, line=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.key = key
        self.line = line


@dataclass(frozen=True)
class SweepConfig:
    units: str = "si"
    species: str = "Cs"
    mass: float = CS133_MASS
    region_length: float = 2e-6
    barrier_height: float = height_from_velocity(0.28 * CM_PER_S, CS133_MASS)
    grid_min: float = 0.05
    grid_max: float = 1.0
    grid_points: int = 400
    grid_units: str = "cm/s"
    gamma: float = DEFAULT_GAMMA
    wavelength: float = 852e-9
    lasers: tuple = DEFAULT_LASERS
    convention: str = "barrier-is-lightshift"
    fig2_points: int = 41
    fig2_ratio_min: float = 1e-5
    fig2_ratio_max: float = 1e-1

    @property
    def hbar(self) -> float:
        return 1.0 if self.units == "natural" else HBAR

    @property
    def velocity_scale(self) -> float:
        """Factor converting grid values to the internal velocity unit."""
        if self.units == "natural" or self.grid_units == "m/s":
            return 1.0
        return CM_PER_S

    def velocities(self):
        return np.linspace(self.grid_min, self.grid_max, self.grid_points) * self.velocity_scale


_FLOAT_KEYS = {
    "mass", "region_length", "barrier_velocity", "barrier_height", "grid_min",
    "grid_max", "gamma", "wavelength", "fig2_ratio_min", "fig2_ratio_max",
}
_INT_KEYS = {"grid_points", "fig2_points"}
_TEXT_KEYS = {"units", "species", "grid_units", "lasers", "convention"}
KNOWN_KEYS = _FLOAT_KEYS | _INT_KEYS | _TEXT_KEYS


def _parse_lines(text: str) -> dict:
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError("unknown key", key=key, line=lineno)
        if key in entries:
            raise ConfigError("duplicate key", key=key, line=lineno)
        entries[key] = (value, lineno)
    return entries


def _convert(key, value, lineno):
    if key in _FLOAT_KEYS:
        try:
            x = float(value)
        except ValueError:
            raise ConfigError(f"not a number: {value!r}", key, lineno) from None
        if not math.isfinite(x):
            raise ConfigError("must be finite", key, lineno)
        return x
    if key in _INT_KEYS:
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"not an integer: {value!r}", key, lineno) from None
    if key == "lasers":
        pairs = []
        for item in value.split(","):
            try:
                d, o = (float(s) for s in item.split(":"))
            except ValueError:
                raise ConfigError(
                    f"laser setting {item.strip()!r} is not 'delta:omega'", key, lineno
                ) from None
            pairs.append((d, o))
        return tuple(pairs)
    return value


def parse_config(text: str) -> SweepConfig:
    """Build a validated :class:`SweepConfig` from configuration text."""
    entries = _parse_lines(text)
    vals = {}
    lines = {}
    for key, (value, lineno) in entries.items():
        lines[key] = lineno
        if value == "":
            continue
        vals[key] = _convert(key, value, lineno)

    def fail(msg, key):
        raise ConfigError(msg, key, lines.get(key))

    units = vals.get("units", "si")
    if units not in ("si", "natural"):
        fail("must be 'si' or 'natural'", "units")
    natural = units == "natural"

    if "mass" in vals:
        mass = vals["mass"]
        species = vals.get("species", "custom")
    elif natural:
        mass, species = 1.0, "natural"
    else:
        species = vals.get("species", "Cs")
        if species not in SPECIES:
            fail(f"unknown species {species!r}; set 'mass' instead", "species")
        mass = SPECIES[species]
    if not mass > 0:
        fail("must be positive", "mass")

    grid_units = vals.get("grid_units", "cm/s")
    if grid_units not in ("cm/s", "m/s"):
        fail("must be 'cm/s' or 'm/s'", "grid_units")
    vscale = 1.0 if natural or grid_units == "m/s" else CM_PER_S

    length = vals.get("region_length", 1.0 if natural else 2e-6)
    if not length > 0:
        fail("must be positive", "region_length")

    if "barrier_height" in vals:
        height = vals["barrier_height"]
    else:
        bv = vals.get("barrier_velocity", 0.0 if natural else 0.28)
        if bv < 0:
            fail("must be non-negative", "barrier_velocity")
        height = height_from_velocity(bv * vscale, mass)

    grid_min = vals.get("grid_min", 0.05)
    grid_max = vals.get("grid_max", 1.0)
    points = vals.get("grid_points", 400)
    if not grid_min > 0:
        fail("must be positive", "grid_min")
    if not grid_max > grid_min:
        fail("must exceed grid_min", "grid_max")
    if points < 2:
        fail("need at least 2 points", "grid_points")

    gamma = vals.get("gamma", DEFAULT_GAMMA)
    if not gamma > 0:
        fail("must be positive", "gamma")
    lasers = vals.get("lasers", DEFAULT_LASERS)
    if not lasers:
        fail("need at least one setting", "lasers")
    for d, o in lasers:
        if not (d > 0 and o > 0):
            fail("all laser settings must be positive", "lasers")

    convention = vals.get("convention", "barrier-is-lightshift")
    if convention not in CONVENTIONS:
        fail(f"must be one of {', '.join(CONVENTIONS)}", "convention")

    f2n = vals.get("fig2_points", 41)
    if f2n < 2:
        fail("need at least 2 points", "fig2_points")
    rmin = vals.get("fig2_ratio_min", 1e-5)
    rmax = vals.get("fig2_ratio_max", 1e-1)
    if not rmin > 0:
        fail("must be positive", "fig2_ratio_min")
    if not rmax > rmin:
        fail("must exceed fig2_ratio_min", "fig2_ratio_max")

    return SweepConfig(
        units=units,
        species=species,
        mass=mass,
        region_length=length,
        barrier_height=height,
        grid_min=grid_min,
        grid_max=grid_max,
        grid_points=points,
        grid_units=grid_units,
        gamma=gamma,
        wavelength=vals.get("wavelength", 852e-9),
        lasers=tuple(lasers),
        convention=convention,
        fig2_points=f2n,
        fig2_ratio_min=rmin,
        fig2_ratio_max=rmax,
    )


def load_config(path) -> SweepConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    return parse_config(text)
