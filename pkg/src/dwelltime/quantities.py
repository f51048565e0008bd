"""Physical constants, unit conversions and small value types.

Everything is SI internally.  Functions elsewhere in the package take the
reduced Planck constant as a keyword (``hbar=HBAR``) so that the same code
can be exercised in natural units (``hbar = m = l = 1``) by tests.
"""
from __future__ import annotations

from dataclasses import dataclass

import scipy.constants as sc

from .errors import DomainError

#: Reduced Planck constant, J s.
HBAR = 1.054571817e-34

#: Atomic mass of caesium-133 in unified atomic mass units.
CS133_MASS_U = 132.905451961
CS133_MASS = CS133_MASS_U * sc.atomic_mass

CM_PER_S = 1e-2


@dataclass(frozen=True)
class Constants:
    """A consistent set of constants injected into the formulas."""

    hbar: float
    name: str = ""


SI = Constants(hbar=HBAR, name="SI")
NATURAL = Constants(hbar=1.0, name="natural")


@dataclass(frozen=True)
class ParticleSpec:
    mass: float
    label: str = ""

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError(f"mass must be positive, got {self.mass!r}")


@dataclass(frozen=True)
class RegionSpec:
    """Interval [left_edge, right_edge] in which the dwell time is measured."""

    left_edge: float
    right_edge: float

    def __post_init__(self):
        if not self.right_edge > self.left_edge:
            raise DomainError(
                f"region must have right_edge > left_edge, got "
                f"[{self.left_edge!r}, {self.right_edge!r}]"
            )

    @property
    def length(self) -> float:
        return self.right_edge - self.left_edge

    @property
    def center(self) -> float:
        return 0.5 * (self.left_edge + self.right_edge)


@dataclass(frozen=True)
class Kinematics:
    momentum: float
    velocity: float
    energy: float


def convert(v: float, mass: float) -> Kinematics:
    """Momentum and kinetic energy of a particle moving with speed ``v``."""
    if not v > 0:
        raise DomainError(f"velocity must be positive, got {v!r}")
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass!r}")
    p = mass * v
    return Kinematics(momentum=p, velocity=v, energy=0.5 * mass * v * v)


def momentum_from_energy(energy: float, mass: float) -> float:
    if not energy > 0:
        raise DomainError(f"energy must be positive, got {energy!r}")
    return (2.0 * mass * energy) ** 0.5


def energy_from_momentum(p: float, mass: float) -> float:
    return p * p / (2.0 * mass)


def height_from_velocity(v: float, mass: float) -> float:
    """Potential height whose classical threshold speed is ``v``."""
    return 0.5 * mass * v * v


def cesium_defaults() -> tuple[ParticleSpec, RegionSpec, float]:
    """Cs atom, 2 um region and a barrier whose threshold speed is 0.28 cm/s.

    Returns ``(particle, region, barrier_height)`` with the height in joules.
    """
    particle = ParticleSpec(CS133_MASS, "Cs")
    region = RegionSpec(0.0, 2.0e-6)
    v0 = height_from_velocity(0.28 * CM_PER_S, particle.mass)
    return particle, region, v0
