"""Center-of-mass heating from switching a harmonic trap off and on again.

An atom starts in the ground state of an isotropic oscillator (frequency
omega0, mass M). The trap is released for a time tau, the Gaussian packet
expands freely, and the trap is restored. Everything here is closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.constants as sc

from .errors import DomainError

__all__ = [
    "TrapSpec",
    "HeatingResult",
    "RB87_MASS",
    "wavepacket_moments",
    "wavefunction",
    "density",
    "restored_energy",
    "heating_per_cycle",
]

RB87_MASS = 86.909180531 * sc.physical_constants["atomic mass constant"][0]


@dataclass(frozen=True)
class TrapSpec:
    """Isotropic harmonic trap: angular frequency ``omega0`` (rad/s), ``mass`` (kg)."""

    omega0: float
    mass: float = RB87_MASS

    def __post_init__(self):
        if not (self.omega0 > 0 and self.mass > 0):
            raise DomainError(f"trap needs omega0 > 0 and mass > 0, got {self.omega0!r}, {self.mass!r}")

    @classmethod
    def from_frequency(cls, value: float, unit: str = "rad/s", mass: float = RB87_MASS) -> "TrapSpec":
        """``unit`` is ``"rad/s"`` (value is omega0) or ``"hz"`` (value is nu0)."""
        unit = unit.strip().lower()
        if unit in ("rad/s", "rads"):
            return cls(float(value), mass)
        if unit == "hz":
            return cls(2.0 * math.pi * float(value), mass)
        raise DomainError(f"trap frequency unit must be 'rad/s' or 'hz', got {unit!r}")

    @property
    def d0(self) -> float:
        """Ground-state length sqrt(hbar / (M omega0)), m."""
        return math.sqrt(sc.hbar / (self.mass * self.omega0))

    @property
    def e0(self) -> float:
        """Ground-state energy 3 hbar omega0 / 2, J."""
        return 1.5 * sc.hbar * self.omega0


def _nonneg(t, what):
    if np.any(np.asarray(t) < 0):
        raise DomainError(f"{what} must be >= 0, got {t!r}")


def wavefunction(trap: TrapSpec, r, t):
    """Freely expanding packet Psi(r, t) (complex, m^-3/2)."""
    _nonneg(t, "time")
    z = 1.0 + 1j * trap.omega0 * t
    r = np.asarray(r, dtype=np.float64)
    return np.exp(-(r * r) / (2.0 * trap.d0**2 * z)) / (math.pi**0.75 * trap.d0**1.5 * z**1.5)


def density(trap: TrapSpec, r, t):
    """|Psi(r, t)|^2, normalized over all of 3D space."""
    s = 1.0 + (trap.omega0 * t) ** 2
    r = np.asarray(r, dtype=np.float64)
    return np.exp(-(r * r) / (trap.d0**2 * s)) / (math.pi**1.5 * trap.d0**3 * s**1.5)


def wavepacket_moments(trap: TrapSpec, t: float) -> tuple[float, float]:
    """Mean-square radius (m^2) and mean kinetic energy (J) at time ``t`` after release."""
    _nonneg(t, "time")
    msr = 1.5 * trap.d0**2 * (1.0 + (trap.omega0 * t) ** 2)
    return msr, trap.e0 / 2.0


def restored_energy(trap: TrapSpec, tau: float) -> float:
    """Mean energy after restoring the trap at ``tau``: E0 (1 + (omega0 tau)^2 / 2)."""
    _nonneg(tau, "release time")
    return trap.e0 * (1.0 + (trap.omega0 * tau) ** 2 / 2.0)


@dataclass(frozen=True)
class HeatingResult:
    kelvin: float
    hbar_omega0: float
    joule: float


def heating_per_cycle(trap: TrapSpec, tau: float) -> HeatingResult:
    """k_B T = hbar omega0 (omega0 tau)^2 / 4 for one release/restore cycle."""
    _nonneg(tau, "release time")
    units = (trap.omega0 * tau) ** 2 / 4.0
    joule = sc.hbar * trap.omega0 * units
    return HeatingResult(kelvin=joule / sc.k, hbar_omega0=units, joule=joule)
