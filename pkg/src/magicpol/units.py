"""Conversions between atomic units, SI, wavenumbers and vacuum wavelength.

All constants are CODATA values taken from :mod:`scipy.constants` once at
import. Frequencies in atomic units are angular frequencies in units of
E_h/hbar; wavelengths are vacuum wavelengths (no refractive-index
correction).
"""

from dataclasses import dataclass
import math

import numpy as np
import scipy.constants as sc

from .errors import DomainError, UnitError

__all__ = [
    "PhysicalConstants",
    "CONSTANTS",
    "convert_omega",
    "convert_alpha",
    "convert_energy",
    "omega_to_nm",
    "nm_to_omega",
    "cm1_to_au",
]


@dataclass(frozen=True)
class PhysicalConstants:
    """Conversion factors fixed at load time.

    Attributes
    ----------
    hartree_frequency : float
        E_h/hbar in s^-1, i.e. angular frequency (rad/s) per a.u. of omega.
    bohr_radius : float
        a_0 in nm.
    alpha_au_to_si : float
        4 pi eps_0 a_0^3 / h, converting alpha in a.u. to alpha/h in
        Hz/(V/m)^2.
    hartree_wavenumber : float
        E_h/(h c) in cm^-1.
    speed_of_light : float
        c in nm/s.
    """

    hartree_frequency: float
    bohr_radius: float
    alpha_au_to_si: float
    hartree_wavenumber: float
    speed_of_light: float


def _codata():
    a0 = sc.physical_constants["Bohr radius"][0]
    eh = sc.physical_constants["atomic unit of energy"][0]
    return PhysicalConstants(
        hartree_frequency=eh / sc.hbar,
        bohr_radius=a0 * 1e9,
        alpha_au_to_si=4.0 * math.pi * sc.epsilon_0 * a0**3 / sc.h,
        hartree_wavenumber=eh / (sc.h * sc.c) / 100.0,
        speed_of_light=sc.c * 1e9,
    )


CONSTANTS = _codata()

_OMEGA_UNITS = {
    "au": "au",
    "a.u.": "au",
    "rad/s": "rad/s",
    "rads": "rad/s",
    "hz": "hz",
    "nm": "nm",
}
_ALPHA_UNITS = {
    "au": "au",
    "a.u.": "au",
    "a0^3": "au",
    "angstrom3": "angstrom3",
    "a3": "angstrom3",
    "å3": "angstrom3",
    "hz/(v/m)2": "hz/(v/m)2",
    "si": "hz/(v/m)2",
}
_ENERGY_UNITS = {
    "au": "au",
    "a.u.": "au",
    "hartree": "au",
    "cm-1": "cm-1",
    "cm^-1": "cm-1",
}


def _canon(tag, table, kind):
    try:
        return table[str(tag).strip().lower()]
    except KeyError:
        known = ", ".join(sorted(set(table.values())))
        raise UnitError(f"unknown {kind} unit {tag!r} (known: {known})") from None


def _positive(value, what):
    if np.any(np.asarray(value) <= 0):
        raise DomainError(f"{what} requires a positive value, got {value!r}")


def omega_to_nm(omega_au):
    """Vacuum wavelength in nm for an angular frequency in a.u."""
    _positive(omega_au, "wavelength conversion")
    nu = omega_au * CONSTANTS.hartree_frequency / (2.0 * math.pi)
    return CONSTANTS.speed_of_light / nu


def nm_to_omega(lambda_nm):
    """Angular frequency in a.u. for a vacuum wavelength in nm."""
    _positive(lambda_nm, "wavelength conversion")
    nu = CONSTANTS.speed_of_light / lambda_nm
    return 2.0 * math.pi * nu / CONSTANTS.hartree_frequency


def convert_omega(value, from_unit, to_unit):
    """Convert a frequency between ``au``, ``rad/s``, ``hz`` and ``nm``.

    ``hz`` is the ordinary frequency nu = omega/2pi; ``nm`` the vacuum
    wavelength. Wavelength on either side requires ``value > 0``.

    >>> round(convert_omega(1.0, "au", "rad/s") / 1e16, 4)
    4.1341
    """
    src = _canon(from_unit, _OMEGA_UNITS, "frequency")
    dst = _canon(to_unit, _OMEGA_UNITS, "frequency")
    if src == dst:
        if src == "nm":
            _positive(value, "wavelength conversion")
        return value
    if src == "au":
        w = value
    elif src == "rad/s":
        w = value / CONSTANTS.hartree_frequency
    elif src == "hz":
        w = 2.0 * math.pi * value / CONSTANTS.hartree_frequency
    else:
        w = nm_to_omega(value)
    if dst == "au":
        return w
    if dst == "rad/s":
        return w * CONSTANTS.hartree_frequency
    if dst == "hz":
        return w * CONSTANTS.hartree_frequency / (2.0 * math.pi)
    return omega_to_nm(w)


def convert_alpha(value, from_unit, to_unit):
    """Convert a polarizability between ``au`` (a0^3), ``angstrom3`` and
    ``hz/(v/m)2`` (alpha/h in SI)."""
    src = _canon(from_unit, _ALPHA_UNITS, "polarizability")
    dst = _canon(to_unit, _ALPHA_UNITS, "polarizability")
    if src == dst:
        return value
    to_au = {
        "au": 1.0,
        "angstrom3": 1.0 / (CONSTANTS.bohr_radius * 10.0) ** 3,
        "hz/(v/m)2": 1.0 / CONSTANTS.alpha_au_to_si,
    }
    from_au = {
        "au": 1.0,
        "angstrom3": (CONSTANTS.bohr_radius * 10.0) ** 3,
        "hz/(v/m)2": CONSTANTS.alpha_au_to_si,
    }
    return value * to_au[src] * from_au[dst]


def convert_energy(value, from_unit, to_unit):
    """Convert an energy between ``au`` (hartree) and ``cm-1``."""
    src = _canon(from_unit, _ENERGY_UNITS, "energy")
    dst = _canon(to_unit, _ENERGY_UNITS, "energy")
    if src == dst:
        return value
    if src == "cm-1":
        return value / CONSTANTS.hartree_wavenumber
    return value * CONSTANTS.hartree_wavenumber


def cm1_to_au(value):
    return value / CONSTANTS.hartree_wavenumber
