"""
Physical constants and the handful of unit conversions used at the
input/output boundary. Everything inside the package is SI.

Constant set: CODATA 2018. ``c``, ``hbar`` and ``e`` are exact; ``mu0`` is
the CODATA 2018 measured value and ``eps0`` is derived from it so that
``c**2 * eps0 * mu0 == 1`` holds to rounding.
"""
from dataclasses import dataclass
import math

from mqedrates.errors import DomainError


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = 299792458.0
    hbar: float = 1.054571817e-34
    mu0: float = 1.25663706212e-6
    e: float = 1.602176634e-19

    @property
    def eps0(self):
        return 1.0 / (self.mu0 * self.c ** 2)


CONSTANTS = PhysicalConstants()

c = CONSTANTS.c
hbar = CONSTANTS.hbar
mu0 = CONSTANTS.mu0
eps0 = CONSTANTS.eps0
e = CONSTANTS.e

ANGSTROM = 1e-10
MEGABARN = 1e-22


def ev_to_angular_frequency(energy_ev):
    """Photon energy in eV -> angular frequency in rad/s."""
    if not energy_ev > 0:
        raise DomainError(f"energy must be positive, got {energy_ev} eV")
    return energy_ev * e / hbar


def angular_frequency_to_ev(omega):
    if not omega > 0:
        raise DomainError(f"angular frequency must be positive, got {omega} rad/s")
    return omega * hbar / e


def megabarn_to_m2(sigma_mb):
    if sigma_mb < 0 or math.isnan(sigma_mb):
        raise DomainError(f"cross section must be non-negative, got {sigma_mb} Mb")
    return sigma_mb * MEGABARN


def m2_to_megabarn(sigma):
    return sigma / MEGABARN


def angstrom_to_m(x):
    return x * ANGSTROM


def m_to_angstrom(x):
    return x / ANGSTROM


def wavelength(omega):
    """Vacuum wavelength 2*pi*c/omega (m)."""
    return 2.0 * math.pi * c / omega
