"""Lorentz-oscillator polarisability of a mediating atom."""
from dataclasses import dataclass
import math

import numpy as np

from mqedrates import units
from mqedrates.errors import DomainError


@dataclass(frozen=True)
class Oscillator:
    omega: float        # resonance, rad/s
    dipole_sq: float    # |d_in|^2, (C m)^2
    gamma: float        # linewidth, rad/s

    def __post_init__(self):
        if not (self.omega > 0 and self.gamma > 0 and self.dipole_sq >= 0):
            raise DomainError(f"invalid oscillator {self}")


def alpha(oscillators, omega):
    """
    Isotropic polarisability (SI, C m^2 / V) of a set of Lorentz
    oscillators::

        alpha(w) = 2/(3 hbar) sum_i w_i |d_i|^2 / (w_i^2 - w^2 - i w gamma_i)

    Time dependence is ``e^{-i w t}``, so ``Im alpha >= 0`` for ``w > 0``.
    Accepts scalar or array ``omega``. Negative frequencies are allowed so
    that ``alpha(-w) == conj(alpha(w))`` can be checked.
    """
    omega = np.asarray(omega, dtype=float)
    total = np.zeros(omega.shape, dtype=complex)
    for osc in oscillators:
        total = total + osc.omega * osc.dipole_sq / (osc.omega ** 2 - omega ** 2 - 1j * omega * osc.gamma)
    total = 2.0 / (3.0 * units.hbar) * total
    return complex(total) if total.ndim == 0 else total


def static_alpha(oscillators):
    return sum(2 * o.dipole_sq / (3 * units.hbar * o.omega) for o in oscillators)


def polarisability_volume(alpha_si):
    """alpha / (4 pi eps0), in m^3."""
    return alpha_si / (4 * math.pi * units.eps0)


def polarisability_from_volume(alpha_volume):
    return alpha_volume * 4 * math.pi * units.eps0


def polarisability_length(alpha_volume):
    """Signed length a_alpha with alpha_vol = ±a_alpha^3 (sign of Re alpha_vol)."""
    alpha_volume = complex(alpha_volume)
    a = abs(alpha_volume) ** (1.0 / 3.0)
    return -a if alpha_volume.real < 0 else a


def regime(oscillators, omega, factor=10.0):
    """Classify ``omega`` against the resonances: 'static', 'resonant', 'high' or 'mixed'."""
    labels = set()
    for o in oscillators:
        if omega * factor < o.omega:
            labels.add("static")
        elif omega > factor * o.omega:
            labels.add("high")
        elif abs(omega - o.omega) <= o.gamma:
            labels.add("resonant")
        else:
            labels.add("intermediate")
    return labels.pop() if len(labels) == 1 else "mixed"
