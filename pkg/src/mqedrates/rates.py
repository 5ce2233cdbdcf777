"""
Decay rates expressed through the environment's Green's tensor.

Every rate is computed per channel; sums over degenerate sublevels are left
to the caller. Dipole moments never enter directly: the donor side is
carried by the free-space spontaneous rate ``gamma`` and the ionised side
by the photoionisation cross section ``sigma``.

Orientation of the decaying (donor) dipole is given as one of

* ``"iso"``  -- isotropic average,
* ``"m0"``   -- dipole along the quantisation axis,
* ``"mpm1"`` -- average over the two directions perpendicular to it,
* a 3-vector -- a fixed direction.

The acceptor is always treated as isotropic. Averaging
``|u·G·v|^2`` over acceptor directions ``v`` gives ``u·(G G†)·u / 3``;
this is how the oriented rates are built and it reduces to the
isotropic trace formula after averaging over ``u`` as well.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from mqedrates import greens, units
from mqedrates.errors import DomainError, GeometryError
from mqedrates.tensor3 import dagger, frobenius4

ORIENTATIONS = ("iso", "m0", "mpm1")


@dataclass(frozen=True)
class AtomicTransitionData:
    """
    Physical inputs of one decay channel, SI units.

    omega : transition angular frequency (rad/s)
    gamma : free-space spontaneous rate of the transition (1/s)
    sigma : photoionisation cross section of the ionised electron at omega (m^2)
    auger_radius : Gaussian cloud radius regularising the Auger loop (m)
    separation : donor-acceptor distance (m), ICD only
    c_nkm : angular prefactor of the pure Auger term
    """
    omega: float
    gamma: float
    sigma: float
    auger_radius: float = None
    separation: float = None
    c_nkm: float = None

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError(f"omega must be positive, got {self.omega}")
        if not self.gamma > 0:
            raise DomainError(f"gamma must be positive, got {self.gamma}")
        if not self.sigma >= 0:
            raise DomainError(f"sigma must be non-negative, got {self.sigma}")
        if self.auger_radius is not None and not self.auger_radius > 0:
            raise DomainError(f"Auger radius must be positive, got {self.auger_radius}")
        if self.separation is not None and not self.separation > 0:
            raise DomainError(f"separation must be positive, got {self.separation}")

    @property
    def wavelength(self):
        return units.wavelength(self.omega)

    def require_auger_radius(self):
        if self.auger_radius is None:
            raise DomainError("this rate needs an Auger radius")
        return self.auger_radius


@dataclass
class RateResult:
    absolute: float
    free_space: float
    decomposition: dict = field(default_factory=dict)
    validity_flags: list = field(default_factory=list)

    @property
    def relative_to_free_space(self):
        return self.absolute / self.free_space

    @property
    def relative(self):
        return self.relative_to_free_space


# --------------------------------------------------------------------------
# orientation handling
# --------------------------------------------------------------------------

def orientation_projector(orientation, axis=None):
    """
    Real symmetric weight tensor ``P`` with ``Tr P = 1`` such that the
    oriented rate is proportional to ``Tr[P · X]``.
    """
    if isinstance(orientation, str):
        if orientation == "iso":
            return np.eye(3) / 3
        if orientation not in ORIENTATIONS:
            raise DomainError(f"unknown orientation {orientation!r}")
        if axis is None:
            raise DomainError(f"orientation {orientation!r} needs a quantisation axis")
        z = np.asarray(axis, dtype=float)
        z = z / np.linalg.norm(z)
        zz = np.outer(z, z)
        return zz if orientation == "m0" else (np.eye(3) - zz) / 2
    u = np.asarray(orientation, dtype=float)
    norm = np.linalg.norm(u)
    if u.shape != (3,) or norm == 0:
        raise DomainError(f"invalid dipole direction {orientation!r}")
    u = u / norm
    return np.outer(u, u)


def _weighted(p, x):
    return float(np.real(np.einsum("ij,ji->", p, x)))


def _split_square(p, g_bulk, g_scat):
    """3 Tr[P G G†] split into bulk, cross and scattering parts."""
    bulk = 3 * _weighted(p, g_bulk @ dagger(g_bulk))
    cross = 3 * 2 * _weighted(p, g_bulk @ dagger(g_scat))
    scat = 3 * _weighted(p, g_scat @ dagger(g_scat))
    return bulk, cross, scat


def _result(pref, bulk, cross, scat, free, flags):
    absolute = pref * (bulk + cross + scat)
    return RateResult(
        absolute=max(absolute, 0.0),
        free_space=free,
        decomposition={"bulk": pref * bulk, "cross": pref * cross, "scattering": pref * scat},
        validity_flags=flags,
    )


# --------------------------------------------------------------------------
# spontaneous emission
# --------------------------------------------------------------------------

def dipole_sq_from_gamma(gamma, omega):
    """|d|^2 from the free-space rate ``gamma = mu0 w^3 |d|^2 / (3 pi hbar c)``."""
    return 3 * math.pi * units.hbar * units.c * gamma / (units.mu0 * omega ** 3)


def spontaneous_rate(data, environment, position, orientation="iso", axis=None):
    """
    Spontaneous emission rate ``(2 mu0 / hbar) |d|^2 w^2 Tr[P Im G(r, r)]``
    with the dipole strength recovered from ``data.gamma``. In free space
    this returns ``gamma`` exactly.
    """
    omega = data.omega
    p = orientation_projector(orientation, axis)
    im_bulk = greens.im_g0_coincident(omega).real
    im_scat = np.imag(greens.g_scattering(environment, position, position, omega))
    # Gamma / gamma = 6 pi c / w * Tr[P Im G]
    pref = data.gamma * 6 * math.pi * units.c / omega
    bulk = _weighted(p, im_bulk)
    scat = _weighted(p, im_scat)
    absolute = pref * (bulk + scat)
    flags = greens.validity_flags(environment, [position], omega)
    if absolute < 0:
        flags.append("spontaneous:negative")
    return RateResult(
        absolute=max(absolute, 0.0),
        free_space=data.gamma,
        decomposition={"bulk": pref * bulk, "cross": 0.0, "scattering": pref * scat},
        validity_flags=flags,
    )


# --------------------------------------------------------------------------
# ICD
# --------------------------------------------------------------------------

def icd_trace_factor(g, orientation="iso", axis=None):
    """``3 Tr[P G G†]``; equals ``Tr[G G†]`` for the isotropic case."""
    return 3 * _weighted(orientation_projector(orientation, axis), g @ dagger(g))


def icd_rate(data, environment, donor, acceptor, orientation="iso", axis=None):
    """
    ICD rate ``2 pi gamma sigma 3 Tr[P G_da G_da†]`` with ``G_da`` the
    tensor between donor and acceptor. The quantisation axis of the m0 /
    mpm1 orientations defaults to the donor-acceptor axis.

    The free-space reference uses the same bulk tensor as the environment
    (quasi-static for the surface model and for ``nonretarded`` environments).
    """
    donor = np.asarray(donor, dtype=float)
    acceptor = np.asarray(acceptor, dtype=float)
    if np.linalg.norm(acceptor - donor) < greens.COINCIDENCE_TOL:
        raise GeometryError("donor and acceptor coincide")
    if axis is None:
        axis = acceptor - donor
    omega = data.omega
    p = orientation_projector(orientation, axis)
    g_bulk = greens.g_bulk(environment, donor, acceptor, omega)
    g_scat = greens.g_scattering(environment, donor, acceptor, omega)
    pref = 2 * math.pi * data.gamma * data.sigma
    bulk, cross, scat = _split_square(p, g_bulk, g_scat)
    flags = greens.validity_flags(environment, [donor, acceptor], omega)
    return _result(pref, bulk, cross, scat, pref * bulk, flags)


def icd_rate_free_nonretarded(data, separation):
    """Closed-form isotropic quasi-static ICD rate ``3 c^4 gamma sigma / (4 pi w^4 r^6)``."""
    if not separation > 0:
        raise GeometryError(f"separation must be positive, got {separation}")
    return 3 * units.c ** 4 * data.gamma * data.sigma / (4 * math.pi * data.omega ** 4 * separation ** 6)


# --------------------------------------------------------------------------
# Auger
# --------------------------------------------------------------------------

def auger_rate_free(data):
    """Free-space Auger rate ``2 pi gamma sigma Tr[G~0 G~0*]`` on the regularised loop."""
    g = greens.g0_regularized(data.require_auger_radius(), data.omega)
    pref = 2 * math.pi * data.gamma * data.sigma
    value = pref * float(np.real(np.trace(g @ g.conj())))
    return RateResult(absolute=value, free_space=value,
                      decomposition={"bulk": value, "cross": 0.0, "scattering": 0.0})


def auger_rate_free_closed_form(data):
    """``c^4 gamma sigma / (96 pi^2 a^6 w^4)``."""
    a = data.require_auger_radius()
    return units.c ** 4 * data.gamma * data.sigma / (96 * math.pi ** 2 * a ** 6 * data.omega ** 4)


def auger_radius_from_rate(rate, gamma, sigma, omega):
    """Invert the free-space Auger rate for the Auger radius (m)."""
    for name, val in (("rate", rate), ("gamma", gamma), ("sigma", sigma), ("omega", omega)):
        if not val > 0:
            raise DomainError(f"{name} must be positive, got {val}")
    return (units.c ** 4 * gamma * sigma / (96 * math.pi ** 2 * omega ** 4 * rate)) ** (1 / 6)


def _auger_loop(data, environment, position):
    omega = data.omega
    g_bulk = greens.g0_regularized(data.require_auger_radius(), omega)
    g_scat = greens.g_scattering(environment, position, position, omega)
    return g_bulk, g_scat


def auger_rate_environment(data, environment, position):
    """Isotropic Auger rate ``2 pi gamma sigma Tr[(G~0 + G1)(G~0 + G1)*]``."""
    g_bulk, g_scat = _auger_loop(data, environment, position)
    # coincident G is symmetric, so G* equals G† here
    bulk, cross, scat = _split_square(np.eye(3) / 3, g_bulk, g_scat)
    pref = 2 * math.pi * data.gamma * data.sigma
    flags = greens.validity_flags(environment, [position], data.omega)
    return _result(pref, bulk, cross, scat, pref * bulk, flags)


def auger_rate_pure(data, environment, position):
    """Direct plus exchange squares: ``18 pi c_nkm gamma sigma Tr[G G*]``."""
    if data.c_nkm is None:
        raise DomainError("auger_rate_pure needs the angular factor c_nkm")
    g_bulk, g_scat = _auger_loop(data, environment, position)
    bulk, cross, scat = _split_square(np.eye(3) / 3, g_bulk, g_scat)
    pref = 18 * math.pi * data.c_nkm * data.gamma * data.sigma
    flags = greens.validity_flags(environment, [position], data.omega)
    return _result(pref, bulk, cross, scat, pref * bulk, flags)


def auger_interference_term(d_nk, d_mp, d_pn, d_km, g_kn, g_km, omega_kn, omega_km, density=1.0):
    """
    Interference between direct and exchange Auger amplitudes for one
    final state::

        -(2 pi mu0^2 / hbar^2) w_kn^2 w_km^2 D :: [G(w_kn) ⊗ G*(w_km)]

    ``g_kn`` and ``g_km`` are the tensors at the two frequencies; the
    conjugate of ``g_km`` is taken here. ``density`` is the final-state
    density of states (s); with the default of 1 the value is per unit
    density. Returned as complex; summed over final states the imaginary
    parts cancel. The sign of the real part is not fixed.
    """
    pref = -2 * math.pi * units.mu0 ** 2 / units.hbar ** 2 * omega_kn ** 2 * omega_km ** 2
    return pref * density * frobenius4(d_nk, d_mp, d_pn, d_km, g_kn, np.conj(g_km))
