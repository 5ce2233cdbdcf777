"""
Dyadic Green's tensors for the environments the rate formulas need.

Convention: ``G(r_a, r_b, omega)`` is the field at ``r_a`` produced by a
point source at ``r_b``. All tensors are 3x3 complex arrays in 1/m.
Onsager reciprocity ``G(r_a, r_b).T == G(r_b, r_a)`` holds for every
tensor in this module.

Surface convention: the half space ``normal · r < offset`` is the medium,
``normal`` points from the surface into the vacuum side, and the height of
a point is ``normal · r - offset``.
"""
from dataclasses import dataclass

import numpy as np

from mqedrates import units
from mqedrates.errors import DomainError, GeometryError, SingularityError
from mqedrates.tensor3 import IDENTITY, dyadic

NONRETARDED_LIMIT = 0.1   # flag when omega * distance / c exceeds this
RETARDED_LIMIT = 10.0     # flag cavity evaluation when k0 R is below this
COINCIDENCE_TOL = 1e-30   # m, separations below this count as coincident


def _point(r):
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise GeometryError(f"expected a 3-vector position, got shape {r.shape}")
    return r


def _separation(r_a, r_b):
    r_ab = _point(r_b) - _point(r_a)
    dist = float(np.linalg.norm(r_ab))
    return r_ab, dist


def _check_omega(omega):
    if not omega > 0:
        raise DomainError(f"angular frequency must be positive, got {omega}")


# --------------------------------------------------------------------------
# environments
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FreeSpace:
    """Vacuum. ``nonretarded=True`` swaps in the quasi-static bulk tensor."""
    nonretarded: bool = False


@dataclass(frozen=True)
class Surface:
    """Planar homogeneous dielectric treated with the nonretarded image dipole."""
    r_nr: complex
    normal: tuple = (0.0, 0.0, 1.0)
    offset: float = 0.0

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        norm = np.linalg.norm(n)
        if n.shape != (3,) or norm == 0.0:
            raise GeometryError(f"invalid surface normal {self.normal!r}")
        if abs(norm - 1.0) > 1e-12:
            object.__setattr__(self, "normal", tuple(n / norm))
        object.__setattr__(self, "r_nr", complex(self.r_nr))

    @classmethod
    def from_permittivity(cls, eps, **kwargs):
        return cls(r_nr=reflection_coefficient(eps), **kwargs)

    @property
    def permittivity(self):
        return permittivity_from_reflection(self.r_nr)

    def height(self, r):
        return float(np.dot(self.normal, _point(r))) - self.offset


@dataclass(frozen=True)
class SphericalCavity:
    """Spherical cavity of radius ``radius`` centred at the origin, wall index ``n``."""
    n: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "n", complex(self.n))
        if not self.radius > 0:
            raise DomainError(f"cavity radius must be positive, got {self.radius}")
        if self.n.imag < 0:
            raise DomainError(f"wall index must be passive (Im n >= 0), got {self.n}")


@dataclass(frozen=True)
class MediatorAtom:
    """
    A single polarisable atom at ``position`` with isotropic polarisability
    volume ``alpha_volume`` (m^3, i.e. alpha / 4 pi eps0).

    ``nonretarded=True`` builds the mediated tensor from quasi-static legs
    and pairs it with the quasi-static bulk tensor, which is the regime of
    the closed-form mediator rates.
    """
    alpha_volume: complex
    position: tuple
    nonretarded: bool = False

    def __post_init__(self):
        object.__setattr__(self, "alpha_volume", complex(self.alpha_volume))
        object.__setattr__(self, "position", tuple(float(x) for x in _point(self.position)))


# --------------------------------------------------------------------------
# material helpers
# --------------------------------------------------------------------------

def reflection_coefficient(eps):
    """Nonretarded reflection coefficient (eps - 1) / (eps + 1)."""
    eps = complex(eps)
    if eps == -1:
        raise SingularityError("eps = -1 is the planar surface-plasmon pole")
    return (eps - 1) / (eps + 1)


def permittivity_from_reflection(r_nr):
    r_nr = complex(r_nr)
    if r_nr == 1:
        raise SingularityError("r_NR = 1 corresponds to infinite permittivity")
    return (1 + r_nr) / (1 - r_nr)


# --------------------------------------------------------------------------
# bulk tensors
# --------------------------------------------------------------------------

def g0_free(r_a, r_b, omega):
    """
    Retarded free-space Green's tensor between two distinct points.

    The contact term proportional to delta(r_ab) is not included; use
    :func:`im_g0_coincident` or :func:`g0_regularized` at coincidence.
    """
    _check_omega(omega)
    r_ab, r = _separation(r_a, r_b)
    if r < COINCIDENCE_TOL:
        raise GeometryError(
            "g0_free is singular at coincident points; "
            "use im_g0_coincident or g0_regularized"
        )
    k = omega / units.c
    kr = k * r
    e = r_ab / r
    ee = dyadic(e, e)
    pref = -np.exp(1j * kr) / (4 * np.pi * k ** 2 * r ** 3)
    return pref * ((1 - 1j * kr - kr ** 2) * IDENTITY - (3 - 3j * kr - kr ** 2) * ee)


def g0_nonretarded(r_a, r_b, omega):
    """Quasi-static limit of :func:`g0_free`: ``-c^2/(4 pi w^2 r^3) (I - 3 e⊗e)``."""
    _check_omega(omega)
    r_ab, r = _separation(r_a, r_b)
    if r < COINCIDENCE_TOL:
        raise GeometryError("g0_nonretarded diverges at coincident points")
    e = r_ab / r
    k = omega / units.c
    return -(IDENTITY - 3 * dyadic(e, e)) / (4 * np.pi * k ** 2 * r ** 3)


def im_g0_coincident(omega):
    """``Im G0(r, r, w) = w / (6 pi c) I`` (returned as a real-valued complex tensor)."""
    _check_omega(omega)
    return (omega / (6 * np.pi * units.c)) * IDENTITY


def g0_regularized(auger_radius, omega):
    """
    Bulk loop propagator smeared over a Gaussian electron cloud of radius
    ``auger_radius``: ``-c^2 / (24 pi^(3/2) a^3 w^2) I``.
    """
    _check_omega(omega)
    if not auger_radius > 0:
        raise DomainError(f"Auger radius must be positive, got {auger_radius}")
    k = omega / units.c
    return -IDENTITY / (24 * np.pi ** 1.5 * auger_radius ** 3 * k ** 2)


# --------------------------------------------------------------------------
# scattering tensors
# --------------------------------------------------------------------------

def g1_surface(r_a, r_b, surface, omega):
    """
    Image-dipole scattering tensor of a planar surface.

    The source at ``r_b`` is mirrored to ``r_b*``; with ``v = r_a - r_b*``
    and the mirror ``M = I - 2 n⊗n``::

        G1 = r_NR c^2 / (4 pi w^2 |v|^3) (I - 3 v̂⊗v̂) · M

    Coincident points are allowed (the image sits at twice the height).
    """
    _check_omega(omega)
    h_a, h_b = surface.height(r_a), surface.height(r_b)
    if h_a <= 0 or h_b <= 0:
        raise GeometryError(
            f"points must lie on the vacuum side of the surface (heights {h_a}, {h_b})"
        )
    n = np.asarray(surface.normal, dtype=float)
    image = _point(r_b) - 2 * h_b * n
    v = _point(r_a) - image
    dist = float(np.linalg.norm(v))
    e = v / dist
    mirror = IDENTITY - 2 * dyadic(n, n)
    k = omega / units.c
    pref = surface.r_nr / (4 * np.pi * k ** 2 * dist ** 3)
    return pref * (IDENTITY - 3 * dyadic(e, e)) @ mirror


def cavity_denominator(k0R, n):
    n = complex(n)
    return 6 * np.pi * (
        (1j * k0R * (n - n ** 2) + n ** 2 - 1) * np.cos(k0R)
        + 1j * k0R * n ** 2 * np.exp(-1j * k0R)
    )


def g1_cavity_center(cavity, omega):
    """
    Scattering tensor at the centre of a spherical cavity with infinitely
    thick walls, valid for ``k0 R >> 1``.

    The closed form is a dimensionless scalar; it is multiplied by
    ``k0 = w / c`` to carry 1/m like every other tensor here. With that
    factor a perfectly reflecting wall cancels ``Im G0`` exactly away from
    resonances.
    """
    _check_omega(omega)
    k0 = omega / units.c
    x = k0 * cavity.radius
    n = cavity.n
    den = cavity_denominator(x, n)
    if abs(den) <= 1e-14 * 6 * np.pi * (1 + x * abs(n) ** 2):
        raise SingularityError(f"cavity denominator vanishes at k0 R = {x}")
    num = x * (n ** 2 - n) + 1j * (n ** 2 - 1)
    return (-k0 * np.exp(1j * x) * num / den) * IDENTITY


def g1_mediator(r_a, r_b, mediator, omega, nonretarded=None):
    """
    Scattering tensor of one polarisable atom:
    ``(w/c)^2 4 pi alpha_vol G0(r_a, r_m) · G0(r_m, r_b)``.
    """
    if nonretarded is None:
        nonretarded = mediator.nonretarded
    r_m = np.asarray(mediator.position, dtype=float)
    for r in (r_a, r_b):
        if np.linalg.norm(_point(r) - r_m) < COINCIDENCE_TOL:
            raise GeometryError("point coincides with the mediator atom")
    g0 = g0_nonretarded if nonretarded else g0_free
    k = omega / units.c
    return k ** 2 * 4 * np.pi * mediator.alpha_volume * (g0(r_a, r_m, omega) @ g0(r_m, r_b, omega))


# --------------------------------------------------------------------------
# environment dispatch
# --------------------------------------------------------------------------

def g_bulk(environment, r_a, r_b, omega):
    """Bulk part paired with ``environment`` for two distinct points."""
    nonretarded = isinstance(environment, Surface) or getattr(environment, "nonretarded", False)
    return (g0_nonretarded if nonretarded else g0_free)(r_a, r_b, omega)


def g_scattering(environment, r_a, r_b, omega):
    if isinstance(environment, FreeSpace):
        _check_omega(omega)
        return np.zeros((3, 3), dtype=complex)
    if isinstance(environment, Surface):
        return g1_surface(r_a, r_b, environment, omega)
    if isinstance(environment, SphericalCavity):
        # only the centre value is known; r_ab << R is assumed
        return g1_cavity_center(environment, omega)
    if isinstance(environment, MediatorAtom):
        return g1_mediator(r_a, r_b, environment, omega)
    raise TypeError(f"unknown environment {environment!r}")


def g_total(environment, r_a, r_b, omega, auger_radius=None):
    """
    Full tensor ``G0 + G1``. At coincident points the bulk part is the
    regularised loop propagator, so ``auger_radius`` is required there.
    """
    _, dist = _separation(r_a, r_b)
    if dist < COINCIDENCE_TOL:
        if auger_radius is None:
            raise GeometryError("coincident points need an Auger radius for the bulk loop term")
        bulk = g0_regularized(auger_radius, omega)
    else:
        bulk = g_bulk(environment, r_a, r_b, omega)
    return bulk + g_scattering(environment, r_a, r_b, omega)


def validity_flags(environment, points, omega):
    """Warnings about evaluating a closed form outside its regime."""
    flags = []
    k = omega / units.c
    points = [_point(p) for p in points]
    if isinstance(environment, Surface):
        for p in points:
            if k * environment.height(p) > NONRETARDED_LIMIT:
                flags.append("surface:retardation")
                break
    elif isinstance(environment, SphericalCavity):
        if k * environment.radius < RETARDED_LIMIT:
            flags.append("cavity:not-retarded")
        if any(np.linalg.norm(p) > 0 for p in points):
            flags.append("cavity:off-centre")
    elif isinstance(environment, MediatorAtom) and environment.nonretarded:
        r_m = np.asarray(environment.position)
        if any(k * np.linalg.norm(p - r_m) > NONRETARDED_LIMIT for p in points):
            flags.append("mediator:retardation")
    if (getattr(environment, "nonretarded", False) or isinstance(environment, Surface)) and len(points) == 2:
        if k * np.linalg.norm(points[1] - points[0]) > NONRETARDED_LIMIT:
            flags.append("bulk:retardation")
    return flags
