"""
Derived quantities: the channel-comparison ratio matrix, surface-modified
rates and branching ratios, donor-position scans and cavity estimates.

Surface geometries put the surface at ``z = 0`` with vacuum above. The
donor sits at height ``dr``; in the parallel geometry the acceptor is at
the same height a distance ``r_ab`` along x, in the perpendicular geometry
it is ``r_ab`` further away from the surface.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from mqedrates import greens, rates, units
from mqedrates.errors import DomainError, GeometryError

SQRT_PI = math.sqrt(math.pi)

RATE_LABELS = ("gamma_s0", "gamma_a0", "gamma_icd", "delta_gamma_s", "delta_gamma_a")
GEOMETRIES = ("parallel", "perpendicular")

# the scans below only use quasi-static tensors, whose ratios do not depend
# on frequency; k = 1/m keeps every Angstrom-scale length deep in that regime
_NR_OMEGA = units.c


# --------------------------------------------------------------------------
# ratio matrix
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LengthScales:
    """
    Length scales of the rate comparison (all in m).

    ``alpha_length`` carries the sign of Re(alpha_vol): alpha_vol = ±|a_alpha|^3.
    ``im_alpha_volume`` is Im(alpha_vol) in m^3.
    """
    wavelength: float
    separation: float
    auger_radius: float
    sigma_radius: float
    alpha_length: float = 0.0
    im_alpha_volume: float = 0.0

    def __post_init__(self):
        for name in ("wavelength", "separation", "auger_radius", "sigma_radius"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")

    @classmethod
    def from_physical(cls, omega, separation, auger_radius, sigma, alpha_volume=0j):
        alpha_volume = complex(alpha_volume)
        return cls(
            wavelength=units.wavelength(omega),
            separation=separation,
            auger_radius=auger_radius,
            sigma_radius=math.sqrt(sigma / math.pi),
            alpha_length=math.copysign(abs(alpha_volume.real) ** (1 / 3), alpha_volume.real),
            im_alpha_volume=alpha_volume.imag,
        )


def ratio_table(scales):
    """
    5x5 matrix ``T[i, j] = rate_i / rate_j`` for i >= j over
    ``RATE_LABELS``; entries above the diagonal are NaN.

    The rates compared are the free-space spontaneous, Auger and ICD rates
    and the first-order corrections that a second (mediating) atom adds to
    the spontaneous and the Auger rate. ICD and Auger share one
    photoionisation radius.
    """
    lam, r, a = scales.wavelength, scales.separation, scales.auger_radius
    a_sig, im_al = scales.sigma_radius, scales.im_alpha_volume
    a_al = abs(scales.alpha_length)
    sign = -1.0 if scales.alpha_length > 0 else 1.0   # the ∓ of the Auger correction
    lr = lam / (2 * math.pi * r)
    la = lam / (4 * math.pi ** 1.5 * a)
    ar = 2 * SQRT_PI * a / r
    sa = a_sig / (2 * SQRT_PI * a)
    pa = a_al / (2 * SQRT_PI * a)

    t = np.full((5, 5), np.nan)
    np.fill_diagonal(t, 1.0)
    t[1, 0] = 2 * math.pi ** 2 / 3 * la ** 4 * sa ** 2
    t[2, 0] = 0.75 * lr ** 4 * (a_sig / r) ** 2
    t[2, 1] = 9 / (8 * math.pi ** 2) * ar ** 6
    t[3, 0] = 3 * lr ** 3 * im_al / r ** 3
    t[3, 1] = 9 / math.pi * ar ** 6 * im_al / (a_sig ** 2 * lam)
    t[3, 2] = 8 * math.pi * im_al / (a_sig ** 2 * lam)
    t[4, 0] = sign * 2 * math.pi * lr ** 4 * (a_sig / r) ** 2 * pa ** 3
    t[4, 1] = sign * 3 / math.pi * (a_al / r) ** 3 * ar ** 3
    t[4, 2] = sign * 8 * math.pi / 3 * pa ** 3
    if im_al == 0:
        t[4, 3] = math.copysign(math.inf, sign) if a_al else math.nan
    else:
        t[4, 3] = sign * 2 * math.pi / 3 * a_al ** 3 / im_al * sa ** 2 * la
    return t


# --------------------------------------------------------------------------
# closed-form environment factors
# --------------------------------------------------------------------------

def mediator_spontaneous_relative(wavelength, separation, im_alpha_volume):
    """Quasi-static Γ_s/Γ_s0 next to a polarisable atom."""
    return 1 + 3 * (wavelength / (2 * math.pi * separation)) ** 3 * im_alpha_volume / separation ** 3


def mediator_auger_relative(auger_radius, separation, alpha_volume):
    """Quasi-static Γ_A/Γ_A0 next to a polarisable atom."""
    a, r = auger_radius, separation
    alpha_volume = complex(alpha_volume)
    return (1 - 24 * SQRT_PI * a ** 3 * alpha_volume.real / r ** 6
            + 216 * math.pi * a ** 6 * abs(alpha_volume) ** 2 / r ** 12)


def surface_auger_relative(r_nr, dr, auger_radius):
    """Closed-form Γ_A/Γ_A0 at height ``dr`` above a surface."""
    if not (dr > 0 and auger_radius > 0):
        raise GeometryError("surface distance and Auger radius must be positive")
    r_nr = complex(r_nr)
    x = auger_radius / dr
    return 1 - 2 * SQRT_PI * r_nr.real * x ** 3 + 9 * math.pi * abs(r_nr) ** 2 * x ** 6 / 8


def surface_icd_relative_closed(geometry, r_nr, dr, r_ab):
    """
    Closed-form isotropic Γ_ICD/Γ_ICD0. ``dr`` is the donor height; the
    vertical donor-image distance is ``2 dr`` in the parallel geometry and
    ``2 dr + r_ab`` in the perpendicular one.
    """
    if not (dr > 0 and r_ab > 0):
        raise GeometryError("surface distance and separation must be positive")
    r_nr = complex(r_nr)
    if geometry == "perpendicular":
        rho = r_ab / (2 * dr + r_ab)
        return 1 + 2 * r_nr.real * rho ** 3 / 3 + abs(r_nr) ** 2 * rho ** 6
    if geometry == "parallel":
        x = (2 * dr / r_ab) ** 2
        return 1 - r_nr.real * (x + 4) / (3 * (x + 1) ** 2.5) + abs(r_nr) ** 2 / (x + 1) ** 3
    raise DomainError(f"unknown geometry {geometry!r}")


def surface_positions(geometry, dr, r_ab):
    """Donor and acceptor positions above a z-normal surface at z = 0."""
    donor = np.array([0.0, 0.0, dr])
    if geometry == "parallel":
        return donor, np.array([r_ab, 0.0, dr])
    if geometry == "perpendicular":
        return donor, np.array([0.0, 0.0, dr + r_ab])
    raise DomainError(f"unknown geometry {geometry!r}")


def _nr_data(sigma=1.0, auger_radius=None):
    return rates.AtomicTransitionData(omega=_NR_OMEGA, gamma=1.0, sigma=sigma, auger_radius=auger_radius)


def surface_icd_relative(geometry, orientation, r_nr, dr, r_ab):
    """
    Γ_ICD/Γ_ICD0 near a surface. Isotropic donors use the closed forms;
    m0 / mpm1 go through the oriented trace pipeline with the
    donor-acceptor axis as quantisation axis.
    """
    if not (dr > 0 and r_ab > 0):
        raise GeometryError("surface distance and separation must be positive")
    if orientation == "iso":
        return surface_icd_relative_closed(geometry, r_nr, dr, r_ab)
    return surface_icd_relative_trace(geometry, orientation, r_nr, dr, r_ab)


def surface_icd_relative_trace(geometry, orientation, r_nr, dr, r_ab):
    donor, acceptor = surface_positions(geometry, dr, r_ab)
    res = rates.icd_rate(_nr_data(), greens.Surface(r_nr), donor, acceptor, orientation)
    return res.relative_to_free_space


def surface_auger_relative_trace(r_nr, dr, auger_radius):
    res = rates.auger_rate_environment(_nr_data(auger_radius=auger_radius),
                                       greens.Surface(r_nr), np.array([0.0, 0.0, dr]))
    return res.relative_to_free_space


# --------------------------------------------------------------------------
# branching ratio
# --------------------------------------------------------------------------

@dataclass
class BranchingResult:
    B: float
    B0: float
    sigma_ratio: float
    validity_flags: list = field(default_factory=list)

    @property
    def B_over_B0(self):
        return self.B / self.B0

    @property
    def B_in_cross_section_units(self):
        return self.B / self.sigma_ratio

    @property
    def B0_in_cross_section_units(self):
        return self.B0 / self.sigma_ratio


def branching_ratio(icd_data, auger_data, environment, donor, acceptor, orientation="iso", axis=None):
    """
    ``B = Γ_ICD / Γ_A`` in ``environment`` and ``B0`` from the matching
    free-space rates. The Auger rate is evaluated at the donor.
    """
    if icd_data.omega != auger_data.omega or icd_data.gamma != auger_data.gamma:
        raise DomainError("ICD and Auger must start from the same donor transition")
    icd = rates.icd_rate(icd_data, environment, donor, acceptor, orientation, axis)
    auger = rates.auger_rate_environment(auger_data, environment, donor)
    if not auger.absolute > 0 or not auger.free_space > 0:
        raise DomainError("Auger rate vanishes; branching ratio undefined")
    return BranchingResult(
        B=icd.absolute / auger.absolute,
        B0=icd.free_space / auger.free_space,
        sigma_ratio=icd_data.sigma / auger_data.sigma,
        validity_flags=sorted(set(icd.validity_flags + auger.validity_flags)),
    )


def surface_branching(geometry, orientation, r_nr, dr, r_ab, auger_radius):
    """B/B0 near a surface via the trace pipeline (quasi-static, dimensionless inputs allowed)."""
    donor, acceptor = surface_positions(geometry, dr, r_ab)
    res = branching_ratio(_nr_data(auger_radius=auger_radius), _nr_data(auger_radius=auger_radius),
                          greens.Surface(r_nr), donor, acceptor, orientation)
    return res.B_over_B0


def surface_branching_closed(geometry, r_nr, dr, r_ab, auger_radius):
    """Isotropic B/B0 from the closed-form surface factors."""
    return (surface_icd_relative_closed(geometry, r_nr, dr, r_ab)
            / surface_auger_relative(r_nr, dr, auger_radius))


def free_branching_cross_section_units(separation, auger_radius):
    """B0 / (σ_ICD/σ_A) in free space: (9/8π²)(2√π a / r)^6."""
    return 9 / (8 * math.pi ** 2) * (2 * SQRT_PI * auger_radius / separation) ** 6


# --------------------------------------------------------------------------
# 2-D donor scan
# --------------------------------------------------------------------------

@dataclass
class SweepGrid:
    """
    Tabulated scan results. ``columns`` names carry a unit suffix in
    square brackets; ``rows`` are in row-major grid order.
    """
    columns: list
    rows: list = field(default_factory=list)
    shape: tuple = ()

    def column(self, name):
        i = self.columns.index(name)
        return np.array([row[i] for row in self.rows])


CONTOUR_COLUMNS = [
    "x [m]", "z [m]", "r_ab [m]", "B/sigma_ratio [1]", "B0/sigma_ratio [1]", "B/B0 [1]", "status",
]


def contour_point(acceptor, donor, r_nr, auger_radius, orientation="iso"):
    """Branching quantities for one donor position (σ ratio divided out)."""
    data = _nr_data(auger_radius=auger_radius)
    res = branching_ratio(data, data, greens.Surface(r_nr), donor, acceptor, orientation)
    return res.B_in_cross_section_units, res.B0_in_cross_section_units, res.B_over_B0


def contour_scan(acceptor, xs, zs, r_nr, auger_radius, orientation="iso"):
    """
    Scan the donor over the (x, z) plane through the acceptor (surface
    normal z, surface at z = 0). Invalid points (on/below the surface or
    on the acceptor) get NaN values and a status string instead of
    aborting the scan.
    """
    acceptor = np.asarray(acceptor, dtype=float)
    grid = SweepGrid(columns=list(CONTOUR_COLUMNS), shape=(len(zs), len(xs)))
    for z in zs:
        for x in xs:
            donor = np.array([x, acceptor[1], z])
            r_ab = float(np.linalg.norm(donor - acceptor))
            try:
                values = contour_point(acceptor, donor, r_nr, auger_radius, orientation)
                status = "ok"
            except GeometryError as exc:
                values = (math.nan,) * 3
                status = "invalid: " + str(exc).split(";")[0]
            grid.rows.append((float(x), float(z), r_ab, *values, status))
    return grid


# --------------------------------------------------------------------------
# cavity estimates
# --------------------------------------------------------------------------

@dataclass
class CavityEstimate:
    Q: float
    s: float
    b_icd: float
    b_a: float
    enhancement_icd: float
    enhancement_auger: float
    validity_flags: list = field(default_factory=list)


def b_icd(omega, separation):
    """|Im G0(r, r)| / |Re G0(r_b, r_a)| = (w r / c)^3 / 3."""
    return (omega * separation / units.c) ** 3 / 3


def b_auger(omega, auger_radius):
    """|Im G0(r, r)| / |G~0| = 4 √π (w a / c)^3."""
    return 4 * SQRT_PI * (omega * auger_radius / units.c) ** 3


def scale_factor(wavelength, volume):
    """s = 3 λ^3 / (4 π^2 V)."""
    if not (wavelength > 0 and volume > 0):
        raise DomainError("wavelength and mode volume must be positive")
    return 3 * wavelength ** 3 / (4 * math.pi ** 2 * volume)


def cavity_enhancement(Q, s, b):
    """1 + 2 s b Q + (s b Q)^2."""
    x = s * b * Q
    return 1 + 2 * x + x * x


def cavity_estimate(Q, s, data):
    """Maximum ICD and Auger enhancement in a cavity of quality ``Q``."""
    if not (Q > 0 and s > 0):
        raise DomainError(f"Q and s must be positive, got Q={Q}, s={s}")
    if data.separation is None:
        raise DomainError("cavity estimate needs the donor-acceptor separation")
    bi = b_icd(data.omega, data.separation)
    ba = b_auger(data.omega, data.require_auger_radius())
    flags = []
    for name, b in (("icd", bi), ("auger", ba)):
        if b > 0.1:
            flags.append(f"cavity:b_{name}-not-small")
        if s * b * Q > 10:
            flags.append(f"cavity:sbQ-{name}-large")
    return CavityEstimate(
        Q=Q, s=s, b_icd=bi, b_a=ba,
        enhancement_icd=cavity_enhancement(Q, s, bi),
        enhancement_auger=cavity_enhancement(Q, s, ba),
        validity_flags=flags,
    )


def cavity_q_factor(cavity, omega, s):
    """Q implied by the centre tensor of a spherical cavity: s Q - 1 = |Im G1| / |Im G0|."""
    im_g1 = abs(np.imag(greens.g1_cavity_center(cavity, omega)[0, 0]))
    im_g0 = greens.im_g0_coincident(omega)[0, 0].real
    return (1 + im_g1 / im_g0) / s


# --------------------------------------------------------------------------
# 1-D surface-distance sweep
# --------------------------------------------------------------------------

SWEEP_COLUMNS = [
    "dr [m]", "dr/r_ab [1]", "dr/a [1]",
    "icd_relative [1]", "auger_relative [1]", "B/B0 [1]", "flags",
]


def surface_sweep(geometry, orientation, r_nr, drs, r_ab, auger_radius, omega=None):
    """
    Relative ICD and Auger rates and B/B0 versus donor height. With
    ``omega`` the rows carry retardation flags for that frequency.
    """
    grid = SweepGrid(columns=list(SWEEP_COLUMNS), shape=(len(drs),))
    env = greens.Surface(r_nr)
    for dr in drs:
        icd = surface_icd_relative_trace(geometry, orientation, r_nr, dr, r_ab)
        aug = surface_auger_relative_trace(r_nr, dr, auger_radius)
        flags = []
        if omega is not None:
            flags = greens.validity_flags(env, list(surface_positions(geometry, dr, r_ab)), omega)
        grid.rows.append((float(dr), dr / r_ab, dr / auger_radius, icd, aug, icd / aug, ";".join(flags)))
    return grid
