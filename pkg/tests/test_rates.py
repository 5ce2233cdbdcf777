import math

import numpy as np
import pytest

from mqedrates import greens, rates, units
from mqedrates.errors import DomainError, GeometryError

from conftest import rel

OMEGA = units.ev_to_angular_frequency(40.94)
GAMMA = 5.65e9
SIGMA = 0.35e-22
A = 0.457e-10


def data(**kw):
    base = dict(omega=OMEGA, gamma=GAMMA, sigma=SIGMA, auger_radius=A)
    base.update(kw)
    return rates.AtomicTransitionData(**base)


def lebedev26():
    pts, wts = [], []
    for i in range(3):
        for s in (1, -1):
            v = np.zeros(3)
            v[i] = s
            pts.append(v)
            wts.append(1 / 21)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        for si in (1, -1):
            for sj in (1, -1):
                v = np.zeros(3)
                v[i], v[j] = si, sj
                pts.append(v / math.sqrt(2))
                wts.append(4 / 105)
    for sx in (1, -1):
        for sy in (1, -1):
            for sz in (1, -1):
                pts.append(np.array([sx, sy, sz]) / math.sqrt(3))
                wts.append(27 / 840)
    return np.array(pts), np.array(wts)


def fibonacci_sphere(n):
    i = np.arange(n) + 0.5
    phi = np.arccos(1 - 2 * i / n)
    theta = math.pi * (1 + 5 ** 0.5) * i
    return np.stack([np.cos(theta) * np.sin(phi), np.sin(theta) * np.sin(phi), np.cos(phi)], axis=1)


# -- data validation -----------------------------------------------------------

@pytest.mark.parametrize("field,value", [("omega", 0.0), ("gamma", -1.0), ("sigma", -1e-22),
                                         ("auger_radius", 0.0), ("separation", -1.0)])
def test_transition_data_invariants(field, value):
    with pytest.raises(DomainError):
        data(**{field: value})


def test_missing_auger_radius():
    with pytest.raises(DomainError):
        rates.auger_rate_free(data(auger_radius=None))


# -- spontaneous ---------------------------------------------------------------

def test_spontaneous_free_space_is_gamma():
    for orientation in ("iso", (1, 2, 3)):
        res = rates.spontaneous_rate(data(), greens.FreeSpace(), [0, 0, 0], orientation)
        assert rel(res.absolute, GAMMA) < 1e-12
        assert res.relative_to_free_space == pytest.approx(1.0, abs=1e-12)


def test_dipole_strength_round_trip():
    d2 = rates.dipole_sq_from_gamma(GAMMA, OMEGA)
    assert units.mu0 * OMEGA ** 3 * d2 / (3 * math.pi * units.hbar * units.c) == pytest.approx(GAMMA, rel=1e-14, abs=0)


def test_spontaneous_mediator_closed_form_factor_four():
    # lambda / (2 pi r) = 1 and Im alpha_vol = r^3 give 1 + 3 = 4
    r = 1.0
    omega = units.c / r
    med = greens.MediatorAtom(1j * r ** 3, (r, 0, 0), nonretarded=True)
    res = rates.spontaneous_rate(data(omega=omega), med, [0, 0, 0])
    assert res.relative_to_free_space == pytest.approx(4.0, rel=1e-12, abs=0)


def test_spontaneous_mediator_real_alpha_leaves_rate_unchanged():
    med = greens.MediatorAtom(0.7, (1.0, 0, 0), nonretarded=True)
    res = rates.spontaneous_rate(data(omega=units.c), med, [0, 0, 0])
    assert res.relative_to_free_space == pytest.approx(1.0, abs=1e-13)


def test_spontaneous_surface_purcell_sign():
    # an absorbing surface (Im r > 0) speeds emission up, a lossless one leaves it unchanged
    p = [0, 0, 1e-9]
    lossy = rates.spontaneous_rate(data(), greens.Surface(2j), p).relative
    lossless = rates.spontaneous_rate(data(), greens.Surface(2.0), p).relative
    assert lossy > 1
    assert lossless == pytest.approx(1.0, abs=1e-14)


# -- ICD -----------------------------------------------------------------------

def test_icd_nonretarded_closed_form_matches_trace():
    r = 1e-3 * units.c / OMEGA
    d = data(separation=r)
    trace = rates.icd_rate(d, greens.FreeSpace(nonretarded=True), [0, 0, 0], [0, r, 0]).absolute
    assert rel(trace, rates.icd_rate_free_nonretarded(d, r)) < 1e-10


def test_icd_retarded_route_agrees_at_short_range():
    r = 1e-3 * units.c / OMEGA
    d = data()
    trace = rates.icd_rate(d, greens.FreeSpace(), [0, 0, 0], [r, 0, 0]).absolute
    # retardation corrections are of order (kr)^2
    assert rel(trace, rates.icd_rate_free_nonretarded(d, r)) < 1e-6


def test_icd_nonretarded_oracle_by_hand():
    # Tr[(I - 3ee)^2] = 6 inserted in 2 pi gamma sigma Tr[G G*]
    r = 3e-10
    k = OMEGA / units.c
    expected = 2 * math.pi * GAMMA * SIGMA * 6 / (4 * math.pi * k ** 2 * r ** 3) ** 2
    assert rel(rates.icd_rate_free_nonretarded(data(), r), expected) < 1e-13


def test_icd_inverse_sixth_power():
    r1 = rates.icd_rate_free_nonretarded(data(), 3e-10)
    r2 = rates.icd_rate_free_nonretarded(data(), 6e-10)
    assert r1 / r2 == pytest.approx(64.0, rel=1e-13, abs=0)


def test_icd_coincident_atoms_rejected():
    with pytest.raises(GeometryError):
        rates.icd_rate(data(), greens.FreeSpace(), [0, 0, 0], [0, 0, 0])
    with pytest.raises(GeometryError):
        rates.icd_rate_free_nonretarded(data(), 0.0)


def test_m_case_decomposition(rng):
    env = greens.Surface(1.41 + 1.41j)
    for _ in range(20):
        donor = rng.uniform(0.5, 3.0, size=3) * 1e-10
        acceptor = rng.uniform(0.5, 3.0, size=3) * 1e-10
        iso = rates.icd_rate(data(), env, donor, acceptor, "iso").absolute
        m0 = rates.icd_rate(data(), env, donor, acceptor, "m0").absolute
        m1 = rates.icd_rate(data(), env, donor, acceptor, "mpm1").absolute
        assert rel(m0 / 3 + 2 * m1 / 3, iso) < 1e-10


def test_fixed_orientation_sphere_average():
    env = greens.Surface(-2.0)
    donor, acceptor = [0, 0, 2e-10], [3.01e-10, 0, 2e-10]
    iso = rates.icd_rate(data(), env, donor, acceptor, "iso").absolute
    pts, wts = lebedev26()
    leb = sum(w * rates.icd_rate(data(), env, donor, acceptor, u).absolute for u, w in zip(pts, wts))
    assert rel(leb, iso) < 1e-3
    fib = np.mean([rates.icd_rate(data(), env, donor, acceptor, u).absolute for u in fibonacci_sphere(2000)])
    assert rel(fib, iso) < 1e-3


def test_fixed_orientation_acceptor_average_oracle(rng):
    # |u.G.v|^2 averaged over acceptor directions v equals u.G G†.u / 3
    env = greens.Surface(2j)
    donor, acceptor = np.array([0, 0, 2e-10]), np.array([1e-10, 2e-10, 4e-10])
    g = greens.g_total(env, donor, acceptor, OMEGA)
    u = rng.normal(size=3)
    u /= np.linalg.norm(u)
    pts, wts = lebedev26()
    avg = sum(w * abs(u @ g @ v) ** 2 for v, w in zip(pts, wts))
    pref = 2 * math.pi * GAMMA * SIGMA
    assert rel(rates.icd_rate(data(), env, donor, acceptor, u).absolute, pref * 3 * 3 * avg) < 1e-12


def test_orientation_errors():
    with pytest.raises(DomainError):
        rates.orientation_projector("m2", (0, 0, 1))
    with pytest.raises(DomainError):
        rates.orientation_projector("m0")
    with pytest.raises(DomainError):
        rates.orientation_projector((0, 0, 0))


def test_rate_result_bookkeeping(rng):
    env = greens.Surface(-2.0)
    res = rates.icd_rate(data(), env, [0, 0, 1e-10], [3e-10, 0, 1e-10])
    assert res.absolute >= 0
    assert res.absolute == pytest.approx(res.free_space * res.relative_to_free_space, rel=1e-12, abs=0)
    assert sum(res.decomposition.values()) == pytest.approx(res.absolute, rel=1e-12, abs=0)


def test_icd_rates_are_nonnegative(rng):
    for _ in range(50):
        env = greens.Surface(complex(*rng.uniform(-4, 4, size=2)))
        donor = rng.uniform(0.1, 3, size=3) * 1e-10
        acceptor = rng.uniform(0.1, 3, size=3) * 1e-10
        for o in ("iso", "m0", "mpm1"):
            assert rates.icd_rate(data(), env, donor, acceptor, o).absolute >= 0


# -- Auger ---------------------------------------------------------------------

def test_auger_trace_equals_closed_form():
    assert rel(rates.auger_rate_free(data()).absolute, rates.auger_rate_free_closed_form(data())) < 1e-12


def test_auger_hene_golden():
    assert rates.auger_rate_free(data()).absolute == pytest.approx(1.2365248254e13, rel=1e-9, abs=0)


def test_auger_radius_scaling_and_inverse():
    r1 = rates.auger_rate_free(data()).absolute
    r2 = rates.auger_rate_free(data(auger_radius=2 * A)).absolute
    assert r1 / r2 == pytest.approx(64.0, rel=1e-12, abs=0)
    a = rates.auger_radius_from_rate(r1, GAMMA, SIGMA, OMEGA)
    assert rel(a, A) < 1e-12
    assert rates.auger_radius_from_rate(64 * r1, GAMMA, SIGMA, OMEGA) == pytest.approx(A / 2, rel=1e-12, abs=0)
    with pytest.raises(DomainError):
        rates.auger_radius_from_rate(0.0, GAMMA, SIGMA, OMEGA)


def test_auger_surface_far_away_is_free():
    res = rates.auger_rate_environment(data(), greens.Surface(-2.0), [0, 0, 1e4 * A])
    assert res.relative_to_free_space == pytest.approx(1.0, abs=1e-9)


def test_auger_surface_factor_at_one_radius():
    res = rates.auger_rate_environment(data(), greens.Surface(-2.0), [0, 0, A])
    expected = 1 + 4 * math.sqrt(math.pi) + 9 * math.pi / 2
    assert res.relative_to_free_space == pytest.approx(expected, rel=1e-12, abs=0)
    assert expected == pytest.approx(22.2269823447761, rel=1e-12, abs=0)


def test_auger_mediator_closed_form():
    a, r = 0.1, 1.0
    for alpha in (0.3, -0.2, 0.1 + 0.05j):
        med = greens.MediatorAtom(alpha, (r, 0, 0), nonretarded=True)
        res = rates.auger_rate_environment(data(omega=units.c, auger_radius=a), med, [0, 0, 0])
        expected = (1 - 24 * math.sqrt(math.pi) * a ** 3 * alpha.real / r ** 6
                    + 216 * math.pi * a ** 6 * abs(alpha) ** 2 / r ** 12)
        assert rel(res.relative_to_free_space, expected) < 1e-12


def test_auger_pure():
    d = data(c_nkm=1 / 9)
    assert rel(rates.auger_rate_pure(d, greens.FreeSpace(), [0, 0, 0]).absolute,
               rates.auger_rate_free(data()).absolute) < 1e-12
    assert rates.auger_rate_pure(data(c_nkm=0.0), greens.FreeSpace(), [0, 0, 0]).absolute == 0.0
    env = greens.Surface(2j)
    one = rates.auger_rate_pure(data(c_nkm=0.3), env, [0, 0, A]).absolute
    two = rates.auger_rate_pure(data(c_nkm=0.6), env, [0, 0, A]).absolute
    assert two == pytest.approx(2 * one, rel=1e-13, abs=0)
    with pytest.raises(DomainError):
        rates.auger_rate_pure(data(), env, [0, 0, A])


def test_interference_zero_dipole(rng):
    g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    d = rng.normal(size=3) + 1j * rng.normal(size=3)
    assert rates.auger_interference_term(np.zeros(3), d, d, d, g, g, OMEGA, OMEGA) == 0


def test_interference_real_when_brackets_are_conjugate(rng):
    g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    d1, d2 = rng.normal(size=3) + 1j * rng.normal(size=3), rng.normal(size=3) + 1j * rng.normal(size=3)
    # second bracket d1*·conj(G)·d2* is the conjugate of d1·G·d2
    val = rates.auger_interference_term(d1, d2, d1.conj(), d2.conj(), g, g, OMEGA, OMEGA)
    assert abs(val.imag) <= 1e-12 * abs(val)
    assert val.real < 0


def test_interference_can_be_either_sign(rng):
    g = greens.g0_regularized(A, OMEGA)
    d = np.array([1.0, 0, 0]) * 1e-30
    pos = rates.auger_interference_term(d, d, d, d, g, g, OMEGA, OMEGA)
    neg = rates.auger_interference_term(d, d, d, -d, g, g, OMEGA, OMEGA)
    assert pos.real < 0 < neg.real
    assert neg == pytest.approx(-pos, rel=1e-12, abs=0)


def test_interference_density_scales():
    g = greens.g0_regularized(A, OMEGA)
    d = np.array([0, 1.0, 0]) * 1e-30
    one = rates.auger_interference_term(d, d, d, d, g, g, OMEGA, OMEGA)
    assert rates.auger_interference_term(d, d, d, d, g, g, OMEGA, OMEGA, density=3.0) == pytest.approx(3 * one, rel=1e-12, abs=0)
