"""Kinetic BGK interface flux: moment tables, micro-slopes and the
time-integrated flux, checked against closed forms and frozen values from an
independent brute-force quadrature of the kinetic distribution."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from eulerbench.gks import (
    FULL, NEG, POS, CollisionTimeModel, InterfaceContext, Maxwellian,
    MomentTable, _quadrature_weights, collision_time, euler_flux,
    flux_expansion, interface_flux_pair, interface_state, micro_slope,
    time_coefficient,
)
from eulerbench.state import GasModel, to_conserved

GAS = GasModel.from_gamma(1.4)
DT = 0.01


def make_table(rho=1.3, u=0.4, v=-0.2, lam=0.9, k=3.0):
    return MomentTable(Maxwellian(np.array([rho]), np.array([u]),
                                  np.array([v]), np.array([lam]), k))


# --- moment tables ----------------------------------------------------------


@pytest.mark.parametrize("n", range(7))
def test_full_range_u_moments_match_quadrature(n):
    tab = make_table()
    m = tab.m
    lam, u0 = float(m.lam[0]), float(m.u[0])
    exact, _ = quad(
        lambda c: (u0 + c) ** n * np.sqrt(lam / np.pi) * np.exp(-lam * c * c),
        -np.inf, np.inf,
    )
    assert float(tab.s(n, 0, 0, FULL)[0]) == pytest.approx(exact, rel=1e-9)


@pytest.mark.parametrize("n", range(7))
def test_half_range_u_moments_match_quadrature(n):
    tab = make_table(u=0.4)
    m = tab.m
    lam, u0 = float(m.lam[0]), float(m.u[0])

    def f(u):
        return u**n * np.sqrt(lam / np.pi) * np.exp(-lam * (u - u0) ** 2)

    pos, _ = quad(f, 0.0, np.inf)
    neg, _ = quad(f, -np.inf, 0.0)
    assert float(tab.s(n, 0, 0, POS)[0]) == pytest.approx(pos, rel=1e-9)
    assert float(tab.s(n, 0, 0, NEG)[0]) == pytest.approx(neg, rel=1e-9)


def test_half_ranges_sum_to_full_range():
    tab = make_table()
    for n in range(7):
        full = tab.s(n, 0, 0, FULL)
        assert float(tab.s(n, 0, 0, POS)[0] + tab.s(n, 0, 0, NEG)[0]) == pytest.approx(
            float(full[0]), rel=1e-12
        )


def test_internal_energy_moments():
    # <xi^2> = k/(2 lam), <xi^4> = k(k+2)/(4 lam^2)
    tab = make_table(lam=0.7, k=3.0)
    assert float(tab.s(0, 0, 1, FULL)[0]) == pytest.approx(3.0 / (2.0 * 0.7))
    assert float(tab.s(0, 0, 2, FULL)[0]) == pytest.approx(15.0 / (4.0 * 0.49))


def test_maxwellian_conserved_round_trip():
    w = to_conserved(np.array([1.2, 0.5, -0.3, 2.0]), GAS)
    m = Maxwellian.from_conserved(w, GAS)
    assert np.allclose(m.conserved(), w, rtol=1e-14)


def test_psi_moments_recover_conserved_state():
    # rho <psi> over the full range equals the conserved state itself
    tab = make_table()
    w = tab.m.conserved()
    assert np.allclose(tab.m.rho * tab.psi(0, 0, FULL), w, rtol=1e-13)


# --- expansion coefficients -------------------------------------------------


@given(
    m1=st.floats(-1, 1), m2=st.floats(-1, 1),
    m3=st.floats(-1, 1), m4=st.floats(-1, 1),
)
@settings(max_examples=100)
def test_micro_slope_solves_moment_system(m1, m2, m3, m4):
    tab = make_table()
    m_vec = np.array([[m1], [m2], [m3], [m4]])
    c = micro_slope(m_vec, tab.m)
    back = tab.contract(c, 0, 0, FULL)
    assert np.allclose(back, m_vec, rtol=1e-11, atol=1e-12)


def test_time_coefficient_cancels_space_moments():
    rng = np.random.default_rng(5)
    tab = make_table()
    ax = rng.normal(size=(4, 1))
    ay = rng.normal(size=(4, 1))
    at = time_coefficient(ax, ay, tab)
    total = (
        tab.contract(ax, 1, 0, FULL)
        + tab.contract(ay, 0, 1, FULL)
        + tab.contract(at, 0, 0, FULL)
    )
    assert np.max(np.abs(total)) < 1e-12


def test_interface_state_of_equal_sides_is_that_state():
    tab = make_table()
    w0, _ = interface_state(tab, tab, GAS)
    assert np.allclose(w0, tab.m.conserved(), rtol=1e-13)


# --- time-quadrature kernels ------------------------------------------------


def test_quadrature_weights_match_numeric_integrals():
    tau, delta = 0.37, 0.8
    kernels = [
        lambda t: 1.0 - np.exp(-t / tau),
        lambda t: tau * (-1.0 + np.exp(-t / tau)) + t * np.exp(-t / tau),
        lambda t: t - tau * (1.0 - np.exp(-t / tau)),
        lambda t: np.exp(-t / tau),
        lambda t: t * np.exp(-t / tau),
    ]
    qs = _quadrature_weights(np.array([tau]), delta)
    for q, kern in zip(qs, kernels):
        exact, _ = quad(kern, 0.0, delta)
        assert float(q[0]) == pytest.approx(exact, rel=1e-12, abs=1e-15)


def test_quadrature_weights_vanishing_tau():
    q0, q1, q2, q3, q4 = _quadrature_weights(np.array([0.0]), 0.5)
    assert float(q0[0]) == pytest.approx(0.5)            # pure equilibrium
    assert float(q2[0]) == pytest.approx(0.125)          # int t dt
    for q in (q1, q3, q4):
        assert float(q[0]) == 0.0


def test_collision_time_model():
    model = CollisionTimeModel()
    assert float(collision_time(1.0, 1.0, 0.01, model)) == pytest.approx(5e-4)
    tau = float(collision_time(1.0, 3.0, 0.01, model))
    assert tau == pytest.approx((0.05 + 0.5) * 0.01)


def test_flux_expansion_exact_for_linear_flux_history():
    # if F(t) = F0 + Ft * t, the two half/full integrals invert exactly
    F0 = np.array([1.0, -2.0, 0.5, 3.0])
    Ft = np.array([0.2, 0.7, -0.1, 0.4])
    dt = 0.02

    def integral(T):
        return F0 * T + 0.5 * Ft * T * T

    f0, ft = flux_expansion(integral(0.5 * dt), integral(dt), dt)
    assert np.allclose(f0, F0, rtol=1e-12)
    assert np.allclose(ft, Ft, rtol=1e-10)


# --- the assembled interface flux -------------------------------------------


def _uniform_ctx(prim):
    rho, u, v, p = prim
    w = to_conserved(np.asarray(prim), GAS).reshape(4, 1)
    z = np.zeros_like(w)
    return w, z


def test_uniform_state_yields_exact_euler_flux():
    prim = np.array([1.3, 0.7, -0.4, 2.1])
    w, z = _uniform_ctx(prim)
    f0, ft = interface_flux_pair(w, w, z, z, z, z, z, z, DT, GAS,
                                 CollisionTimeModel())
    fex = euler_flux(prim.reshape(4, 1), GAS)
    assert np.max(np.abs(f0 - fex)) < 1e-13
    assert np.max(np.abs(ft)) < 1e-12


def test_vanishing_tau_recovers_equilibrium_flux():
    # with tau -> 0 and no slopes the flux is the Euler flux of the merged
    # interface state
    wl = np.array([1.0, 0.0, 0.0, 2.5]).reshape(4, 1)
    wr = np.array([0.125, 0.0, 0.0, 0.25]).reshape(4, 1)
    z = np.zeros_like(wl)
    ctx = InterfaceContext(wl, wr, z, z, z, z, z, z, GAS)
    int_full = ctx.integrated_flux(np.array([1e-14]), DT)
    g0 = ctx.tab_0.m
    q0 = np.stack([g0.rho, g0.u, g0.v, 0.5 * g0.rho / g0.lam])
    assert np.max(np.abs(int_full / DT - euler_flux(q0, GAS))) < 1e-11


def test_symmetric_interface_has_zero_mass_and_energy_flux():
    # mirrored states: the interface is a stagnation plane
    wl = to_conserved(np.array([1.1, 0.6, 0.2, 1.4]), GAS).reshape(4, 1)
    wr = wl.copy()
    wr[1] = -wr[1]
    z = np.zeros_like(wl)
    f0, ft = interface_flux_pair(wl, wr, z, z, z, z, z, z, DT, GAS,
                                 CollisionTimeModel())
    assert abs(float(f0[0])) < 1e-14
    assert abs(float(f0[3])) < 1e-14


# frozen reference: independent brute-force quadrature of the validated
# kinetic distribution (24-pt Gauss-Hermite in v, generalized Gauss-Laguerre
# in the internal energy variable, adaptive quadrature in u, 40-pt
# Gauss-Legendre in time); agreement was 2.2e-11 relative or better
FROZEN_WL = np.array([1.1, 0.25, -0.1, 2.8])
FROZEN_WR = np.array([0.9, -0.15, 0.2, 2.2])
FROZEN_SLOPES = np.array([
    [0.00036904600724477, 0.08962366125254097, -0.08224135660866527, -0.26717755162718226],
    [-0.13640123555151676, -0.2974939664989387, 0.01804308077923154, 0.40206457366636006],
    [-0.14766195556539888, -0.18614246994598213, 0.14695261505555945, 0.10706610244801822],
    [0.03162427469936956, -0.2791404134124614, -0.00877554673898205, 0.20859095833748634],
    [-0.4032643641855246, -0.13728472831206545, -0.5703668219402532, -0.38686132193549283],
    [-0.5525205113375197, -0.07052733932240438, -0.3802339444331109, 0.08137930764651045],
])
FROZEN_CASES = {
    5.4999999999999995e-05: [0.0014521960576653649, 0.012088853932100518,
                             6.0349569202987235e-05, 0.0052183551362394711],
    0.008: [0.0014320488100794601, 0.012911063967704601,
            -0.00079788205015725853, 0.0051528952863033623],
}


@pytest.mark.parametrize("tau", sorted(FROZEN_CASES))
def test_integrated_flux_matches_frozen_kinetic_quadrature(tau):
    wl = FROZEN_WL.reshape(4, 1)
    wr = FROZEN_WR.reshape(4, 1)
    slopes = [s.reshape(4, 1) for s in FROZEN_SLOPES]
    ctx = InterfaceContext(wl, wr, *slopes, GAS)
    got = ctx.integrated_flux(np.array([tau]), DT)[:, 0]
    ref = np.array(FROZEN_CASES[tau])
    assert np.allclose(got, ref, rtol=5e-11, atol=1e-16)
