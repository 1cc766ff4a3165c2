"""Second-order gas-kinetic (BGK) interface flux.

The interface distribution is the integral solution of the BGK relaxation
equation: an equilibrium part driven by the merged interface Maxwellian and
its space/time slopes, plus an exponentially decaying initial part carried
by the half-space moments of the left/right reconstructed Maxwellians.  The
flux is integrated analytically in time over two horizons and fitted to a
linear-in-time expansion (F, dF/dt) for the two-stage fourth-order update.

All routines act on batches of interfaces: state quantities are arrays of
shape (...,) and vectors of shape (4, ...).  Every formula is written so
that mirrored input (normal velocity negated, left/right swapped) yields a
bitwise mirrored result; the benchmark symmetry invariants depend on it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .state import RHO, MX, MY, EN, GasModel, AdmissibilityError

FULL, POS, NEG = 0, 1, 2  # u-moment ranges: whole line, u > 0, u < 0

_NU = 7  # u moments 0..6
_NV = 6  # v moments 0..5 (cubic tangential contractions reach v^5)


@dataclass(frozen=True)
class CollisionTimeModel:
    """Relaxation-time model: a base fraction of the step plus a
    pressure-jump term that thickens numerical shock layers."""

    eps_base: float = 0.05
    c_jump: float = 1.0


def collision_time(p_l, p_r, dt, model: CollisionTimeModel, p_cl=None, p_cr=None):
    """Relaxation time at a batch of interfaces.

    The jump sensor uses the reconstructed interface pressures and, when the
    adjacent cell-average pressures are supplied, also their jump: a
    grid-scale (odd-even) oscillation reconstructs to equal interface values
    on both sides, so only the cell-average jump can detect it.
    """
    jump = np.abs((p_l - p_r) / (p_l + p_r))
    if p_cl is not None:
        jump = np.maximum(jump, np.abs((p_cl - p_cr) / (p_cl + p_cr)))
    return (model.eps_base + model.c_jump * jump) * dt


class Maxwellian:
    """Equilibrium state parameters (rho, u, v, lam) with internal degrees
    of freedom; `lam` is rho/(2 p)."""

    __slots__ = ("rho", "u", "v", "lam", "k")

    def __init__(self, rho, u, v, lam, k):
        self.rho = rho
        self.u = u
        self.v = v
        self.lam = lam
        self.k = k

    @classmethod
    def from_conserved(cls, w, gas: GasModel, where=None):
        rho = w[RHO]
        if not np.all(rho > 0.0):
            raise AdmissibilityError("non-positive density in Maxwellian", where)
        u = w[MX] / rho
        v = w[MY] / rho
        eint = w[EN] - 0.5 * rho * (u * u + v * v)
        if not np.all(eint > 0.0):
            raise AdmissibilityError("non-positive internal energy in Maxwellian", where)
        lam = 0.25 * (gas.k_internal + 2.0) * rho / eint
        return cls(rho, u, v, lam, gas.k_internal)

    def conserved(self):
        rho, u, v, lam = self.rho, self.u, self.v, self.lam
        e = 0.5 * rho * (u * u + v * v) + 0.25 * (self.k + 2.0) * rho / lam
        return np.stack([rho, rho * u, rho * v, e])


class MomentTable:
    """Normalized velocity moments of a Maxwellian.

    uf/up/um: full and half-range u-moments <u^n>, n = 0..6, stacked on
    axis 0; vf: full v-moments m = 0..5; xi2/xi4: internal-energy moments.
    """

    __slots__ = ("uf", "up", "um", "vf", "xi2", "xi4", "m")

    def __init__(self, m: Maxwellian):
        self.m = m
        u, v, lam = m.u, m.v, m.lam
        inv2lam = 0.5 / lam
        sq = np.sqrt(lam)

        uf = [np.ones_like(u), u]
        for n in range(_NU - 2):
            uf.append(u * uf[-1] + (n + 1) * inv2lam * uf[-2])
        self.uf = np.stack(uf)

        gauss = 0.5 * np.exp(-lam * u * u) / np.sqrt(np.pi * lam)
        up = [0.5 * erfc(-sq * u), None]
        um = [0.5 * erfc(sq * u), None]
        up[1] = u * up[0] + gauss
        um[1] = u * um[0] - gauss
        for n in range(_NU - 2):
            up.append(u * up[-1] + (n + 1) * inv2lam * up[-2])
            um.append(u * um[-1] + (n + 1) * inv2lam * um[-2])
        self.up = np.stack(up)
        self.um = np.stack(um)

        vf = [np.ones_like(v), v]
        for n in range(_NV - 2):
            vf.append(v * vf[-1] + (n + 1) * inv2lam * vf[-2])
        self.vf = np.stack(vf)

        self.xi2 = m.k * inv2lam
        self.xi4 = m.k * (m.k + 2.0) * inv2lam * inv2lam

    def _u(self, n, rng):
        return (self.uf, self.up, self.um)[rng][n]

    def s(self, a, b, c, rng):
        """<u^a v^b xi^(2c)> over the given u-range (normalized)."""
        out = self._u(a, rng)
        if b:
            out = out * self.vf[b]
        if c == 1:
            out = out * self.xi2
        elif c == 2:
            out = out * self.xi4
        return out

    def psi(self, a, b, rng):
        """4-vector <u^a v^b psi>, psi = (1, u, v, (u^2+v^2+xi^2)/2)."""
        return np.stack(
            [
                self.s(a, b, 0, rng),
                self.s(a + 1, b, 0, rng),
                self.s(a, b + 1, 0, rng),
                0.5 * ((self.s(a + 2, b, 0, rng) + self.s(a, b + 2, 0, rng)) + self.s(a, b, 1, rng)),
            ]
        )

    def psi_xi2(self, a, b, rng):
        """4-vector <u^a v^b xi^2 psi>."""
        return np.stack(
            [
                self.s(a, b, 1, rng),
                self.s(a + 1, b, 1, rng),
                self.s(a, b + 1, 1, rng),
                0.5 * ((self.s(a + 2, b, 1, rng) + self.s(a, b + 2, 1, rng)) + self.s(a, b, 2, rng)),
            ]
        )

    def contract(self, coef, a, b, rng):
        """4-vector <(coef . phi) u^a v^b psi> with
        phi = (1, u, v, (u^2+v^2+xi^2)/2) and coef shape (4, ...)."""
        quad = 0.5 * ((self.psi(a + 2, b, rng) + self.psi(a, b + 2, rng)) + self.psi_xi2(a, b, rng))
        return (
            (coef[0] * self.psi(a, b, rng) + coef[1] * self.psi(a + 1, b, rng))
            + (coef[2] * self.psi(a, b + 1, rng) + coef[3] * quad)
        )


def micro_slope(m_vec, mx: Maxwellian):
    """Solve <(c . phi) g psi> = m_vec (normalized by density) for the
    expansion coefficients c; closed form of the 4x4 moment system."""
    u, v, lam, k = mx.u, mx.v, mx.lam, mx.k
    quad = 0.5 * ((u * u + v * v) + 0.5 * (k + 2.0) / lam)
    r2 = m_vec[1] - u * m_vec[0]
    r3 = m_vec[2] - v * m_vec[0]
    r4 = m_vec[3] - quad * m_vec[0]
    c4 = (r4 - (u * r2 + v * r3)) * (8.0 * lam * lam / (k + 2.0))
    c2 = 2.0 * lam * r2 - u * c4
    c3 = 2.0 * lam * r3 - v * c4
    c1 = m_vec[0] - ((u * c2 + v * c3) + quad * c4)
    return np.stack([c1, c2, c3, c4])


def time_coefficient(coef_space_x, coef_space_y, table: MomentTable):
    """Temporal expansion coefficients from the vanishing-moment condition
    <(ax u + ay v + A) g psi> = 0 (full-range moments)."""
    rhs = -(table.contract(coef_space_x, 1, 0, FULL) + table.contract(coef_space_y, 0, 1, FULL))
    return micro_slope(rhs, table.m)


def interface_state(tab_l: MomentTable, tab_r: MomentTable, gas: GasModel):
    """Merged interface conserved state from the collision-term moment
    condition: upwind half-range moments of the two sides."""
    w0 = tab_l.m.rho * tab_l.psi(0, 0, POS) + tab_r.m.rho * tab_r.psi(0, 0, NEG)
    return w0, Maxwellian.from_conserved(w0, gas, where="interface state")


def _quadrature_weights(tau, delta):
    """Closed-form time integrals over [0, delta] of the five kernel
    weight functions appearing in the interface distribution."""
    tiny = tau > 0.0
    safe_tau = np.where(tiny, tau, 1.0)
    expf = np.where(tiny, np.exp(-delta / safe_tau), 0.0)
    one_m = 1.0 - expf
    q0 = delta - tau * one_m
    q1 = 2.0 * tau * tau * one_m - tau * delta * expf - tau * delta
    q2 = 0.5 * delta * delta - tau * delta + tau * tau * one_m
    q3 = tau * one_m
    q4 = tau * tau * one_m - tau * delta * expf
    return q0, q1, q2, q3, q4


class InterfaceContext:
    """Per-interface-batch moment tables and slope coefficients, reusable
    across the two integration horizons of the flux expansion."""

    def __init__(self, wl, wr, dwl_x, dwr_x, dwl_y, dwr_y, s1x, s1y, gas: GasModel):
        self.gas = gas
        self.tab_l = MomentTable(Maxwellian.from_conserved(wl, gas, where="left interface state"))
        self.tab_r = MomentTable(Maxwellian.from_conserved(wr, gas, where="right interface state"))
        self.w0, g0 = interface_state(self.tab_l, self.tab_r, gas)
        self.tab_0 = MomentTable(g0)
        self.p_l = 0.5 * self.tab_l.m.rho / self.tab_l.m.lam
        self.p_r = 0.5 * self.tab_r.m.rho / self.tab_r.m.lam

        ml, mr, m0 = self.tab_l.m, self.tab_r.m, self.tab_0.m
        self.a_lx = micro_slope(dwl_x / ml.rho, ml)
        self.a_rx = micro_slope(dwr_x / mr.rho, mr)
        self.a_ly = micro_slope(dwl_y / ml.rho, ml)
        self.a_ry = micro_slope(dwr_y / mr.rho, mr)
        self.a_l_t = time_coefficient(self.a_lx, self.a_ly, self.tab_l)
        self.a_r_t = time_coefficient(self.a_rx, self.a_ry, self.tab_r)
        self.abar_x = micro_slope(s1x / m0.rho, m0)
        self.abar_y = micro_slope(s1y / m0.rho, m0)
        self.abar_t = time_coefficient(self.abar_x, self.abar_y, self.tab_0)

    def integrated_flux(self, tau, delta):
        """Time integral over [0, delta] of the normal flux 4-vector."""
        q0, q1, q2, q3, q4 = _quadrature_weights(tau, delta)
        t0, tl, tr = self.tab_0, self.tab_l, self.tab_r
        eq = t0.m.rho * (
            q0 * t0.psi(1, 0, FULL)
            + q1 * (t0.contract(self.abar_x, 2, 0, FULL) + t0.contract(self.abar_y, 1, 1, FULL))
            + q2 * t0.contract(self.abar_t, 1, 0, FULL)
        )
        c_slope = -(tau * q3 + q4)
        c_time = -(tau * q3)
        left = tl.m.rho * (
            q3 * tl.psi(1, 0, POS)
            + c_slope * (tl.contract(self.a_lx, 2, 0, POS) + tl.contract(self.a_ly, 1, 1, POS))
            + c_time * tl.contract(self.a_l_t, 1, 0, POS)
        )
        right = tr.m.rho * (
            q3 * tr.psi(1, 0, NEG)
            + c_slope * (tr.contract(self.a_rx, 2, 0, NEG) + tr.contract(self.a_ry, 1, 1, NEG))
            + c_time * tr.contract(self.a_r_t, 1, 0, NEG)
        )
        return eq + (left + right)


def flux_expansion(int_half, int_full, dt):
    """Fit F(t) = F + dF/dt * t to the two time-integrated fluxes over
    [0, dt/2] and [0, dt]; exact for any linear-in-time flux."""
    f0 = (4.0 * int_half - int_full) / dt
    ft = 4.0 * (int_full - 2.0 * int_half) / (dt * dt)
    return f0, ft


def interface_flux_pair(wl, wr, dwl_x, dwr_x, dwl_y, dwr_y, s1x, s1y, dt, gas, tau_model):
    """(F, dF/dt, tau) for a batch of interfaces over horizon dt."""
    ctx = InterfaceContext(wl, wr, dwl_x, dwr_x, dwl_y, dwr_y, s1x, s1y, gas)
    tau = collision_time(ctx.p_l, ctx.p_r, dt, tau_model)
    int_full = ctx.integrated_flux(tau, dt)
    int_half = ctx.integrated_flux(tau, 0.5 * dt)
    f0, ft = flux_expansion(int_half, int_full, dt)
    return f0, ft


def euler_flux(q, gas: GasModel):
    """Analytic x-direction Euler flux of a primitive state (rho, u, v, p)."""
    rho, u, v, p = q[0], q[1], q[2], q[3]
    e = 0.5 * rho * (u * u + v * v) + p / (gas.gamma - 1.0)
    return np.stack([rho * u, rho * u * u + p, rho * u * v, u * (e + p)])
