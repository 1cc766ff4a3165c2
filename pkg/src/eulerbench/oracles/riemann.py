"""Exact solution of the 1D Riemann problem for a gamma-law gas.

Star-region pressure comes from a safeguarded Newton iteration on the
standard pressure function (two-rarefaction initial guess, bisection
bracket as fallback), after which the solution is sampled self-similarly
in xi = x/t.  Vacuum-generating data (two rarefactions that separate) is
handled explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SHOCK, RAREFACTION = "shock", "rarefaction"

_PTOL = 1e-12
_MAXIT = 200


def _sound_speed(rho, p, gamma):
    return np.sqrt(gamma * p / rho)


def _f_side(p, rho_k, p_k, gamma):
    """Pressure function for one side and its derivative w.r.t. p."""
    c_k = _sound_speed(rho_k, p_k, gamma)
    gp1, gm1 = gamma + 1.0, gamma - 1.0
    if p > p_k:  # shock
        a_k = 2.0 / (gp1 * rho_k)
        b_k = gm1 / gp1 * p_k
        root = np.sqrt(a_k / (p + b_k))
        f = (p - p_k) * root
        df = root * (1.0 - 0.5 * (p - p_k) / (p + b_k))
    else:  # rarefaction
        f = 2.0 * c_k / gm1 * ((p / p_k) ** (0.5 * gm1 / gamma) - 1.0)
        df = (p / p_k) ** (-0.5 * gp1 / gamma) / (rho_k * c_k)
    return f, df


@dataclass
class RiemannSolution:
    """Exact solution structure; states are (rho, u, p) triples."""

    left: tuple
    right: tuple
    gamma: float
    pstar: float
    ustar: float
    rho_star_l: float
    rho_star_r: float
    left_wave: str
    right_wave: str
    vacuum: bool = False

    def sample(self, xi):
        """Primitive state (rho, u, p) at the self-similar point xi = x/t."""
        xi = np.asarray(xi, dtype=float)
        g = self.gamma
        gm1, gp1 = g - 1.0, g + 1.0
        rho_l, u_l, p_l = self.left
        rho_r, u_r, p_r = self.right
        c_l = _sound_speed(rho_l, p_l, g)
        c_r = _sound_speed(rho_r, p_r, g)

        def fan_left(xi):
            u = (2.0 / gp1) * (c_l + 0.5 * gm1 * u_l + xi)
            c = c_l - 0.5 * gm1 * (u - u_l)
            c = np.maximum(c, 0.0)
            rho = rho_l * (c / c_l) ** (2.0 / gm1)
            p = p_l * (c / c_l) ** (2.0 * g / gm1)
            return rho, u, p

        def fan_right(xi):
            u = (2.0 / gp1) * (-c_r + 0.5 * gm1 * u_r + xi)
            c = c_r + 0.5 * gm1 * (u - u_r)
            c = np.maximum(c, 0.0)
            rho = rho_r * (c / c_r) ** (2.0 / gm1)
            p = p_r * (c / c_r) ** (2.0 * g / gm1)
            return rho, u, p

        if self.vacuum:
            s_hl = u_l - c_l
            s_vl = u_l + 2.0 * c_l / gm1
            s_vr = u_r - 2.0 * c_r / gm1
            s_hr = u_r + c_r
            rf_l = fan_left(xi)
            rf_r = fan_right(xi)
            rho = np.select(
                [xi <= s_hl, xi < s_vl, xi <= s_vr, xi < s_hr],
                [rho_l + 0.0 * xi, rf_l[0], 0.0 * xi, rf_r[0]],
                rho_r + 0.0 * xi,
            )
            u = np.select(
                [xi <= s_hl, xi < s_vl, xi <= s_vr, xi < s_hr],
                [u_l + 0.0 * xi, rf_l[1], 0.0 * xi, rf_r[1]],
                u_r + 0.0 * xi,
            )
            p = np.select(
                [xi <= s_hl, xi < s_vl, xi <= s_vr, xi < s_hr],
                [p_l + 0.0 * xi, rf_l[2], 0.0 * xi, rf_r[2]],
                p_r + 0.0 * xi,
            )
            return rho, u, p

        ps, us = self.pstar, self.ustar
        conds, rhos, us_, ps_ = [], [], [], []

        if self.left_wave == SHOCK:
            s_l = u_l - c_l * np.sqrt(0.5 * gp1 / g * ps / p_l + 0.5 * gm1 / g)
            conds.append(xi <= s_l)
            rhos.append(rho_l + 0.0 * xi)
            us_.append(u_l + 0.0 * xi)
            ps_.append(p_l + 0.0 * xi)
            conds.append(xi <= us)
            rhos.append(self.rho_star_l + 0.0 * xi)
            us_.append(us + 0.0 * xi)
            ps_.append(ps + 0.0 * xi)
        else:
            c_star = c_l * (ps / p_l) ** (0.5 * gm1 / g)
            head, tail = u_l - c_l, us - c_star
            rf = fan_left(xi)
            conds += [xi <= head, xi < tail, xi <= us]
            rhos += [rho_l + 0.0 * xi, rf[0], self.rho_star_l + 0.0 * xi]
            us_ += [u_l + 0.0 * xi, rf[1], us + 0.0 * xi]
            ps_ += [p_l + 0.0 * xi, rf[2], ps + 0.0 * xi]

        if self.right_wave == SHOCK:
            s_r = u_r + c_r * np.sqrt(0.5 * gp1 / g * ps / p_r + 0.5 * gm1 / g)
            conds.append(xi <= s_r)
            rhos.append(self.rho_star_r + 0.0 * xi)
            us_.append(us + 0.0 * xi)
            ps_.append(ps + 0.0 * xi)
        else:
            c_star = c_r * (ps / p_r) ** (0.5 * gm1 / g)
            tail, head = us + c_star, u_r + c_r
            rf = fan_right(xi)
            conds += [xi < tail, xi < head]
            rhos += [self.rho_star_r + 0.0 * xi, rf[0]]
            us_ += [us + 0.0 * xi, rf[1]]
            ps_ += [ps + 0.0 * xi, rf[2]]

        rho = np.select(conds, rhos, rho_r + 0.0 * xi)
        u = np.select(conds, us_, u_r + 0.0 * xi)
        p = np.select(conds, ps_, p_r + 0.0 * xi)
        return rho, u, p


def exact_riemann(left, right, gamma: float) -> RiemannSolution:
    """Solve the Riemann problem for primitive states (rho, u, p)."""
    rho_l, u_l, p_l = (float(v) for v in left)
    rho_r, u_r, p_r = (float(v) for v in right)
    if min(rho_l, rho_r, p_l, p_r) <= 0.0:
        raise ValueError("Riemann data must have positive density and pressure")
    g = gamma
    gm1 = g - 1.0
    c_l = _sound_speed(rho_l, p_l, g)
    c_r = _sound_speed(rho_r, p_r, g)
    du = u_r - u_l

    if 2.0 * (c_l + c_r) / gm1 <= du:
        return RiemannSolution((rho_l, u_l, p_l), (rho_r, u_r, p_r), g,
                               0.0, 0.0, 0.0, 0.0, RAREFACTION, RAREFACTION,
                               vacuum=True)

    def fun(p):
        fl, dfl = _f_side(p, rho_l, p_l, g)
        fr, dfr = _f_side(p, rho_r, p_r, g)
        return fl + fr + du, dfl + dfr

    # two-rarefaction guess
    z = 0.5 * gm1 / g
    p = ((c_l + c_r - 0.5 * gm1 * du) / (c_l / p_l**z + c_r / p_r**z)) ** (1.0 / z)
    p = max(p, _PTOL)
    lo, hi = _PTOL, max(p_l, p_r)
    while fun(hi)[0] < 0.0:
        hi *= 10.0
    for _ in range(_MAXIT):
        f, df = fun(p)
        if abs(f) < _PTOL:
            break
        if f > 0.0:
            hi = min(hi, p)
        else:
            lo = max(lo, p)
        step = f / df
        p_new = p - step
        if not (lo < p_new < hi):
            p_new = 0.5 * (lo + hi)
        p = p_new
    else:
        raise RuntimeError("star-pressure iteration failed to converge")

    fl, _ = _f_side(p, rho_l, p_l, g)
    fr, _ = _f_side(p, rho_r, p_r, g)
    us = 0.5 * (u_l + u_r) + 0.5 * (fr - fl)

    gr = gm1 / (g + 1.0)
    if p > p_l:
        left_wave = SHOCK
        rs_l = rho_l * (p / p_l + gr) / (gr * p / p_l + 1.0)
    else:
        left_wave = RAREFACTION
        rs_l = rho_l * (p / p_l) ** (1.0 / g)
    if p > p_r:
        right_wave = SHOCK
        rs_r = rho_r * (p / p_r + gr) / (gr * p / p_r + 1.0)
    else:
        right_wave = RAREFACTION
        rs_r = rho_r * (p / p_r) ** (1.0 / g)

    return RiemannSolution((rho_l, u_l, p_l), (rho_r, u_r, p_r), g,
                           p, us, rs_l, rs_r, left_wave, right_wave)
