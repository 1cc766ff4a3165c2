"""Closed-form hurricane-like rotational flow for a gamma = 2 gas.

The critical-rotation case (initial Mach number sqrt(2)) admits an exact
self-similar solution: a rigidly-expanding near field with a one-point
vacuum at the origin, matched continuously to a constant-density rotating
far field at radius r = 2t sqrt(p'(rho0)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GAMMA = 2.0


@dataclass(frozen=True)
class HurricaneParams:
    """Entropy constant A (p = A rho^gamma), rotation speed v0, far density."""

    a: float = 25.0
    v0: float = 10.0
    rho0: float = 1.0

    @property
    def sound_speed0(self) -> float:
        return float(np.sqrt(GAMMA * self.a * self.rho0 ** (GAMMA - 1.0)))

    @property
    def mach0(self) -> float:
        return abs(self.v0) / self.sound_speed0

    @property
    def is_critical(self) -> bool:
        return abs(self.mach0 - np.sqrt(2.0)) < 1e-12


def hurricane_initial(params: HurricaneParams, x, y):
    """Initial primitive field (rho, u, v, p): uniform density, rotational
    velocity v0 (sin th, -cos th), isentropic pressure."""
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    r = np.hypot(x, y)
    safe = np.where(r > 0.0, r, 1.0)
    sin_t, cos_t = y / safe, x / safe
    rho = np.full_like(x, params.rho0)
    u = params.v0 * sin_t
    v = -params.v0 * cos_t
    p = np.full_like(x, params.a * params.rho0 ** GAMMA)
    return rho, u, v, p


def hurricane_exact(params: HurricaneParams, x, y, t: float):
    """Exact primitive field (rho, u, v, p) of the critical case at t > 0."""
    if not params.is_critical:
        raise ValueError(
            f"exact solution requires the critical Mach number sqrt(2); "
            f"got M0 = {params.mach0:.6g}"
        )
    if not t > 0.0:
        raise ValueError("exact solution is defined for t > 0")
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    dp0 = GAMMA * params.a * params.rho0 ** (GAMMA - 1.0)  # p'(rho0)
    r = np.hypot(x, y)
    r_match = 2.0 * t * np.sqrt(dp0)
    near = r < r_match

    rho_n = r * r / (8.0 * params.a * t * t)
    u_n = (x + y) / (2.0 * t)
    v_n = (-x + y) / (2.0 * t)

    safe = np.where(r > 0.0, r, 1.0)
    sin_t, cos_t = y / safe, x / safe
    tang = np.sqrt(2.0 * dp0) * np.sqrt(np.maximum(r * r - 2.0 * t * t * dp0, 0.0))
    u_f = (2.0 * t * dp0 * cos_t + tang * sin_t) / safe
    v_f = (2.0 * t * dp0 * sin_t - tang * cos_t) / safe

    rho = np.where(near, rho_n, params.rho0)
    u = np.where(near, u_n, u_f)
    v = np.where(near, v_n, v_f)
    p = params.a * rho ** GAMMA
    return rho, u, v, p
