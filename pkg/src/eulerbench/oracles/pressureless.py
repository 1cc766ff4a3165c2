"""Pressureless (large-Mach-limit) reference geometry for four-quadrant
contact-discontinuity interactions.

In the limit p -> 0 the gas follows straight characteristics, so a
self-similar point (xi, eta) = (x/t, y/t) belongs to quadrant i exactly
when the back-traced displacement (xi - U_i, eta - V_i) lies in that
quadrant's sign sector.  Same-sign vortex sheets spin all four quadrants
around the centre, so the gas vacates a pyramid that no quadrant claims
(vacuum).  Opposite-sign sheets drive the upper-left and lower-right
quadrants head-on into each other, so their streams interpenetrate on a
doubly-claimed region that carries a delta-shock of line density
sqrt(rho2 rho4).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SAME_SIGN, OPPOSITE_SIGN = "same-sign", "opposite-sign"

# region codes beyond the quadrant labels 1..4
VACUUM, DELTA_SUPPORT = 0, -1

# sign sector of each quadrant: (sx, sy) with sx*(xi-U) > 0, sy*(eta-V) > 0
_SECTORS = {1: (1, 1), 2: (-1, 1), 3: (-1, -1), 4: (1, -1)}


@dataclass(frozen=True)
class CornerStates:
    """Quadrant states (rho_i, U_i, V_i), i = 1..4 counterclockwise from
    the upper-right quadrant."""

    rho: tuple
    u: tuple
    v: tuple

    def __post_init__(self):
        for name in ("rho", "u", "v"):
            if len(getattr(self, name)) != 4:
                raise ValueError(f"{name} needs exactly four entries")


def _validate(kind: str, c: CornerStates):
    u, v = c.u, c.v
    ok = u[0] == u[1] and u[2] == u[3] and v[1] == v[2] and v[0] == v[3]
    if not ok:
        raise ValueError("corner velocities must pair up across the contacts")
    if kind == SAME_SIGN:
        # counterclockwise rotation: bottom row moves right, top row left,
        # right column up, left column down
        ok = u[2] > u[0] and v[0] > v[1]
    elif kind == OPPOSITE_SIGN:
        # upper-left and lower-right quadrants converge on the centre
        ok = u[0] > u[2] and v[0] > v[1]
    else:
        raise ValueError(f"unknown case kind {kind!r}")
    if not ok:
        raise ValueError(f"corner data violates the {kind} ordering")


@dataclass
class PressurelessField:
    """Region classification and piecewise state on a sample set."""

    region: np.ndarray  # 1..4 quadrant label, 0 vacuum, -1 delta support
    rho: np.ndarray
    u: np.ndarray
    v: np.ndarray
    delta_strength: float


def pressureless_reference(kind: str, corners: CornerStates, x, y, t: float,
                           center=(0.0, 0.0)) -> PressurelessField:
    """Classify self-similar points and return the limiting state.

    Vacuum points carry rho = 0; delta-support points carry rho = nan, with
    the line density sqrt(rho2 rho4) reported separately.
    """
    _validate(kind, corners)
    if not t > 0.0:
        raise ValueError("reference geometry is defined for t > 0")
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    xi = (x - center[0]) / t
    eta = (y - center[1]) / t

    claims = np.zeros(x.shape, dtype=int)
    region = np.zeros(x.shape, dtype=int)
    rho = np.zeros(x.shape)
    u = np.zeros(x.shape)
    v = np.zeros(x.shape)
    for i in (1, 2, 3, 4):
        sx, sy = _SECTORS[i]
        mine = (sx * (xi - corners.u[i - 1]) > 0.0) & (sy * (eta - corners.v[i - 1]) > 0.0)
        claims += mine
        region = np.where(mine, i, region)
        rho = np.where(mine, corners.rho[i - 1], rho)
        u = np.where(mine, corners.u[i - 1], u)
        v = np.where(mine, corners.v[i - 1], v)

    strength = float(np.sqrt(corners.rho[1] * corners.rho[3]))
    if kind == SAME_SIGN:
        hole = claims == 0
        region = np.where(hole, VACUUM, region)
        rho = np.where(hole, 0.0, rho)
        u = np.where(hole, 0.0, u)
        v = np.where(hole, 0.0, v)
    else:
        sheet = claims >= 2
        region = np.where(sheet, DELTA_SUPPORT, region)
        rho = np.where(sheet, np.nan, rho)
        u = np.where(sheet, np.nan, u)
        v = np.where(sheet, np.nan, v)
    return PressurelessField(region, rho, u, v, strength)
