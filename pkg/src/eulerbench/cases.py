"""Benchmark case registry.

Each case bundles everything a run needs: domain, gamma, initial condition,
boundaries, end time, default mesh, collision-time model, optional source
term, an exact-solution sampler where one exists, and the diagnostics worth
recording.  Case names are stable CLI identifiers.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .state import GasModel
from .gks import CollisionTimeModel
from .stepper import BoundarySet, BoundarySpec, GravitySource, SourceModel
from .oracles.riemann import exact_riemann
from .oracles.hurricane import HurricaneParams, hurricane_exact, hurricane_initial
from .oracles.pressureless import CornerStates

SAME_P0 = (1.0, 0.5, 0.25, 0.15, 0.1)
OPPOSITE_P0 = (1.0, 0.75, 0.5, 0.3, 0.2)


@dataclass(frozen=True)
class CaseSpec:
    """Complete description of one benchmark run."""

    name: str
    gamma: float
    xlim: tuple
    ylim: tuple
    nx: int
    ny: int
    t_end: float
    ic: Callable  # (x, y) -> (rho, u, v, p), broadcast arrays
    bc: BoundarySet
    tau_model: CollisionTimeModel = CollisionTimeModel()
    source: Optional[SourceModel] = None
    oracle: Optional[Callable] = None  # (x, y, t) -> (rho, u, v, p)
    diagnostics: tuple = ()
    cfl: float = 0.4
    notes: dict = field(default_factory=dict, compare=False)

    @property
    def gas(self) -> GasModel:
        return GasModel.from_gamma(self.gamma)

    @property
    def is_1d(self) -> bool:
        return self.ny == 1

    def with_mesh(self, nx: int, ny: Optional[int] = None) -> "CaseSpec":
        if ny is None:
            # keep the original aspect ratio (1 for 1D cases)
            ny = 1 if self.is_1d else max(1, round(nx * self.ny / self.nx))
        return replace(self, nx=nx, ny=ny)


def _ones(x, y):
    return np.ones(np.broadcast(np.asarray(x), np.asarray(y)).shape)


# --- 1D shock tubes -------------------------------------------------------

def _ic_titarev_toro(x, y):
    o = _ones(x, y)
    pre = x <= -4.5
    rho = np.where(pre, 1.515695, 1.0 + 0.1 * np.sin(20.0 * np.pi * x)) * o
    u = np.where(pre, 0.523346, 0.0) * o
    p = np.where(pre, 1.805, 1.0) * o
    return rho, u, 0.0 * o, p


def case_titarev_toro() -> CaseSpec:
    """Shock / sine-wave entropy field interaction on [-5, 5]."""
    return CaseSpec(
        name="titarev-toro", gamma=1.4, xlim=(-5.0, 5.0), ylim=(0.0, 1.0),
        nx=1000, ny=1, t_end=5.0, ic=_ic_titarev_toro,
        bc=BoundarySet.uniform("outflow"),
        diagnostics=("line-profile",),
    )


_LDR_JUMP = 0.3
_LDR_T0 = 1.2
_LDR_XLIM = (-16.0, 56.0)


def _ldr_left_right(variant: str):
    if variant == "primary":
        return (10000.0, 0.0, 10000.0), (1.0, 0.0, 1.0)
    return (10000.0, 0.0, 10000.0), (1000.0, 0.0, 1000.0)


def _ldr_sample(variant, x, t_abs):
    left, right = _ldr_left_right(variant)
    sol = exact_riemann(left, right, 1.4)
    rho, u, p = sol.sample((np.asarray(x, float) - _LDR_JUMP) / t_abs)
    return rho, u, np.zeros_like(rho), p


def _ic_ldr(x, y):
    r, u, v, p = _ldr_sample("primary", x, _LDR_T0)
    o = _ones(x, y)
    return r * o, u * o, v * o, p * o


def _ic_ldr_mild(x, y):
    r, u, v, p = _ldr_sample("mild", x, _LDR_T0)
    o = _ones(x, y)
    return r * o, u * o, v * o, p * o


def _oracle_ldr(x, y, t):
    r, u, v, p = _ldr_sample("primary", x, _LDR_T0 + t)
    o = _ones(x, y)
    return r * o, u * o, v * o, p * o


def _oracle_ldr_mild(x, y, t):
    r, u, v, p = _ldr_sample("mild", x, _LDR_T0 + t)
    o = _ones(x, y)
    return r * o, u * o, v * o, p * o


def case_large_density_ratio(variant: str = "primary") -> CaseSpec:
    """10000:1 (or 10000:1000) shock tube started from the exact solution at
    t = 1.2 and run to t = 12.  The domain is enlarged so all three waves
    stay interior; simulation time is measured from the restart."""
    mild = variant != "primary"
    return CaseSpec(
        name="large-density-ratio-mild" if mild else "large-density-ratio",
        gamma=1.4, xlim=_LDR_XLIM, ylim=(0.0, 1.0), nx=200, ny=1,
        t_end=12.0 - _LDR_T0,
        ic=_ic_ldr_mild if mild else _ic_ldr,
        bc=BoundarySet.uniform("outflow"),
        oracle=_oracle_ldr_mild if mild else _oracle_ldr,
        diagnostics=("line-profile", "oracle-l1"),
        notes={"restart_time": _LDR_T0,
               "domain": "enlarged beyond the unit interval to keep the waves interior at t=12"},
    )


# --- hurricane-like rotation ----------------------------------------------

_HURRICANE_V0 = {"critical": 10.0, "high": 12.5, "low": 7.5}


def _ic_hurricane_critical(x, y):
    return hurricane_initial(HurricaneParams(v0=10.0), x, y)


def _ic_hurricane_high(x, y):
    return hurricane_initial(HurricaneParams(v0=12.5), x, y)


def _ic_hurricane_low(x, y):
    return hurricane_initial(HurricaneParams(v0=7.5), x, y)


def _oracle_hurricane_critical(x, y, t):
    return hurricane_exact(HurricaneParams(v0=10.0), x, y, t)


def case_hurricane(regime: str = "critical") -> CaseSpec:
    """Rotational flow with an emerging central vacuum; gamma = 2."""
    v0 = _HURRICANE_V0[regime]
    ic = {"critical": _ic_hurricane_critical, "high": _ic_hurricane_high,
          "low": _ic_hurricane_low}[regime]
    return CaseSpec(
        name=f"hurricane-{regime}", gamma=2.0, xlim=(-1.0, 1.0), ylim=(-1.0, 1.0),
        nx=200, ny=200, t_end=0.08 if regime == "high" else 0.1,
        ic=ic, bc=BoundarySet.uniform("outflow"),
        oracle=_oracle_hurricane_critical if regime == "critical" else None,
        diagnostics=("min-density", "rotation-symmetry")
        + (("oracle-l1",) if regime == "critical" else ()),
        notes={"v0": v0, "A": 25.0, "rho0": 1.0,
               "domain": "domain and end time are artifact-chosen (kept waves interior)"},
    )


# --- four-quadrant Riemann problems ---------------------------------------

def _quadrant_ic(states, corner):
    """IC factory for four-quadrant data; quadrants are numbered
    counterclockwise from upper-right."""
    (r1, u1, v1, p1), (r2, u2, v2, p2), (r3, u3, v3, p3), (r4, u4, v4, p4) = states
    cx, cy = corner

    def ic(x, y):
        o = _ones(x, y)
        right, top = (x > cx) * o > 0, (y > cy) * o > 0
        q1 = right & top
        q2 = ~right & top
        q3 = ~right & ~top
        rho = np.where(q1, r1, np.where(q2, r2, np.where(q3, r3, r4)))
        u = np.where(q1, u1, np.where(q2, u2, np.where(q3, u3, u4)))
        v = np.where(q1, v1, np.where(q2, v2, np.where(q3, v3, v4)))
        p = np.where(q1, p1, np.where(q2, p2, np.where(q3, p3, p4)))
        return rho, u, v, p

    return ic


def vortex_sheet_states(sign: str, p0: float):
    # Quadrant order: upper-right, upper-left, lower-left, lower-right.
    # Same-sign sheets set up a pure rotation (every quadrant swirls around
    # the centre, opening a vacuum); opposite-sign sheets drive the
    # upper-left and lower-right quadrants head-on into each other.
    if sign == "same":
        return ((2.0, -0.75, 0.5, p0), (1.0, -0.75, -0.5, p0),
                (3.0, 0.75, -0.5, p0), (1.0, 0.75, 0.5, p0))
    if sign == "opposite":
        return ((2.0, 0.75, 0.5, p0), (1.0, 0.75, -0.5, p0),
                (3.0, -0.75, -0.5, p0), (1.0, -0.75, 0.5, p0))
    raise ValueError(f"sign must be 'same' or 'opposite', got {sign!r}")


def vortex_sheet_corners(sign: str) -> CornerStates:
    s = vortex_sheet_states(sign, 1.0)
    return CornerStates(tuple(q[0] for q in s), tuple(q[1] for q in s),
                        tuple(q[2] for q in s))


def case_vortex_sheets(sign: str, p0: float) -> CaseSpec:
    """Four contact discontinuities; the large-Mach (small p0) limit opens a
    vacuum (same-sign sheets) or concentrates a delta-shock (opposite)."""
    presets = SAME_P0 if sign == "same" else OPPOSITE_P0
    if not any(abs(p0 - v) < 1e-12 for v in presets):
        raise ValueError(f"p0={p0} is not a preset for {sign}-sign sheets: {presets}")
    if sign == "same":
        n = 1500 if p0 >= 0.25 else 400
        t_end = 0.35
    else:
        n = 1500
        t_end = 0.28 if abs(p0 - 0.2) < 1e-12 else 0.25
    return CaseSpec(
        name=f"vortex-sheets-{sign}:p0={p0:g}", gamma=1.4,
        xlim=(0.0, 1.0), ylim=(0.0, 1.0), nx=n, ny=n, t_end=t_end,
        ic=_quadrant_ic(vortex_sheet_states(sign, p0), (0.5, 0.5)),
        bc=BoundarySet.uniform("outflow"),
        diagnostics=("min-density", "pressureless-regions"),
        notes={"p0": p0, "sign": sign},
    )


_RARE = {
    "strong": ((1.0, 0.6233, 0.6233, 1.5), (0.389, -0.6233, 0.6233, 0.4),
               (1.0, -0.6233, -0.6233, 1.5), (0.389, 0.6233, -0.6233, 0.4)),
    "weak": ((1.0, 0.0312, 0.0312, 0.5), (0.927, -0.0312, 0.0312, 0.45),
             (1.0, -0.0312, -0.0312, 0.5), (0.927, 0.0312, -0.0312, 0.45)),
}


def case_rarefaction_interaction(strength: str) -> CaseSpec:
    """Four planar rarefaction waves; strong data develops interior shocks,
    weak data stays continuous with a low-density core."""
    return CaseSpec(
        name=f"rarefaction-{strength}", gamma=1.4,
        xlim=(0.0, 1.0), ylim=(0.0, 1.0), nx=400, ny=400, t_end=0.3,
        ic=_quadrant_ic(_RARE[strength], (0.5, 0.5)),
        bc=BoundarySet.uniform("outflow"),
        diagnostics=("min-density", "pressure-gradient"),
        notes={"t_end": "artifact-chosen (not stated for this family)"},
    )


_FOUR_SHOCKS = ((1.5, 0.0, 0.0, 1.5), (0.5323, 1.206, 0.0, 0.3),
                (0.138, 1.206, 1.206, 0.029), (0.5323, 0.0, 1.206, 0.3))


def case_four_shocks() -> CaseSpec:
    """Four-shock interaction with data symmetric about the diagonal x=y."""
    return CaseSpec(
        name="four-shocks", gamma=1.4,
        xlim=(0.0, 1.0), ylim=(0.0, 1.0), nx=400, ny=400, t_end=0.8,
        ic=_quadrant_ic(_FOUR_SHOCKS, (0.8, 0.8)),
        bc=BoundarySet.uniform("outflow"),
        diagnostics=("min-density", "diagonal-symmetry"),
        notes={"full_mesh": 1000,
               "t_end": "artifact-chosen (not stated for this family)"},
    )


# --- Rayleigh-Taylor -------------------------------------------------------

_RT_GAMMA = 5.0 / 3.0


def _ic_rayleigh_taylor(x, y):
    o = _ones(x, y)
    lower = (y <= 0.5) * o > 0
    rho = np.where(lower, 2.0, 1.0)
    p = np.where(lower, 2.0 * y + 1.0, y + 1.5) * o
    c = np.sqrt(_RT_GAMMA * p / rho)
    v = -0.025 * c * np.cos(8.0 * np.pi * x) * o
    return rho, 0.0 * o, v, p


def case_rayleigh_taylor() -> CaseSpec:
    """Heavy-over-light interface driven by a body force along +y."""
    gas = GasModel.from_gamma(_RT_GAMMA)
    from .state import to_conserved

    def _hydrostatic(rho0, p_of_y):
        # pin the ghost layers to the continued hydrostatic column; a flat
        # ghost state would put a kink in the pressure gradient at the
        # boundary and continuously pump spurious waves into the domain
        def state(x, y):
            o = _ones(x, y)
            return to_conserved(
                np.stack([rho0 * o, 0.0 * o, 0.0 * o, p_of_y(y) * o]), gas)
        return state

    top = _hydrostatic(1.0, lambda y: y + 1.5)
    bottom = _hydrostatic(2.0, lambda y: 2.0 * y + 1.0)
    return CaseSpec(
        name="rayleigh-taylor", gamma=_RT_GAMMA,
        xlim=(0.0, 0.25), ylim=(0.0, 1.0), nx=100, ny=400, t_end=1.75,
        ic=_ic_rayleigh_taylor,
        bc=BoundarySet(BoundarySpec("reflect"), BoundarySpec("reflect"),
                       BoundarySpec("fixed", bottom), BoundarySpec("fixed", top)),
        source=GravitySource(-1.0),  # S = (0, 0, +rho, +rho v)
        diagnostics=("mixing-width", "total-conservation"),
        notes={"paper_meshes": "1/800 and 1/1600; outputs at t = 1.75, 2, 2.25, 2.5",
               "ic_reading": "density/pressure split in y at 0.5 (the printed IC line is garbled)"},
    )


# --- smooth convergence case ------------------------------------------------

_VORTEX_EPS = 5.0


def _vortex_prim(x, y, t):
    gam = 1.4
    xr = np.mod(np.asarray(x, float) - t, 10.0) - 5.0
    yr = np.mod(np.asarray(y, float) - t, 10.0) - 5.0
    r2 = xr * xr + yr * yr
    ex = np.exp(0.5 * (1.0 - r2))
    u = 1.0 - _VORTEX_EPS / (2.0 * np.pi) * ex * yr
    v = 1.0 + _VORTEX_EPS / (2.0 * np.pi) * ex * xr
    temp = 1.0 - (gam - 1.0) * _VORTEX_EPS**2 / (8.0 * gam * np.pi**2) * np.exp(1.0 - r2)
    rho = temp ** (1.0 / (gam - 1.0))
    return np.broadcast_arrays(rho, u, v, rho * temp)


def _ic_vortex(x, y):
    return _vortex_prim(x, y, 0.0)


def _oracle_vortex(x, y, t):
    return _vortex_prim(x, y, t)


def case_isentropic_vortex() -> CaseSpec:
    """Smooth advected vortex on a periodic box, used for order studies.
    The collision time is zeroed: a step-proportional tau acts as an O(dt)
    viscosity and would mask the design order of the scheme."""
    return CaseSpec(
        name="isentropic-vortex", gamma=1.4,
        xlim=(0.0, 10.0), ylim=(0.0, 10.0), nx=64, ny=64, t_end=1.0,
        ic=_ic_vortex, bc=BoundarySet.uniform("periodic"),
        tau_model=CollisionTimeModel(eps_base=0.0, c_jump=0.0),
        oracle=_oracle_vortex,
        diagnostics=("oracle-l1",),
        notes={"translation": (1.0, 1.0), "strength": _VORTEX_EPS},
    )


# --- registry ---------------------------------------------------------------

def _build(name: str) -> CaseSpec:
    if name == "titarev-toro":
        return case_titarev_toro()
    if name == "large-density-ratio":
        return case_large_density_ratio("primary")
    if name == "large-density-ratio-mild":
        return case_large_density_ratio("mild")
    if name.startswith("hurricane-"):
        regime = name.split("-", 1)[1]
        if regime in _HURRICANE_V0:
            return case_hurricane(regime)
    if name.startswith("vortex-sheets-"):
        body = name[len("vortex-sheets-"):]
        sign, _, tail = body.partition(":")
        if tail.startswith("p0=") and sign in ("same", "opposite"):
            return case_vortex_sheets(sign, float(tail[3:]))
    if name in ("rarefaction-strong", "rarefaction-weak"):
        return case_rarefaction_interaction(name.split("-", 1)[1])
    if name == "four-shocks":
        return case_four_shocks()
    if name == "rayleigh-taylor":
        return case_rayleigh_taylor()
    if name == "isentropic-vortex":
        return case_isentropic_vortex()
    raise KeyError(f"unknown case {name!r}; see list_case_names()")


def get_case(name: str) -> CaseSpec:
    return _build(name)


def list_case_names():
    """All stable case identifiers, with one entry per parameter preset."""
    names = ["titarev-toro", "large-density-ratio", "large-density-ratio-mild",
             "hurricane-critical", "hurricane-high", "hurricane-low"]
    names += [f"vortex-sheets-same:p0={v:g}" for v in SAME_P0]
    names += [f"vortex-sheets-opposite:p0={v:g}" for v in OPPOSITE_P0]
    names += ["rarefaction-strong", "rarefaction-weak", "four-shocks",
              "rayleigh-taylor", "isentropic-vortex"]
    return names
