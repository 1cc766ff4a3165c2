"""Boundary fills, time stepping, discrete symmetries and conservation."""

import numpy as np
import pytest

from eulerbench.gks import CollisionTimeModel
from eulerbench.state import (
    EN, MX, MY, RHO, Field, GasModel, Grid, field_totals, to_conserved,
)
from eulerbench.stepper import (
    BoundarySet, BoundarySpec, FIXED, OUTFLOW, PERIODIC, REFLECT,
    GravitySource, advance, fill_ghosts, stable_dt, step_s2o4,
)
from eulerbench.weno import WenoConfig

GAS = GasModel.from_gamma(1.4)
TAU = CollisionTimeModel()


def sine_field(nx, ny, xlim=(0.0, 1.0), ylim=(0.0, 1.0)):
    grid = Grid.for_domain(nx, ny, xlim, ylim)

    def ic(x, y):
        rho = 1.0 + 0.2 * np.sin(2.0 * np.pi * (x + y))
        return np.broadcast_arrays(rho, 0.7, -0.3, 1.0 + 0.0 * rho)

    return Field.from_primitive_function(grid, GAS, ic)


# --- ghost filling ----------------------------------------------------------


def test_periodic_ghosts_wrap():
    f = sine_field(16, 8)
    fill_ghosts(f.w, f.grid, BoundarySet.uniform(PERIODIC))
    g = f.grid.ghost
    assert np.array_equal(f.w[:, :g, g:-g], f.w[:, -2 * g : -g, g:-g])
    assert np.array_equal(f.w[:, g:-g, :g], f.w[:, g:-g, -2 * g : -g])


def test_outflow_ghosts_copy_edge():
    f = sine_field(16, 8)
    fill_ghosts(f.w, f.grid, BoundarySet.uniform(OUTFLOW))
    g = f.grid.ghost
    for i in range(g):
        assert np.array_equal(f.w[:, i, g:-g], f.w[:, g, g:-g])


def test_reflect_ghosts_mirror_and_negate_normal_momentum():
    f = sine_field(16, 8)
    fill_ghosts(f.w, f.grid, BoundarySet.uniform(REFLECT))
    g = f.grid.ghost
    for i in range(g):
        mirror = f.w[:, 2 * g - 1 - i, g:-g]
        ghost = f.w[:, i, g:-g]
        assert np.array_equal(ghost[RHO], mirror[RHO])
        assert np.array_equal(ghost[MX], -mirror[MX])
        assert np.array_equal(ghost[MY], mirror[MY])
        assert np.array_equal(ghost[EN], mirror[EN])


def test_fixed_ghosts_hold_prescribed_state():
    f = sine_field(16, 8)
    state = to_conserved(np.array([2.0, 0.1, 0.0, 3.0]), GAS)
    bc = BoundarySet(
        BoundarySpec(FIXED, state), BoundarySpec(OUTFLOW, None),
        BoundarySpec(OUTFLOW, None), BoundarySpec(OUTFLOW, None),
    )
    fill_ghosts(f.w, f.grid, bc)
    g = f.grid.ghost
    assert np.allclose(f.w[:, :g, g:-g], state[:, None, None])


# --- time step control ------------------------------------------------------


def test_stable_dt_scales_with_mesh():
    dt1 = stable_dt(sine_field(16, 16), GAS, 0.4)
    dt2 = stable_dt(sine_field(32, 32), GAS, 0.4)
    assert dt1 / dt2 == pytest.approx(2.0, rel=1e-12)


def test_stable_dt_linear_in_cfl():
    f = sine_field(16, 16)
    assert stable_dt(f, GAS, 0.2) == pytest.approx(0.5 * stable_dt(f, GAS, 0.4))


# --- exact invariances ------------------------------------------------------


def test_free_stream_preserved_bitwise():
    grid = Grid.for_domain(12, 12, (0.0, 1.0), (0.0, 1.0))
    f = Field.from_primitive_function(
        grid, GAS, lambda x, y: np.broadcast_arrays(1.0 + 0.0 * x * y, 0.5, -0.25, 0.8)
    )
    before = f.interior.copy()
    cfg = WenoConfig(variant="z+").with_mesh(grid.dx)
    for _ in range(5):
        step_s2o4(f, GAS, cfg, TAU, BoundarySet.uniform(PERIODIC), 1e-3)
    assert np.array_equal(f.interior, before)


def test_x_mirror_symmetry_bitwise_1d():
    # mirrored initial data must evolve into the mirrored solution exactly
    grid = Grid.for_domain(32, 1, (0.0, 1.0))

    def ic(x, y):
        rho = np.where(np.abs(x - 0.5) < 0.2, 1.0, 0.4) + 0.0 * y
        return np.broadcast_arrays(rho, 0.0 * rho, 0.0 * rho, 1.0 + 0.0 * rho)

    f = Field.from_primitive_function(grid, GAS, ic)
    m = f.copy()
    m.w[...] = m.w[:, ::-1, :]
    m.w[MX] = -m.w[MX]
    cfg = WenoConfig(variant="z+").with_mesh(grid.dx)
    bc = BoundarySet.uniform(OUTFLOW)
    for _ in range(10):
        step_s2o4(f, GAS, cfg, TAU, bc, 2e-3)
        step_s2o4(m, GAS, cfg, TAU, bc, 2e-3)
    assert np.array_equal(f.interior, m.interior[:, ::-1, :] * np.array([1.0, -1.0, 1.0, 1.0])[:, None, None])


def test_transpose_symmetry_bitwise_2d():
    # data symmetric under (x, y) swap stays symmetric bitwise
    grid = Grid.for_domain(24, 24, (0.0, 1.0), (0.0, 1.0))

    def ic(x, y):
        rho = 1.0 + 0.3 * np.exp(-40.0 * ((x - 0.5) ** 2 + (y - 0.5) ** 2))
        return np.broadcast_arrays(rho, 0.0 * rho, 0.0 * rho, 1.0 + 0.0 * rho)

    f = Field.from_primitive_function(grid, GAS, ic)
    cfg = WenoConfig(variant="z+").with_mesh(grid.dx)
    for _ in range(5):
        step_s2o4(f, GAS, cfg, TAU, BoundarySet.uniform(PERIODIC), 1e-3)
    w = f.interior
    swapped = w.swapaxes(1, 2)[[RHO, MY, MX, EN]]
    assert np.array_equal(w, swapped)


def test_conservation_to_round_off():
    f = sine_field(32, 32)
    cfg = WenoConfig(variant="z+").with_mesh(f.grid.dx)
    before = field_totals(f)
    stats = advance(f, GAS, cfg, TAU, BoundarySet.uniform(PERIODIC), t_end=0.02)
    after = field_totals(f)
    assert stats.steps > 3
    for b, a in zip(before, after):
        assert abs(a - b) <= 1e-12 * max(1.0, abs(b))


def test_gravity_source_rates():
    rng = np.random.default_rng(9)
    w = rng.uniform(0.5, 1.5, size=(4, 3, 3))
    wdot = rng.normal(size=(4, 3, 3))
    gsrc = GravitySource(1.0)
    s = gsrc.rate(w, GAS)
    assert np.array_equal(s[RHO], np.zeros_like(s[RHO]))
    assert np.array_equal(s[MX], np.zeros_like(s[MX]))
    assert np.array_equal(s[MY], -w[RHO])
    assert np.array_equal(s[EN], -w[MY])
    st = gsrc.rate_dt(w, wdot, GAS)
    assert np.array_equal(st[MY], -wdot[RHO])
    assert np.array_equal(st[EN], -wdot[MY])


def test_gravity_source_momentum_budget():
    # from a uniform state between walls, d(my)/dt = -g*mass up to the
    # wall-pressure impulse, which is O(t^2) while stratification develops
    grid = Grid.for_domain(16, 32, (0.0, 0.25), (0.0, 0.5))
    f = Field.from_primitive_function(
        grid, GAS, lambda x, y: np.broadcast_arrays(1.0 + 0.0 * x * y, 0.0, 0.0, 1.0)
    )
    cfg = WenoConfig(variant="z+").with_mesh(grid.dx)
    bc = BoundarySet.uniform(REFLECT)
    gsrc = GravitySource(1.0)
    mass0, _, my0, _ = field_totals(f)
    t_end = 0.002
    advance(f, GAS, cfg, TAU, bc, t_end=t_end, source=gsrc)
    _, _, my1, _ = field_totals(f)
    assert (my1 - my0) == pytest.approx(-1.0 * mass0 * t_end, rel=5e-3)


def test_advance_lands_exactly_on_t_end():
    f = sine_field(16, 16)
    cfg = WenoConfig(variant="z+").with_mesh(f.grid.dx)
    stats = advance(f, GAS, cfg, TAU, BoundarySet.uniform(PERIODIC), t_end=0.013)
    assert stats.t == pytest.approx(0.013, abs=1e-15)


# --- formal order of the two-stage update -----------------------------------


def test_two_stage_update_matches_fourth_order_taylor_series():
    """The update formula w + dt*L + dt^2/6 (L'_1 + 2 L'_2), with stage two
    evaluated at the half step, reproduces the Taylor series of the exact
    solution through dt^4 for a linear autonomous system."""
    rng = np.random.default_rng(12)
    a = rng.normal(size=(4, 4)) * 0.5
    w0 = rng.normal(size=4)
    dt = 0.8

    l1 = a @ w0
    lt1 = a @ l1
    mid = w0 + 0.5 * dt * l1 + 0.125 * dt * dt * lt1
    lt2 = a @ (a @ mid)
    w1 = w0 + dt * l1 + dt * dt / 6.0 * (lt1 + 2.0 * lt2)

    series = np.zeros_like(w0)
    term = w0.copy()
    fact = 1.0
    for k in range(5):
        series += term / fact
        term = dt * (a @ term)
        fact *= k + 1.0
    # identical through dt^4; the dt^5 coefficient differs
    resid = w1 - series
    assert np.max(np.abs(resid)) < np.max(np.abs(np.linalg.matrix_power(a * dt, 5) @ w0) / 120.0) * 1.01
    assert np.max(np.abs(resid)) > 0.0
