"""Conserved/primitive conversions, admissibility checks, grids and fields."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eulerbench.state import (
    EN, MX, MY, NGHOST, RHO, AdmissibilityError, Field, GasModel, Grid,
    field_totals, is_admissible, to_conserved, to_primitive,
)

GAS = GasModel.from_gamma(1.4)


def test_internal_dof_from_gamma():
    assert GasModel.from_gamma(1.4).k_internal == pytest.approx(3.0)
    assert GasModel.from_gamma(2.0).k_internal == pytest.approx(0.0)
    assert GasModel.from_gamma(5.0 / 3.0).k_internal == pytest.approx(1.0)


def test_gamma_must_exceed_one():
    with pytest.raises(ValueError):
        GasModel.from_gamma(1.0)


finite = st.floats(allow_nan=False, allow_infinity=False)


@given(
    rho=st.floats(1e-3, 1e3),
    u=st.floats(-50, 50),
    v=st.floats(-50, 50),
    p=st.floats(1e-3, 1e3),
)
@settings(max_examples=200)
def test_primitive_conserved_round_trip(rho, u, v, p):
    q = np.array([rho, u, v, p])
    w = to_conserved(q, GAS)
    back = to_primitive(w, GAS)
    # pressure recovery loses digits when kinetic energy dominates
    scale = max(1.0, 0.5 * rho * (u * u + v * v))
    assert np.allclose(back, q, rtol=1e-10, atol=1e-13 * scale)
    assert bool(is_admissible(w, GAS))


def test_to_primitive_rejects_nonpositive_density():
    w = np.array([[1.0, -0.5], [0.0, 0.0], [0.0, 0.0], [2.5, 2.5]])
    with pytest.raises(AdmissibilityError):
        to_primitive(w, GAS)


def test_to_primitive_rejects_nonpositive_pressure():
    # kinetic energy exceeds total energy in the second cell
    w = np.array([[1.0, 1.0], [0.0, 4.0], [0.0, 0.0], [2.5, 2.0]])
    with pytest.raises(AdmissibilityError):
        to_primitive(w, GAS)


def test_is_admissible_mask():
    w = np.array(
        [[1.0, 1.0, -1.0], [0.0, 4.0, 0.0], [0.0, 0.0, 0.0], [2.5, 2.0, 2.5]]
    )
    assert is_admissible(w, GAS).tolist() == [True, False, False]


def test_grid_cell_centers_and_spacing():
    grid = Grid.for_domain(10, 1, (-1.0, 1.0))
    x, y = grid.cell_centers()
    assert grid.dx == pytest.approx(0.2)
    assert x[0] == pytest.approx(-0.9)
    assert x[-1] == pytest.approx(0.9)
    assert y.shape == (1,)


def test_grid_alloc_includes_ghosts():
    grid = Grid.for_domain(8, 4, (0.0, 1.0), (0.0, 0.5))
    assert grid.alloc().shape == (4, 8 + 2 * NGHOST, 4 + 2 * NGHOST)


def test_grid_rejects_thin_ghost_layer():
    with pytest.raises(ValueError):
        Grid(nx=4, ny=1, dx=0.1, dy=0.1, ghost=2)


def test_field_from_primitive_function():
    grid = Grid.for_domain(6, 5, (0.0, 1.0), (0.0, 1.0))

    def ic(x, y):
        rho = 1.0 + 0.1 * x + 0.0 * y
        return np.broadcast_arrays(rho, 0.3, -0.2, 1.0 + 0.0 * rho)

    f = Field.from_primitive_function(grid, GAS, ic)
    x, _ = grid.cell_centers()
    assert np.allclose(f.interior[RHO], (1.0 + 0.1 * x)[:, None])
    # ghost cells stay zero until a boundary fill
    assert np.all(f.w[:, : grid.ghost, :] == 0.0)


def test_field_totals_match_direct_sum():
    grid = Grid.for_domain(12, 7, (0.0, 3.0), (0.0, 2.0))
    f = Field.from_primitive_function(
        grid, GAS, lambda x, y: np.broadcast_arrays(1.0 + 0.2 * np.sin(x + y), 0.1, 0.2, 1.0 + 0.0 * x * y)
    )
    mass, mx, my, en = field_totals(f)
    cell = grid.dx * grid.dy
    assert mass == pytest.approx(float(np.sum(f.interior[RHO])) * cell)
    assert en == pytest.approx(float(np.sum(f.interior[EN])) * cell)
