"""Gas model, conserved/primitive conversions, structured grids and fields.

Conserved state vectors are stored structure-of-arrays with component axis
first: index 0 = density, 1 = x-momentum, 2 = y-momentum, 3 = total energy
density.  All conversions are vectorized over trailing axes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# component indices
RHO, MX, MY, EN = 0, 1, 2, 3

#: ghost-layer width.  WENO5 needs 3; the transverse face-average/point-value
#: corrections in 2D need one more row of interface quantities.
NGHOST = 4


class AdmissibilityError(ValueError):
    """Raised when a state with non-positive density or pressure is used
    where an admissible one is required."""

    def __init__(self, message, where=None):
        if where is not None:
            message = f"{message} at {where}"
        super().__init__(message)
        self.where = where


@dataclass(frozen=True)
class GasModel:
    """Ideal gas: specific heat ratio and internal degrees of freedom.

    The kinetic model is two-dimensional, so the internal degrees of
    freedom follow k = (4 - 2*gamma)/(gamma - 1) also for 1D runs (the
    extra translational direction is carried with zero mean velocity).
    """

    gamma: float
    k_internal: float

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")

    @classmethod
    def from_gamma(cls, gamma: float) -> "GasModel":
        if not gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {gamma}")
        return cls(gamma=gamma, k_internal=(4.0 - 2.0 * gamma) / (gamma - 1.0))


def to_primitive(w, gas: GasModel, where=None):
    """Conserved (rho, mx, my, e) -> primitive (rho, u, v, p).

    `w` has the component axis first.  Raises AdmissibilityError on
    non-positive density or pressure; never silently returns NaN.
    """
    w = np.asarray(w, dtype=float)
    rho = w[RHO]
    if not np.all(rho > 0.0):
        raise AdmissibilityError("non-positive density", _locate(rho <= 0.0, where))
    u = w[MX] / rho
    v = w[MY] / rho
    p = (gas.gamma - 1.0) * (w[EN] - 0.5 * (w[MX] * u + w[MY] * v))
    if not np.all(p > 0.0):
        raise AdmissibilityError("non-positive pressure", _locate(np.asarray(p) <= 0.0, where))
    return np.stack([rho, u, v, p])


def to_conserved(q, gas: GasModel, where=None):
    """Primitive (rho, u, v, p) -> conserved (rho, mx, my, e)."""
    q = np.asarray(q, dtype=float)
    rho, u, v, p = q[0], q[1], q[2], q[3]
    if not np.all(rho > 0.0):
        raise AdmissibilityError("non-positive density", _locate(np.asarray(rho) <= 0.0, where))
    if not np.all(p > 0.0):
        raise AdmissibilityError("non-positive pressure", _locate(np.asarray(p) <= 0.0, where))
    e = 0.5 * rho * (u * u + v * v) + p / (gas.gamma - 1.0)
    return np.stack([rho, rho * u, rho * v, e])


def is_admissible(w, gas: GasModel):
    """Boolean mask of cells with positive density and internal energy."""
    w = np.asarray(w, dtype=float)
    rho = w[RHO]
    ok = rho > 0.0
    with np.errstate(invalid="ignore", divide="ignore"):
        eint = w[EN] - 0.5 * (w[MX] ** 2 + w[MY] ** 2) / np.where(ok, rho, 1.0)
    return ok & (eint > 0.0)


def _locate(mask, where):
    if where is not None:
        return where
    idx = np.argwhere(np.asarray(mask))
    return tuple(idx[0]) if idx.size else None


@dataclass(frozen=True)
class Grid:
    """Uniform structured grid with ghost layers.

    Interior cells are indexed 0..nx-1, 0..ny-1; cell (i, j) is centered at
    (x0 + (i + 1/2) dx, y0 + (j + 1/2) dy).  1D runs use ny = 1.
    """

    nx: int
    ny: int
    dx: float
    dy: float
    x0: float = 0.0
    y0: float = 0.0
    ghost: int = NGHOST

    def __post_init__(self):
        if self.ghost < 3:
            raise ValueError("ghost width must be >= 3 for WENO5")
        if self.nx < 1 or self.ny < 1:
            raise ValueError("need at least one interior cell per direction")

    @classmethod
    def for_domain(cls, nx, ny, xlim, ylim=(0.0, 1.0), ghost=NGHOST) -> "Grid":
        dx = (xlim[1] - xlim[0]) / nx
        dy = (ylim[1] - ylim[0]) / ny if ny > 1 else dx
        return cls(nx=nx, ny=ny, dx=dx, dy=dy, x0=xlim[0], y0=ylim[0], ghost=ghost)

    @property
    def is_1d(self) -> bool:
        return self.ny == 1

    def cell_centers(self):
        """(x, y) center coordinate arrays of interior cells, shapes (nx,), (ny,)."""
        x = self.x0 + (np.arange(self.nx) + 0.5) * self.dx
        y = self.y0 + (np.arange(self.ny) + 0.5) * self.dy
        return x, y

    def alloc(self):
        """Zero conserved array over interior + ghost cells, shape (4, nxt, nyt)."""
        g = self.ghost
        return np.zeros((4, self.nx + 2 * g, self.ny + 2 * g))

    def interior(self, arr):
        """View of the interior region of a ghosted array."""
        g = self.ghost
        return arr[..., g:g + self.nx, g:g + self.ny]


class Field:
    """Conserved variables over a grid, including ghost layers."""

    def __init__(self, grid: Grid, w=None):
        self.grid = grid
        self.w = grid.alloc() if w is None else w

    def copy(self) -> "Field":
        return Field(self.grid, self.w.copy())

    @property
    def interior(self):
        return self.grid.interior(self.w)

    @classmethod
    def from_primitive_function(cls, grid: Grid, gas: GasModel, func) -> "Field":
        """Initialize interior cells from a primitive-state function (x, y) ->
        (rho, u, v, p); arguments are broadcast cell-center arrays."""
        x, y = grid.cell_centers()
        q = np.asarray(func(x[:, None], y[None, :]), dtype=float)
        if q.shape != (4, grid.nx, grid.ny):
            q = np.broadcast_to(q, (4, grid.nx, grid.ny))
        f = cls(grid)
        f.interior[...] = to_conserved(q, gas)
        return f


def field_totals(field: Field):
    """(mass, x-momentum, y-momentum, energy) integrated over interior cells.

    Uses compensated (pairwise via np.sum) summation in a fixed order so
    results are reproducible run to run.
    """
    grid = field.grid
    cell = grid.dx * grid.dy
    w = field.interior
    return tuple(float(np.sum(w[c]) * cell) for c in (RHO, MX, MY, EN))
