"""High-level orchestration: build a field for a case, march it, record
diagnostics and snapshots, and run convergence studies."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .state import Field, GasModel, Grid, to_conserved, to_primitive
from .weno import WenoConfig
from .stepper import advance
from .cases import CaseSpec
from .io import DiagnosticsWriter, FieldSnapshot, PhaseTimer, file_checksum, write_manifest, write_snapshot

_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(4)


def cell_average_conserved(grid: Grid, gas: GasModel, prim_func) -> np.ndarray:
    """Fourth-order-accurate conserved cell averages of a primitive-state
    function (x, y) -> (rho, u, v, p), via tensor Gauss quadrature."""
    x, y = grid.cell_centers()
    acc = 0.0
    if grid.is_1d:
        for xi, wi in zip(_GAUSS_X, _GAUSS_W):
            q = np.stack(np.broadcast_arrays(
                *prim_func(x[:, None] + 0.5 * grid.dx * xi, y[None, :])))
            acc = acc + wi * to_conserved(q, gas, where="initial condition")
        return acc / 2.0
    for xi, wi in zip(_GAUSS_X, _GAUSS_W):
        for yj, wj in zip(_GAUSS_X, _GAUSS_W):
            q = np.stack(np.broadcast_arrays(
                *prim_func(x[:, None] + 0.5 * grid.dx * xi,
                           y[None, :] + 0.5 * grid.dy * yj)))
            acc = acc + wi * wj * to_conserved(q, gas, where="initial condition")
    return acc / 4.0


def build_grid(case: CaseSpec) -> Grid:
    return Grid.for_domain(case.nx, case.ny, case.xlim, case.ylim)


def build_field(case: CaseSpec) -> Field:
    grid = build_grid(case)
    f = Field(grid)
    f.interior[...] = cell_average_conserved(grid, case.gas, case.ic)
    return f


def snapshot_from_field(case: CaseSpec, field: Field, t: float) -> FieldSnapshot:
    """Primitive snapshot from the evolved conserved cell averages."""
    grid = field.grid
    q = to_primitive(field.interior, case.gas, where="snapshot")
    x, y = grid.cell_centers()
    return FieldSnapshot(case=case.name, t=t, nx=grid.nx, ny=grid.ny,
                         dx=grid.dx, dy=grid.dy, gamma=case.gamma,
                         x=x, y=y, q=np.array(q))


def reference_snapshot(case: CaseSpec, t: float, nx: Optional[int] = None,
                       ny: Optional[int] = None) -> FieldSnapshot:
    if case.oracle is None:
        raise ValueError(f"case {case.name} has no closed-form reference")
    c = case if nx is None else case.with_mesh(nx, ny)
    grid = build_grid(c)
    x, y = grid.cell_centers()
    q = np.stack(np.broadcast_arrays(*case.oracle(x[:, None], y[None, :], t)))
    q = np.broadcast_to(q, (4, grid.nx, grid.ny)).copy()
    return FieldSnapshot(case=case.name, t=t, nx=grid.nx, ny=grid.ny,
                         dx=grid.dx, dy=grid.dy, gamma=case.gamma,
                         x=x, y=y, q=q)


# --- diagnostics -------------------------------------------------------------

def rotation_symmetry_error(field: Field) -> float:
    """Max conserved-component deviation from invariance under a quarter
    turn of the plane, (x, y, U, V) -> (y, -x, V, -U); invariance under one
    turn direction is equivalent to invariance under the other."""
    w = field.interior
    rot = w[:, ::-1, :].swapaxes(1, 2)[[0, 2, 1, 3]].copy()
    rot[2] = -rot[2]
    return float(np.max(np.abs(w - rot)))


def diagonal_symmetry_error(field: Field) -> float:
    w = field.interior
    tr = w.swapaxes(1, 2)[[0, 2, 1, 3]]
    return float(np.max(np.abs(w - tr)))


def _diag_values(case: CaseSpec, field: Field, t: float, kind: str) -> Optional[dict]:
    gas = case.gas
    q = to_primitive(field.interior, gas, where="diagnostics")
    if kind == "min-density":
        return {"min_rho": float(np.min(q[0]))}
    if kind == "rotation-symmetry":
        return {"max_err": rotation_symmetry_error(field)}
    if kind == "diagonal-symmetry":
        return {"max_err": diagonal_symmetry_error(field)}
    if kind == "total-conservation":
        w = field.interior
        vol = field.grid.dx * field.grid.dy
        return {"mass": float(np.sum(w[0])) * vol, "energy": float(np.sum(w[3])) * vol,
                "mom_x": float(np.sum(w[1])) * vol, "mom_y": float(np.sum(w[2])) * vol}
    if kind == "oracle-l1":
        if case.oracle is None or t <= 0.0:
            return None
        x, y = field.grid.cell_centers()
        ref = np.stack(np.broadcast_arrays(*case.oracle(x[:, None], y[None, :], t)))
        return {"l1_rho": float(np.mean(np.abs(q[0] - ref[0])))}
    if kind == "pressure-gradient":
        gx = np.abs(np.diff(q[3], axis=0)).max() / field.grid.dx
        gy = np.abs(np.diff(q[3], axis=1)).max() / field.grid.dy if not case.is_1d else 0.0
        return {"max_grad_p": float(max(gx, gy))}
    if kind == "mixing-width":
        _, y = field.grid.cell_centers()
        mixed = np.any((q[0] > 1.1) & (q[0] < 1.9), axis=0)
        if not np.any(mixed):
            return {"width": 0.0}
        ys = y[mixed]
        return {"width": float(ys.max() - ys.min())}
    if kind == "pressureless-regions":
        return _pressureless_diag(case, q, field, t)
    return None


def _pressureless_diag(case: CaseSpec, q, field: Field, t: float) -> Optional[dict]:
    from .cases import vortex_sheet_corners
    from .oracles.pressureless import pressureless_reference, VACUUM, DELTA_SUPPORT

    if t <= 0.0:
        return None
    sign = case.notes.get("sign")
    corners = vortex_sheet_corners(sign)
    kind = "same-sign" if sign == "same" else "opposite-sign"
    x, y = field.grid.cell_centers()
    ref = pressureless_reference(kind, corners, x[:, None], y[None, :], t,
                                 center=(0.5, 0.5))
    out = {}
    hole = ref.region == (VACUUM if sign == "same" else DELTA_SUPPORT)
    if np.any(hole):
        out["min_rho_hole" if sign == "same" else "max_rho_sheet"] = float(
            np.min(q[0][hole]) if sign == "same" else np.max(q[0][hole]))
    # mean relative density deviation deep inside each constant quadrant,
    # beyond the acoustic fans (which spread a sound speed past the
    # contacts) plus a few cells; a mean is used because the supersonic
    # shear startup leaves a zero-mean grid-scale wave packet on the
    # initial discontinuity locus
    p0 = case.notes.get("p0", 0.0)
    cells = 8.0 * max(field.grid.dx, field.grid.dy) / t
    worst = 0.0
    for i in (1, 2, 3, 4):
        margin = np.sqrt(case.gas.gamma * p0 / corners.rho[i - 1]) + cells
        sx = 1 if i in (1, 4) else -1
        sy = 1 if i in (1, 2) else -1
        deep = (ref.region == i) & \
            (sx * ((x[:, None] - 0.5) / t - corners.u[i - 1]) > margin) & \
            (sy * ((y[None, :] - 0.5) / t - corners.v[i - 1]) > margin)
        if np.any(deep):
            err = np.mean(np.abs(q[0][deep] - corners.rho[i - 1])) / corners.rho[i - 1]
            worst = max(worst, float(err))
    out["max_quadrant_rel_err"] = worst
    return out


# --- run driver --------------------------------------------------------------

@dataclass
class RunResult:
    manifest: dict
    field: Field


def run_case(case: CaseSpec, outdir: str, weno: Optional[WenoConfig] = None,
             output_times: Optional[list] = None, snapshot_format: str = "csv",
             figures: bool = False) -> RunResult:
    """Execute a case end to end, writing snapshots, diagnostics and a
    manifest into outdir.  Raises on numerical failure after persisting a
    manifest that records it."""
    os.makedirs(outdir, exist_ok=True)
    gas = case.gas
    grid = build_grid(case)
    cfg = (weno or WenoConfig("z")).with_mesh(min(grid.dx, grid.dy))
    times = sorted(set(output_times or [case.t_end]))
    timer = PhaseTimer()
    diag = DiagnosticsWriter(outdir)

    timer.start("initialize")
    field = build_field(case)
    w0_tot = np.sum(field.interior, axis=(1, 2)) * grid.dx * grid.dy

    manifest = {
        "case": case.name,
        "config": {
            "nx": case.nx, "ny": case.ny, "t_end": case.t_end, "cfl": case.cfl,
            "gamma": case.gamma, "weno": cfg.variant, "lam": cfg.lam,
            "characteristic": cfg.characteristic,
            "tau_eps": case.tau_model.eps_base, "tau_c": case.tau_model.c_jump,
            "output_times": times, "snapshot_format": snapshot_format,
        },
        "outputs": {},
        "status": "running",
    }

    def record(t):
        for kind in case.diagnostics:
            vals = _diag_values(case, field, t, kind)
            if vals is not None:
                diag.append(kind, t, vals)

    record(0.0)
    steps = fallbacks = 0
    inflow = np.zeros(4)
    t_done = 0.0
    try:
        timer.start("march")
        for t_out in times:
            if t_out > t_done:
                stats = advance(field, gas, cfg, case.tau_model, case.bc,
                                t_out - t_done, cfl=case.cfl, source=case.source)
                steps += stats.steps
                fallbacks += stats.fallbacks
                inflow += stats.boundary_inflow
                t_done = t_out
            record(t_done)
            timer.start("output")
            snap = snapshot_from_field(case, field, t_done)
            ext = "csv" if snapshot_format == "csv" else "bin"
            fname = f"field_t{t_done:g}.{ext}"
            path = os.path.join(outdir, fname)
            write_snapshot(path, snap)
            manifest["outputs"][fname] = file_checksum(path)
            if figures:
                figname = _render_figure(case, snap, outdir, t_done)
                if figname:
                    manifest["outputs"][figname] = file_checksum(
                        os.path.join(outdir, figname))
            timer.start("march")
    except Exception as exc:
        timer.stop()
        manifest["status"] = "failed"
        manifest["error"] = f"{type(exc).__name__}: {exc}"
        manifest["steps"] = steps
        manifest["t_reached"] = t_done
        manifest["wall_time"] = timer.phases
        write_manifest(os.path.join(outdir, "manifest.json"), manifest)
        raise
    timer.stop()

    w1_tot = np.sum(field.interior, axis=(1, 2)) * grid.dx * grid.dy
    scale = np.maximum(np.abs(w0_tot), 1e-300)
    manifest.update({
        "status": "ok",
        "steps": steps,
        "positivity_fallbacks": fallbacks,
        "t_reached": t_done,
        "conservation_drift": ((w1_tot - w0_tot) / scale).tolist(),
        # drift after crediting what flowed through the domain boundary;
        # for mass this must vanish to round-off for any boundary kind
        "accounted_drift": (
            (w1_tot - w0_tot - inflow * grid.dx * grid.dy) / scale).tolist(),
        "wall_time": timer.phases,
    })
    write_manifest(os.path.join(outdir, "manifest.json"), manifest)
    return RunResult(manifest, field)


def _render_figure(case: CaseSpec, snap: FieldSnapshot, outdir: str, t: float):
    """Density figure next to the delimited output (line plot in 1D,
    filled contours in 2D)."""
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return None
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    if snap.ny == 1:
        ax.plot(snap.x, snap.q[0][:, 0], "k-", lw=0.8)
        ax.set_xlabel("x")
        ax.set_ylabel("rho")
    else:
        cs = ax.contourf(snap.x, snap.y, snap.q[0].T, levels=40)
        fig.colorbar(cs, ax=ax, label="rho")
        ax.set_aspect("equal")
        ax.set_xlabel("x")
        ax.set_ylabel("y")
    ax.set_title(f"{case.name}  t={t:g}")
    name = f"fig_rho_t{t:g}.png"
    fig.savefig(os.path.join(outdir, name), dpi=130)
    plt.close(fig)
    return name


# --- convergence studies ------------------------------------------------------

def _oracle_error(case: CaseSpec, field: Field, t: float) -> float:
    """L1 density error against cell-averaged oracle values."""
    grid = field.grid
    ref = cell_average_conserved(grid, case.gas,
                                 lambda x, y: case.oracle(x, y, t))
    return float(np.mean(np.abs(field.interior[0] - ref[0])))


def spatial_convergence(case: CaseSpec, meshes, weno: Optional[WenoConfig] = None,
                        dt_rule=lambda h: 0.1 * h**1.25):
    """Refinement study at the case's t_end; dt shrinks faster than h so the
    observed slope reflects the spatial order.  Returns (errors, orders)."""
    if case.oracle is None:
        raise ValueError(f"case {case.name} has no oracle for error measurement")
    errs = []
    for n in meshes:
        c = case.with_mesh(n)
        grid = build_grid(c)
        cfg = (weno or WenoConfig("z")).with_mesh(min(grid.dx, grid.dy))
        field = build_field(c)
        advance(field, c.gas, cfg, c.tau_model, c.bc, c.t_end,
                fixed_dt=dt_rule(grid.dx))
        errs.append(_oracle_error(c, field, c.t_end))
    orders = [float(np.log(errs[i] / errs[i + 1])
                    / np.log(meshes[i + 1] / meshes[i]))
              for i in range(len(errs) - 1)]
    return errs, orders


def temporal_convergence(case: CaseSpec, mesh: int, dts, weno: Optional[WenoConfig] = None):
    """dt-refinement at a fixed mesh against the finest-dt solution, so the
    saturated spatial error cancels.  Returns (errors, orders)."""
    c = case.with_mesh(mesh)
    grid = build_grid(c)
    cfg = (weno or WenoConfig("z")).with_mesh(min(grid.dx, grid.dy))
    dts = sorted(dts, reverse=True)
    fields = []
    for dt in list(dts) + [dts[-1] / 2.0]:
        field = build_field(c)
        advance(field, c.gas, cfg, c.tau_model, c.bc, c.t_end, fixed_dt=dt)
        fields.append(field.interior[0].copy())
    ref = fields[-1]
    errs = [float(np.mean(np.abs(f - ref))) for f in fields[:-1]]
    orders = [float(np.log(errs[i] / errs[i + 1]) / np.log(dts[i] / dts[i + 1]))
              for i in range(len(errs) - 1)]
    return errs, orders
