"""Figure rendering: contour, line profile, quiver and overlays.

Deterministic and non-interactive: the Agg backend is forced, no timestamps
are embedded, and the style is pinned so identical specs and inputs produce
identical images.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .fields import COMPONENTS, Snapshot, read_snapshot  # noqa: E402

KINDS = ("contour", "line", "quiver", "overlay")

_LABELS = {"rho": "density", "u": "x-velocity", "v": "y-velocity",
           "p": "pressure"}


@dataclass
class PlotSpec:
    """One batch rendering job."""

    inputs: Sequence[str]
    kind: str = "contour"
    component: str = "rho"
    levels: int = 30
    out: str = "plot.png"
    dpi: int = 150
    title: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown plot kind {self.kind!r}; pick one of {KINDS}")
        if self.component not in COMPONENTS:
            raise ValueError(
                f"unknown component {self.component!r}; pick one of {COMPONENTS}")
        if not self.inputs:
            raise ValueError("at least one input file is required")
        if self.levels < 1:
            raise ValueError("levels must be positive")


def _profile(snap: Snapshot, comp: str):
    """A 1D profile along x: the field itself for 1D data, the mid-y row
    otherwise."""
    z = snap.component(comp)
    if snap.is_1d:
        return snap.x, z[:, 0]
    return snap.x, z[:, snap.ny // 2]


def _contour(ax, snap: Snapshot, spec: PlotSpec):
    z = snap.component(spec.component)
    lo, hi = float(np.min(z)), float(np.max(z))
    if hi - lo < 1e-300 * max(1.0, abs(hi)):
        # constant field: a filled background and a single legend entry
        ax.pcolormesh(snap.x, snap.y, z.T, shading="nearest")
        ax.plot([], [], color="k", label=f"{spec.component} = {lo:g}")
        ax.legend(loc="upper right")
    else:
        levels = np.linspace(lo, hi, spec.levels + 1)
        cs = ax.contour(snap.x, snap.y, z.T, levels=levels, linewidths=0.7)
        ax.figure.colorbar(cs, ax=ax, shrink=0.85)
    ax.set_aspect("equal", adjustable="box")


def _quiver(ax, snap: Snapshot, spec: PlotSpec):
    # subsample to at most ~32 arrows per axis so the figure stays legible
    sx = max(1, snap.nx // 32)
    sy = max(1, snap.ny // 32)
    u = snap.component("u")[::sx, ::sy]
    v = snap.component("v")[::sx, ::sy]
    ax.quiver(snap.x[::sx], snap.y[::sy], u.T, v.T, angles="xy")
    ax.set_aspect("equal", adjustable="box")


def plot(spec: PlotSpec) -> str:
    """Render the spec to its output image path and return that path."""
    snaps = [read_snapshot(p) for p in spec.inputs]
    if spec.kind != "overlay" and len(snaps) != 1:
        raise ValueError(f"kind {spec.kind!r} takes exactly one input file")

    fig, ax = plt.subplots(figsize=(6.4, 5.2))
    try:
        if spec.kind == "contour":
            _contour(ax, snaps[0], spec)
        elif spec.kind == "quiver":
            _quiver(ax, snaps[0], spec)
        elif spec.kind == "line":
            x, z = _profile(snaps[0], spec.component)
            ax.plot(x, z, lw=1.0)
            ax.set_ylabel(_LABELS[spec.component])
        else:  # overlay
            for path, snap in zip(spec.inputs, snaps):
                x, z = _profile(snap, spec.component)
                ax.plot(x, z, lw=1.0, label=f"{snap.case} t={snap.t:g} ({path})")
            ax.set_ylabel(_LABELS[spec.component])
            ax.legend(fontsize=7)
        ax.set_xlabel("x")
        if spec.kind in ("contour", "quiver"):
            ax.set_ylabel("y")
        head = snaps[0]
        ax.set_title(spec.title or
                     f"{head.case}: {_LABELS[spec.component]} at t = {head.t:g}")
        fig.savefig(spec.out, dpi=spec.dpi, metadata={"Software": "plotview"})
    finally:
        plt.close(fig)
    return spec.out
