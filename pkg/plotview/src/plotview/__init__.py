"""Batch renderer for structured-grid flow-field snapshots.

Reads the text and binary snapshot formats written by the euler-bench CLI
and renders non-interactive figures: density contours, line profiles,
velocity quivers and multi-file overlays.
"""

from .fields import COMPONENTS, ParseError, Snapshot, read_snapshot
from .render import PlotSpec, plot

__all__ = [
    "COMPONENTS", "ParseError", "PlotSpec", "Snapshot", "plot",
    "read_snapshot",
]
