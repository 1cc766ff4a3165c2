"""Field snapshot formats, diagnostics streams, and run manifests.

Snapshot text format: a header line
``# euler-bench v1; case=<id>; t=<...>; nx=<...>; ny=<...>; dx=<...>;
dy=<...>; gamma=<...>`` followed by a ``x,y,rho,u,v,p`` column line and one
row per cell in row-major order (x outer, y inner), full decimal precision.

Binary twin: 16-byte magic ``EULERBENCH-FLD1\\0``, a little-endian uint32
header-length, the same header text as UTF-8, then nx*ny*6 little-endian
float64 values in the identical logical layout.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field

import numpy as np

MAGIC = b"EULERBENCH-FLD1\x00"
_FMT = "%.17g"


@dataclass
class FieldSnapshot:
    """One saved primitive field: q has shape (4, nx, ny) ordered
    (rho, u, v, p); x, y are cell-center coordinate vectors."""

    case: str
    t: float
    nx: int
    ny: int
    dx: float
    dy: float
    gamma: float
    x: np.ndarray
    y: np.ndarray
    q: np.ndarray

    def header(self) -> str:
        return (f"# euler-bench v1; case={self.case}; t={self.t!r}; "
                f"nx={self.nx}; ny={self.ny}; dx={self.dx!r}; dy={self.dy!r}; "
                f"gamma={self.gamma!r}")

    def table(self) -> np.ndarray:
        """(nx*ny, 6) row-major table of x, y, rho, u, v, p."""
        xx = np.broadcast_to(self.x[:, None], (self.nx, self.ny))
        yy = np.broadcast_to(self.y[None, :], (self.nx, self.ny))
        cols = [xx, yy] + [self.q[k] for k in range(4)]
        return np.stack([c.reshape(-1) for c in cols], axis=1)


def _parse_header(line: str) -> dict:
    if not line.startswith("# euler-bench v1;"):
        raise ValueError(f"not a field snapshot header: {line[:60]!r}")
    out = {}
    for part in line[len("# euler-bench v1;"):].split(";"):
        part = part.strip()
        if part:
            key, _, val = part.partition("=")
            out[key.strip()] = val.strip()
    return out


def _snapshot_from(header: dict, table: np.ndarray) -> FieldSnapshot:
    nx, ny = int(header["nx"]), int(header["ny"])
    if table.shape != (nx * ny, 6):
        raise ValueError(f"expected {nx * ny} rows of 6 columns, got {table.shape}")
    grid = table.reshape(nx, ny, 6)
    return FieldSnapshot(
        case=header["case"], t=float(header["t"]), nx=nx, ny=ny,
        dx=float(header["dx"]), dy=float(header["dy"]), gamma=float(header["gamma"]),
        x=grid[:, 0, 0].copy(), y=grid[0, :, 1].copy(),
        q=np.stack([grid[:, :, 2 + k] for k in range(4)]),
    )


def write_snapshot(path, snap: FieldSnapshot):
    """Write text (.csv) or binary (anything else) depending on extension."""
    if str(path).endswith(".csv"):
        with open(path, "w") as fh:
            fh.write(snap.header() + "\n")
            fh.write("x,y,rho,u,v,p\n")
            np.savetxt(fh, snap.table(), fmt=_FMT, delimiter=",")
    else:
        header = snap.header().encode("utf-8")
        with open(path, "wb") as fh:
            fh.write(MAGIC)
            fh.write(np.uint32(len(header)).astype("<u4").tobytes())
            fh.write(header)
            fh.write(snap.table().astype("<f8").tobytes())


def read_snapshot(path) -> FieldSnapshot:
    with open(path, "rb") as fh:
        magic = fh.read(16)
        if magic == MAGIC:
            (hlen,) = np.frombuffer(fh.read(4), dtype="<u4")
            header = _parse_header(fh.read(int(hlen)).decode("utf-8"))
            n = int(header["nx"]) * int(header["ny"])
            table = np.frombuffer(fh.read(n * 6 * 8), dtype="<f8").reshape(n, 6)
            return _snapshot_from(header, table)
    with open(path, "r") as fh:
        header = _parse_header(fh.readline().rstrip("\n"))
        columns = fh.readline()
        if not columns.startswith("x,y"):
            raise ValueError(f"missing column line, got {columns[:40]!r}")
        try:
            table = np.loadtxt(fh, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise ValueError(f"malformed snapshot body in {path}: {exc}") from exc
    return _snapshot_from(header, table)


COMPONENTS = ("rho", "u", "v", "p")


def compare_snapshots(a: FieldSnapshot, b: FieldSnapshot) -> dict:
    """Per-component L1 (cell-mean absolute) and Linf differences."""
    if (a.nx, a.ny) != (b.nx, b.ny):
        raise ValueError(f"grid mismatch: {a.nx}x{a.ny} vs {b.nx}x{b.ny}")
    if not (np.allclose(a.x, b.x) and np.allclose(a.y, b.y)):
        raise ValueError("grids cover different coordinates")
    out = {}
    for k, name in enumerate(COMPONENTS):
        diff = np.abs(a.q[k] - b.q[k])
        out[name] = {"l1": float(np.mean(diff)), "linf": float(np.max(diff))}
    return out


class DiagnosticsWriter:
    """One CSV per diagnostic kind: columns t,<values...>."""

    def __init__(self, outdir):
        self.outdir = outdir
        self._started = set()

    def append(self, kind: str, t: float, values: dict):
        path = os.path.join(self.outdir, f"diag_{kind}.csv")
        fresh = not os.path.exists(path) or os.path.getsize(path) == 0
        with open(path, "a") as fh:
            if fresh:
                fh.write("t," + ",".join(values.keys()) + "\n")
            fh.write(_FMT % t + "," + ",".join(_FMT % v for v in values.values()) + "\n")
        self._started.add(kind)


def write_manifest(path, payload: dict):
    """Atomic JSON manifest write (temp file + rename)."""
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)


def file_checksum(path) -> str:
    import hashlib

    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


class PhaseTimer:
    """Wall time per named phase, for the run manifest."""

    def __init__(self):
        self.phases = {}
        self._t0 = None
        self._name = None

    def start(self, name: str):
        self.stop()
        self._name, self._t0 = name, time.perf_counter()

    def stop(self):
        if self._name is not None:
            self.phases[self._name] = self.phases.get(self._name, 0.0) + (
                time.perf_counter() - self._t0)
            self._name = None
