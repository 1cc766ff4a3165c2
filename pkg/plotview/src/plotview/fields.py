"""Parser for the flow-field snapshot formats.

Text format: a header line

    # euler-bench v1; case=<id>; t=<...>; nx=<...>; ny=<...>; dx=<...>;
    dy=<...>; gamma=<...>

followed by an ``x,y,rho,u,v,p`` column line and one row per cell in
row-major order (x outer, y inner).

Binary format: 16-byte magic ``EULERBENCH-FLD1\\0``, a little-endian uint32
header length, the same header text as UTF-8, then nx*ny*6 little-endian
float64 values in the identical logical layout.

This module is intentionally self-contained: it depends only on the file
formats, not on the solver package that writes them.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

MAGIC = b"EULERBENCH-FLD1\x00"
HEADER_PREFIX = "# euler-bench v1;"
COLUMNS = ("x", "y", "rho", "u", "v", "p")
#: plottable field components, by column name
COMPONENTS = ("rho", "u", "v", "p")


class ParseError(ValueError):
    """Raised when a snapshot file does not match the documented format."""


@dataclass
class Snapshot:
    """One parsed flow field: q has shape (4, nx, ny) ordered
    (rho, u, v, p); x and y are the cell-center coordinate vectors."""

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

    @property
    def is_1d(self) -> bool:
        return self.ny == 1

    def component(self, name: str) -> np.ndarray:
        if name not in COMPONENTS:
            raise ValueError(f"unknown component {name!r}; pick one of {COMPONENTS}")
        return self.q[COMPONENTS.index(name)]


def _parse_header(line: str, path: str) -> dict:
    if not line.startswith(HEADER_PREFIX):
        raise ParseError(f"{path}: line 1: not a field snapshot header: {line[:60]!r}")
    out = {}
    for part in line[len(HEADER_PREFIX):].split(";"):
        part = part.strip()
        if part:
            key, _, val = part.partition("=")
            out[key.strip()] = val.strip()
    missing = {"case", "t", "nx", "ny", "dx", "dy", "gamma"} - out.keys()
    if missing:
        raise ParseError(f"{path}: line 1: header lacks {sorted(missing)}")
    return out


def _assemble(header: dict, table: np.ndarray, path: str) -> Snapshot:
    try:
        nx, ny = int(header["nx"]), int(header["ny"])
        t = float(header["t"])
        dx, dy = float(header["dx"]), float(header["dy"])
        gamma = float(header["gamma"])
    except ValueError as exc:
        raise ParseError(f"{path}: line 1: bad header value ({exc})") from exc
    if table.shape != (nx * ny, 6):
        raise ParseError(
            f"{path}: expected {nx * ny} rows of 6 columns, got {table.shape}")
    grid = table.reshape(nx, ny, 6)
    return Snapshot(
        case=header["case"], t=t, nx=nx, ny=ny, dx=dx, dy=dy, gamma=gamma,
        x=grid[:, 0, 0].copy(), y=grid[0, :, 1].copy(),
        q=np.stack([grid[:, :, 2 + k] for k in range(4)]),
    )


def _read_text(path: str) -> Snapshot:
    with open(path, "r", encoding="utf-8") as fh:
        header = _parse_header(fh.readline().rstrip("\n"), path)
        columns = fh.readline().rstrip("\n")
        if columns != ",".join(COLUMNS):
            raise ParseError(f"{path}: line 2: expected column line "
                             f"{','.join(COLUMNS)!r}, got {columns[:60]!r}")
        rows = []
        for lineno, line in enumerate(fh, start=3):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 6:
                raise ParseError(f"{path}: line {lineno}: expected 6 values, "
                                 f"got {len(parts)}: {line[:60]!r}")
            try:
                rows.append([float(p) for p in parts])
            except ValueError:
                raise ParseError(
                    f"{path}: line {lineno}: non-numeric value: {line[:60]!r}"
                ) from None
    return _assemble(header, np.asarray(rows, dtype=float), path)


def _read_binary(path: str) -> Snapshot:
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise ParseError(f"{path}: bad magic {magic!r}")
        raw = fh.read(4)
        if len(raw) != 4:
            raise ParseError(f"{path}: truncated header length")
        (hlen,) = struct.unpack("<I", raw)
        header_text = fh.read(hlen).decode("utf-8")
        header = _parse_header(header_text, path)
        data = np.frombuffer(fh.read(), dtype="<f8")
    if data.size % 6:
        raise ParseError(f"{path}: payload of {data.size} floats is not "
                         "a whole number of 6-column rows")
    return _assemble(header, data.reshape(-1, 6), path)


def read_snapshot(path: str) -> Snapshot:
    """Parse a snapshot in either format, auto-detected from the content."""
    with open(path, "rb") as fh:
        lead = fh.read(len(MAGIC))
    if lead == MAGIC:
        return _read_binary(path)
    return _read_text(path)
