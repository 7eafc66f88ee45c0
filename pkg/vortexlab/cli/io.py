"""File formats: binary field files, trajectory CSV and plain CSV tables.

Field file layout (little endian)::

    offset  size  content
    0       4     magic b"GPF1"
    4       4     u32 version (1)
    8       4     u32 n_r
    12      4     u32 n_theta
    16      8     reserved, zero
    24      16·n  complex samples (f64 re, f64 im), radial-major

All writers go through a temporary file in the destination directory and
``os.replace`` so readers never observe partial output.  ``"-"`` as a path
writes text to stdout.
"""

from __future__ import annotations

import csv
import io
import math
import os
import struct
import sys
import tempfile
from collections import OrderedDict
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np

from vortexlab.config import FIELD_HEADER_SIZE, FIELD_MAGIC, FIELD_VERSION, format_number
from vortexlab.core.model import (
    ComplexField,
    PolarGrid,
    Termination,
    TrajectoryRecord,
    VortexConfiguration,
    separation,
)
from vortexlab.errors import FieldFormatError, TrajectoryFormatError, VortexLabError
from vortexlab.gp.localize import DetectedVortices
from vortexlab.logging_config import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]
Cell = Union[float, int, str]

_HEADER = struct.Struct("<4sIII8x")
_SAMPLE_DTYPE = np.dtype("<c16")


# ── Atomic writes ───────────────────────────────────────────────────────────


def atomic_write_bytes(path: PathLike, data: bytes) -> None:
    """Write *data* to *path* through a temporary file and ``os.replace``."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    logger.debug("Wrote %d bytes to %s", len(data), target)


def write_text(path: PathLike, text: str) -> None:
    """Write *text* atomically, or to stdout when *path* is ``"-"``."""
    if str(path) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    atomic_write_bytes(path, text.encode("utf-8"))
    logger.info("Wrote %s", path)


# ── CSV tables ──────────────────────────────────────────────────────────────


def _cell(value: Cell) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format_number(float(value))


def format_table(
    header: Sequence[str],
    rows: Iterable[Sequence[Cell]],
    comments: Sequence[Tuple[str, Cell]] = (),
) -> str:
    """CSV text with numbers at 17 significant digits and ``# key=value`` trailers."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    for key, value in comments:
        buf.write(f"# {key}={_cell(value)}\n")
    return buf.getvalue()


def read_table(path: PathLike) -> Tuple[List[str], List[List[str]], Dict[str, str]]:
    """Parse a CSV written by :func:`format_table` into header, rows and comments."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise TrajectoryFormatError(f"{path}: cannot read: {exc}") from exc
    data_lines: List[str] = []
    comments: Dict[str, str] = {}
    for line in text.splitlines():
        if line.startswith("#"):
            key, sep, value = line[1:].strip().partition("=")
            if sep:
                comments[key.strip()] = value.strip()
        elif line.strip():
            data_lines.append(line)
    if not data_lines:
        raise TrajectoryFormatError(f"{path}: missing CSV header")
    parsed = list(csv.reader(data_lines))
    return parsed[0], parsed[1:], comments


# ── Field files ─────────────────────────────────────────────────────────────


def encode_field(field: ComplexField) -> bytes:
    header = _HEADER.pack(FIELD_MAGIC, FIELD_VERSION, field.grid.n_r, field.grid.n_theta)
    return header + np.ascontiguousarray(field.values, dtype=_SAMPLE_DTYPE).tobytes()


def decode_field(data: bytes, source: str = "<bytes>") -> ComplexField:
    """Parse a field file image.

    Raises
    ------
    FieldFormatError
        On a wrong magic, version, size or grid.
    """
    if len(data) < FIELD_HEADER_SIZE:
        raise FieldFormatError(f"{source}: {len(data)} bytes is shorter than the header")
    magic, version, n_r, n_theta = _HEADER.unpack_from(data)
    if magic != FIELD_MAGIC:
        raise FieldFormatError(f"{source}: bad magic {magic!r}, expected {FIELD_MAGIC!r}")
    if version != FIELD_VERSION:
        raise FieldFormatError(f"{source}: unsupported version {version}")
    expected = FIELD_HEADER_SIZE + _SAMPLE_DTYPE.itemsize * n_r * n_theta
    if len(data) != expected:
        raise FieldFormatError(
            f"{source}: size {len(data)} does not match {n_r}x{n_theta} grid ({expected} bytes)"
        )
    try:
        grid = PolarGrid(n_r=n_r, n_theta=n_theta)
        values = np.frombuffer(data, dtype=_SAMPLE_DTYPE, offset=FIELD_HEADER_SIZE)
        return ComplexField(grid=grid, values=values.reshape(n_r, n_theta))
    except VortexLabError as exc:
        raise FieldFormatError(f"{source}: {exc}") from exc


def write_field(path: PathLike, field: ComplexField) -> None:
    atomic_write_bytes(path, encode_field(field))
    logger.info("Wrote %dx%d field to %s", field.grid.n_r, field.grid.n_theta, path)


def read_field(path: PathLike) -> ComplexField:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise FieldFormatError(f"{path}: cannot read: {exc}") from exc
    return decode_field(data, str(path))


# ── Trajectories ────────────────────────────────────────────────────────────


def trajectory_header(n: int) -> List[str]:
    coords = [f"a{j}{axis}" for j in range(1, n + 1) for axis in ("x", "y")]
    return ["t", *coords, "W"]


def format_trajectory(record: TrajectoryRecord) -> str:
    rows = (
        [t, *state.positions.ravel().tolist(), w]
        for t, state, w in zip(record.times, record.states, record.renormalized_energy)
    )
    comments = [
        ("termination", record.termination.value),
        ("dt", record.dt),
        ("n_modes", record.n_modes),
        ("degrees", " ".join(str(int(d)) for d in record.degrees)),
    ]
    return format_table(trajectory_header(record.degrees.size), rows, comments)


def write_trajectory(path: PathLike, record: TrajectoryRecord) -> None:
    write_text(path, format_trajectory(record))


def read_trajectory(path: PathLike) -> TrajectoryRecord:
    """Parse a trajectory CSV back into a :class:`TrajectoryRecord`.

    Raises
    ------
    TrajectoryFormatError
        On a malformed header, row or metadata line.
    """
    header, rows, meta = read_table(path)
    try:
        degrees = np.array([int(d) for d in meta["degrees"].split()], dtype=int)
        termination = Termination(meta["termination"])
        dt = float(meta["dt"])
        n_modes = int(meta["n_modes"])
    except (KeyError, ValueError) as exc:
        raise TrajectoryFormatError(f"{path}: bad metadata: {exc}") from exc
    if header != trajectory_header(degrees.size):
        raise TrajectoryFormatError(f"{path}: header does not match {degrees.size} vortices")
    try:
        table = np.array([[float(v) for v in row] for row in rows], dtype=float)
        table = table.reshape(len(rows), len(header))
        states = tuple(
            VortexConfiguration(positions=row[1:-1].reshape(-1, 2), degrees=degrees)
            for row in table
        )
        return TrajectoryRecord(
            times=table[:, 0],
            states=states,
            renormalized_energy=table[:, -1],
            min_separation=tuple(separation(s) for s in states),
            termination=termination,
            dt=dt,
            n_modes=n_modes,
        )
    except (ValueError, VortexLabError) as exc:
        raise TrajectoryFormatError(f"{path}: {exc}") from exc


# ── Detected vortex series ──────────────────────────────────────────────────

VORTEX_HEADER = ["t", "x", "y", "winding"]


def vortex_rows(t: float, detected: DetectedVortices) -> List[List[Cell]]:
    """One row per detection; a time without detections gets a ``winding=0`` marker row."""
    if len(detected) == 0:
        return [[t, math.nan, math.nan, 0]]
    return [
        [t, float(x), float(y), int(w)]
        for (x, y), w in zip(detected.positions, detected.windings)
    ]


def read_vortex_series(path: PathLike) -> "OrderedDict[float, DetectedVortices]":
    """Group a ``t,x,y,winding`` CSV by time.

    ``winding=0`` rows mark times at which nothing was detected.
    """
    header, rows, _ = read_table(path)
    if header != VORTEX_HEADER:
        raise TrajectoryFormatError(f"{path}: expected header {','.join(VORTEX_HEADER)}")
    grouped: Dict[float, List[Tuple[float, float, int]]] = OrderedDict()
    try:
        for t, x, y, w in rows:
            entries = grouped.setdefault(float(t), [])
            if int(w) != 0:
                entries.append((float(x), float(y), int(w)))
    except ValueError as exc:
        raise TrajectoryFormatError(f"{path}: {exc}") from exc
    series: OrderedDict[float, DetectedVortices] = OrderedDict()
    for t, entries in grouped.items():
        arr = np.array(entries, dtype=float).reshape(-1, 3)
        series[t] = DetectedVortices(positions=arr[:, :2], windings=arr[:, 2].astype(int))
    return series
