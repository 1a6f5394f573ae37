"""CSV reading and writing for trajectories.

Format: a header line ``t,<channel>,...``, comma separated, ``\\n`` line
endings, floats written with ``repr`` (shortest string that round-trips).
The time column must be uniform; the grid is reconstructed from it.
"""

from __future__ import annotations

import csv
import math

import numpy as np

from .exceptions import ValidationError
from .signal import TimeGrid, Trajectory

__all__ = ["CsvFormatError", "read_csv", "write_csv", "format_float"]

UNIFORMITY_TOL = 1e-9


class CsvFormatError(ValidationError):
    """Malformed trajectory CSV: header, cells or time column."""


def format_float(x):
    return repr(float(x))


def write_csv(traj, path):
    times = traj.times
    with open(path, "w", newline="") as fh:
        fh.write(",".join(("t",) + traj.channels) + "\n")
        for i in range(traj.n):
            row = [format_float(times[i])]
            row.extend(format_float(v) for v in traj.values[i])
            fh.write(",".join(row) + "\n")


def _infer_grid(t):
    n = t.size
    t0 = float(t[0])
    candidates = [float(t[1] - t[0]), float((t[-1] - t[0]) / (n - 1))]
    candidates.append(float(f"{candidates[1]:.12g}"))
    idx = np.arange(n)
    for dt in candidates:
        if dt > 0 and np.array_equal(t0 + idx * dt, t):
            return TimeGrid(t0, dt, n)
    dt = candidates[1]
    if not dt > 0:
        raise CsvFormatError("time column is not increasing")
    deviation = np.max(np.abs(t - (t0 + idx * dt)))
    if deviation > UNIFORMITY_TOL * dt:
        raise CsvFormatError(
            f"non-uniform time column: deviation {deviation:.3g} exceeds "
            f"{UNIFORMITY_TOL:g} of dt={dt:.6g}"
        )
    return TimeGrid(t0, dt, n)


def read_csv(path, channels=None):
    """Read a trajectory CSV.

    ``channels``, when given, is the exact list of expected channel names
    (excluding ``t``).
    """
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise CsvFormatError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if len(header) < 2 or header[0] != "t":
        raise CsvFormatError(f"{path}: header must start with 't' and name at least one channel")
    if channels is not None and tuple(header[1:]) != tuple(channels):
        raise CsvFormatError(
            f"{path}: header {','.join(header)} does not match expected t,{','.join(channels)}"
        )
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise CsvFormatError(f"{path}:{lineno}: expected {len(header)} cells, got {len(row)}")
        values = []
        for cell in row:
            try:
                v = float(cell)
            except ValueError:
                raise CsvFormatError(f"{path}:{lineno}: bad cell {cell!r}") from None
            if not math.isfinite(v):
                raise CsvFormatError(f"{path}:{lineno}: non-finite cell {cell!r}")
            values.append(v)
        data.append(values)
    if len(data) < 2:
        raise CsvFormatError(f"{path}: need at least two rows of samples")
    arr = np.array(data)
    grid = _infer_grid(arr[:, 0])
    return Trajectory(grid, tuple(header[1:]), arr[:, 1:])
