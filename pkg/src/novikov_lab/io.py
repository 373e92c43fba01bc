"""CSV / JSON artifact readers and writers.

Floats are written with 17 significant digits so a file round-trips every
value exactly and identical runs give byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .charsolver import CharState, TrajectoryRecord
from .errors import UsageError

FLOAT_FMT = "%.17g"


def _write_rows(path, header, rows):
    rows = np.asarray(rows, dtype=float).reshape(-1, len(header))
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        np.savetxt(fh, rows, fmt=FLOAT_FMT, delimiter=",")


def write_snapshots_csv(path, snapshots) -> None:
    blocks = [np.column_stack([np.full(s.n, s.t), s.Y, s.x, s.u, s.v, s.q])
              for s in snapshots]
    _write_rows(path, ["t", "Y", "x", "u", "v", "q"], np.vstack(blocks))


def read_snapshots_csv(path) -> list:
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read snapshots from {path}: {exc}") from None
    if data.shape[1] != 6:
        raise UsageError(f"{path}: expected columns t,Y,x,u,v,q")
    snaps = []
    times, starts = np.unique(data[:, 0], return_index=True)
    for t, lo in sorted(zip(times, starts), key=lambda p: p[1]):
        block = data[data[:, 0] == t]
        snaps.append(CharState(float(t), block[:, 1].copy(), block[:, 2].copy(),
                               block[:, 3].copy(), block[:, 4].copy(), block[:, 5].copy()))
    return snaps


def record_from_csv(path) -> TrajectoryRecord:
    return TrajectoryRecord(snapshots=read_snapshots_csv(path))


def write_energy_csv(path, energy_series) -> None:
    _write_rows(path, ["t", "E1", "Qtot", "jac_min"], energy_series)


def write_ref_snapshots_csv(path, snaps) -> None:
    blocks = [np.column_stack([np.full(s.x.size, s.t), s.x, s.u]) for s in snaps]
    _write_rows(path, ["t", "x", "u"], np.vstack(blocks))


def write_deviation_csv(path, series) -> None:
    _write_rows(path, ["t", "deviation"], series)


def write_plot_data_csv(path, rows) -> None:
    """Rows of (r, abs_du, side) with side as text."""
    with open(path, "w", newline="") as fh:
        fh.write("r,abs_du,side\n")
        for r, du, side in rows:
            fh.write(f"{FLOAT_FMT % r},{FLOAT_FMT % du},{side}\n")


def write_jsonl(path, objects) -> None:
    with open(path, "w") as fh:
        for obj in objects:
            fh.write(json.dumps(obj) + "\n")


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")
