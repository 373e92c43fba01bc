"""Locate points where v = pi, classify them, and fit the local cusp exponent.

Crossings are found in two ways: as sign changes of v - pi along Y inside
one snapshot ("space" events, which sit exactly at a snapshot time and can
be fitted), and as sign changes at a fixed node between two snapshots
("time" events, e.g. the very first breaking between snapshots).

At a fixed time the profile near a crossing is |u - u0| ~ A |x - x0|^alpha.
The fitter works on the raw node values (x_i, u_i) of the snapshot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from statistics import median
from typing import Optional

import numpy as np

from .errors import DegenerateFitError, WindowError

TYPE_I = "TypeI"
TYPE_II = "TypeII_generic"
UNCLASSIFIED = "Unclassified"

ALPHA_TYPE_II = 4 / 5
ALPHA_TYPE_I_CLAIMED = 3 / 4
ALPHA_TYPE_I_ORACLE = 7 / 9


@dataclass
class SingularEvent:
    t0: float
    Y0: float
    x0: float
    u0_val: float
    vY: float
    vYY: float
    classification: str = UNCLASSIFIED
    resolution_flags: list = field(default_factory=list)
    source: str = "space"
    snapshot: int = 0
    node: int = 0

    def to_dict(self) -> dict:
        return {"t0": self.t0, "Y0": self.Y0, "x0": self.x0, "u0": self.u0_val,
                "vY": self.vY, "vYY": self.vYY, "type": self.classification}


@dataclass
class ExponentFit:
    alpha: float
    A_hat: float
    side: str
    window: tuple
    r_squared: float
    n_points: int
    alpha_ref: Optional[float] = None

    @property
    def abs_dev(self) -> Optional[float]:
        return None if self.alpha_ref is None else abs(self.alpha - self.alpha_ref)


def _centered_derivatives(v, h):
    vY = np.gradient(v, h, edge_order=2)
    vYY = np.empty_like(v)
    vYY[1:-1] = (v[2:] - 2 * v[1:-1] + v[:-2]) / (h * h)
    vYY[0], vYY[-1] = vYY[1], vYY[-2]
    return vY, vYY


def _cubic_at(Y, f, i, y0):
    """Four-point Lagrange interpolation of f at y0 in the cell [Y_i, Y_i+1]."""
    lo = min(max(i - 1, 0), Y.size - 4)
    ys, fs = Y[lo:lo + 4], f[lo:lo + 4]
    total = 0.0
    for a in range(4):
        w = 1.0
        for b in range(4):
            if a != b:
                w *= (y0 - ys[b]) / (ys[a] - ys[b])
        total += w * fs[a]
    return float(total)


def _space_events(snap, k):
    d = snap.v - np.pi
    h = snap.dY
    vY, vYY = _centered_derivatives(snap.v, h)
    sgn = np.sign(d)
    out = []
    for i in np.flatnonzero(sgn[:-1] * sgn[1:] < 0):
        frac = d[i] / (d[i] - d[i + 1])
        Y0 = snap.Y[i] + frac * h
        out.append(SingularEvent(
            t0=snap.t, Y0=float(Y0),
            x0=_cubic_at(snap.Y, snap.x, i, Y0),
            u0_val=_cubic_at(snap.Y, snap.u, i, Y0),
            vY=float((1 - frac) * vY[i] + frac * vY[i + 1]),
            vYY=float((1 - frac) * vYY[i] + frac * vYY[i + 1]),
            source="space", snapshot=k, node=int(i)))
    for i in np.flatnonzero(d == 0):
        out.append(SingularEvent(
            t0=snap.t, Y0=float(snap.Y[i]), x0=float(snap.x[i]),
            u0_val=float(snap.u[i]), vY=float(vY[i]), vYY=float(vYY[i]),
            source="space", snapshot=k, node=int(i)))
    return out


def _swept(prev, cur, reach):
    """Label intervals swept by crossings moving between two snapshots."""
    spans = []
    prev_nodes = [e.node for e in prev]
    for e in cur:
        lo = hi = e.node
        if prev_nodes:
            j = min(prev_nodes, key=lambda n: abs(n - e.node))
            if abs(j - e.node) <= reach:
                lo, hi = min(j, e.node), max(j, e.node)
        spans.append((lo, hi))
    for n in prev_nodes:
        spans.append((n, n))
    return spans


def _time_events(snaps, k, space_prev, space_cur, dedup_cells, reach):
    a, b = snaps[k], snaps[k + 1]
    da, db = a.v - np.pi, b.v - np.pi
    nodes = np.flatnonzero(np.sign(da) * np.sign(db) < 0)
    if nodes.size == 0:
        return []
    spans = _swept(space_prev, space_cur, reach)
    keep = [i for i in nodes
            if not any(lo - dedup_cells <= i <= hi + dedup_cells for lo, hi in spans)]
    if not keep:
        return []
    # one event per cluster of neighbouring nodes: the earliest crossing
    clusters, cur = [], [keep[0]]
    for i in keep[1:]:
        if i - cur[-1] <= dedup_cells:
            cur.append(i)
        else:
            clusters.append(cur)
            cur = [i]
    clusters.append(cur)
    out = []
    for cl in clusters:
        fr = {i: da[i] / (da[i] - db[i]) for i in cl}
        i = min(cl, key=lambda n: fr[n])
        f = fr[i]
        t0 = a.t + f * (b.t - a.t)
        near = a if f <= 0.5 else b
        vY, vYY = _centered_derivatives(near.v, near.dY)
        out.append(SingularEvent(
            t0=float(t0), Y0=float(a.Y[i]),
            x0=float((1 - f) * a.x[i] + f * b.x[i]),
            u0_val=float((1 - f) * a.u[i] + f * b.u[i]),
            vY=float(vY[i]), vYY=float(vYY[i]),
            source="time", snapshot=k if f <= 0.5 else k + 1, node=int(i)))
    return out


def detect_events(record, dedup_cells: int = 3, reach: int = 200) -> list:
    """All crossings of the level set v = pi, in time order.

    ``reach`` bounds how far (in cells) a crossing may travel between two
    snapshots and still count as the same branch.
    """
    snaps = record.snapshots
    space = [_space_events(s, k) for k, s in enumerate(snaps)]
    events = [e for evs in space for e in evs]
    for k in range(len(snaps) - 1):
        events.extend(_time_events(snaps, k, space[k], space[k + 1],
                                   dedup_cells, reach))
    events.sort(key=lambda e: (e.t0, e.Y0))
    return events


def default_theta1(snap, node: int, halo: int = 10) -> float:
    """10 * dY * max |v_YY| over the neighbourhood of the event."""
    _, vYY = _centered_derivatives(snap.v, snap.dY)
    lo, hi = max(node - halo, 0), min(node + halo + 1, snap.n)
    return 10.0 * snap.dY * float(np.max(np.abs(vYY[lo:hi])))


def classify_event(e: SingularEvent, theta1: float, theta2: float = 1e-3) -> SingularEvent:
    flags = list(e.resolution_flags)
    if abs(e.vY) >= theta1:
        cls = TYPE_II
        flags.append(f"vYY={e.vYY:.6g}")
    elif abs(e.vYY) >= theta2:
        cls = TYPE_I
    else:
        cls = UNCLASSIFIED
        flags.append("vY and vYY below thresholds")
    e.classification = cls
    e.resolution_flags = flags
    return e


def fit_exponent(profile, x0: float, u0_val: float, window, side: str,
                 alpha_ref: Optional[float] = None) -> ExponentFit:
    """Least-squares line through (log|x - x0|, log|u - u0|).

    ``profile`` is an (n, 2) array-like of (x, u) samples.
    """
    pts = np.asarray(profile, dtype=float)
    x, u = pts[:, 0], pts[:, 1]
    r_min, r_max = window
    if not 0 < r_min < r_max:
        raise WindowError(f"bad window {window!r}")
    r = x - x0 if side == "right" else x0 - x
    if side not in ("left", "right"):
        raise WindowError(f"side must be 'left' or 'right', got {side!r}")
    du = np.abs(u - u0_val)
    sel = (r >= r_min) & (r <= r_max) & (du > 0)
    n = int(sel.sum())
    if n < 4:
        raise WindowError(f"only {n} samples in window {window!r} on the {side}")
    lx, ly = np.log(r[sel]), np.log(du[sel])
    if np.ptp(lx) == 0:
        raise DegenerateFitError("all samples at the same distance")
    A = np.vstack([lx, np.ones_like(lx)]).T
    (slope, icpt), *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - (slope * lx + icpt)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return ExponentFit(float(slope), float(math.exp(icpt)), side,
                       (float(r_min), float(r_max)), r2, n, alpha_ref)


@dataclass(frozen=True)
class FitConfig:
    """Window ladder for :func:`analyze_run`.

    The innermost radius is ``r_min_factor`` times the largest x-spacing
    among the ``local_cells`` cells on either side of the crossing. Window j
    is [r_min * ratio^j, r_min * ratio^j * span].
    """

    r_min_factor: float = 5.0
    local_cells: int = 3
    levels: int = 4
    ratio: float = 4.0
    span: float = 32.0
    theta1: Optional[float] = None
    theta2: float = 1e-3

    def windows(self, r_min: float):
        return [(r_min * self.ratio ** j, r_min * self.ratio ** j * self.span)
                for j in range(self.levels)]


def local_spacing(snap, node: int, cells: int) -> float:
    lo, hi = max(node - cells, 0), min(node + cells + 1, snap.n - 1)
    return float(np.max(np.abs(np.diff(snap.x[lo:hi + 1]))))


def reference_exponents(classification: str) -> list:
    if classification == TYPE_II:
        return [ALPHA_TYPE_II]
    if classification == TYPE_I:
        return [ALPHA_TYPE_I_CLAIMED, ALPHA_TYPE_I_ORACLE]
    return []


def fit_event(snap, e: SingularEvent, cfg: FitConfig) -> list:
    r_min = cfg.r_min_factor * local_spacing(snap, e.node, cfg.local_cells)
    profile = np.column_stack([snap.x, snap.u])
    refs = reference_exponents(e.classification) or [None]
    fits = []
    for window in cfg.windows(r_min):
        for side in ("left", "right"):
            try:
                base = fit_exponent(profile, e.x0, e.u0_val, window, side)
            except (WindowError, DegenerateFitError):
                continue
            for ref in refs:
                fits.append(ExponentFit(base.alpha, base.A_hat, side, base.window,
                                        base.r_squared, base.n_points, ref))
    return fits


def analyze_run(record, cfg: FitConfig = FitConfig()) -> dict:
    """Detect, classify and fit every crossing in a trajectory.

    Returns ``{"events": [{"event", "classification", "flags", "fits",
    "median_alpha"}]}``. Only events sitting on a snapshot are fitted.
    """
    out = []
    for e in detect_events(record):
        snap = record.snapshots[e.snapshot]
        theta1 = cfg.theta1 if cfg.theta1 is not None else default_theta1(snap, e.node)
        classify_event(e, theta1, cfg.theta2)
        fits = []
        if e.source == "space":
            fits = fit_event(snap, e, cfg)
        else:
            e.resolution_flags.append("between snapshots: not fitted")
        alphas = sorted({(f.side, f.window): f.alpha for f in fits}.values())
        out.append({
            "event": e,
            "fits": fits,
            "median_alpha": median(alphas) if alphas else None,
        })
    return {"events": out}


def report_to_dict(report: dict) -> dict:
    events = []
    for item in report["events"]:
        e = item["event"]
        events.append({
            "event": e.to_dict(),
            "source": e.source,
            "flags": list(e.resolution_flags),
            "median_alpha": item["median_alpha"],
            "fits": [
                {"side": f.side, "window": list(f.window), "alpha": f.alpha,
                 "A_hat": f.A_hat, "r2": f.r_squared, "n_points": f.n_points,
                 "alpha_ref": f.alpha_ref, "abs_dev": f.abs_dev}
                for f in item["fits"]
            ],
        })
    return {"events": events}
