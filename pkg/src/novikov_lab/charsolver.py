"""Conservative Novikov solutions in characteristic variables (T, Y).

On a fixed uniform Y grid the unknowns x, u, v = 2 arctan(u_x) and
q = (1 + u_x^2)^2 / Y_x evolve by

    x_T = u^2
    u_T = -dxP1 - P2
    v_T = -u sin^2(v/2) + 2u^3 cos^2(v/2) - 2 cos^2(v/2) (P1 + dxP2)
    q_T = q [(2u^3 + u) - 2 (P1 + dxP2)] sin v

All right-hand sides stay bounded when v crosses pi, so classical RK4
integrates straight through wave breaking.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np
from scipy.integrate import cumulative_simpson

from .errors import DivergenceError, InputError, MonotonicityError, UsageError
from .green import monotone_positions, nonlocal_fields, trapezoid_weights

log = logging.getLogger(__name__)

# Fine-grid size for the label map Y(x) = int_0^x (1 + u0'^2)^2.
_LABEL_QUAD_POINTS = 20001


@dataclass(frozen=True)
class CharState:
    t: float
    Y: np.ndarray
    x: np.ndarray
    u: np.ndarray
    v: np.ndarray
    q: np.ndarray

    @property
    def dY(self) -> float:
        return float(self.Y[1] - self.Y[0])

    @property
    def n(self) -> int:
        return self.Y.size

    def copy(self) -> "CharState":
        return CharState(self.t, self.Y.copy(), self.x.copy(), self.u.copy(),
                         self.v.copy(), self.q.copy())

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(a)) for a in (self.x, self.u, self.v, self.q))


class Derivs(NamedTuple):
    u_T: np.ndarray
    v_T: np.ndarray
    q_T: np.ndarray
    x_T: np.ndarray


def _simpson_cumulative_endpoint(f, a, b, n=_LABEL_QUAD_POINTS):
    # composite Simpson on [a, b] with an odd number of nodes
    if a == b:
        return 0.0
    z = np.linspace(a, b, n)
    fz = f(z)
    h = (b - a) / (n - 1)
    return h / 3.0 * (fz[0] + fz[-1] + 4.0 * fz[1:-1:2].sum() + 2.0 * fz[2:-1:2].sum())


def label_of(profile, x_end: float) -> float:
    """Y(x_end) = int_0^x_end (1 + u0'(z)^2)^2 dz."""
    side = 1 if x_end >= 0 else -1
    return _simpson_cumulative_endpoint(
        lambda z: (1.0 + profile.slope(z, side) ** 2) ** 2, 0.0, x_end)


def _march_positions(profile, targets, side):
    """Integrate dX/dY = (1 + u0'(X)^2)^-2 from X(0) = 0 to each target label.

    ``targets`` must be sorted away from zero (increasing for side=+1,
    decreasing for side=-1).
    """
    def f(X):
        return 1.0 / (1.0 + float(profile.slope(X, side)) ** 2) ** 2

    out = np.empty(len(targets))
    X, Yc = 0.0, 0.0
    for k, Yt in enumerate(targets):
        h = Yt - Yc
        if h != 0.0:
            k1 = f(X)
            k2 = f(X + 0.5 * h * k1)
            k3 = f(X + 0.5 * h * k2)
            k4 = f(X + h * k3)
            X += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            Yc = Yt
        out[k] = X
    return out


def init_from_u0(profile, L: float = 20.0, N: int = 4096) -> CharState:
    """Initial characteristic data with q = 1 and v = 2 arctan(u0')."""
    if N < 16:
        raise UsageError("need N >= 16 grid points")
    if not L > 0:
        raise UsageError("domain half-width must be positive")
    y_lo, y_hi = label_of(profile, -L), label_of(profile, L)
    Y = np.linspace(y_lo, y_hi, N)
    x = np.empty(N)
    pos = Y >= 0
    x[pos] = _march_positions(profile, Y[pos], +1)
    neg_idx = np.flatnonzero(~pos)[::-1]
    x[neg_idx] = _march_positions(profile, Y[neg_idx], -1)
    side = np.where(x >= 0, 1, -1)
    u = np.asarray(profile.value(x), dtype=float)
    slope = np.where(side > 0, profile.slope(x, 1), profile.slope(x, -1))
    v = 2.0 * np.arctan(slope)
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise InputError("initial profile produced non-finite samples")
    return CharState(0.0, Y, x, u, v, np.ones(N))


def rhs(state: CharState) -> Derivs:
    f = nonlocal_fields(state)
    u, v, q = state.u, state.v, state.q
    sh2 = np.sin(0.5 * v) ** 2
    ch2 = 1.0 - sh2
    W = f.P1 + f.dxP2
    u_T = -f.dxP1 - f.P2
    v_T = -u * sh2 + 2.0 * u ** 3 * ch2 - 2.0 * ch2 * W
    q_T = q * ((2.0 * u ** 3 + u) - 2.0 * W) * np.sin(v)
    return Derivs(u_T, v_T, q_T, u * u)


def _advance(state, d: Derivs, h):
    return replace(state, t=state.t + h, x=state.x + h * d.x_T,
                   u=state.u + h * d.u_T, v=state.v + h * d.v_T,
                   q=state.q + h * d.q_T)


def step_rk4(state: CharState, dt: float) -> CharState:
    if not dt > 0:
        raise UsageError("dt must be positive")
    k1 = rhs(state)
    vmax = float(np.max(np.abs(k1.v_T)))
    if dt * vmax >= 0.5:
        raise UsageError(f"dt={dt} too large: dt*max|v_T| = {dt * vmax:.3f} >= 0.5")
    try:
        k2 = rhs(_advance(state, k1, 0.5 * dt))
        k3 = rhs(_advance(state, k2, 0.5 * dt))
        k4 = rhs(_advance(state, k3, dt))
    except InputError as exc:
        # non-finite or folded intermediate stage
        raise DivergenceError(f"{exc} inside the step from t={state.t:.6g}",
                              last_good=state) from None
    comb = Derivs(*[(a + 2 * b + 2 * c + e) / 6.0 for a, b, c, e in zip(k1, k2, k3, k4)])
    new = _advance(state, comb, dt)
    if not new.is_finite():
        raise DivergenceError(f"non-finite state at t={new.t:.6g}", last_good=state)
    try:
        monotone_positions(new.x)
    except MonotonicityError as exc:
        raise DivergenceError(f"{exc} at t={new.t:.6g}", last_good=state) from None
    return new


def _weights(state):
    return trapezoid_weights(state.n, state.dY)


def energy_h1(state: CharState) -> float:
    """int (u^2 + u_x^2) dx in label variables."""
    sh2 = np.sin(0.5 * state.v) ** 2
    ch2 = 1.0 - sh2
    dens = (state.u ** 2 * ch2 * ch2 + sh2 * ch2) * state.q
    return float(np.dot(dens, _weights(state)))


def q_total(state: CharState) -> float:
    return float(np.dot(state.q, _weights(state)))


def x_consistency(state: CharState) -> float:
    """max_i |x_i - (x_0 + int_0^Y_i q cos^4(v/2) dY)|."""
    xy = state.q * np.cos(0.5 * state.v) ** 4
    cum = cumulative_simpson(xy, dx=state.dY, initial=0.0)
    return float(np.max(np.abs(state.x - (state.x[0] + cum))))


def jacobian_min(state: CharState):
    """Smallest x_Y = q cos^4(v/2) on the grid and where it occurs."""
    det = state.q * np.cos(0.5 * state.v) ** 4
    i = int(np.argmin(det))
    return float(det[i]), i


@dataclass
class TrajectoryRecord:
    snapshots: list = field(default_factory=list)
    # rows of (t, E1, Qtot, jac_min)
    energy_series: list = field(default_factory=list)
    # rows of (t_before, t_after, node index, v_before, v_after)
    events_raw: list = field(default_factory=list)
    min_q: list = field(default_factory=list)
    # largest decrease x_i - x_{i+1} relative to the span, per step
    monotonicity_violation: list = field(default_factory=list)

    @property
    def times(self):
        return [s.t for s in self.snapshots]

    def energy_drift(self) -> float:
        e = np.array([row[1] for row in self.energy_series])
        return float(np.max(np.abs(e - e[0])) / e[0]) if e[0] != 0 else float(np.max(np.abs(e)))


def _record_diagnostics(rec: TrajectoryRecord, state: CharState):
    jm, _ = jacobian_min(state)
    rec.energy_series.append((state.t, energy_h1(state), q_total(state), jm))
    rec.min_q.append(float(np.min(state.q)))
    span = max(state.x[-1] - state.x[0], 1.0)
    rec.monotonicity_violation.append(float(max(0.0, -np.min(np.diff(state.x))) / span))


def run(state: CharState, dt: float, t_end: float, snapshot_every: int = 50,
        stop=None) -> TrajectoryRecord:
    """Integrate to ``t_end`` with a fixed step.

    ``stop(state, record)``, when given, is consulted after every step and
    ends the run early when it returns True.
    """
    if not (dt > 0 and t_end > 0):
        raise UsageError("dt and t_end must be positive")
    if snapshot_every < 1:
        raise UsageError("snapshot_every must be >= 1")
    t_start = state.t
    nsteps = int(round((t_end - t_start) / dt))
    rec = TrajectoryRecord()
    rec.snapshots.append(state.copy())
    _record_diagnostics(rec, state)
    for k in range(1, nsteps + 1):
        new = replace(step_rk4(state, dt), t=t_start + k * dt)
        crossed = np.flatnonzero(np.sign(state.v - np.pi) != np.sign(new.v - np.pi))
        for i in crossed:
            rec.events_raw.append((state.t, new.t, int(i), float(state.v[i]), float(new.v[i])))
        state = new
        _record_diagnostics(rec, state)
        last = k == nsteps
        if k % snapshot_every == 0 or last:
            rec.snapshots.append(state.copy())
        if stop is not None and stop(state, rec):
            if not (k % snapshot_every == 0 or last):
                rec.snapshots.append(state.copy())
            break
    log.debug("run finished at t=%g with %d snapshots", state.t, len(rec.snapshots))
    return rec
