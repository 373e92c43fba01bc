"""Direct x-space integrator for u_t + u^2 u_x + dxP1 + P2 = 0.

Valid only before wave breaking; it exists to cross-check the
characteristic solver on smooth data.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np
from scipy.interpolate import PchipInterpolator

from .charsolver import jacobian_min
from .errors import BreakdownProximityError, ComparisonImpossibleError, DivergenceError, UsageError
from .green import conv_exp, kink_correction, trapezoid_weights

log = logging.getLogger(__name__)

DEFAULT_SLOPE_CAP = 50.0


@dataclass(frozen=True)
class RefState:
    t: float
    x: np.ndarray
    u: np.ndarray
    slope_cap: float = DEFAULT_SLOPE_CAP

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])


def ref_init(profile, L: float = 20.0, N: int = 4096,
             slope_cap: float = DEFAULT_SLOPE_CAP) -> RefState:
    if N < 16:
        raise UsageError("need N >= 16 grid points")
    x = np.linspace(-L, L, N)
    return RefState(0.0, x, np.asarray(profile.value(x), dtype=float), slope_cap)


def ddx4(u, h):
    """Fourth-order centered first derivative, second order at the two
    outermost nodes on each side."""
    d = np.empty_like(u)
    d[2:-2] = (u[:-4] - 8 * u[1:-3] + 8 * u[3:-1] - u[4:]) / (12 * h)
    d[1] = (u[2] - u[0]) / (2 * h)
    d[-2] = (u[-1] - u[-3]) / (2 * h)
    d[0] = (-3 * u[0] + 4 * u[1] - u[2]) / (2 * h)
    d[-1] = (3 * u[-1] - 4 * u[-2] + u[-3]) / (2 * h)
    return d


def ref_rhs(state: RefState) -> np.ndarray:
    h = state.dx
    u = state.u
    ux = ddx4(u, h)
    if np.max(np.abs(ux)) >= state.slope_cap:
        raise BreakdownProximityError(
            f"max|u_x| = {np.max(np.abs(ux)):.3g} exceeds the slope cap at t={state.t:.4g}")
    w = trapezoid_weights(u.size, h)
    f1 = 1.5 * u * ux * ux + u ** 3
    f2 = 0.5 * ux ** 3
    ones = np.ones_like(u)
    P1, dxP1 = kink_correction(*conv_exp(state.x, f1, w), f1, ones, h)
    P2, _ = kink_correction(*conv_exp(state.x, f2, w), f2, ones, h)
    return -u * u * ux - dxP1 - P2


def ref_step(state: RefState, dt: float) -> RefState:
    k1 = ref_rhs(state)
    k2 = ref_rhs(replace(state, u=state.u + 0.5 * dt * k1))
    k3 = ref_rhs(replace(state, u=state.u + 0.5 * dt * k2))
    k4 = ref_rhs(replace(state, u=state.u + dt * k3))
    u = state.u + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    if not np.all(np.isfinite(u)):
        raise DivergenceError(f"non-finite reference state at t={state.t + dt:.6g}",
                              last_good=state)
    return replace(state, u=u)


def ref_run(state: RefState, dt: float, t_end: float, snapshot_every: int = 50,
            stop_at_cap: bool = False) -> list:
    """Fixed-step RK4; returns snapshots at t0, every ``snapshot_every`` steps
    and at the end.

    With ``stop_at_cap`` a slope-cap violation ends the run quietly and the
    snapshots gathered so far are returned.
    """
    if not (dt > 0 and t_end > 0):
        raise UsageError("dt and t_end must be positive")
    t0 = state.t
    nsteps = int(round((t_end - t0) / dt))
    snaps = [state]
    for k in range(1, nsteps + 1):
        try:
            state = replace(ref_step(state, dt), t=t0 + k * dt)
        except BreakdownProximityError:
            if not stop_at_cap:
                raise
            log.info("reference run stopped at the slope cap, t=%g", state.t)
            break
        if k % snapshot_every == 0 or k == nsteps:
            snaps.append(state)
    return snaps


def ref_energy(state: RefState) -> float:
    ux = ddx4(state.u, state.dx)
    return float(np.dot(state.u ** 2 + ux ** 2, trapezoid_weights(state.u.size, state.dx)))


def resample(char_state, x_grid) -> np.ndarray:
    """Monotone cubic interpolation of (x_i, u_i) onto ``x_grid``; zero
    outside the characteristic grid's reach."""
    x, keep = np.unique(char_state.x, return_index=True)
    interp = PchipInterpolator(x, char_state.u[keep], extrapolate=False)
    out = interp(x_grid)
    return np.where(np.isfinite(out), out, 0.0)


def compare_solutions(char_record, ref_snaps, jac_floor: float = 1e-3,
                      time_tol: float = 1e-9):
    """Relative L2 deviation at every shared time before breaking proximity.

    Returns ``(max_deviation, [(t, deviation), ...])``.
    """
    by_time = {round(s.t / time_tol): s for s in ref_snaps}
    series = []
    for cs in char_record.snapshots:
        rs = by_time.get(round(cs.t / time_tol))
        if rs is None:
            continue
        if jacobian_min(cs)[0] < jac_floor:
            break
        uc = resample(cs, rs.x)
        w = trapezoid_weights(rs.x.size, rs.dx)
        num = np.sqrt(np.dot((uc - rs.u) ** 2, w))
        den = np.sqrt(np.dot(rs.u ** 2, w))
        series.append((cs.t, float(num / den) if den > 0 else float(num)))
    if not any(t > 0 for t, _ in series):
        raise ComparisonImpossibleError(
            "no shared pre-breaking time (t > 0) between the two runs")
    return max(d for _, d in series), series
