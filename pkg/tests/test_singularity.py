import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from novikov_lab.charsolver import CharState, TrajectoryRecord
from novikov_lab.errors import DegenerateFitError, WindowError
from novikov_lab.oracle import make_config, orders, u_jet, x_jet
from novikov_lab.singularity import (
    TYPE_I, TYPE_II, UNCLASSIFIED, FitConfig, SingularEvent, analyze_run,
    classify_event, default_theta1, detect_events, fit_exponent, report_to_dict,
)


def snapshot(Y, v, t=0.0, x=None, u=None):
    Y = np.asarray(Y, dtype=float)
    x = Y.copy() if x is None else x
    u = np.zeros_like(Y) if u is None else u
    return CharState(t, Y, x, u, np.asarray(v, dtype=float), np.ones_like(Y))


def oracle_snapshot(v, N=2001, smax=1.0, model="novikov"):
    cfg = make_config(model, v=v, order=16)
    Y = np.linspace(-smax, smax, N)
    ev = lambda j: np.array([j.evaluate(s) for s in Y])
    return cfg, CharState(0.0, Y, ev(x_jet(cfg).to_real()), ev(u_jet(cfg).to_real()),
                          ev(cfg.v.as_float_jet()), np.ones(N))


# -- fitter ------------------------------------------------------------------

def test_fit_exact_power_law():
    s = np.arange(10, 21) / 100
    prof = np.column_stack([s ** 5, s ** 4])
    f = fit_exponent(prof, 0.0, 0.0, (0.09 ** 5, 0.21 ** 5), "right")
    assert abs(f.alpha - 0.8) <= 1e-12
    assert f.r_squared == pytest.approx(1.0, abs=1e-12)
    assert f.A_hat == pytest.approx(1.0, rel=1e-10)
    assert f.n_points == 11


@settings(max_examples=50, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(0.1, 10.0), st.floats(-5, 5), st.floats(-5, 5),
       st.sampled_from(["left", "right"]))
def test_fit_exactness_property(alpha, amp, x0, u0, side):
    r = np.geomspace(1e-3, 1e-1, 30)
    sgn = 1 if side == "right" else -1
    prof = np.column_stack([x0 + sgn * r, u0 + amp * r ** alpha])
    f = fit_exponent(prof, x0, u0, (1e-3 * 0.99, 0.1 * 1.01), side)
    # subtracting u0 back out loses digits when the smallest increment is tiny
    cond = (1 + abs(u0)) / (amp * r[0] ** alpha)
    tol = 1e-9 + 1e3 * np.finfo(float).eps * cond
    assert abs(f.alpha - alpha) <= tol
    assert f.A_hat == pytest.approx(amp, rel=10 * tol)


def test_fit_errors():
    prof = np.column_stack([np.linspace(0.1, 1, 10), np.linspace(0.1, 1, 10)])
    with pytest.raises(WindowError):
        fit_exponent(prof, 0.0, 0.0, (0.5, 0.6), "right")
    with pytest.raises(WindowError):
        fit_exponent(prof, 0.0, 0.0, (0.6, 0.5), "right")
    with pytest.raises(WindowError):
        fit_exponent(prof, 0.0, 0.0, (0.1, 1.0), "up")
    same_r = np.column_stack([np.full(5, 0.3), np.arange(1, 6) / 10])
    with pytest.raises(DegenerateFitError):
        fit_exponent(same_r, 0.0, 0.0, (0.1, 1.0), "right")


# -- detection ---------------------------------------------------------------

def test_no_crossing_no_event():
    Y = np.linspace(-3, 3, 101)
    s = snapshot(Y, np.full_like(Y, 2.9))
    rec = TrajectoryRecord([s, snapshot(Y, np.full_like(Y, 2.95), t=1.0)])
    assert detect_events(rec) == []


def test_tanh_crossing():
    Y = np.linspace(-3, 3, 600)
    rec = TrajectoryRecord([snapshot(Y, np.pi + np.tanh(Y))])
    (e,) = detect_events(rec)
    assert e.Y0 == pytest.approx(0.0, abs=1e-4)
    assert e.vY == pytest.approx(1.0, abs=1e-3)
    assert e.source == "space"


def test_interpolated_crossing_lies_on_level_set():
    rng = np.random.default_rng(3)
    Y = np.linspace(-2, 2, 400)
    v = np.pi + np.sin(3 * Y + 0.3) + 0.1 * rng.normal(size=Y.size)
    rec = TrajectoryRecord([snapshot(Y, v)])
    events = detect_events(rec)
    assert events
    for e in events:
        assert abs(np.interp(e.Y0, Y, v) - np.pi) <= 1e-8


def test_quadratic_touch_is_type_i():
    Y = np.linspace(-1, 1, 201)
    rec = TrajectoryRecord([snapshot(Y, np.pi + Y ** 2)])
    (e,) = detect_events(rec)
    theta1 = default_theta1(rec.snapshots[0], e.node)
    assert abs(e.vY) < theta1
    assert e.vYY == pytest.approx(2.0, rel=1e-6)
    assert classify_event(e, theta1).classification == TYPE_I


def test_time_event_between_snapshots():
    # v = pi + t - 0.5 - Y^2 first reaches pi at Y = 0, t = 0.5
    Y = np.linspace(-2, 2, 401)
    snaps = [snapshot(Y, np.pi + t - 0.5 - Y ** 2, t=t) for t in (0.0, 1.0)]
    events = detect_events(TrajectoryRecord(snaps))
    time_events = [e for e in events if e.source == "time"]
    assert len(time_events) == 1
    e = time_events[0]
    assert e.t0 == pytest.approx(0.5) and e.Y0 == pytest.approx(0.0)
    # the two branches born from it are space events at t = 1
    space = sorted(e.Y0 for e in events if e.source == "space")
    assert space == pytest.approx([-np.sqrt(0.5), np.sqrt(0.5)], abs=1e-4)


def test_moving_crossing_is_not_duplicated_as_time_event():
    Y = np.linspace(-3, 3, 601)
    snaps = [snapshot(Y, np.pi + np.tanh(Y - c), t=c) for c in (0.0, 0.2, 0.4)]
    events = detect_events(TrajectoryRecord(snaps))
    assert [e.source for e in events] == ["space"] * 3


# -- classification ----------------------------------------------------------

def _ev(vY, vYY):
    return SingularEvent(0.0, 0.0, 0.0, 0.0, vY, vYY)


def test_classification_rules():
    assert classify_event(_ev(1.0, 0.3), 0.05).classification == TYPE_II
    assert "vYY=0.3" in classify_event(_ev(1.0, 0.3), 0.05).resolution_flags
    assert classify_event(_ev(1e-6, 2.0), 0.05).classification == TYPE_I
    e = classify_event(_ev(1e-6, 1e-9), 0.05)
    assert e.classification == UNCLASSIFIED and e.resolution_flags


# -- whole-run analysis --------------------------------------------------------

def test_zero_record_gives_empty_report():
    Y = np.linspace(-5, 5, 64)
    rec = TrajectoryRecord([snapshot(Y, np.zeros_like(Y), t=t) for t in (0.0, 1.0)])
    assert analyze_run(rec) == {"events": []}


@pytest.mark.parametrize("v,ptype", [("pi,1", TYPE_II), ("pi,0,1", TYPE_I)])
def test_oracle_closure(v, ptype):
    cfg, snap = oracle_snapshot(v)
    target = float(orders(cfg).exponent)
    rep = analyze_run(TrajectoryRecord([snap]), FitConfig())
    (item,) = rep["events"]
    assert item["event"].classification == ptype
    assert abs(item["median_alpha"] - target) <= 0.02
    for f in item["fits"]:
        assert abs(f.alpha - target) <= 0.02


def test_type_i_carries_both_references():
    _, snap = oracle_snapshot("pi,0,1")
    (item,) = analyze_run(TrajectoryRecord([snap]))["events"]
    refs = {f.alpha_ref for f in item["fits"]}
    assert refs == {0.75, 7 / 9}


def test_side_symmetry_on_oracle_curve():
    _, snap = oracle_snapshot("pi,1")
    (item,) = analyze_run(TrajectoryRecord([snap]))["events"]
    by = {}
    for f in item["fits"]:
        by.setdefault(f.window, {})[f.side] = f.alpha
    for sides in by.values():
        assert abs(sides["left"] - sides["right"]) <= 0.02


def test_report_serialisation():
    _, snap = oracle_snapshot("pi,1")
    d = report_to_dict(analyze_run(TrajectoryRecord([snap])))
    ev = d["events"][0]
    assert set(ev["event"]) == {"t0", "Y0", "x0", "u0", "vY", "vYY", "type"}
    assert {"side", "window", "alpha", "A_hat", "r2", "alpha_ref",
            "abs_dev"} <= set(ev["fits"][0])
