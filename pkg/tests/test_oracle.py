import json
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from novikov_lab.errors import TruncationError, UsageError
from novikov_lab.jets import Base, Jet, angle, trig, trig_half
from novikov_lab.oracle import (
    Model, SingularPointConfig, make_config, mixed_orders, orders, claimed_formulas,
    q_t_jet, synth_curve, u_y_jet, v_t_jet, x_y_jet,
)
from novikov_lab.singularity import fit_exponent


def test_u_y_jet_examples():
    assert u_y_jet(make_config(v="pi,1", order=9)).coeffs[:4] == (0, 0, 0, F(-1, 8))
    j = u_y_jet(make_config(v="pi,0,1", order=12))
    assert j.vanishing_order() == 6 and j[6] == F(-1, 8)
    j = u_y_jet(make_config("ch", v="pi,1", order=6))
    assert j.vanishing_order() == 1 and j[1] == F(-1, 2)


def test_x_y_jet_examples():
    j = x_y_jet(make_config(v="pi,1", order=9))
    assert j.vanishing_order() == 4 and j[4] == F(1, 16)
    j = x_y_jet(make_config(v="pi,0,1", order=12))
    assert j.vanishing_order() == 8 and j[8] == F(1, 16)
    regular = make_config(v="0", order=6)
    assert x_y_jet(regular) == Jet.constant(1, 6)
    assert regular.point_type() == "regular"
    with pytest.raises(UsageError):
        orders(regular)


def test_orders_type_ii():
    rep = orders(make_config(v="pi,1", order=12))
    assert (rep.point_type, rep.ord_u, rep.ord_x) == ("II", 4, 5)
    assert (rep.lead_u, rep.lead_x, rep.exponent) == (F(-1, 32), F(1, 80), F(4, 5))


def test_orders_type_i_reports_discrepancy():
    rep = orders(make_config(v="pi,0,1", order=12))
    assert (rep.point_type, rep.ord_u, rep.ord_x) == ("I", 7, 9)
    assert (rep.lead_u, rep.lead_x, rep.exponent) == (F(-1, 56), F(1, 144), F(7, 9))
    disc = {d["name"]: (d["paper"], d["oracle"]) for d in rep.discrepancies}
    assert disc["ord_u"] == (6, 7)
    assert disc["ord_x"] == (8, 9)
    assert disc["exponent"] == (F(3, 4), F(7, 9))
    # every claim has a matching oracle entry
    assert set(rep.paper_claims) <= set(rep.oracle_values)


def test_orders_camassa_holm():
    rep = orders(make_config("ch", v="pi,1", order=8))
    assert (rep.ord_u, rep.ord_x, rep.exponent) == (2, 3, F(2, 3))
    assert rep.exponent != orders(make_config(v="pi,1", order=8)).exponent


def test_orders_truncation_error():
    with pytest.raises(TruncationError):
        orders(make_config(v="pi,1", order=3))


def test_report_json_shape():
    d = json.loads(orders(make_config(v="pi,1")).to_json())
    assert d["lead_u"] == "-1/32" and d["exponent"] == "4/5"
    assert {"model", "ord_u", "ord_x", "paper_claims", "oracle_values",
            "discrepancies"} <= set(d)


def test_claimed_formulas_verbatim():
    f = claimed_formulas(make_config(v="pi,1"))
    assert f["u_Y4"] == F(1, 2)
    assert f["x_Y5"] == F(-3, 2)
    # the expanded display evaluates to the oracle's -(3/4) q v_Y^3
    assert f["u_Y4_expanded"] == F(-3, 4)
    assert claimed_formulas(make_config(v="pi,0,1"))["x_Y8"] == 576


def test_type_ii_derivative_values_against_claims():
    rep = orders(make_config(v="pi,1"))
    assert rep.oracle_values["u_Y4"] == F(-3, 4)
    assert rep.oracle_values["x_Y5"] == F(3, 2)
    names = {d["name"] for d in rep.discrepancies}
    assert names == {"u_Y4", "x_Y5"}


@pytest.mark.parametrize("m", [1, 2, 3])
def test_order_law_sweep(m):
    v = "pi," + ",".join(["0"] * (m - 1) + ["1"])
    nov = orders(make_config(v=v, order=4 * m + 2))
    assert (nov.ord_u, nov.ord_x) == (3 * m + 1, 4 * m + 1)
    ch = orders(make_config("ch", v=v, order=4 * m + 2))
    assert (ch.ord_u, ch.ord_x) == (m + 1, 2 * m + 1)


K = 8
rationals = st.fractions(min_value=-4, max_value=4, max_denominator=7)
positive = st.fractions(min_value=F(1, 7), max_value=4, max_denominator=7)


@st.composite
def configs(draw):
    off = [0] + draw(st.lists(rationals, min_size=K, max_size=K))
    q = [draw(positive)] + draw(st.lists(rationals, min_size=K, max_size=K))
    return SingularPointConfig(angle(Base.PI, off, K), Jet.from_coeffs(q, K))


@settings(max_examples=100, deadline=None)
@given(configs())
def test_u_y_form_equivalence(cfg):
    sh, ch = trig_half(cfg.v)
    sin_v, _ = trig(cfg.v)
    assert F(1, 2) * cfg.q * sin_v * ch * ch == u_y_jet(cfg)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 2), positive, st.sampled_from(["novikov", "ch"]))
def test_scaling_covariance(m, lam, model):
    v = "pi," + ",".join(["0"] * (m - 1) + ["1"])
    base = orders(make_config(model, v=v, order=10))
    scaled = orders(make_config(model, v=v, q=str(lam), order=10))
    assert (scaled.ord_u, scaled.ord_x, scaled.exponent) == (base.ord_u, base.ord_x,
                                                             base.exponent)
    assert scaled.lead_u == lam * base.lead_u
    assert scaled.lead_x == lam * base.lead_x


def test_v_t_and_q_t_examples():
    zero = make_config(v="pi,1", u="0", w="0", order=6)
    assert v_t_jet(zero) == Jet.zero(6)
    still = make_config(v="pi", u="-1", w="0", order=6)
    assert v_t_jet(still)[0] == 1
    assert q_t_jet(make_config(v="pi", u="2,1,3", w="1,1", order=6))[0] == 0
    with pytest.raises(UsageError):
        v_t_jet(make_config("ch", v="pi,1"))


def test_mixed_orders_type_i():
    m = mixed_orders(make_config(v="pi,0,1", u="-1", w="0"))
    # u_{Y^2 t} .. u_{Y^4 t} vanish, as claimed
    assert m["uYt_order"] >= 4
    assert m["uYt_order"] == 4 and m["xYt_order"] == 6
    assert m["v_Yt"] == 0
    # the closed forms carry a factor v_Yt and so vanish; the oracle does not
    assert m["paper"] == {"u_Y5t": 0, "x_Y7t": 0}
    assert m["oracle"] == {"u_Y5t": -9, "x_Y7t": 180}


def test_mixed_orders_zero_state():
    m = mixed_orders(make_config(v="pi,0,1", u="0", w="0"))
    assert m["uYt_order"] is None and m["xYt_order"] is None
    assert m["uYt_jet"] == Jet.zero(12) and m["xYt_jet"] == Jet.zero(12)


def test_mixed_orders_type_ii():
    m = mixed_orders(make_config(v="pi,1", u="-1", w="0"))
    assert (m["uYt_order"], m["xYt_order"]) == (2, 3)


# -- synthetic curves --------------------------------------------------------

def _fit_synth(cfg, smax, side="right"):
    s = np.linspace(smax / 10, smax, 40)
    pts = synth_curve(cfg, np.concatenate([s, -s]))
    assert all(p.trusted for p in pts)
    prof = np.array([(p.x, p.u) for p in pts])
    r = prof[:, 0] if side == "right" else -prof[:, 0]
    r = r[r > 0]
    return fit_exponent(prof, 0.0, 0.0, (0.999 * r.min(), 1.001 * r.max()), side).alpha


def test_synth_curve_examples():
    cfg = make_config(v="pi,1", order=12)
    base = synth_curve(cfg, [0.0])[0]
    assert (base.x, base.u) == (0.0, 0.0)
    p = synth_curve(cfg, [0.1])[0]
    assert p.x == pytest.approx(1e-5 / 80, rel=1e-2)
    assert p.u == pytest.approx(-1e-4 / 32, rel=1e-2)
    # far outside the trust region the flag drops
    assert not synth_curve(make_config(v="pi,0,1"), [3.0])[0].trusted


def test_synth_curve_type_i_parity():
    # v = pi + s^2 is even in s, so u - u0 and x - x0 (orders 7 and 9) are odd
    cfg = make_config(v="pi,0,1", order=12)
    for s in (0.1, 0.3, 0.5):
        a, b = synth_curve(cfg, [s, -s])
        assert b.x == pytest.approx(-a.x, rel=1e-12)
        assert b.u == pytest.approx(-a.u, rel=1e-12)


@pytest.mark.parametrize("model,v,lo,hi", [
    ("novikov", "pi,1", 0.78, 0.82),
    ("ch", "pi,1", 0.65, 0.68),
    ("novikov", "pi,0,1", 7 / 9 - 0.02, 7 / 9 + 0.02),
])
def test_synth_curve_fit_brackets_exponent(model, v, lo, hi):
    cfg = make_config(model, v=v, order=16)
    for side in ("left", "right"):
        assert lo <= _fit_synth(cfg, 0.5, side) <= hi


def test_synth_window_stability():
    cfg = make_config(v="pi,1", order=16)
    assert abs(_fit_synth(cfg, 1.0) - _fit_synth(cfg, 0.5)) <= 0.02


def test_model_parse():
    assert Model.parse("Camassa-Holm") is Model.CAMASSA_HOLM
    with pytest.raises(UsageError):
        Model.parse("kdv")
