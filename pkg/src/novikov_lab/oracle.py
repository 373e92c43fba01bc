"""Exact local kinematics at a point where the angle variable v equals pi.

Everything here is expressed in the characteristic label offset s = Y - Y0
at a fixed time. The two kinematic relations

    x_Y = q cos^4(v/2)            (Camassa-Holm: q cos^2(v/2))
    u_Y = q sin(v/2) cos^3(v/2)   (Camassa-Holm: q sin(v/2) cos(v/2))

are pushed through jet arithmetic and then integrated once in s, which
gives the vanishing orders of u - u0 and x - x0 and hence the cusp
exponent ord_u / ord_x of u as a function of x.

The closed forms published for the individual derivatives are evaluated
separately in :func:`claimed_formulas` and compared, never trusted.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

from .errors import TruncationError, UsageError
from .jets import (
    DEFAULT_ORDER,
    EXACT,
    AngleJet,
    Base,
    Jet,
    coerce,
    format_coeff,
    parse_angle,
    parse_jet,
    trig,
    trig_half,
)

# Coefficients at or below this magnitude count as zero in real mode.
REAL_TOL = 1e-12


class Model(enum.Enum):
    NOVIKOV = "novikov"
    CAMASSA_HOLM = "ch"

    @classmethod
    def parse(cls, text: str) -> "Model":
        key = text.strip().lower()
        aliases = {"novikov": cls.NOVIKOV, "ch": cls.CAMASSA_HOLM,
                   "camassa-holm": cls.CAMASSA_HOLM,
                   "camassaholm": cls.CAMASSA_HOLM}
        if key not in aliases:
            raise UsageError(f"unknown model {text!r}")
        return aliases[key]


@dataclass(frozen=True)
class SingularPointConfig:
    """Jets of the smooth fields at a candidate singular point.

    ``u_jet`` is the full u(s) series (constant term u0). When omitted it is
    derived from the kinematic u_Y relation. ``w_jet`` is the nonlocal field
    P1 + d/dx P2, treated as free smooth data; zero when omitted.
    """

    v: AngleJet
    q: Jet
    model: Model = Model.NOVIKOV
    u0: object = 0
    x0: object = 0
    u_jet: Optional[Jet] = None
    w_jet: Optional[Jet] = None

    def __post_init__(self):
        # a zero base is allowed so the kinematic jets can be checked at a
        # regular point; orders() insists on pi
        if self.v.base not in (Base.PI, Base.ZERO):
            raise UsageError("v must be symbolic 0 or pi at s = 0")
        if self.q.order != self.v.order or self.q.domain != self.v.domain:
            raise UsageError("v and q jets must share order and domain")
        if not self.q[0] > 0:
            raise UsageError("q must be positive at the singular point")
        for name in ("u_jet", "w_jet"):
            j = getattr(self, name)
            if j is not None and (j.order != self.order or j.domain != self.domain):
                raise UsageError(f"{name} must share order and domain with v")
        object.__setattr__(self, "u0", coerce(
            self.u_jet[0] if self.u_jet is not None else self.u0, self.domain))
        object.__setattr__(self, "x0", coerce(self.x0, self.domain))

    @property
    def order(self) -> int:
        return self.v.order

    @property
    def domain(self) -> str:
        return self.v.domain

    @property
    def v_y(self):
        return self.v.derivative_at_zero(1)

    @property
    def v_yy(self):
        return self.v.derivative_at_zero(2) if self.order >= 2 else 0

    def point_type(self) -> str:
        """"II" when v_Y != 0, "I" when v_Y = 0 != v_YY, else "degenerate"
        ("regular" when v is not pi at all)."""
        if self.v.base is not Base.PI:
            return "regular"
        if self.v_y != 0:
            return "II"
        if self.v_yy != 0:
            return "I"
        return "degenerate"


def u_y_jet(cfg: SingularPointConfig) -> Jet:
    sh, ch = trig_half(cfg.v)
    if cfg.model is Model.CAMASSA_HOLM:
        return cfg.q * sh * ch
    return cfg.q * sh * ch ** 3


def x_y_jet(cfg: SingularPointConfig) -> Jet:
    _, ch = trig_half(cfg.v)
    if cfg.model is Model.CAMASSA_HOLM:
        return cfg.q * ch ** 2
    return cfg.q * ch ** 4


def u_jet(cfg: SingularPointConfig) -> Jet:
    """u(s): the supplied jet if any, else u0 + integral of u_Y."""
    if cfg.u_jet is not None:
        return cfg.u_jet
    return u_y_jet(cfg).antiderivative(cfg.u0)


def x_jet(cfg: SingularPointConfig) -> Jet:
    return x_y_jet(cfg).antiderivative(cfg.x0)


def w_jet(cfg: SingularPointConfig) -> Jet:
    if cfg.w_jet is not None:
        return cfg.w_jet
    return Jet.zero(cfg.order, cfg.domain)


def _require_novikov(cfg):
    if cfg.model is not Model.NOVIKOV:
        raise UsageError("time derivatives are only modelled for Novikov")


def v_t_jet(cfg: SingularPointConfig) -> Jet:
    """-u sin^2(v/2) + 2u^3 cos^2(v/2) - 2 cos^2(v/2) W."""
    _require_novikov(cfg)
    sh, ch = trig_half(cfg.v)
    u, w = u_jet(cfg), w_jet(cfg)
    ch2 = ch * ch
    return -(u * sh * sh) + 2 * (u ** 3) * ch2 - 2 * ch2 * w


def q_t_jet(cfg: SingularPointConfig) -> Jet:
    """q [(2u^3 + u) - 2W] sin v."""
    _require_novikov(cfg)
    sin_v, _ = trig(cfg.v)
    u, w = u_jet(cfg), w_jet(cfg)
    return cfg.q * (2 * u ** 3 + u - 2 * w) * sin_v


def u_yt_jet(cfg: SingularPointConfig) -> Jet:
    """d/dT of u_Y = q sh ch^3 by the product rule, with sh_T = (v_T/2) ch
    and ch_T = -(v_T/2) sh."""
    sh, ch = trig_half(cfg.v)
    vt, qt = v_t_jet(cfg), q_t_jet(cfg)
    ch2 = ch * ch
    return qt * sh * ch2 * ch + cfg.q * vt * ch2 * (ch2 - 3 * sh * sh) * Fraction(1, 2)


def x_yt_jet(cfg: SingularPointConfig) -> Jet:
    """d/dT of x_Y = q ch^4."""
    sh, ch = trig_half(cfg.v)
    vt, qt = v_t_jet(cfg), q_t_jet(cfg)
    ch3 = ch ** 3
    return qt * ch3 * ch - 2 * cfg.q * vt * sh * ch3


def mixed_orders(cfg: SingularPointConfig) -> dict:
    """Vanishing orders of d/dT u_Y and d/dT x_Y in s.

    An order n for d/dT u_Y means u_{Y^k t} = 0 for k = 1..n and
    u_{Y^(n+1) t} != 0. ``None`` means the order exceeds the truncation.
    """
    uyt, xyt = u_yt_jet(cfg), x_yt_jet(cfg)
    v_yt = v_t_jet(cfg).derivative_at_zero(1)
    tol = 0 if cfg.domain == EXACT else REAL_TOL
    claims = claimed_formulas(cfg, v_yt=v_yt)
    # u_{Y^5 t} = d^4/ds^4 (u_Yt) at 0, x_{Y^7 t} = d^6/ds^6 (x_Yt) at 0
    oracle_vals = {}
    if cfg.order >= 4:
        oracle_vals["u_Y5t"] = uyt.derivative_at_zero(4)
    if cfg.order >= 6:
        oracle_vals["x_Y7t"] = xyt.derivative_at_zero(6)
    return {
        "uYt_order": uyt.vanishing_order(tol),
        "xYt_order": xyt.vanishing_order(tol),
        "v_Yt": v_yt,
        "paper": {k: claims[k] for k in oracle_vals},
        "oracle": oracle_vals,
        "uYt_jet": uyt,
        "xYt_jet": xyt,
    }


def claimed_formulas(cfg: SingularPointConfig, v_yt=None) -> dict:
    """Published closed forms evaluated literally at v = pi.

    cos(pi) = -1, sin(pi/2) = 1 are substituted exactly. The values are
    claims to be compared, not ground truth.
    """
    one = coerce(1, cfg.domain)
    cos_v, sin_half = -one, one
    q = cfg.q[0]
    vy, vyy = cfg.v_y, cfg.v_yy
    out = {
        "u_Y4": Fraction(1, 2) * vy ** 3 * q,
        "u_Y4_expanded": (Fraction(1, 4) * q * vy ** 3 * cos_v * sin_half ** 2
                          - Fraction(1, 2) * vy ** 3 * q * cos_v ** 2),
        "x_Y5": Fraction(3, 2) * q * vy ** 3 * cos_v ** 3,
        "u_Y6": (Fraction(6, 8) * q * vyy ** 3 * cos_v * sin_half ** 2
                 - 3 * vyy ** 3 * q * cos_v ** 2),
        "x_Y8": 36 * q * vyy ** 4 * sin_half ** 4,
    }
    if v_yt is not None:
        out["u_Y5t"] = (Fraction(6, 8) * q * vyy ** 2 * v_yt * cos_v * sin_half ** 2
                        - 3 * vyy ** 2 * v_yt * q * cos_v ** 2)
        out["x_Y7t"] = 36 * q * vyy ** 3 * v_yt * sin_half ** 4
    return {k: coerce(v, cfg.domain) for k, v in out.items()}


# Published vanishing orders and exponents per point type.
_CLAIMED_ORDERS = {
    "II": {"ord_u": 4, "ord_x": 5, "exponent": Fraction(4, 5)},
    "I": {"ord_u": 6, "ord_x": 8, "exponent": Fraction(3, 4)},
}
_CLAIMED_DERIVATIVES = {
    "II": (("u_Y4", "u", 4), ("x_Y5", "x", 5)),
    "I": (("u_Y6", "u", 6), ("x_Y8", "x", 8)),
}


@dataclass
class OrderReport:
    model: Model
    point_type: str
    ord_u: int
    ord_x: int
    lead_u: object
    lead_x: object
    exponent: Fraction
    paper_claims: dict = field(default_factory=dict)
    oracle_values: dict = field(default_factory=dict)
    discrepancies: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "model": self.model.value,
            "point_type": self.point_type,
            "ord_u": self.ord_u,
            "ord_x": self.ord_x,
            "lead_u": format_coeff(self.lead_u),
            "lead_x": format_coeff(self.lead_x),
            "exponent": format_coeff(self.exponent),
            "paper_claims": {k: _fmt(v) for k, v in self.paper_claims.items()},
            "oracle_values": {k: _fmt(v) for k, v in self.oracle_values.items()},
            "discrepancies": [
                {"name": d["name"], "paper": _fmt(d["paper"]),
                 "oracle": _fmt(d["oracle"])}
                for d in self.discrepancies
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _fmt(v):
    if isinstance(v, int) and not isinstance(v, bool):
        return v
    return format_coeff(v)


def _order_and_lead(j: Jet, what: str, tol=0):
    n = j.vanishing_order(tol)
    if n is None:
        raise TruncationError(
            f"{what} vanishes to every retained order (K={j.order}); raise K")
    return n, j[n]


def orders(cfg: SingularPointConfig) -> OrderReport:
    if cfg.v.base is not Base.PI:
        raise UsageError("orders() needs v = pi at the base point")
    du = u_y_jet(cfg).antiderivative(0)
    dx = x_y_jet(cfg).antiderivative(0)
    tol = 0 if cfg.domain == EXACT else REAL_TOL
    ord_u, lead_u = _order_and_lead(du, "u - u0", tol)
    ord_x, lead_x = _order_and_lead(dx, "x - x0", tol)
    ptype = cfg.point_type()
    report = OrderReport(
        model=cfg.model, point_type=ptype, ord_u=ord_u, ord_x=ord_x,
        lead_u=lead_u, lead_x=lead_x, exponent=Fraction(ord_u, ord_x))

    if cfg.model is not Model.NOVIKOV or ptype not in _CLAIMED_ORDERS:
        return report

    claims = dict(_CLAIMED_ORDERS[ptype])
    values = {"ord_u": ord_u, "ord_x": ord_x, "exponent": report.exponent}
    formulas = claimed_formulas(cfg)
    series = {"u": du, "x": dx}
    for name, which, n in _CLAIMED_DERIVATIVES[ptype]:
        claims[name] = formulas[name]
        j = series[which]
        values[name] = j.derivative_at_zero(n) if n <= j.order else None
    if ptype == "II":
        claims["u_Y4_expanded"] = formulas["u_Y4_expanded"]
        values["u_Y4_expanded"] = values["u_Y4"]

    report.paper_claims = claims
    report.oracle_values = values
    report.discrepancies = [
        {"name": k, "paper": claims[k], "oracle": values[k]}
        for k in claims if claims[k] != values[k]
    ]
    return report


class SynthSample(NamedTuple):
    s: float
    x: float
    u: float
    trusted: bool


def _trusted(j: Jet, s: float, rel: float) -> bool:
    n = j.vanishing_order()
    nz = [k for k, c in enumerate(j.coeffs) if c != 0]
    if n is None or s == 0:
        return True
    lead = abs(float(j[n]) * s ** n)
    last = abs(float(j[nz[-1]]) * s ** nz[-1])
    return nz[-1] == n or last <= rel * lead


def synth_curve(cfg: SingularPointConfig, s_values, rel_tol: float = 0.01) -> list:
    """Sample the (x(s), u(s)) profile from the oracle jets.

    Samples where the last retained term exceeds ``rel_tol`` times the
    leading term are returned with ``trusted=False``.
    """
    uj = u_y_jet(cfg).antiderivative(0)
    xj = x_y_jet(cfg).antiderivative(0)
    x0, u0 = float(cfg.x0), float(cfg.u0)
    out = []
    for s in s_values:
        s = float(s)
        ok = _trusted(uj, s, rel_tol) and _trusted(xj, s, rel_tol)
        out.append(SynthSample(s, x0 + xj.evaluate(s), u0 + uj.evaluate(s), ok))
    return out


def make_config(model="novikov", v="pi,1", q="1", order=DEFAULT_ORDER,
                domain=EXACT, u=None, w=None, u0=0) -> SingularPointConfig:
    """Build a config from the comma-separated text form used by the CLI."""
    model = Model.parse(model) if isinstance(model, str) else model
    return SingularPointConfig(
        v=parse_angle(v, order, domain),
        q=parse_jet(q, order, domain),
        model=model,
        u0=u0,
        u_jet=parse_jet(u, order, domain) if u is not None else None,
        w_jet=parse_jet(w, order, domain) if w is not None else None,
    )


__all__ = [
    "Model", "SingularPointConfig", "OrderReport", "SynthSample",
    "u_y_jet", "x_y_jet", "u_jet", "x_jet", "v_t_jet", "q_t_jet",
    "u_yt_jet", "x_yt_jet", "mixed_orders", "claimed_formulas", "orders",
    "synth_curve", "make_config",
]
