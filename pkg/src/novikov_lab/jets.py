"""Truncated univariate Taylor series ("jets") over exact rationals or floats.

A jet of order K stores c_0..c_K, the Taylor coefficients of a function of
the formal variable s, so that c_n = f^(n)(0) / n!. Multiplication silently
drops every term of degree > K.

Angles are kept apart from ordinary jets: an :class:`AngleJet` carries a
symbolic base value (0 or pi) plus an offset jet with zero constant term,
which keeps sin(pi/2) = 1 and cos(pi/2) = 0 exact in rational arithmetic.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Optional, Sequence, Union

from .errors import UnsupportedSeedError, UsageError

EXACT = "exact"
REAL = "real"
DEFAULT_ORDER = 12

Coeff = Union[Fraction, float]


def coerce(value, domain: str) -> Coeff:
    if domain == EXACT:
        if isinstance(value, float):
            if not math.isfinite(value):
                raise UsageError(f"non-finite coefficient {value!r}")
            return Fraction(value)
        if isinstance(value, (Rational, str)):
            return Fraction(value)
        raise UsageError(f"cannot use {value!r} as an exact coefficient")
    if domain == REAL:
        if isinstance(value, str):
            value = Fraction(value)
        return float(value)
    raise UsageError(f"unknown coefficient domain {domain!r}")


def format_coeff(c: Coeff) -> str:
    """Render a coefficient for reports: "p/q" for rationals, repr for floats."""
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return repr(float(c))


@dataclass(frozen=True)
class Jet:
    coeffs: tuple
    domain: str = EXACT

    def __post_init__(self):
        if self.domain not in (EXACT, REAL):
            raise UsageError(f"unknown coefficient domain {self.domain!r}")
        if len(self.coeffs) == 0:
            raise UsageError("a jet needs at least the constant coefficient")
        object.__setattr__(
            self, "coeffs", tuple(coerce(c, self.domain) for c in self.coeffs))

    @classmethod
    def from_coeffs(cls, values: Iterable, order: int,
                    domain: str = EXACT) -> "Jet":
        """Pad with zeros (or drop the tail) so the jet has the given order."""
        vals = list(values)[: order + 1]
        vals += [0] * (order + 1 - len(vals))
        return cls(tuple(vals), domain)

    @classmethod
    def constant(cls, value, order: int, domain: str = EXACT) -> "Jet":
        return cls.from_coeffs([value], order, domain)

    @classmethod
    def zero(cls, order: int, domain: str = EXACT) -> "Jet":
        return cls.from_coeffs([], order, domain)

    @classmethod
    def variable(cls, order: int, domain: str = EXACT) -> "Jet":
        """The identity series s."""
        return cls.from_coeffs([0, 1], order, domain)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def derivative_at_zero(self, n: int) -> Coeff:
        """The n-th derivative f^(n)(0) = n! c_n."""
        return math.factorial(n) * self.coeffs[n]

    def __add__(self, other):
        if isinstance(other, Jet):
            return jet_add(self, other)
        return jet_add(self, Jet.constant(other, self.order, self.domain))

    __radd__ = __add__

    def __neg__(self):
        return jet_scale(self, -1)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, other)
        return jet_scale(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise UsageError("jets support only non-negative integer powers")
        result = Jet.constant(1, self.order, self.domain)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def differentiate(self) -> "Jet":
        return jet_differentiate(self)

    def antiderivative(self, c0=0) -> "Jet":
        return jet_antiderivative(self, c0)

    def vanishing_order(self, tol: float = 0) -> Optional[int]:
        return vanishing_order(self, tol)

    def evaluate(self, s: float) -> float:
        """Horner evaluation of the truncated polynomial at a real point."""
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * s + float(c)
        return acc

    def to_real(self) -> "Jet":
        return Jet(tuple(float(c) for c in self.coeffs), REAL)

    def to_strings(self) -> list:
        return [format_coeff(c) for c in self.coeffs]


def _check_compatible(a: Jet, b: Jet):
    if a.order != b.order:
        raise UsageError(f"jet orders differ: {a.order} vs {b.order}")
    if a.domain != b.domain:
        raise UsageError(f"jet domains differ: {a.domain} vs {b.domain}")


def jet_add(a: Jet, b: Jet) -> Jet:
    _check_compatible(a, b)
    return Jet(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)), a.domain)


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Cauchy product truncated at the common order."""
    _check_compatible(a, b)
    K = a.order
    zero = coerce(0, a.domain)
    out = [zero] * (K + 1)
    for i, ai in enumerate(a.coeffs):
        if ai == 0:
            continue
        for j in range(K + 1 - i):
            out[i + j] += ai * b.coeffs[j]
    return Jet(tuple(out), a.domain)


def jet_scale(a: Jet, k) -> Jet:
    k = coerce(k, a.domain)
    return Jet(tuple(k * c for c in a.coeffs), a.domain)


def jet_differentiate(a: Jet) -> Jet:
    """c_n -> (n+1) c_{n+1}; the top coefficient of the result is zero."""
    vals = [(n + 1) * a.coeffs[n + 1] for n in range(a.order)]
    return Jet.from_coeffs(vals, a.order, a.domain)


def jet_antiderivative(a: Jet, c0=0) -> Jet:
    """c_n -> c_{n-1}/n with constant term c0; the input's top coefficient
    falls off the end."""
    vals = [coerce(c0, a.domain)]
    for n in range(1, a.order + 1):
        c = a.coeffs[n - 1]
        vals.append(c / n if a.domain == EXACT else c / float(n))
    return Jet(tuple(vals), a.domain)


def vanishing_order(a: Jet, tol: float = 0) -> Optional[int]:
    """Index of the first coefficient with magnitude above ``tol``.

    ``None`` means every retained coefficient is small, i.e. the order
    exceeds the truncation degree. It does not mean the series is zero.
    """
    if a.domain == EXACT and tol != 0:
        raise UsageError("exact jets are compared with tol=0 only")
    for n, c in enumerate(a.coeffs):
        if abs(c) > tol:
            return n
    return None


class Base(enum.Enum):
    ZERO = "0"
    PI = "pi"


@dataclass(frozen=True)
class AngleJet:
    """Angle series base + offset(s) with offset(0) = 0.

    ``base`` is :class:`Base` for symbolic 0 / pi. In real mode a float base
    is also accepted and its sine/cosine are evaluated numerically.
    """

    base: Union[Base, float]
    offset: Jet

    def __post_init__(self):
        if self.offset.coeffs[0] != 0:
            raise UsageError("angle offset must vanish at s = 0")
        if not isinstance(self.base, Base):
            if self.offset.domain == EXACT:
                raise UnsupportedSeedError(
                    f"exact-mode angle base must be 0 or pi, got {self.base!r}")
            object.__setattr__(self, "base", float(self.base))

    @property
    def order(self) -> int:
        return self.offset.order

    @property
    def domain(self) -> str:
        return self.offset.domain

    def derivative_at_zero(self, n: int) -> Coeff:
        if n == 0:
            raise UsageError("the base value of an angle is symbolic")
        return self.offset.derivative_at_zero(n)

    def as_float_jet(self) -> Jet:
        """The angle as a plain real jet (pi becomes math.pi)."""
        b = {Base.ZERO: 0.0, Base.PI: math.pi}.get(self.base, self.base)
        return self.offset.to_real() + b

    def to_strings(self) -> list:
        head = self.base.value if isinstance(self.base, Base) else repr(self.base)
        return [head] + self.offset.to_strings()[1:]


def _seeds(base, half: bool, domain: str):
    if isinstance(base, Base):
        if base is Base.ZERO:
            s0, c0 = 0, 1
        elif half:
            s0, c0 = 1, 0
        else:
            s0, c0 = 0, -1
        return coerce(s0, domain), coerce(c0, domain)
    angle = base / 2 if half else base
    return math.sin(angle), math.cos(angle)


def _sincos(v: AngleJet, half: bool):
    K, dom = v.order, v.domain
    s0, c0 = _seeds(v.base, half, dom)
    # w = d/ds of the (half-)angle
    w = jet_differentiate(v.offset)
    if half:
        w = jet_scale(w, Fraction(1, 2))
    f = [s0] + [coerce(0, dom)] * K
    g = [c0] + [coerce(0, dom)] * K
    for n in range(K):
        sf = sum((w.coeffs[k] * g[n - k] for k in range(n + 1)), coerce(0, dom))
        sg = sum((w.coeffs[k] * f[n - k] for k in range(n + 1)), coerce(0, dom))
        if dom == EXACT:
            f[n + 1] = sf / (n + 1)
            g[n + 1] = -sg / (n + 1)
        else:
            f[n + 1] = sf / float(n + 1)
            g[n + 1] = -sg / float(n + 1)
    return Jet(tuple(f), dom), Jet(tuple(g), dom)


def trig_half(v: AngleJet):
    """Jets of sin(v/2) and cos(v/2).

    Built from the coupled recurrence sh' = (v'/2) ch, ch' = -(v'/2) sh
    starting at the exact seed values.
    """
    return _sincos(v, half=True)


def trig(v: AngleJet):
    """Jets of sin(v) and cos(v), same recurrence on the full angle."""
    return _sincos(v, half=False)


def parse_coeffs(text: str) -> list:
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(p == "" for p in parts):
        raise UsageError(f"bad jet spec {text!r}")
    return parts


def parse_jet(text: str, order: int, domain: str = EXACT) -> Jet:
    """Parse "c0,c1,..." (entries may be "p/q") into a jet of given order."""
    parts = parse_coeffs(text)
    if len(parts) > order + 1:
        raise UsageError(f"jet spec {text!r} has more than {order + 1} terms")
    try:
        return Jet.from_coeffs([coerce(p, domain) for p in parts], order, domain)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad jet spec {text!r}: {exc}") from None


def parse_angle(text: str, order: int, domain: str = EXACT) -> AngleJet:
    """Parse "pi,c1,c2,..." / "0,c1,..." into an :class:`AngleJet`."""
    parts = parse_coeffs(text)
    head, rest = parts[0].lower(), parts[1:]
    if head == "pi":
        base = Base.PI
    elif head in ("0", "0/1"):
        base = Base.ZERO
    elif domain == REAL:
        try:
            base = float(head)
        except ValueError:
            raise UsageError(f"bad angle base {parts[0]!r}") from None
    else:
        raise UnsupportedSeedError(
            f"exact-mode angle base must be 0 or pi, got {parts[0]!r}")
    offset = parse_jet(",".join(["0"] + rest), order, domain)
    return AngleJet(base, offset)


def angle(base, offset_coeffs: Sequence, order: int,
          domain: str = EXACT) -> AngleJet:
    """Convenience constructor: ``angle(Base.PI, [0, 1], 9)`` is pi + s."""
    return AngleJet(base, Jet.from_coeffs(offset_coeffs, order, domain))
