"""Initial profiles u0(x) with their slopes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import UsageError


class Profile:
    """Base class: ``value(x)`` and ``slope(x, side)``.

    ``side`` (-1, 0 or +1) picks a one-sided slope at a kink; smooth
    profiles ignore it.
    """

    def value(self, x):
        raise NotImplementedError

    def slope(self, x, side: int = 0):
        raise NotImplementedError


@dataclass(frozen=True)
class Zero(Profile):
    def value(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def slope(self, x, side=0):
        return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class Gaussian(Profile):
    amplitude: float = -1.2
    center: float = 0.0
    width: float = 1.0

    def value(self, x):
        z = (np.asarray(x, dtype=float) - self.center) / self.width
        return self.amplitude * np.exp(-z * z)

    def slope(self, x, side=0):
        z = (np.asarray(x, dtype=float) - self.center) / self.width
        return -2.0 * z / self.width * self.amplitude * np.exp(-z * z)


@dataclass(frozen=True)
class Peakon(Profile):
    """a exp(-|x - center|); for Novikov it travels at speed a^2."""

    amplitude: float = 1.0
    center: float = 0.0

    def value(self, x):
        return self.amplitude * np.exp(-np.abs(np.asarray(x, dtype=float) - self.center))

    def slope(self, x, side=0):
        z = np.asarray(x, dtype=float) - self.center
        sgn = np.sign(z)
        if side:
            sgn = np.where(z == 0, float(side), sgn)
        return -self.amplitude * sgn * np.exp(-np.abs(z))


@dataclass(frozen=True)
class Linear(Profile):
    """u0 = slope * x; only meaningful on a bounded window."""

    gradient: float = 1.0

    def value(self, x):
        return self.gradient * np.asarray(x, dtype=float)

    def slope(self, x, side=0):
        return np.full_like(np.asarray(x, dtype=float), self.gradient)


class Table(Profile):
    """Tabulated (x, u) samples, interpolated by a cubic spline that is zero
    outside the table."""

    def __init__(self, xs, us):
        xs = np.asarray(xs, dtype=float)
        us = np.asarray(us, dtype=float)
        if xs.ndim != 1 or xs.shape != us.shape or xs.size < 4:
            raise UsageError("a table profile needs >= 4 matching (x, u) samples")
        if np.any(np.diff(xs) <= 0):
            raise UsageError("table x values must be strictly increasing")
        self._lo, self._hi = xs[0], xs[-1]
        self._spline = CubicSpline(xs, us)

    def _inside(self, x):
        return (x >= self._lo) & (x <= self._hi)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(self._inside(x), self._spline(x), 0.0)

    def slope(self, x, side=0):
        x = np.asarray(x, dtype=float)
        return np.where(self._inside(x), self._spline(x, 1), 0.0)


def make_profile(kind: str, **params) -> Profile:
    kinds = {"zero": Zero, "gaussian": Gaussian, "peakon": Peakon,
             "linear": Linear}
    if kind == "table":
        return Table(params.get("x", []), params.get("u", []))
    if kind not in kinds:
        raise UsageError(f"unknown profile {kind!r}")
    try:
        return kinds[kind](**params)
    except TypeError as exc:
        raise UsageError(f"bad parameters for {kind}: {exc}") from None
