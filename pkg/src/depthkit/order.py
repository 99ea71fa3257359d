"""Simplicial cone partial orders, order intervals, and medians.

A cone order is generated by a nonsingular matrix G: the cone is the image
of the nonnegative orthant, and x <= y holds when G^-1 (y - x) is
componentwise nonnegative.  In cone coordinates intervals are boxes, so
suprema, infima, and medians reduce to coordinatewise computations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    BudgetError,
    DegenerateInput,
    DimensionError,
    ParameterError,
    PreconditionError,
)
from .measure import WeightedSample, quantile_pair_ints

_ORACLE_MAX_POINTS = 30


class ConeOrder:
    """Partial order induced by a simplicial cone with generator matrix G."""

    __slots__ = ("generators", "cone_map", "dim")

    def __init__(self, generators):
        g = np.array(generators, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise DimensionError("generator matrix must be square")
        if not np.isfinite(g).all():
            raise PreconditionError("generator matrix must be finite")
        col_norms = np.sqrt((g * g).sum(axis=0))
        if bool((col_norms == 0.0).any()):
            raise DegenerateInput("generator matrix has a zero column")
        # Hadamard ratio as a scale-free singularity test.
        if abs(np.linalg.det(g)) <= 1e-9 * float(col_norms.prod()):
            raise DegenerateInput("generator matrix is numerically singular")
        g.setflags(write=False)
        inv = np.linalg.inv(g)
        inv.setflags(write=False)
        object.__setattr__(self, "generators", g)
        object.__setattr__(self, "cone_map", inv)
        object.__setattr__(self, "dim", g.shape[0])

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("ConeOrder is immutable")

    @classmethod
    def identity(cls, dim: int) -> "ConeOrder":
        return cls(np.eye(dim))

    @classmethod
    def rotation(cls, theta: float) -> "ConeOrder":
        """Planar order whose cone is the positive quadrant rotated by theta."""
        c, s = math.cos(theta), math.sin(theta)
        return cls([[c, -s], [s, c]])

    def to_cone(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.cone_map.T

    def to_ambient(self, c) -> np.ndarray:
        return np.asarray(c, dtype=float) @ self.generators.T

    def leq(self, x, y) -> bool:
        """x precedes y when y - x lies in the cone."""
        diff = np.asarray(y, dtype=float) - np.asarray(x, dtype=float)
        return bool(np.all(self.to_cone(diff) >= 0.0))

    def interval(self, lower_ambient, upper_ambient) -> "OrderInterval":
        lo = self.to_cone(lower_ambient)
        hi = self.to_cone(upper_ambient)
        return OrderInterval(self, tuple(float(v) for v in lo), tuple(float(v) for v in hi))

    def __repr__(self) -> str:
        return f"ConeOrder(dim={self.dim})"


@dataclass(frozen=True)
class OrderInterval:
    """Box in cone coordinates; -inf/+inf endpoints mean unbounded sides."""

    order: ConeOrder
    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        if len(self.lower) != self.order.dim or len(self.upper) != self.order.dim:
            raise DimensionError("interval endpoints must match the order dimension")

    def is_empty(self) -> bool:
        return any(lo > hi for lo, hi in zip(self.lower, self.upper))

    def is_bounded(self) -> bool:
        return all(map(math.isfinite, self.lower)) and all(map(math.isfinite, self.upper))

    def contains(self, x) -> bool:
        c = self.order.to_cone(np.asarray(x, dtype=float))
        return bool(np.all(c >= np.array(self.lower)) and np.all(c <= np.array(self.upper)))

    def contains_interval(self, other: "OrderInterval") -> bool:
        """True when every point of `other` lies in this interval."""
        if other.is_empty():
            return True
        return all(a <= b for a, b in zip(self.lower, other.lower)) and all(
            a >= b for a, b in zip(self.upper, other.upper)
        )

    def intersect(self, other: "OrderInterval") -> "OrderInterval":
        if other.order is not self.order:
            raise ParameterError("intervals built on different orders cannot intersect")
        lo = tuple(max(a, b) for a, b in zip(self.lower, other.lower))
        hi = tuple(min(a, b) for a, b in zip(self.upper, other.upper))
        return OrderInterval(self.order, lo, hi)

    def corners_ambient(self) -> np.ndarray:
        """All 2^d ambient corners; requires a bounded nonempty interval."""
        if self.is_empty() or not self.is_bounded():
            raise PreconditionError("corners need a bounded nonempty interval")
        combos = itertools.product(*zip(self.lower, self.upper))
        return self.order.to_ambient(np.array(list(combos), dtype=float))


def leq(order: ConeOrder, x, y) -> bool:
    return order.leq(x, y)


def sup_inf(order: ConeOrder, points) -> tuple[np.ndarray, np.ndarray]:
    """Least upper bound and greatest lower bound of finitely many points."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1)
    if pts.shape[0] == 0:
        raise PreconditionError("sup_inf needs at least one point")
    if pts.shape[1] != order.dim:
        raise DimensionError("points do not match the order dimension")
    c = order.to_cone(pts)
    sup = order.to_ambient(c.max(axis=0))
    inf = order.to_ambient(c.min(axis=0))
    return sup, inf


def median_set(sample: WeightedSample, order: ConeOrder) -> OrderInterval:
    """Coordinatewise median box in cone coordinates.

    Per coordinate the box spans the lower and upper median of the pushed
    forward distribution, computed exactly on the integer weights.
    """
    if sample.dim != order.dim:
        raise DimensionError("sample and order dimensions differ")
    c = order.to_cone(sample.points)
    half = Fraction(1, 2)
    lows, highs = [], []
    for i in range(order.dim):
        qp = quantile_pair_ints(c[:, i], sample.weight_numerators,
                                sample.weight_denominator, half)
        lows.append(qp.q_lo)
        highs.append(qp.q_hi)
    return OrderInterval(order, tuple(lows), tuple(highs))


def _axis_membership_pairs(values: np.ndarray) -> list[tuple[float, float, np.ndarray]]:
    """Candidate (lo, hi, mask) per axis with endpoints from the support and +-inf."""
    uniq = np.unique(values)
    lows = [-math.inf, *uniq.tolist()]
    highs = [*uniq.tolist(), math.inf]
    out = []
    for lo in lows:
        for hi in highs:
            if lo > hi:
                continue
            out.append((lo, hi, (values >= lo) & (values <= hi)))
    return out


def median_set_oracle(sample: WeightedSample, order: ConeOrder) -> OrderInterval:
    """Brute-force median box: intersect every candidate interval J with P(J) > 1/2.

    Candidate endpoints are the sample projections extended by +-inf.  Kept
    independent of median_set on purpose; the two must agree exactly.
    """
    if sample.dim != order.dim:
        raise DimensionError("sample and order dimensions differ")
    if sample.n > _ORACLE_MAX_POINTS:
        raise BudgetError(f"median oracle supports n <= {_ORACLE_MAX_POINTS}")
    c = order.to_cone(sample.points)
    per_axis = [_axis_membership_pairs(c[:, i]) for i in range(order.dim)]
    total = sample.weight_denominator
    lower = [-math.inf] * order.dim
    upper = [math.inf] * order.dim
    for combo in itertools.product(*per_axis):
        mask = combo[0][2]
        for _, _, m in combo[1:]:
            mask = mask & m
        if 2 * sample.mass(mask) > total:
            for i, (lo, hi, _) in enumerate(combo):
                lower[i] = max(lower[i], lo)
                upper[i] = min(upper[i], hi)
    return OrderInterval(order, tuple(lower), tuple(upper))
