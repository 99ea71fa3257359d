"""Jensen-style inequality checks between depth regions and pushforwards.

A check function must have every sublevel set inside the depth family in
use.  Two builtins are provided: "paper-exp-line", the exponential of a
normalized affine map (halfplane sublevel sets), and "gauge-box", a
weighted sup-gauge in cone coordinates (order-interval sublevel sets).
Both are evaluated over regions exactly: affine-monotone functions attain
extremes at vertices, and the gauge minimizes by clamping per coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .depth import AxisParallel, DepthFamily, HalfspaceAll, IntervalComplements
from .errors import ParameterError, PreconditionError
from .measure import WeightedSample, quantile_pair_ints
from .order import ConeOrder, OrderInterval, median_set
from .regions import center as region_center

BUILTIN_FUNCTIONS = ("paper-exp-line", "gauge-box")


@dataclass(frozen=True)
class ExpLine:
    """exp of the signed offset from the line a*x + b*y + c = 0."""

    a: float = 1.0
    b: float = -1.0
    c: float = 1.0

    def __post_init__(self):
        if not all(map(math.isfinite, (self.a, self.b, self.c))):
            raise ParameterError("line coefficients must be finite")
        if self.a == 0.0 and self.b == 0.0:
            raise ParameterError("line normal must be nonzero")

    @property
    def name(self) -> str:
        return "paper-exp-line"

    def describe(self) -> dict:
        return {"fn": self.name, "a": self.a, "b": self.b, "c": self.c}

    def evaluate(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        h = math.hypot(self.a, self.b)
        return np.exp((pts @ np.array([self.a, self.b]) + self.c) / h)

    def min_over_vertices(self, vertices) -> tuple[float, tuple[float, float]]:
        return self._extreme(vertices, np.argmin)

    def max_over_vertices(self, vertices) -> tuple[float, tuple[float, float]]:
        return self._extreme(vertices, np.argmax)

    def _extreme(self, vertices, pick):
        if not vertices:
            raise PreconditionError("cannot evaluate over an empty region")
        vals = self.evaluate(vertices)
        k = int(pick(vals))
        return float(vals[k]), tuple(map(float, vertices[k]))

    def min_over_interval(self, interval: OrderInterval):
        if interval.is_empty():
            raise PreconditionError("cannot evaluate over an empty region")
        if not interval.is_bounded():
            raise PreconditionError("exp-line needs a bounded interval")
        corners = [tuple(map(float, c)) for c in interval.corners_ambient()]
        return self.min_over_vertices(corners)


@dataclass(frozen=True)
class GaugeBox:
    """Weighted sup-gauge max_i scales[i] * |cone_i(p) - cone_i(anchor)|."""

    order: ConeOrder
    anchor: tuple[float, ...] = (0.0, 0.0)
    scales: tuple[float, ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        anchor = tuple(float(v) for v in self.anchor)
        if len(anchor) != self.order.dim:
            raise ParameterError("anchor dimension must match the order")
        scales = self.scales
        if scales is None:
            scales = (1.0,) * self.order.dim
        scales = tuple(float(s) for s in scales)
        if len(scales) != self.order.dim or any(s <= 0 or not math.isfinite(s)
                                                for s in scales):
            raise ParameterError("scales must be positive and finite per axis")
        if not all(map(math.isfinite, anchor)):
            raise ParameterError("anchor must be finite")
        object.__setattr__(self, "anchor", anchor)
        object.__setattr__(self, "scales", scales)

    @property
    def name(self) -> str:
        return "gauge-box"

    def describe(self) -> dict:
        return {"fn": self.name, "anchor": list(self.anchor),
                "scales": list(self.scales)}

    def _anchor_cone(self) -> np.ndarray:
        return self.order.to_cone(np.array(self.anchor))

    def evaluate(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, self.order.dim)
        offsets = np.abs(self.order.to_cone(pts) - self._anchor_cone())
        return (offsets * np.array(self.scales)).max(axis=1)

    def max_over_vertices(self, vertices) -> tuple[float, tuple[float, ...]]:
        # the gauge is convex, so the maximum over a polytope sits at a vertex
        if not vertices:
            raise PreconditionError("cannot evaluate over an empty region")
        vals = self.evaluate(vertices)
        k = int(np.argmax(vals))
        return float(vals[k]), tuple(map(float, vertices[k]))

    def min_over_interval(self, interval: OrderInterval):
        if interval.is_empty():
            raise PreconditionError("cannot evaluate over an empty region")
        t = self._anchor_cone()
        clamped = np.minimum(np.maximum(t, np.array(interval.lower)),
                             np.array(interval.upper))
        witness = self.order.to_ambient(clamped)
        value = float((np.abs(clamped - t) * np.array(self.scales)).max())
        return value, tuple(map(float, witness))


CheckFunction = ExpLine | GaugeBox


def make_builtin(name: str, *, order: ConeOrder | None = None,
                 params: dict | None = None) -> CheckFunction:
    params = dict(params or {})
    if name == "paper-exp-line":
        fn = ExpLine(float(params.pop("a", 1.0)), float(params.pop("b", -1.0)),
                     float(params.pop("c", 1.0)))
    elif name == "gauge-box":
        if order is None:
            raise ParameterError("gauge-box needs a cone order")
        anchor = params.pop("anchor", (0.0,) * order.dim)
        scales = params.pop("scales", None)
        fn = GaugeBox(order, tuple(anchor), None if scales is None
                      else tuple(scales))
    else:
        raise ParameterError(
            f"unknown builtin function {name!r}; expected one of "
            f"{', '.join(BUILTIN_FUNCTIONS)}")
    if params:
        raise ParameterError(f"unused parameters for {name!r}: "
                             f"{', '.join(sorted(params))}")
    return fn


@dataclass(frozen=True)
class JensenReport:
    """One inequality check: lhs over a region against a pushforward cut."""

    mode: str  # "median" | "center"
    holds: bool
    lhs: float
    rhs: float
    gap: float
    alpha: Fraction
    witness: tuple[float, ...]
    function: dict

    def to_payload(self) -> dict:
        return {
            "mode": self.mode,
            "holds": self.holds,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "alpha": float(self.alpha),
            "witness": list(self.witness),
            "function": self.function,
        }


def _holds(lhs: float, rhs: float) -> bool:
    # vertex evaluation round-trips through the cone map, so an exact
    # mathematical tie can land an ulp apart; allow that much slack
    return lhs <= rhs + 1e-12 * max(1.0, abs(lhs), abs(rhs))


def median_jensen(sample: WeightedSample, fn: CheckFunction,
                  order: ConeOrder) -> JensenReport:
    """Some order-median m satisfies fn(m) <= every median of fn(X)."""
    box = median_set(sample, order)
    lhs, witness = fn.min_over_interval(box)
    fvals = fn.evaluate(sample.points)
    cut = quantile_pair_ints(fvals, sample.weight_numerators,
                             sample.weight_denominator, Fraction(1, 2))
    rhs = cut.q_lo
    return JensenReport("median", _holds(lhs, rhs), lhs, rhs, rhs - lhs,
                        Fraction(1, 2), witness, fn.describe())


def center_jensen(sample: WeightedSample, fn: CheckFunction,
                  family: DepthFamily) -> JensenReport:
    """max of fn over the deepest region is at most the matching upper cut."""
    alpha_max, reg = region_center(sample, family)
    lhs, witness = fn.max_over_vertices(list(reg.vertices))
    fvals = fn.evaluate(sample.points)
    cut = quantile_pair_ints(fvals, sample.weight_numerators,
                             sample.weight_denominator, alpha_max)
    rhs = cut.q_hi
    return JensenReport("center", _holds(lhs, rhs), lhs, rhs, rhs - lhs,
                        alpha_max, witness, fn.describe())


def jensen_check(sample: WeightedSample, fn: CheckFunction, mode: str,
                 family: DepthFamily) -> JensenReport:
    if mode == "median":
        if isinstance(family, (AxisParallel, IntervalComplements)):
            return median_jensen(sample, fn, family.order)
        raise ParameterError("median mode needs the axis or interval family")
    if mode == "center":
        if isinstance(family, (HalfspaceAll, AxisParallel, IntervalComplements)):
            return center_jensen(sample, fn, family)
        raise ParameterError("center mode needs the halfspace, axis, or "
                             "interval family")
    raise ParameterError(f"unknown jensen mode {mode!r}")
