"""Weighted finite samples and exact probability evaluation.

A sample stores its weights twice: as normalized floats for numerics and
as exact integers over a common dyadic denominator.  Every probability is
an integer mass divided by the total, returned as a Fraction, so boundary
ties and threshold comparisons are exact with tolerance zero.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ._exact import dyadic_integer_weights, exact_mass
from .errors import DimensionError, ParameterError, PreconditionError

# int64 masses are safe while the exact total stays below 2^62.
_INT64_LIMIT = 1 << 62


@dataclass(frozen=True)
class QuantilePair:
    """Lower and upper quantiles of a finite distribution at one level.

    q_lo is the smallest t with P(X <= t) >= alpha; q_hi is the largest t
    with P(X >= t) >= alpha.  Both are support values.
    """

    q_lo: float
    q_hi: float
    alpha: float


class WeightedSample:
    """Finite weighted point set in R^d with exact rational weights."""

    __slots__ = ("points", "weights", "weight_numerators", "weight_denominator", "_iw64")

    def __init__(self, points, weights: Optional[Sequence[float]] = None):
        pts = np.array(points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise PreconditionError("sample needs an (n, d) array with n >= 1")
        if not np.isfinite(pts).all():
            raise PreconditionError("sample coordinates must be finite")
        n = pts.shape[0]
        if weights is None:
            numerators, total = [1] * n, n
            w = np.full(n, 1.0 / n)
        else:
            if isinstance(weights, np.ndarray):
                weights = weights.tolist()
            weights = list(weights)
            if len(weights) != n:
                raise DimensionError(f"{n} points but {len(weights)} weights")
            if any(isinstance(v, Fraction) for v in weights):
                # exact rational weights bypass the dyadic float route
                try:
                    fracs = [v if isinstance(v, Fraction) else Fraction(v)
                             for v in weights]
                except (ValueError, OverflowError, TypeError):
                    raise PreconditionError(
                        "weights must be finite and strictly positive") from None
                if any(f <= 0 for f in fracs):
                    raise PreconditionError(
                        "weights must be finite and strictly positive")
                den = math.lcm(*(f.denominator for f in fracs))
                numerators = [int(f * den) for f in fracs]
                total = sum(numerators)
                w = np.array([float(v) for v in numerators], dtype=float)
            else:
                w = np.array(weights, dtype=float).reshape(-1)
                if not np.isfinite(w).all() or bool((w <= 0.0).any()):
                    raise PreconditionError(
                        "weights must be finite and strictly positive")
                numerators, total = dyadic_integer_weights(w)
            w = w / w.sum()
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "weight_numerators", tuple(numerators))
        object.__setattr__(self, "weight_denominator", total)
        iw64 = np.array(numerators, dtype=np.int64) if total < _INT64_LIMIT else None
        object.__setattr__(self, "_iw64", iw64)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("WeightedSample is immutable")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def mass(self, mask) -> int:
        """Exact integer mass of the rows selected by a boolean mask."""
        if self._iw64 is not None:
            return int(self._iw64[np.asarray(mask, dtype=bool)].sum())
        return exact_mass(self.weight_numerators, mask)

    def prob(self, mask) -> Fraction:
        return Fraction(self.mass(mask), self.weight_denominator)

    def diameter(self) -> float:
        if self.n == 1:
            return 0.0
        diffs = self.points[:, None, :] - self.points[None, :, :]
        return float(np.sqrt((diffs * diffs).sum(axis=2)).max())

    def __repr__(self) -> str:
        return f"WeightedSample(n={self.n}, dim={self.dim})"


def as_fraction(alpha) -> Fraction:
    """Exact rational value of a level parameter (floats are dyadic)."""
    if isinstance(alpha, Fraction):
        return alpha
    if isinstance(alpha, int):
        return Fraction(alpha)
    if isinstance(alpha, float):
        if not math.isfinite(alpha):
            raise ParameterError("level must be finite")
        return Fraction(alpha)
    raise ParameterError(f"cannot interpret level of type {type(alpha).__name__}")


def check_level(alpha) -> Fraction:
    a = as_fraction(alpha)
    if not 0 < a <= 1:
        raise ParameterError(f"level must lie in (0, 1], got {float(a)}")
    return a


def _grouped_cumulative(values: np.ndarray, numerators: Sequence[int]):
    """Sorted unique support values with cumulative masses per group end."""
    order = np.argsort(values, kind="stable")
    uniq: list[float] = []
    cum: list[int] = []
    running = 0
    for idx in order:
        v = float(values[idx])
        running += numerators[idx]
        if uniq and uniq[-1] == v:
            cum[-1] = running
        else:
            uniq.append(v)
            cum.append(running)
    return uniq, cum


def quantile_pair_ints(values: np.ndarray, numerators: Sequence[int], total: int,
                       alpha: Fraction) -> QuantilePair:
    """Exact quantile pair from integer weights; values is a 1-d float array."""
    uniq, cum = _grouped_cumulative(values, numerators)
    need = alpha.numerator * total  # mass * den >= need  <=>  mass/total >= alpha
    den = alpha.denominator
    q_lo = next(v for v, c in zip(uniq, cum) if c * den >= need)
    # tail mass at uniq[k] is total - cum[k-1]
    q_hi = uniq[0]
    for k in range(len(uniq) - 1, -1, -1):
        tail = total - (cum[k - 1] if k > 0 else 0)
        if tail * den >= need:
            q_hi = uniq[k]
            break
    return QuantilePair(q_lo=q_lo, q_hi=q_hi, alpha=float(alpha))


def quantiles(values, weights=None, alpha=Fraction(1, 2)) -> QuantilePair:
    """Exact lower/upper quantile pair of a finite weighted distribution."""
    a = check_level(alpha)
    vals = np.asarray(values, dtype=float).reshape(-1)
    if vals.shape[0] == 0:
        raise PreconditionError("quantiles need at least one value")
    if not np.isfinite(vals).all():
        raise PreconditionError("values must be finite")
    if weights is None:
        numerators, total = [1] * vals.shape[0], vals.shape[0]
    else:
        w = np.asarray(weights, dtype=float).reshape(-1)
        if w.shape[0] != vals.shape[0]:
            raise DimensionError("values and weights differ in length")
        if not np.isfinite(w).all() or bool((w <= 0.0).any()):
            raise PreconditionError("weights must be finite and strictly positive")
        numerators, total = dyadic_integer_weights(w)
    return quantile_pair_ints(vals, numerators, total, a)


def _check_normal(sample: WeightedSample, normal) -> np.ndarray:
    u = np.asarray(normal, dtype=float).reshape(-1)
    if u.shape[0] != sample.dim:
        raise DimensionError(f"normal has dim {u.shape[0]}, sample has dim {sample.dim}")
    if not np.isfinite(u).all():
        raise PreconditionError("normal must be finite")
    if not u.any():
        from .errors import DegenerateInput

        raise DegenerateInput("normal must be nonzero")
    return u


def prob_halfspace(sample: WeightedSample, halfspace) -> Fraction:
    """Mass of {x : normal . x <= offset} (or < for an open halfspace)."""
    u = _check_normal(sample, halfspace.normal)
    if not math.isfinite(halfspace.offset):
        raise PreconditionError("offset must be finite")
    s = sample.points @ u
    mask = s <= halfspace.offset if halfspace.closed else s < halfspace.offset
    return sample.prob(mask)


def prob_interval(sample: WeightedSample, interval) -> Fraction:
    """Mass of an order interval; +-inf endpoints drop that bound."""
    c = interval.order.to_cone(sample.points)
    lower = np.asarray(interval.lower, dtype=float)
    upper = np.asarray(interval.upper, dtype=float)
    if c.shape[1] != lower.shape[0]:
        raise DimensionError("interval dimension does not match sample")
    mask = np.all((c >= lower) & (c <= upper), axis=1)
    return sample.prob(mask)


def prob_ball(sample: WeightedSample, center, radius: float) -> Fraction:
    """Mass of the closed ball; membership compares squared distances."""
    c = np.asarray(center, dtype=float).reshape(-1)
    if c.shape[0] != sample.dim:
        raise DimensionError("ball center dimension does not match sample")
    if not (np.isfinite(c).all() and math.isfinite(radius) and radius >= 0.0):
        raise PreconditionError("ball needs finite center and radius >= 0")
    diff = sample.points - c
    mask = (diff * diff).sum(axis=1) <= radius * radius
    return sample.prob(mask)


def load_csv(path) -> WeightedSample:
    """Read a sample from CSV: coordinate columns, optional weight column.

    A header row is detected by failing to parse as floats.  With a header,
    a column named ``w`` or ``weight`` (case-insensitive) supplies weights;
    without a header every column is a coordinate.
    """
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and any(cell.strip() for cell in row)]
    if not rows:
        raise PreconditionError(f"{path}: empty dataset")

    def parse_row(row):
        return [float(cell) for cell in row]

    header: Optional[list[str]] = None
    try:
        parse_row(rows[0])
    except ValueError:
        header = [cell.strip().lower() for cell in rows[0]]
        rows = rows[1:]
        if not rows:
            raise PreconditionError(f"{path}: header but no data rows")
    width = len(rows[0])
    data = []
    for i, row in enumerate(rows):
        if len(row) != width:
            raise PreconditionError(f"{path}: row {i + 1} has {len(row)} cells, expected {width}")
        try:
            data.append(parse_row(row))
        except ValueError as exc:
            raise PreconditionError(f"{path}: row {i + 1}: {exc}") from None
    arr = np.array(data, dtype=float)
    if not np.isfinite(arr).all():
        raise PreconditionError(f"{path}: NaN or infinite entries are rejected")
    weights = None
    if header is not None:
        if len(header) != width:
            raise PreconditionError(f"{path}: header width does not match rows")
        wcols = [k for k, name in enumerate(header) if name in ("w", "weight")]
        if len(wcols) > 1:
            raise PreconditionError(f"{path}: multiple weight columns")
        if wcols:
            weights = arr[:, wcols[0]]
            arr = np.delete(arr, wcols[0], axis=1)
    if arr.shape[1] == 0:
        raise PreconditionError(f"{path}: no coordinate columns")
    return WeightedSample(arr, weights)
