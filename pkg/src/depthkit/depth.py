"""Depth of a point in a weighted sample, for several set families.

Halfspace depth is the minimum mass of a closed halfspace containing the
point.  Three independent evaluators live here: a circular sweep for d=2,
a direction-space cell enumeration for d<=3, and a small candidate-normal
oracle.  All of them count boundary atoms inside closed halfspaces and
compare masses exactly, so they must agree to the last bit; the test suite
enforces that.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Union

import numpy as np

from ._exact import cross_sign, dot_sign, exact_mass
from .errors import (
    BudgetError,
    DegenerateInput,
    DimensionError,
    ParameterError,
    PreconditionError,
)
from .measure import WeightedSample
from .order import ConeOrder

_ORACLE_MAX_POINTS = 30
_EXACT_MAX_POINTS = 200
_BALL_PAIR_BUDGET = 48
_DET_GUARD = 4.0e-16


@dataclass(frozen=True)
class Halfspace:
    """Closed or open halfspace {x : normal . x <= offset} (or <)."""

    normal: tuple[float, ...]
    offset: float
    closed: bool = True

    def __post_init__(self):
        u = np.asarray(self.normal, dtype=float)
        if not np.isfinite(u).all() or not math.isfinite(self.offset):
            raise PreconditionError("halfspace needs finite normal and offset")
        if not u.any():
            raise DegenerateInput("halfspace normal must be nonzero")
        object.__setattr__(self, "normal", tuple(float(v) for v in u))

    def complement(self) -> "Halfspace":
        return Halfspace(tuple(-v for v in self.normal), -self.offset, not self.closed)


@dataclass(frozen=True)
class HalfspaceAll:
    """Family of all closed halfspaces."""


@dataclass(frozen=True)
class AxisParallel:
    """Halfspaces tangent to the coordinate slabs of a cone order."""

    order: ConeOrder


@dataclass(frozen=True)
class IntervalComplements:
    """Complements of order intervals; depth equals the tangent axis depth."""

    order: ConeOrder


@dataclass(frozen=True)
class BallComplements:
    """Complements of closed balls with radius at most radius_cap."""

    radius_cap: float


@dataclass(frozen=True)
class ConvexCompactComplements:
    """Complements of compact convex sets; depth equals halfspace depth."""


DepthFamily = Union[HalfspaceAll, AxisParallel, IntervalComplements,
                    BallComplements, ConvexCompactComplements]


@dataclass(frozen=True)
class DepthValue:
    value: Fraction
    family: DepthFamily
    exact: bool

    @property
    def as_float(self) -> float:
        return float(self.value)


def _check_point(point, dim: int) -> np.ndarray:
    x = np.asarray(point, dtype=float).reshape(-1)
    if x.shape[0] != dim:
        raise DimensionError(f"query point has dim {x.shape[0]}, sample has dim {dim}")
    if not np.isfinite(x).all():
        raise PreconditionError("query point must be finite")
    return x


# ---------------------------------------------------------------------------
# exact circular order on planar directions

def _half_turn(dx: float, dy: float) -> int:
    # 0 for angles in [0, pi), 1 for [pi, 2pi)
    return 0 if (dy > 0.0 or (dy == 0.0 and dx > 0.0)) else 1


def _dir_cmp(a, b) -> int:
    ha, hb = _half_turn(a[0], a[1]), _half_turn(b[0], b[1])
    if ha != hb:
        return ha - hb
    return -cross_sign(a[0], a[1], b[0], b[1])


_DIR_KEY = cmp_to_key(_dir_cmp)


def _direction_groups(vectors, masses) -> list[tuple[float, float, int]]:
    """Group nonzero planar vectors by exact direction, CCW from the +x axis."""
    items = sorted(zip(vectors, masses), key=lambda it: _DIR_KEY(it[0]))
    groups: list[tuple[float, float, int]] = []
    for (dx, dy), m in items:
        if groups and _dir_cmp((groups[-1][0], groups[-1][1]), (dx, dy)) == 0:
            gx, gy, gm = groups[-1]
            groups[-1] = (gx, gy, gm + m)
        else:
            groups.append((float(dx), float(dy), m))
    return groups


def halfspace_depth_2d(sample: WeightedSample, point) -> DepthValue:
    """Exact planar halfspace depth by a sweep over direction groups.

    Directions of p_i - x are sorted in exact circular order; for every
    group the four realizable covered half-circles (closed arc, both
    half-open arcs, and the backward closed arc) are scored from prefix
    sums.  Atoms at x itself count in every halfspace.
    """
    if sample.dim != 2:
        raise DimensionError("halfspace_depth_2d needs a planar sample")
    x = _check_point(point, 2)
    v = sample.points - x
    nz = (v[:, 0] != 0.0) | (v[:, 1] != 0.0)
    total = sample.weight_denominator
    base = sample.mass(~nz)
    nums = sample.weight_numerators
    vectors = [(float(v[i, 0]), float(v[i, 1])) for i in np.flatnonzero(nz)]
    weights = [nums[i] for i in np.flatnonzero(nz)]
    if not vectors:
        return DepthValue(Fraction(1), HalfspaceAll(), True)
    groups = _direction_groups(vectors, weights)
    n_groups = len(groups)
    keys = [_DIR_KEY((g[0], g[1])) for g in groups]
    prefix = [0]
    for _, _, m in groups:
        prefix.append(prefix[-1] + m)
    total_dir = total - base

    def circular_sum(start: int, count: int) -> int:
        if count <= 0:
            return 0
        start %= n_groups
        end = start + count
        if end <= n_groups:
            return prefix[end] - prefix[start]
        return prefix[n_groups] - prefix[start] + prefix[end - n_groups]

    def opposite_mass(dx: float, dy: float) -> int:
        pos = bisect.bisect_left(keys, _DIR_KEY((-dx, -dy)))
        if pos < n_groups and _dir_cmp((groups[pos][0], groups[pos][1]), (-dx, -dy)) == 0:
            return groups[pos][2]
        return 0

    def forward_extent(j: int) -> int:
        # largest o with group j+o strictly inside the open half turn after j
        if n_groups == 1:
            return 0
        dx, dy = groups[j][0], groups[j][1]

        def inside(o: int) -> bool:
            g = groups[(j + o) % n_groups]
            return cross_sign(dx, dy, g[0], g[1]) > 0

        if not inside(1):
            return 0
        lo, hi = 1, n_groups - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if inside(mid):
                lo = mid
            else:
                hi = mid - 1
        return lo

    best: int | None = None
    for j, (dx, dy, m) in enumerate(groups):
        mo = opposite_mass(dx, dy)
        in_fwd = circular_sum(j + 1, forward_extent(j))
        in_bwd = total_dir - m - mo - in_fwd
        cand = min(m + mo + in_fwd, m + mo + in_bwd, mo + in_fwd, mo + in_bwd)
        if best is None or cand < best:
            best = cand
    return DepthValue(Fraction(base + best, total), HalfspaceAll(), True)


# ---------------------------------------------------------------------------
# candidate-normal oracle

def depth_oracle(sample: WeightedSample, point) -> DepthValue:
    """Minimum closed-halfplane mass over a finite candidate normal set.

    Candidates: directions parallel and orthogonal to every p_i - x and
    every p_i - p_j, both orientations, with one fallback direction when
    the set is empty.  Written independently of the sweep.
    """
    if sample.dim != 2:
        raise DimensionError("depth_oracle needs a planar sample")
    if sample.n > _ORACLE_MAX_POINTS:
        raise BudgetError(f"depth oracle supports n <= {_ORACLE_MAX_POINTS}")
    x = _check_point(point, 2)
    v = sample.points - x
    dirs: list[tuple[float, float]] = []

    def add(dx: float, dy: float) -> None:
        if dx != 0.0 or dy != 0.0:
            dirs.extend([(dx, dy), (-dx, -dy), (-dy, dx), (dy, -dx)])

    for i in range(sample.n):
        add(float(v[i, 0]), float(v[i, 1]))
    for i in range(sample.n):
        for j in range(i + 1, sample.n):
            add(float(v[i, 0] - v[j, 0]), float(v[i, 1] - v[j, 1]))
    if not dirs:
        dirs = [(1.0, 0.0)]
    u = np.array(dirs, dtype=float)
    s = v @ u.T
    masks = s <= 0.0
    if sample._iw64 is not None:
        masses = masks.T.astype(np.int64) @ sample._iw64
        best = int(masses.min())
    else:
        best = min(exact_mass(sample.weight_numerators, masks[:, k])
                   for k in range(u.shape[0]))
    return DepthValue(Fraction(best, sample.weight_denominator), HalfspaceAll(), True)


# ---------------------------------------------------------------------------
# exact depth for d <= 3 via direction-space cells

def _column_masses(sample: WeightedSample, masks: np.ndarray, rows) -> list[int]:
    """Exact masses of the given sample rows under each mask column."""
    nums = [sample.weight_numerators[i] for i in rows]
    if sample._iw64 is not None:
        iw = np.array(nums, dtype=np.int64)
        return [int(m) for m in masks.T.astype(np.int64) @ iw]
    return [exact_mass(nums, masks[:, k]) for k in range(masks.shape[1])]


def _exact_depth_1d(sample: WeightedSample, x: np.ndarray) -> int:
    vals = sample.points[:, 0]
    return min(sample.mass(vals <= x[0]), sample.mass(vals >= x[0]))


def _exact_depth_2d(sample: WeightedSample, x: np.ndarray) -> int:
    v = sample.points - x
    nz_idx = [i for i in range(sample.n) if v[i, 0] != 0.0 or v[i, 1] != 0.0]
    base = sample.weight_denominator - sum(sample.weight_numerators[i] for i in nz_idx)
    if not nz_idx:
        return sample.weight_denominator
    vn = v[nz_idx]
    # breakpoints: both perpendiculars of every occupied direction
    perp: list[tuple[float, float]] = []
    for gx, gy, _ in _direction_groups([(float(a), float(b)) for a, b in vn],
                                       [1] * len(nz_idx)):
        perp.extend([(-gy, gx), (gy, -gx)])
    bps = [(g[0], g[1]) for g in _direction_groups(perp, [0] * len(perp))]
    u = np.array(bps, dtype=float)
    s = vn @ u.T
    # three-way signs at breakpoints; near-zero entries are resolved exactly
    sg = np.sign(s).astype(np.int8)
    scale = (np.abs(np.outer(vn[:, 0], u[:, 0]))
             + np.abs(np.outer(vn[:, 1], u[:, 1])))
    for i, j in zip(*np.nonzero(np.abs(s) <= _DET_GUARD * scale)):
        sg[i, j] = dot_sign(u[j, 0], u[j, 1], vn[i, 0], vn[i, 1])
    closed = _column_masses(sample, sg <= 0, nz_idx)
    # rotating CCW just past breakpoint u drops the boundary atoms with
    # cross(u, v) > 0, which yields every open-arc count exactly
    cands = list(closed)
    for j in range(u.shape[0]):
        out = 0
        for i in np.flatnonzero(sg[:, j] == 0):
            if cross_sign(u[j, 0], u[j, 1], vn[i, 0], vn[i, 1]) > 0:
                out += sample.weight_numerators[nz_idx[i]]
        cands.append(closed[j] - out)
    return base + min(cands)


def _parallel_exact(a: np.ndarray, b: np.ndarray) -> bool:
    return (cross_sign(a[1], a[2], b[1], b[2]) == 0
            and cross_sign(a[2], a[0], b[2], b[0]) == 0
            and cross_sign(a[0], a[1], b[0], b[1]) == 0)


def _exact_depth_3d(sample: WeightedSample, x: np.ndarray) -> int:
    v = sample.points - x
    nz_idx = [i for i in range(sample.n) if v[i].any()]
    total = sample.weight_denominator
    base = total - sum(sample.weight_numerators[i] for i in nz_idx)
    if not nz_idx:
        return total
    vn = v[nz_idx]
    k = len(nz_idx)
    nums = [sample.weight_numerators[i] for i in nz_idx]
    # maximal classes of mutually parallel directions (either orientation)
    class_of = [-1] * k
    classes: list[list[int]] = []
    for i in range(k):
        if class_of[i] >= 0:
            continue
        cls = [i]
        class_of[i] = len(classes)
        for l in range(i + 1, k):
            if class_of[l] < 0 and _parallel_exact(vn[i], vn[l]):
                class_of[l] = len(classes)
                cls.append(l)
        classes.append(cls)

    best: int | None = None
    for cls in classes:
        a = vn[cls[0]]
        a_unit = a / np.linalg.norm(a)
        helper = np.zeros(3)
        helper[int(np.argmin(np.abs(a_unit)))] = 1.0
        t1 = np.cross(a_unit, helper)
        t1 /= np.linalg.norm(t1)
        t2 = np.cross(a_unit, t1)
        others = [i for i in range(k) if class_of[i] != class_of[cls[0]]]
        events: list[float] = []
        for m_ in others:
            c = np.cross(a_unit, vn[m_])
            events.append(math.atan2(float(c @ t2), float(c @ t1)))
            events.append(math.atan2(float(-c @ t2), float(-c @ t1)))
        if events:
            evs = np.unique(np.array(events))
            gaps = np.append(evs[1:], evs[0] + 2.0 * math.pi)
            mids = (evs + gaps) / 2.0
        else:
            mids = np.array([0.0])
        wdirs = np.cos(mids)[:, None] * t1[None, :] + np.sin(mids)[:, None] * t2[None, :]
        # members lie on the walked circle's axis; a tilt of +-eps decides them
        pos_mass = sum(nums[i] for i in cls if float(a_unit @ vn[i]) > 0.0)
        neg_mass = sum(nums[i] for i in cls if float(a_unit @ vn[i]) < 0.0)
        if others:
            strict = (wdirs @ vn[others].T) < 0.0
            row_masses = []
            o_nums = [nums[i] for i in others]
            if sample._iw64 is not None:
                io = np.array(o_nums, dtype=np.int64)
                row_masses = [int(r) for r in strict.astype(np.int64) @ io]
            else:
                row_masses = [exact_mass(o_nums, row) for row in strict]
        else:
            row_masses = [0] * wdirs.shape[0]
        for rm in row_masses:
            for tilt_mass in (neg_mass, pos_mass):
                cand = base + rm + tilt_mass
                if best is None or cand < best:
                    best = cand
    return best


def halfspace_depth_exact(sample: WeightedSample, point) -> DepthValue:
    """Exact halfspace depth for d <= 3 by direction-space cell enumeration."""
    if sample.dim > 3:
        raise BudgetError("exact halfspace depth supports d <= 3")
    if sample.n > _EXACT_MAX_POINTS:
        raise BudgetError(f"exact halfspace depth supports n <= {_EXACT_MAX_POINTS}")
    x = _check_point(point, sample.dim)
    if sample.dim == 1:
        mass = _exact_depth_1d(sample, x)
    elif sample.dim == 2:
        mass = _exact_depth_2d(sample, x)
    else:
        mass = _exact_depth_3d(sample, x)
    return DepthValue(Fraction(mass, sample.weight_denominator), HalfspaceAll(), True)


# ---------------------------------------------------------------------------
# other families

def axis_depth(sample: WeightedSample, point, order: ConeOrder) -> DepthValue:
    """Minimum mass of a halfspace tangent to a cone-coordinate slab at x."""
    if sample.dim != order.dim:
        raise DimensionError("sample and order dimensions differ")
    x = _check_point(point, sample.dim)
    # one stacked map: the query must round exactly like the atoms, or a
    # duplicate of the query could fall on the wrong side of its own slab
    both = order.to_cone(np.vstack([sample.points, x[None, :]]))
    c, t = both[:-1], both[-1]
    best: int | None = None
    for i in range(order.dim):
        for mass in (sample.mass(c[:, i] <= t[i]), sample.mass(c[:, i] >= t[i])):
            if best is None or mass < best:
                best = mass
    return DepthValue(Fraction(best, sample.weight_denominator), AxisParallel(order), True)


def interval_complement_depth(sample: WeightedSample, point, order: ConeOrder) -> DepthValue:
    """Depth for complements of order intervals (equals tangent axis depth)."""
    inner = axis_depth(sample, point, order)
    return DepthValue(inner.value, IntervalComplements(order), True)


def convex_complement_depth(sample: WeightedSample, point) -> DepthValue:
    """Depth for complements of compact convex sets (equals halfspace depth)."""
    inner = halfspace_depth(sample, point)
    return DepthValue(inner.value, ConvexCompactComplements(), inner.exact)


def ball_depth(sample: WeightedSample, point, radius_cap: float) -> DepthValue:
    """Upper bound on depth for complements of balls with radius <= radius_cap.

    Heuristic enumeration: for each candidate direction u the ball of radius
    exactly radius_cap centered at x + t u, t > radius_cap, dominates every
    smaller ball along u, so t is swept over all sphere-crossing values of
    the sample.  The value is non-increasing in radius_cap and converges to
    halfspace depth as the cap grows.
    """
    if not (math.isfinite(radius_cap) and radius_cap > 0.0):
        raise ParameterError("radius_cap must be finite and positive")
    x = _check_point(point, sample.dim)
    family = BallComplements(radius_cap)
    total = sample.weight_denominator
    v = sample.points - x
    sq_norms = (v * v).sum(axis=1)
    nz = np.flatnonzero(sq_norms > 0.0)
    if nz.shape[0] == 0:
        return DepthValue(Fraction(1), family, False)

    raw: list[np.ndarray] = [v[nz], -v[nz]]
    if sample.dim == 2:
        perp = np.stack([-v[nz, 1], v[nz, 0]], axis=1)
        raw.extend([perp, -perp])
        # The captured-mass step function of the direction changes only at
        # +-perp(v_i); nudged copies of those breakpoints reach the open
        # arcs on either side, where the per-direction maximum can be
        # strictly larger than at any breakpoint.
        for theta in (1e-3, 1e-7):
            c, s = math.cos(theta), math.sin(theta)
            for sgn in (1.0, -1.0):
                rot = np.stack([c * perp[:, 0] - sgn * s * perp[:, 1],
                                sgn * s * perp[:, 0] + c * perp[:, 1]], axis=1)
                raw.extend([rot, -rot])
    if sample.n <= _BALL_PAIR_BUDGET:
        diffs = sample.points[:, None, :] - sample.points[None, :, :]
        diffs = diffs.reshape(-1, sample.dim)
        keep = (diffs * diffs).sum(axis=1) > 0.0
        raw.append(diffs[keep])
    dirs = np.concatenate(raw, axis=0)
    dirs = dirs / np.sqrt((dirs * dirs).sum(axis=1))[:, None]
    dirs = np.unique(np.round(dirs, 12), axis=0)

    cap2 = radius_cap * radius_cap
    t_first = float(np.nextafter(radius_cap, math.inf))
    best = 0
    for u in dirs:
        proj = v @ u
        off2 = np.maximum(sq_norms - proj * proj, 0.0)
        disc = cap2 - off2
        ok = disc >= 0.0
        root = np.sqrt(disc[ok])
        ts = np.concatenate([proj[ok] - root, proj[ok] + root])
        ts = np.unique(ts[ts > radius_cap])
        for t in [t_first, *ts.tolist()]:
            centered = sq_norms + t * t - 2.0 * t * proj
            captured = sample.mass(centered <= cap2)
            if captured > best:
                best = captured
    return DepthValue(Fraction(total - best, total), family, False)


def monte_carlo_depth(sample: WeightedSample, point, n_dirs: int = 512,
                      seed: int = 0) -> DepthValue:
    """Seeded random-direction upper bound on halfspace depth (exact=False)."""
    if n_dirs < 1:
        raise ParameterError("n_dirs must be >= 1")
    x = _check_point(point, sample.dim)
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((n_dirs, sample.dim))
    norms = np.sqrt((dirs * dirs).sum(axis=1))
    bad = norms < 1e-12
    if bad.any():
        dirs[bad] = 0.0
        dirs[bad, 0] = 1.0
    s = (sample.points - x) @ dirs.T
    masks = s <= 0.0
    if sample._iw64 is not None:
        best = int((masks.T.astype(np.int64) @ sample._iw64).min())
    else:
        best = min(exact_mass(sample.weight_numerators, masks[:, k])
                   for k in range(n_dirs))
    return DepthValue(Fraction(best, sample.weight_denominator), HalfspaceAll(), False)


def halfspace_depth(sample: WeightedSample, point, *, n_dirs: int = 1024,
                    seed: int = 0) -> DepthValue:
    """Best available halfspace depth: exact for d <= 3, Monte Carlo beyond."""
    if sample.dim == 2:
        return halfspace_depth_2d(sample, point)
    if sample.dim <= 3 and sample.n <= _EXACT_MAX_POINTS:
        return halfspace_depth_exact(sample, point)
    return monte_carlo_depth(sample, point, n_dirs=n_dirs, seed=seed)


def depth(sample: WeightedSample, point, family: DepthFamily, *,
          n_dirs: int = 1024, seed: int = 0) -> DepthValue:
    """Dispatch depth evaluation by family descriptor."""
    if isinstance(family, HalfspaceAll):
        return halfspace_depth(sample, point, n_dirs=n_dirs, seed=seed)
    if isinstance(family, AxisParallel):
        return axis_depth(sample, point, family.order)
    if isinstance(family, IntervalComplements):
        return interval_complement_depth(sample, point, family.order)
    if isinstance(family, BallComplements):
        return ball_depth(sample, point, family.radius_cap)
    if isinstance(family, ConvexCompactComplements):
        return convex_complement_depth(sample, point)
    raise ParameterError(f"unknown depth family: {family!r}")
