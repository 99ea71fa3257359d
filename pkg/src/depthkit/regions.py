"""Depth regions, deepest-point sets, and the 1/(d+1) coverage bound.

A level-alpha region is the intersection of every family member whose mass
exceeds 1 - alpha.  For halfspaces that is a convex polygon cut from a
finite set of candidate normals; for axis and interval families it is a box
in cone coordinates.  The center is the region at the largest attainable
depth, found by an integer binary search on mass levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .depth import (
    AxisParallel,
    BallComplements,
    ConvexCompactComplements,
    DepthFamily,
    HalfspaceAll,
    IntervalComplements,
    halfspace_depth_2d,
    halfspace_depth_exact,
)
from .errors import BudgetError, DimensionError, ParameterError
from .measure import WeightedSample, _grouped_cumulative, check_level
from .order import ConeOrder, OrderInterval

_REGION_MAX_POINTS = 200
_CENTER_MAX_POINTS = 120

Vertex = tuple[float, float]

# A cut line is an integer triple (A, B, C) encoding A*x + B*y <= C; a
# homogeneous point is an integer triple (X, Y, T) with T > 0 for the
# affine point (X/T, Y/T).  Both are exact, so clipping never rounds.
Line = tuple[int, int, int]
HPoint = tuple[int, int, int]


@dataclass(frozen=True)
class DepthRegion:
    """Convex region at a depth level, canonicalized for stable output.

    Vertices run counter-clockwise from the lexicographically smallest one;
    degenerate regions keep one or two vertices, empty regions none.
    """

    kind: str  # "polygon" | "box" | "empty"
    alpha: Fraction
    vertices: tuple[Vertex, ...]

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def contains(self, point, tol: float = 1e-9) -> bool:
        if self.is_empty:
            return False
        x, y = float(point[0]), float(point[1])
        vs = self.vertices
        if len(vs) == 1:
            return abs(x - vs[0][0]) <= tol and abs(y - vs[0][1]) <= tol
        if len(vs) == 2:
            (ax, ay), (bx, by) = vs
            dx, dy = bx - ax, by - ay
            t = ((x - ax) * dx + (y - ay) * dy) / (dx * dx + dy * dy)
            t = min(1.0, max(0.0, t))
            return math.hypot(x - (ax + t * dx), y - (ay + t * dy)) <= tol
        for i in range(len(vs)):
            ax, ay = vs[i]
            bx, by = vs[(i + 1) % len(vs)]
            ex, ey = bx - ax, by - ay
            if ex * (y - ay) - ey * (x - ax) < -tol * math.hypot(ex, ey):
                return False
        return True

    def to_payload(self) -> dict:
        return {
            "kind": self.kind,
            "alpha": float(self.alpha),
            "vertices": [[vx, vy] for vx, vy in self.vertices],
        }


def _canonical_ring(ring: list[tuple[Fraction, Fraction]]) -> tuple[Vertex, ...]:
    """Canonical float vertices of an exact convex ring.

    Duplicate and straight-through vertices are removed in exact
    arithmetic; reversal vertices are kept, marking the two ends of a
    degenerate region.  A zero-area ring collapses to its extreme points.
    Output runs counter-clockwise from the lexicographically smallest
    vertex, rounded to float once at the end.
    """
    pts: list[tuple[Fraction, Fraction]] = []
    for p in ring:
        if not pts or p != pts[-1]:
            pts.append(p)
    while len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    changed = True
    while changed and len(pts) > 2:
        changed = False
        for i in range(len(pts)):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % len(pts)]
            ux, uy = b[0] - a[0], b[1] - a[1]
            vx, vy = c[0] - b[0], c[1] - b[1]
            if ux * vy - uy * vx == 0 and ux * vx + uy * vy >= 0:
                del pts[i]
                changed = True
                break
    if len(pts) > 2:
        area2 = sum(pts[i][0] * pts[(i + 1) % len(pts)][1]
                    - pts[(i + 1) % len(pts)][0] * pts[i][1]
                    for i in range(len(pts)))
        if area2 == 0:
            pts = [min(pts), max(pts)]
        elif area2 < 0:
            pts.reverse()
    if len(pts) == 2:
        pts.sort()
    elif len(pts) > 2:
        k = pts.index(min(pts))
        pts = pts[k:] + pts[:k]
    return tuple((float(x), float(y)) for x, y in pts)


def _line_from_floats(ux: float, uy: float, c: float) -> Line:
    """Integer encoding of ux*x + uy*y <= c (float denominators are 2**k)."""
    an, ad = ux.as_integer_ratio()
    bn, bd = uy.as_integer_ratio()
    cn, cd = c.as_integer_ratio()
    q = max(ad, bd, cd)
    return an * (q // ad), bn * (q // bd), cn * (q // cd)


def _cut_line(ux: float, uy: float, px: float, py: float) -> Line:
    """Integer encoding of ux*x + uy*y <= ux*px + uy*py, all exact."""
    an, ad = ux.as_integer_ratio()
    bn, bd = uy.as_integer_ratio()
    xn, xd = px.as_integer_ratio()
    yn, yd = py.as_integer_ratio()
    s = max(ad, bd)
    a = an * (s // ad)
    b = bn * (s // bd)
    t = max(xd, yd)
    return a * t, b * t, a * xn * (t // xd) + b * yn * (t // yd)


def _hpoint(p: Line, q: Line) -> HPoint:
    """Intersection of two lines, normalized to positive last coordinate."""
    a1, b1, c1 = p
    a2, b2, c2 = q
    t = a1 * b2 - a2 * b1
    x = c1 * b2 - c2 * b1
    y = a1 * c2 - a2 * c1
    return (-x, -y, -t) if t < 0 else (x, y, t)


def _hside(pt: HPoint, line: Line) -> int:
    x, y, t = pt
    a, b, c = line
    v = a * x + b * y - c * t
    return (v > 0) - (v < 0)


def _box_ring(sample: WeightedSample) -> list[tuple[HPoint, Line]]:
    """Counter-clockwise padded bounding box with its supporting lines."""
    lo = sample.points.min(axis=0)
    hi = sample.points.max(axis=0)
    pad = 1.0 + float((hi - lo).max())
    x0, x1 = float(lo[0] - pad), float(hi[0] + pad)
    y0, y1 = float(lo[1] - pad), float(hi[1] + pad)
    bottom = _line_from_floats(0.0, -1.0, -y0)
    right = _line_from_floats(1.0, 0.0, x1)
    top = _line_from_floats(0.0, 1.0, y1)
    left = _line_from_floats(-1.0, 0.0, -x0)
    return [(_hpoint(left, bottom), bottom), (_hpoint(bottom, right), right),
            (_hpoint(right, top), top), (_hpoint(top, left), left)]


def _exact_clip(lines: list[Line],
                start: list[tuple[HPoint, Line]]) -> list[tuple[Fraction, Fraction]]:
    """Clip a convex ring by integer halfplanes without any rounding.

    Each entry pairs a vertex with the line supporting the edge that leaves
    it, so every new vertex is the intersection of two input lines and
    coordinate sizes stay bounded.
    """
    poly = start
    for line in lines:
        if not poly:
            break
        sides = [_hside(pt, line) for pt, _ in poly]
        if all(s <= 0 for s in sides):
            continue
        out: list[tuple[HPoint, Line]] = []
        n = len(poly)
        for i in range(n):
            pi, li = poly[i]
            vi, vj = sides[i], sides[(i + 1) % n]
            if vi < 0:
                out.append((pi, li))
                if vj > 0:
                    out.append((_hpoint(li, line), line))
            elif vi == 0:
                # a vertex on the cut keeps its edge only while that edge
                # stays inside; otherwise the boundary continues on the cut
                out.append((pi, li if vj <= 0 else line))
            elif vj < 0:
                out.append((_hpoint(li, line), li))
        poly = out
    return [(Fraction(x, t), Fraction(y, t)) for (x, y, t), _ in poly]


def _clip_halfplane(poly: list[Vertex], ux: float, uy: float,
                    c: float) -> list[Vertex]:
    """Keep the part of a convex ring with ux*x + uy*y <= c."""
    out: list[Vertex] = []
    k = len(poly)
    for i in range(k):
        ax, ay = poly[i]
        bx, by = poly[(i + 1) % k]
        fa = ux * ax + uy * ay - c
        fb = ux * bx + uy * by - c
        if fa <= 0.0:
            out.append((ax, ay))
        if (fa < 0.0 < fb) or (fb < 0.0 < fa):
            t = fa / (fa - fb)
            out.append((ax + t * (bx - ax), ay + t * (by - ay)))
    return out


def _padded_box(sample: WeightedSample) -> list[Vertex]:
    lo = sample.points.min(axis=0)
    hi = sample.points.max(axis=0)
    pad = 1.0 + float((hi - lo).max())
    return [
        (float(lo[0] - pad), float(lo[1] - pad)),
        (float(hi[0] + pad), float(lo[1] - pad)),
        (float(hi[0] + pad), float(hi[1] + pad)),
        (float(lo[0] - pad), float(hi[1] + pad)),
    ]


def _region_directions(sample: WeightedSample) -> np.ndarray:
    """Pairwise difference directions, their perpendiculars, both signs.

    Deduplication keys on rounded unit vectors but keeps the raw vectors,
    so cut offsets stay exact dot products of sample coordinates.
    """
    pts = sample.points
    diffs = (pts[:, None, :] - pts[None, :, :]).reshape(-1, 2)
    diffs = diffs[(diffs[:, 0] != 0.0) | (diffs[:, 1] != 0.0)]
    if diffs.shape[0] == 0:
        return np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    perp = np.stack([-diffs[:, 1], diffs[:, 0]], axis=1)
    raw = np.concatenate([diffs, perp], axis=0)
    units = raw / np.sqrt((raw * raw).sum(axis=1))[:, None]
    _, keep = np.unique(np.round(units, 12), axis=0, return_index=True)
    return raw[np.sort(keep)]


def _cut_index(csum, thresh_floor: int) -> int:
    if isinstance(csum, np.ndarray):
        return int(np.searchsorted(csum, thresh_floor, side="right"))
    for i, c in enumerate(csum):
        if c > thresh_floor:
            return i
    raise AssertionError("cumulative mass never exceeds a sub-total threshold")


def _sorted_projection(sample: WeightedSample, u: np.ndarray):
    """Atoms sorted by projection onto u, with exact tie adjudication.

    Floats order the bulk; runs of projections within a rounding
    tolerance of each other are reordered by exact rational comparison.
    Cut directions are pairwise perpendiculars, so such knife-edge runs
    are the rule, and a float misordering there would move a whole atom
    across the cut line.
    """
    pts = sample.points
    proj = pts @ u
    order = np.argsort(proj, kind="stable")
    s = proj[order]
    if len(s) > 1:
        gaps = np.diff(s)
        tol = 16.0 * np.finfo(np.float64).eps * float(
            np.abs(pts * u).sum(axis=1).max())
        if float(gaps.min()) <= tol:
            exact_u = [Fraction(float(c)) for c in u]

            def exact_proj(i: int) -> Fraction:
                return sum(c * Fraction(float(x))
                           for c, x in zip(exact_u, pts[i]))

            starts = np.flatnonzero(np.r_[True, gaps > tol])
            ends = np.r_[starts[1:], len(s)]
            for a, b in zip(starts, ends):
                if b - a > 1:
                    order[a:b] = sorted(order[a:b], key=exact_proj)
            s = proj[order]
    if sample._iw64 is not None:
        csum = np.cumsum(sample._iw64[order])
    else:
        csum = []
        running = 0
        for i in order:
            running += sample.weight_numerators[int(i)]
            csum.append(running)
    return s, csum, order


def _exact_region_ring(sample: WeightedSample, thresh_floor: int,
                       dirs=None, cuts=None) -> tuple[Vertex, ...]:
    """Exactly clipped level region; cuts pass through support atoms."""
    if dirs is None:
        dirs = _region_directions(sample)
        cuts = [_sorted_projection(sample, u) for u in dirs]
    lines = []
    for u, (_, csum, order) in zip(dirs, cuts):
        j = int(order[_cut_index(csum, thresh_floor)])
        lines.append(_cut_line(float(u[0]), float(u[1]),
                               float(sample.points[j, 0]),
                               float(sample.points[j, 1])))
    return _canonical_ring(_exact_clip(lines, _box_ring(sample)))


def halfspace_region(sample: WeightedSample, alpha) -> DepthRegion:
    """Intersection of all closed halfplanes with mass above 1 - alpha."""
    if sample.dim != 2:
        raise DimensionError("halfspace regions are implemented for dim 2")
    if sample.n > _REGION_MAX_POINTS:
        raise BudgetError(f"halfspace regions support n <= {_REGION_MAX_POINTS}")
    a = check_level(alpha)
    total = sample.weight_denominator
    verts = _exact_region_ring(sample, _mass_threshold(total, a))
    if not verts:
        return DepthRegion("empty", a, ())
    return DepthRegion("polygon", a, verts)


def _mass_threshold(total: int, alpha: Fraction) -> int:
    """Largest integer mass that does NOT exceed total * (1 - alpha)."""
    t = total - total * alpha
    return t.numerator // t.denominator


def halfspace_center(sample: WeightedSample) -> tuple[Fraction, DepthRegion]:
    """Maximum halfspace depth and its region, by search on mass levels.

    Cut lines move only when a mass threshold crosses some direction's
    cumulative weight, so feasibility (non-emptiness of the clipped
    region) is constant between those candidate levels and the top of
    each run is a candidate.  A binary search with fast float clipping
    picks a candidate; exact clipping then certifies it, galloping to a
    neighbour when float rounding misjudged a degenerate level (the top
    region is often a single point).
    """
    if sample.dim != 2:
        raise DimensionError("halfspace centers are implemented for dim 2")
    if sample.n > _CENTER_MAX_POINTS:
        raise BudgetError(f"halfspace centers support n <= {_CENTER_MAX_POINTS}")
    total = sample.weight_denominator
    dirs = _region_directions(sample)
    cuts = [_sorted_projection(sample, u) for u in dirs]

    masses: set[int] = set()
    for _, csum, _ in cuts:
        masses.update(int(c) for c in csum)
    cand = sorted({total - c for c in masses if 1 <= total - c < total})
    cand.append(total)

    def clipped(level: int) -> list[Vertex]:
        # S at alpha = level/total: keep halfplanes with mass > total - level
        poly = _padded_box(sample)
        for (ux, uy), (s, csum, _) in zip(dirs, cuts):
            c = float(s[_cut_index(csum, total - level)])
            poly = _clip_halfplane(poly, float(ux), float(uy), c)
            if not poly:
                break
        return poly

    lo, hi = 0, len(cand) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if clipped(cand[mid]):
            lo = mid
        else:
            hi = mid - 1

    def ring_at(i: int) -> tuple[Vertex, ...]:
        return _exact_region_ring(sample, total - cand[i], dirs, cuts)

    def last_feasible(i: int, j: int):
        best = None, ()
        while i <= j:
            mid = (i + j) // 2
            ring = ring_at(mid)
            if ring:
                best = mid, ring
                i = mid + 1
            else:
                j = mid - 1
        return best

    # certify exactly, galloping outward from the float answer, which is
    # usually right or one notch off
    verts = ring_at(lo)
    if not verts:
        upper, step, found = lo - 1, 1, None
        while upper >= 0:
            probe = max(upper - step + 1, 0)
            ring = ring_at(probe)
            if ring:
                found = probe, ring
                break
            upper, step = probe - 1, step * 2
        assert found is not None, "the lowest candidate keeps its support atoms"
        lo, verts = found
        better = last_feasible(lo + 1, upper)
        if better[0] is not None:
            lo, verts = better
    else:
        end, step = len(cand) - 1, 1
        while lo < end:
            probe = min(lo + step, end)
            ring = ring_at(probe)
            if ring:
                lo, verts, step = probe, ring, step * 2
            else:
                better = last_feasible(lo + 1, probe - 1)
                if better[0] is not None:
                    lo, verts = better
                break
    alpha_max = Fraction(cand[lo], total)
    return alpha_max, DepthRegion("polygon", alpha_max, verts)


def axis_interval(sample: WeightedSample, alpha, order: ConeOrder) -> OrderInterval:
    """Level region for the axis and interval families, in cone coordinates."""
    if sample.dim != order.dim:
        raise DimensionError("sample and order dimensions differ")
    a = check_level(alpha)
    total = sample.weight_denominator
    thresh_floor = _mass_threshold(total, a)
    cone = order.to_cone(sample.points)
    lows: list[float] = []
    highs: list[float] = []
    for i in range(order.dim):
        vals, cum = _grouped_cumulative(cone[:, i], sample.weight_numerators)
        hi_idx = next(g for g, c in enumerate(cum) if c > thresh_floor)
        lo_idx = max(g for g in range(len(vals))
                     if (cum[g - 1] if g else 0) < total - thresh_floor)
        highs.append(vals[hi_idx])
        lows.append(vals[lo_idx])
    return OrderInterval(order, tuple(lows), tuple(highs))


def _interval_region(interval: OrderInterval, alpha: Fraction) -> DepthRegion:
    if interval.order.dim != 2:
        raise DimensionError("region rendering is implemented for dim 2")
    if interval.is_empty():
        return DepthRegion("empty", alpha, ())
    corners = [tuple(map(float, c)) for c in interval.corners_ambient()]
    hull = _canonical_ring([(Fraction(x), Fraction(y))
                            for x, y in _ring_of_corners(corners)])
    return DepthRegion("box", alpha, hull)


def _ring_of_corners(corners: list[Vertex]) -> list[Vertex]:
    # corners_ambient yields the 4 corners in lexicographic cone order;
    # reorder into a ring (swap the last two) before canonicalization
    if len(corners) == 4:
        return [corners[0], corners[1], corners[3], corners[2]]
    return corners


def axis_region(sample: WeightedSample, alpha, order: ConeOrder) -> DepthRegion:
    a = check_level(alpha)
    return _interval_region(axis_interval(sample, a, order), a)


def axis_center(sample: WeightedSample,
                order: ConeOrder) -> tuple[Fraction, DepthRegion]:
    """Maximum axis depth and its box; coordinates maximize independently."""
    if sample.dim != order.dim:
        raise DimensionError("sample and order dimensions differ")
    total = sample.weight_denominator
    cone = order.to_cone(sample.points)
    level = None
    for i in range(order.dim):
        vals, cum = _grouped_cumulative(cone[:, i], sample.weight_numerators)
        best = max(min(cum[g], total - (cum[g - 1] if g else 0))
                   for g in range(len(vals)))
        level = best if level is None else min(level, best)
    alpha_max = Fraction(level, total)
    return alpha_max, axis_region(sample, alpha_max, order)


@dataclass(frozen=True)
class BoundReport:
    """Outcome of checking max depth against the 1/(dim+1) floor."""

    dim: int
    alpha_max: Fraction
    bound: Fraction
    satisfied: bool
    witness: tuple[float, ...]
    exact: bool


def max_depth_bound(sample: WeightedSample) -> BoundReport:
    """Certify that some point reaches halfspace depth 1/(dim+1).

    Exact maximum for dim <= 2.  For dim 3 the maximum is lower-bounded by
    exact depths at data points, the mean, and the coordinate-wise median,
    which is enough to certify the floor on well-centered samples.
    """
    d = sample.dim
    bound = Fraction(1, d + 1)
    total = sample.weight_denominator
    if d == 1:
        vals, cum = _grouped_cumulative(sample.points[:, 0],
                                        sample.weight_numerators)
        masses = [min(cum[g], total - (cum[g - 1] if g else 0))
                  for g in range(len(vals))]
        g = int(np.argmax(masses))
        alpha_max, witness, exact = Fraction(masses[g], total), (vals[g],), True
    elif d == 2:
        alpha_max, region = halfspace_center(sample)
        witness, exact = region.vertices[0], True
    elif d == 3:
        cands = [sample.points[i] for i in range(sample.n)]
        weights = np.array(sample.weight_numerators, dtype=float)
        cands.append((weights[:, None] * sample.points).sum(axis=0) / weights.sum())
        cands.append(np.array([
            quantile_mid(sample.points[:, i], sample.weight_numerators, total)
            for i in range(3)
        ]))
        best = max(cands, key=lambda x: halfspace_depth_exact(sample, x).value)
        alpha_max = halfspace_depth_exact(sample, best).value
        witness, exact = tuple(map(float, best)), False
    else:
        raise BudgetError("the depth bound check supports dim <= 3")
    return BoundReport(d, alpha_max, bound, alpha_max >= bound, witness, exact)


def quantile_mid(values: np.ndarray, numerators, total: int) -> float:
    """Deepest support value of a univariate pushforward (lower one on ties)."""
    vals, cum = _grouped_cumulative(values, numerators)
    masses = [min(cum[g], total - (cum[g - 1] if g else 0))
              for g in range(len(vals))]
    return vals[int(np.argmax(masses))]


def region(sample: WeightedSample, alpha, family: DepthFamily) -> DepthRegion:
    """Dispatch level-region computation by family descriptor."""
    if isinstance(family, (HalfspaceAll, ConvexCompactComplements)):
        return halfspace_region(sample, alpha)
    if isinstance(family, (AxisParallel, IntervalComplements)):
        return axis_region(sample, alpha, family.order)
    if isinstance(family, BallComplements):
        raise ParameterError("regions are not available for the ball family")
    raise ParameterError(f"unknown depth family: {family!r}")


def center(sample: WeightedSample,
           family: DepthFamily) -> tuple[Fraction, DepthRegion]:
    """Dispatch deepest-region computation by family descriptor."""
    if isinstance(family, (HalfspaceAll, ConvexCompactComplements)):
        return halfspace_center(sample)
    if isinstance(family, (AxisParallel, IntervalComplements)):
        return axis_center(sample, family.order)
    if isinstance(family, BallComplements):
        raise ParameterError("centers are not available for the ball family")
    raise ParameterError(f"unknown depth family: {family!r}")
