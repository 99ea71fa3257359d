"""Shared helpers for the test suite.

Independent evaluators live here so library results are checked against
code that shares no logic with the package: an open-halfplane depth, a
rotated-wedge (non-convex family) depth probe, and brute-force membership
predicates.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from depthkit import WeightedSample


def candidate_directions(sample: WeightedSample, x: np.ndarray) -> list[tuple[float, float]]:
    """Directions parallel/orthogonal to point-to-query and point-to-point."""
    v = sample.points - x
    dirs: list[tuple[float, float]] = []

    def add(dx: float, dy: float) -> None:
        if dx != 0.0 or dy != 0.0:
            dirs.extend([(dx, dy), (-dx, -dy), (-dy, dx), (dy, -dx)])

    for row in v:
        add(float(row[0]), float(row[1]))
    for i in range(sample.n):
        for j in range(i + 1, sample.n):
            add(float(v[i, 0] - v[j, 0]), float(v[i, 1] - v[j, 1]))
    return dirs or [(1.0, 0.0)]


def open_halfplane_depth(sample: WeightedSample, point) -> Fraction:
    """Infimum of open-halfplane mass over candidate normals.

    For each normal the infimum over admissible offsets is evaluated
    literally: the offset steps down to the smallest support value strictly
    above the query projection, keeping the halfplane open throughout.
    """
    x = np.asarray(point, dtype=float)
    best: int | None = None
    for ux, uy in candidate_directions(sample, x):
        proj = sample.points @ np.array([ux, uy])
        at_x = float(ux * x[0] + uy * x[1])
        above = proj[proj > at_x]
        if above.size:
            mass = sample.mass(proj < float(above.min()))
        else:
            mass = sample.mass(proj < at_x + 1.0)
        if best is None or mass < best:
            best = mass
    return Fraction(best, sample.weight_denominator)


def wedge_mass_at(sample: WeightedSample, point, half_angle: float) -> Fraction:
    """Mass caught by an open wedge of the given half-angle containing point.

    The wedge is aimed into the largest angular gap of the directions from
    the query to the other atoms; the captured mass is measured, not
    assumed, so the return value is a valid upper bound on the wedge-family
    depth at the point.
    """
    x = np.asarray(point, dtype=float)
    v = sample.points - x
    nz = (v[:, 0] != 0.0) | (v[:, 1] != 0.0)
    angles = np.sort(np.arctan2(v[nz, 1], v[nz, 0]))
    if angles.size == 0:
        aim = 0.0
    else:
        gaps = np.diff(np.append(angles, angles[0] + 2.0 * math.pi))
        k = int(np.argmax(gaps))
        if gaps[k] <= 2.0 * half_angle:
            raise AssertionError("no angular gap fits the wedge")
        aim = float(angles[k] + gaps[k] / 2.0)
    d = np.array([math.cos(aim), math.sin(aim)])
    apex = x - 1e-9 * d
    rel = sample.points - apex
    norms = np.sqrt((rel * rel).sum(axis=1))
    inside = (norms > 0.0) & (rel @ d > norms * math.cos(half_angle))
    # sanity: the wedge must contain the query point itself
    q = x - apex
    assert float(q @ d) > math.hypot(*q) * math.cos(half_angle)
    return sample.prob(inside)


def primitive_directions(sample: WeightedSample) -> list[tuple[int, int]]:
    """Signed primitive integer versions of diffs and their perpendiculars."""
    dirs: set[tuple[int, int]] = set()
    pts = [(Fraction(x), Fraction(y)) for x, y in sample.points]
    for i in range(len(pts)):
        for j in range(len(pts)):
            dx = pts[i][0] - pts[j][0]
            dy = pts[i][1] - pts[j][1]
            if dx == 0 and dy == 0:
                continue
            scale = math.lcm(dx.denominator, dy.denominator)
            ix, iy = int(dx * scale), int(dy * scale)
            g = math.gcd(ix, iy)
            ix, iy = ix // g, iy // g
            dirs.update({(ix, iy), (-ix, -iy), (-iy, ix), (iy, -ix)})
    return sorted(dirs) or [(1, 0), (-1, 0), (0, 1), (0, -1)]


def exact_level_ring(sample: WeightedSample, level: int) -> list[tuple[Fraction, Fraction]]:
    """Region {x : depth(x) >= level/total} by exact rational clipping.

    Independent formulation: for every signed direction u the constraint is
    u.x >= t_min(u), the smallest support value of u.p reaching cumulative
    mass `level`.  Kept separate from the library on purpose.
    """
    pts = [(Fraction(x), Fraction(y)) for x, y in sample.points]
    nums = sample.weight_numerators
    span = 2 + max(max(abs(p), abs(q)) for p, q in pts)
    poly = [(-span, -span), (span, -span), (span, span), (-span, span)]
    poly = [(Fraction(a), Fraction(b)) for a, b in poly]
    for ux, uy in primitive_directions(sample):
        proj = sorted((ux * p + uy * q, nums[k]) for k, (p, q) in enumerate(pts))
        running = 0
        for value, mass in proj:
            running += mass
            if running >= level:
                t_min = value
                break
        # u.x >= t_min, written as (-u).x <= -t_min for the clip
        a, b, c = Fraction(-ux), Fraction(-uy), -t_min
        out: list[tuple[Fraction, Fraction]] = []
        m = len(poly)
        if m == 0:
            break
        vals = [a * px + b * py - c for px, py in poly]
        for i in range(m):
            j = (i + 1) % m
            if vals[i] <= 0:
                out.append(poly[i])
            if (vals[i] < 0 < vals[j]) or (vals[j] < 0 < vals[i]):
                t = vals[i] / (vals[i] - vals[j])
                out.append((poly[i][0] + t * (poly[j][0] - poly[i][0]),
                            poly[i][1] + t * (poly[j][1] - poly[i][1])))
        poly = out
    return poly


def dyadic_points(rng: np.random.Generator, n: int, dim: int = 2,
                  denom: int = 16, span: int = 8) -> np.ndarray:
    return rng.integers(-span * denom // 8, span * denom // 8 + 1,
                        size=(n, dim)).astype(float) / denom


def dyadic_weights(rng: np.random.Generator, n: int, denom: int = 256):
    return [Fraction(int(k), denom) for k in rng.integers(1, denom + 1, size=n)]


def vertex_sets_match(a, b, tol: float) -> bool:
    """Geometric vertex match: each vertex lies within tol of the other set.

    No bijection: a nearly-degenerate corner may be listed once by one
    construction and as two vertices a few ulps apart by another.
    """
    a = [tuple(map(float, v)) for v in a]
    b = [tuple(map(float, v)) for v in b]
    if not a or not b:
        return not a and not b

    def covered(src, dst):
        return all(any(abs(p[0] - q[0]) <= tol and abs(p[1] - q[1]) <= tol
                       for q in dst) for p in src)

    return covered(a, b) and covered(b, a)
