"""Plain-dict result payloads shared by the command line and the service.

Every builder returns JSON-ready data: floats, ints, bools, strings, lists,
and nested dicts only.  Exact rational values are carried as numerator and
denominator fields next to their float rendering.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .depth import (
    AxisParallel,
    BallComplements,
    ConvexCompactComplements,
    DepthFamily,
    HalfspaceAll,
    IntervalComplements,
    depth,
)
from .errors import ParameterError
from .jensen import jensen_check, make_builtin
from .measure import WeightedSample
from .order import ConeOrder, median_set
from .regions import center as center_of
from .regions import max_depth_bound
from .regions import region as region_of

FAMILY_NAMES = ("halfspace", "axis", "interval", "ball", "convex")


def family_from_name(name: str, *, order: ConeOrder | None = None,
                     radius_cap: float | None = None) -> DepthFamily:
    if name == "halfspace":
        return HalfspaceAll()
    if name == "convex":
        return ConvexCompactComplements()
    if name in ("axis", "interval"):
        if order is None:
            raise ParameterError(f"family {name!r} needs a cone order")
        return AxisParallel(order) if name == "axis" else IntervalComplements(order)
    if name == "ball":
        if radius_cap is None:
            raise ParameterError("family 'ball' needs a radius cap")
        return BallComplements(float(radius_cap))
    raise ParameterError(
        f"unknown family {name!r}; expected one of {', '.join(FAMILY_NAMES)}")


def family_name(family: DepthFamily) -> str:
    if isinstance(family, HalfspaceAll):
        return "halfspace"
    if isinstance(family, AxisParallel):
        return "axis"
    if isinstance(family, IntervalComplements):
        return "interval"
    if isinstance(family, BallComplements):
        return "ball"
    if isinstance(family, ConvexCompactComplements):
        return "convex"
    raise ParameterError(f"unknown depth family: {family!r}")


def _fraction_fields(x: Fraction) -> dict:
    return {"value": float(x), "numerator": x.numerator,
            "denominator": x.denominator}


def _floats(seq) -> list[float]:
    return [float(v) for v in np.asarray(seq, dtype=float).reshape(-1)]


def depth_report(sample: WeightedSample, point, family: DepthFamily, *,
                 n_dirs: int = 1024, seed: int = 0) -> dict:
    dv = depth(sample, point, family, n_dirs=n_dirs, seed=seed)
    out = {
        "result": "depth",
        "family": family_name(family),
        "point": _floats(point),
        "exact": dv.exact,
        "n": sample.n,
        "dim": sample.dim,
    }
    out.update(_fraction_fields(dv.value))
    return out


def median_report(sample: WeightedSample, order: ConeOrder) -> dict:
    box = median_set(sample, order)
    out = {
        "result": "median",
        "order": [list(map(float, row)) for row in order.generators],
        "lower": _floats(box.lower),
        "upper": _floats(box.upper),
        "n": sample.n,
        "dim": sample.dim,
    }
    if sample.dim == 2 and box.is_bounded() and not box.is_empty():
        corners = [tuple(map(float, c)) for c in box.corners_ambient()]
        ring = [corners[0], corners[1], corners[3], corners[2]]
        deduped = [v for i, v in enumerate(ring) if v != ring[i - 1]]
        out["vertices"] = [list(v) for v in (deduped or ring[:1])]
    return out


def region_report(sample: WeightedSample, alpha, family: DepthFamily) -> dict:
    reg = region_of(sample, alpha, family)
    out = reg.to_payload()
    out.update({"result": "region", "family": family_name(family),
                "n": sample.n, "dim": sample.dim})
    return out


def center_report(sample: WeightedSample, family: DepthFamily) -> dict:
    alpha_max, reg = center_of(sample, family)
    return {
        "result": "center",
        "family": family_name(family),
        "alpha_max": float(alpha_max),
        "alpha_max_numerator": alpha_max.numerator,
        "alpha_max_denominator": alpha_max.denominator,
        "region": reg.to_payload(),
        "n": sample.n,
        "dim": sample.dim,
    }


def bound_report(sample: WeightedSample) -> dict:
    rep = max_depth_bound(sample)
    out = {
        "result": "bound",
        "dim": rep.dim,
        "alpha_max": float(rep.alpha_max),
        "alpha_max_numerator": rep.alpha_max.numerator,
        "alpha_max_denominator": rep.alpha_max.denominator,
        "bound": float(rep.bound),
        "bound_numerator": rep.bound.numerator,
        "bound_denominator": rep.bound.denominator,
        "satisfied": rep.satisfied,
        "witness": list(rep.witness),
        "exact": rep.exact,
        "n": sample.n,
    }
    return out


def jensen_report(sample: WeightedSample, fn_name: str, mode: str,
                  family: DepthFamily, *, params: dict | None = None,
                  order: ConeOrder | None = None) -> dict:
    # an ordered family fixes the function's cone order (the median-mode box
    # clamp needs them to coincide); a plain order serves orderless families
    fn_order = getattr(family, "order", None)
    if fn_order is None:
        fn_order = order
    fn = make_builtin(fn_name, order=fn_order, params=params)
    rep = jensen_check(sample, fn, mode, family)
    out = rep.to_payload()
    out.update({"result": "jensen", "family": family_name(family),
                "n": sample.n, "dim": sample.dim})
    return out
