"""HTTP front end over the core library.

Every endpoint is a POST taking the sample inline; responses are the same
payloads the CLI emits as JSON.  Domain errors map to 422 with a detail
message.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import reports
from ..errors import DepthKitError, ParameterError
from ..measure import WeightedSample
from ..order import ConeOrder
from .schemas import (
    BoundRequest,
    CenterRequest,
    DepthRequest,
    JensenRequest,
    MedianRequest,
    RegionRequest,
)

app = FastAPI(title="depthkit service", version="0.1.0")


@app.exception_handler(DepthKitError)
async def _domain_error(request: Request, exc: DepthKitError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc)})


def _sample(body) -> WeightedSample:
    return WeightedSample(np.array(body.points, dtype=float), body.weights)


def _order(matrix, dim: int) -> ConeOrder:
    if matrix is None:
        return ConeOrder.identity(dim)
    return ConeOrder(np.array(matrix, dtype=float))


def _family(body, dim: int):
    order = None
    if body.family in ("axis", "interval"):
        order = _order(body.order, dim)
    return reports.family_from_name(body.family, order=order,
                                    radius_cap=getattr(body, "radius_cap", None))


def _level(alpha) -> Fraction:
    if isinstance(alpha, str):
        try:
            num, _, den = alpha.partition("/")
            return Fraction(int(num), int(den)) if den else Fraction(float(num))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParameterError(f"cannot parse level {alpha!r}: {exc}") from None
    return Fraction(float(alpha))


@app.post("/depth")
def post_depth(req: DepthRequest) -> dict:
    sample = _sample(req)
    family = _family(req, sample.dim)
    return reports.depth_report(sample, req.point, family,
                                n_dirs=req.n_dirs, seed=req.seed)


@app.post("/median")
def post_median(req: MedianRequest) -> dict:
    sample = _sample(req)
    return reports.median_report(sample, _order(req.order, sample.dim))


@app.post("/region")
def post_region(req: RegionRequest) -> dict:
    sample = _sample(req)
    family = _family(req, sample.dim)
    return reports.region_report(sample, _level(req.alpha), family)


@app.post("/center")
def post_center(req: CenterRequest) -> dict:
    sample = _sample(req)
    family = _family(req, sample.dim)
    return reports.center_report(sample, family)


@app.post("/bound")
def post_bound(req: BoundRequest) -> dict:
    return reports.bound_report(_sample(req))


@app.post("/jensen")
def post_jensen(req: JensenRequest) -> dict:
    sample = _sample(req)
    family = _family(req, sample.dim)
    order = _order(req.order, sample.dim) if req.order is not None else None
    return reports.jensen_report(sample, req.fn, req.mode, family,
                                 params=req.params, order=order)
