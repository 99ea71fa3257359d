"""Request models for the HTTP service.

Domain validation (finite coordinates, positive weights, level ranges)
lives in the core library so the CLI and service reject inputs the same
way; these models only shape the JSON.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class SampleBody(BaseModel):
    points: list[list[float]] = Field(description="sample points, one row each")
    weights: list[float] | None = Field(default=None,
                                        description="positive weights per point")


class DepthRequest(SampleBody):
    point: list[float]
    family: str = "halfspace"
    order: list[list[float]] | None = None
    radius_cap: float | None = None
    n_dirs: int = 1024
    seed: int = 0


class MedianRequest(SampleBody):
    order: list[list[float]] | None = None


class RegionRequest(SampleBody):
    alpha: float | str = Field(description="level in (0, 1]; '1/3' stays exact")
    family: str = "halfspace"
    order: list[list[float]] | None = None
    radius_cap: float | None = None


class CenterRequest(SampleBody):
    family: str = "halfspace"
    order: list[list[float]] | None = None
    radius_cap: float | None = None


class BoundRequest(SampleBody):
    pass


class JensenRequest(SampleBody):
    fn: str
    mode: str = "center"
    family: str = "halfspace"
    order: list[list[float]] | None = None
    params: dict[str, float | list[float]] = Field(default_factory=dict)
