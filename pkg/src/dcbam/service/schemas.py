"""Pydantic request models for the HTTP API."""
from __future__ import annotations

from pydantic import BaseModel, ConfigDict


class LatticeOverrides(BaseModel):
    """Partial lattice inputs; anything omitted falls back to the project's
    lattice defaults."""

    model_config = ConfigDict(extra="forbid")

    v_s: float | None = None
    u: float | None = None
    d: float | None = None
    r: float | None = None
    horizons: int | None = None
    convention: str | None = None
    style: str | None = None


class PortfolioSelector(BaseModel):
    """Either a stored portfolio id or an ad-hoc list of decision ids."""

    model_config = ConfigDict(extra="forbid")

    portfolio_id: str | None = None
    dad_ids: list[str] | None = None
    budget: float | None = None
    per_dad_base_values: dict[str, float] | None = None
    lattice: LatticeOverrides | None = None


class ValuationRequestBody(PortfolioSelector):
    dedup_shared_strategy_costs: bool = False


class WhatIfRequestBody(PortfolioSelector):
    lo: float = 300.0
    hi: float = 2200.0
    step: float = 100.0


class CreateProjectBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    project: dict | None = None
    path: str | None = None


class UpdateProjectBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    revision: int
    project: dict


class SaveProjectBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    path: str
