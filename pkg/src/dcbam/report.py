"""Canonical JSON serialization and valuation report assembly.

One report schema feeds both the CLI and the HTTP API, so the two frontends
emit byte-identical output for identical inputs.
"""
from __future__ import annotations

import json

from . import __version__
from .valuation import OptionValuation, WhatIfTable


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, compact separators, shortest
    round-trip float formatting, UTF-8 text. Rejects NaN/Infinity."""
    return json.dumps(
        obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False
    )


def valuation_report(valuation: OptionValuation) -> dict:
    """Full valuation report: request echo, per-horizon prices and grids,
    total, recommendation, engine convention and version."""
    return {
        "engine_version": __version__,
        "portfolio_id": valuation.portfolio_id,
        "dad_ids": list(valuation.dad_ids),
        "per_dad_base_values": dict(valuation.per_dad_base_values),
        "budget": valuation.budget,
        "exercise_cost": valuation.exercise_cost,
        "v_s": valuation.v_s,
        "u": valuation.u,
        "d": valuation.d,
        "r": valuation.r,
        "convention": valuation.convention.value,
        "style": valuation.style.value,
        "horizons": valuation.horizons,
        "per_horizon_prices": list(valuation.per_horizon_prices),
        "total_price": valuation.total_price,
        "final_horizon_price": valuation.final_horizon_price,
        "recommendation": valuation.recommendation.value,
        "compared_against": valuation.compared_against,
        "grids": [
            {"horizon": g.horizon, "price": g.price, "nodes": g.as_grid()}
            for g in valuation.grids
        ],
    }


def whatif_report(table: WhatIfTable) -> dict:
    return {
        "base_range": {"lo": table.lo, "hi": table.hi, "step": table.step},
        "rows": [
            {
                "base_value": row.base_value,
                "total_price": row.total_price,
                "recommendation": row.recommendation.value,
            }
            for row in table.rows
        ],
    }
