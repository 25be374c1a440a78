#!/usr/bin/env python3
"""Regenerate the GridStix example project (fixtures/gridstix.dcbam.json)
and its companion CSV imports. The fixture is written through the canonical
serializer, which keeps the byte round-trip tests meaningful."""
from __future__ import annotations

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from dcbam.concordance import RatingMatrix
from dcbam.lattice import LatticeParams
from dcbam.model import (
    ArchitecturalStrategy,
    DiversifiedDecision,
    Portfolio,
    QualityAttributeWeights,
    Scenario,
)
from dcbam.project import NamedRatingMatrix, Project, WhatIfConfig, save_project_file

QAS = ("Performance", "Reliability", "Availability", "Security", "Scalability", "EnergyEfficiency")

# contribution rows: per-QA impact scores in QAS order, then raw cost
DAD_ROWS = {
    "DAD1": (("Wifi",), (0.6, 1.0, 0.7, 0.3, 0.7, -0.2), 30, 900.0),
    "DAD2": (("BT",), (0.1, 0.4, 0.9, 0.8, -0.4, 0.8), 20, 600.0),
    "DAD3": (("FH",), (0.5, 0.8, 0.8, 0.0, 0.0, -0.4), 15, 550.0),
    "DAD4": (("SP",), (0.2, -0.1, 0.5, 0.0, 0.0, 0.7), 10, 400.0),
    "DAD5": (("Wifi", "FH"), (1.0, 1.0, 0.9, -0.1, 0.7, -0.6), 45, 1200.0),
    "DAD6": (("Wifi", "SP"), (0.7, 0.5, 0.5, -0.1, 0.7, 0.2), 40, 700.0),
    "DAD7": (("BT", "FH"), (0.5, 0.2, 0.6, 0.8, -0.4, 0.7), 35, 900.0),
    "DAD8": (("BT", "SP"), (0.2, 0.1, -0.2, 0.8, -0.4, 1.0), 30, 500.0),
}


def build_project() -> Project:
    weights = QualityAttributeWeights(
        entries=(
            ("Performance", 20.0),
            ("Reliability", 30.0),
            ("Availability", 20.0),
            ("Security", 10.0),
            ("Scalability", 5.0),
            ("EnergyEfficiency", 15.0),
        )
    )
    strategies = tuple(
        ArchitecturalStrategy(id=sid, name=name, cost=cost)
        for sid, name, cost in (
            ("Wifi", "Wifi connectivity", 450.0),
            ("BT", "Bluetooth connectivity", 300.0),
            ("GPRS", "GPRS connectivity", 400.0),
            ("FH", "Fewest-hop routing", 325.0),
            ("SP", "Shortest-path routing", 250.0),
        )
    )
    scenarios = (
        Scenario(
            id="Sc1",
            description="Sensor node latency",
            qa_concern="Performance",
            response_measure="node-to-gateway message transfer <= 30 ms",
            candidate_dads=("DAD1", "DAD3", "DAD5", "DAD7"),
        ),
        Scenario(
            id="Sc2",
            description="Hardware failure",
            qa_concern="Availability",
            response_measure="gateway failure detected and recovered in < 1 minute",
        ),
        Scenario(
            id="Sc3",
            description="Flood prediction accuracy",
            qa_concern="Reliability",
            response_measure="alert messages sent in < 2 s",
        ),
        Scenario(
            id="Sc4",
            description="Network resilience",
            qa_concern="Reliability",
            response_measure="average routes from node to gateway > 13",
        ),
        Scenario(
            id="Sc5",
            description="Data management at capacity",
            qa_concern="Scalability",
            response_measure="forward to neighbour node <= 100 ms",
        ),
        Scenario(
            id="Sc6",
            description="Power consumption",
            qa_concern="EnergyEfficiency",
            response_measure="<= 1400 mW per 1KB forwarded node to gateway",
            candidate_dads=("DAD2", "DAD4", "DAD7", "DAD8"),
        ),
        Scenario(
            id="Sc7",
            description="Node manipulation",
            qa_concern="Security",
            response_measure="gateway 99.99% secured against data manipulation",
        ),
    )
    dads = tuple(
        DiversifiedDecision(
            id=dad_id,
            strategies=row[0],
            contrib=dict(zip(QAS, row[1])),
            raw_cost=float(row[2]),
            scale_factor=25.0,
            base_value=row[3],
        )
        for dad_id, row in DAD_ROWS.items()
    )
    portfolios = (
        Portfolio(id="P1", dad_ids=("DAD1",), budget=1000.0),
        Portfolio(id="P5", dad_ids=("DAD5",), budget=1500.0),
        Portfolio(id="P7", dad_ids=("DAD7",), budget=1000.0),
        Portfolio(id="P57", dad_ids=("DAD5", "DAD7"), budget=2500.0),
        Portfolio(id="P157", dad_ids=("DAD1", "DAD5", "DAD7"), budget=3000.0),
    )
    # u/d illustrative; r and v_s are the case-study inputs
    lattice_defaults = LatticeParams(
        v_s=1750.0,
        s0_dad=0.0,
        u=1.2,
        d=0.9,
        r=0.005,
        horizons=3,
        convention="one-minus-r",
        style="european",
    )
    whatif_configs = (
        WhatIfConfig(id="W1", portfolio_id="P57", lo=300.0, hi=2200.0, step=100.0),
    )
    rating_matrices = (
        NamedRatingMatrix(
            id="R1",
            items=("DAD1", "DAD3", "DAD5", "DAD7"),
            matrix=RatingMatrix(
                ranks=((2.0, 4.0, 1.0, 3.0), (2.0, 4.0, 1.0, 3.0), (1.0, 4.0, 2.0, 3.0))
            ),
        ),
    )
    return Project(
        schema_version=1,
        name="GridStix",
        weights=weights,
        scenarios=scenarios,
        strategies=strategies,
        dads=dads,
        portfolios=portfolios,
        lattice_defaults=lattice_defaults,
        whatif_configs=whatif_configs,
        rating_matrices=rating_matrices,
    )


def write_contrib_csv(path: str):
    lines = ["dad_id," + ",".join(QAS) + ",cost"]
    for dad_id, row in DAD_ROWS.items():
        cells = [dad_id] + [str(v) for v in row[1]] + [str(row[2])]
        lines.append(",".join(cells))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def write_ratings_csv(path: str):
    lines = [
        "rater,DAD1,DAD3,DAD5,DAD7",
        "r1,2,4,1,3",
        "r2,2,4,1,3",
        "r3,1,4,2,3",
    ]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def main():
    root = os.path.join(os.path.dirname(__file__), "..", "fixtures")
    os.makedirs(root, exist_ok=True)
    save_project_file(build_project(), os.path.join(root, "gridstix.dcbam.json"))
    write_contrib_csv(os.path.join(root, "gridstix_contrib.csv"))
    write_ratings_csv(os.path.join(root, "gridstix_ratings.csv"))
    print("fixtures written to", os.path.abspath(root))


if __name__ == "__main__":
    main()
