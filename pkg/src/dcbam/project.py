"""Versioned persistence of the decision workspace (.dcbam.json documents)
and CSV import of tabular inputs.

Documents are canonical: sorted keys, two-space indent, shortest round-trip
float formatting, trailing newline. Saving the same project twice yields
identical bytes, and save(load(doc)) == doc for documents written by save.
"""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass

from .concordance import RatingMatrix
from .errors import IntegrityError, InvariantError, ParseError, VersionError
from .lattice import LatticeParams
from .model import (
    ArchitecturalStrategy,
    DiversifiedDecision,
    Portfolio,
    QualityAttributeWeights,
    Scenario,
    validate_qa_scores,
)

SCHEMA_VERSION = 1
FILE_EXTENSION = ".dcbam.json"


@dataclass(frozen=True)
class WhatIfConfig:
    id: str
    portfolio_id: str
    lo: float
    hi: float
    step: float


@dataclass(frozen=True)
class NamedRatingMatrix:
    id: str
    matrix: RatingMatrix
    items: tuple[str, ...] = ()


@dataclass(frozen=True)
class Project:
    """The whole decision workspace. Referential integrity is enforced at
    load time, so a constructed Project resolves every cross-id."""

    schema_version: int
    name: str
    weights: QualityAttributeWeights
    scenarios: tuple[Scenario, ...]
    strategies: tuple[ArchitecturalStrategy, ...]
    dads: tuple[DiversifiedDecision, ...]
    portfolios: tuple[Portfolio, ...]
    lattice_defaults: LatticeParams
    whatif_configs: tuple[WhatIfConfig, ...] = ()
    rating_matrices: tuple[NamedRatingMatrix, ...] = ()

    def dad_map(self) -> dict[str, DiversifiedDecision]:
        return {dad.id: dad for dad in self.dads}

    def portfolio_map(self) -> dict[str, Portfolio]:
        return {p.id: p for p in self.portfolios if p.id is not None}

    def strategy_costs(self) -> dict[str, float]:
        return {s.id: s.cost for s in self.strategies if s.cost is not None}

    def scenario_map(self) -> dict[str, Scenario]:
        return {s.id: s for s in self.scenarios}

    def base_values(self) -> dict[str, float]:
        """Per-decision lattice seeds: stored base value where present,
        otherwise the scaled benefit."""
        from .model import compute_scaled_benefit

        out = {}
        for dad in self.dads:
            if dad.base_value is not None:
                out[dad.id] = dad.base_value
            else:
                out[dad.id] = compute_scaled_benefit(dad, self.weights)
        return out


def _require(mapping: dict, key: str, ctx: str):
    if key not in mapping:
        raise ParseError(f"{ctx}: missing required field {key!r}")
    return mapping[key]


def load_project(data: bytes | str) -> Project:
    """Parse and fully validate a project document.

    Raises ParseError (malformed JSON or missing fields), VersionError
    (unsupported schema_version), InvariantError (a module invariant such as
    a contribution score outside [-1, 1]), or IntegrityError (dangling
    cross-reference).
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ParseError("project document must be a JSON object")

    version = _require(doc, "schema_version", "project")
    if version != SCHEMA_VERSION:
        raise VersionError(
            f"unsupported schema_version {version}; supported versions: [{SCHEMA_VERSION}]"
        )

    weights = QualityAttributeWeights(
        entries=tuple(
            (_require(e, "qa_name", "weights entry"), _require(e, "score", "weights entry"))
            for e in _require(doc, "weights", "project")
        )
    )
    weight_check = validate_qa_scores(weights)
    if not weight_check.ok:
        raise InvariantError("invalid weights: " + "; ".join(weight_check.violations))

    scenarios = tuple(
        Scenario(
            id=_require(s, "id", "scenario"),
            description=s.get("description", ""),
            qa_concern=_require(s, "qa_concern", f"scenario {s.get('id')}"),
            response_measure=s.get("response_measure", ""),
            candidate_dads=tuple(s.get("candidate_dads", ())),
        )
        for s in doc.get("scenarios", [])
    )
    strategies = tuple(
        ArchitecturalStrategy(
            id=_require(st, "id", "strategy"),
            name=st.get("name", st["id"]),
            cost=st.get("cost"),
        )
        for st in doc.get("strategies", [])
    )
    dads = tuple(
        DiversifiedDecision(
            id=_require(d, "id", "dad"),
            strategies=tuple(d.get("strategies", ())),
            contrib=dict(_require(d, "contrib", f"dad {d.get('id')}")),
            raw_cost=_require(d, "raw_cost", f"dad {d.get('id')}"),
            scale_factor=d.get("scale_factor", 25.0),
            base_value=d.get("base_value"),
        )
        for d in doc.get("dads", [])
    )
    portfolios = tuple(
        Portfolio(
            id=_require(p, "id", "portfolio"),
            dad_ids=tuple(_require(p, "dad_ids", f"portfolio {p.get('id')}")),
            budget=_require(p, "budget", f"portfolio {p.get('id')}"),
        )
        for p in doc.get("portfolios", [])
    )
    lat = _require(doc, "lattice_defaults", "project")
    lattice_defaults = LatticeParams(
        v_s=_require(lat, "v_s", "lattice_defaults"),
        s0_dad=lat.get("s0_dad", 0.0),
        u=_require(lat, "u", "lattice_defaults"),
        d=_require(lat, "d", "lattice_defaults"),
        r=_require(lat, "r", "lattice_defaults"),
        horizons=_require(lat, "horizons", "lattice_defaults"),
        convention=lat.get("convention", "one-minus-r"),
        style=lat.get("style", "european"),
    )
    whatif_configs = tuple(
        WhatIfConfig(
            id=_require(w, "id", "whatif"),
            portfolio_id=_require(w, "portfolio_id", f"whatif {w.get('id')}"),
            lo=_require(w, "lo", f"whatif {w.get('id')}"),
            hi=_require(w, "hi", f"whatif {w.get('id')}"),
            step=_require(w, "step", f"whatif {w.get('id')}"),
        )
        for w in doc.get("whatif_configs", [])
    )
    rating_matrices = tuple(
        NamedRatingMatrix(
            id=_require(rm, "id", "rating_matrix"),
            matrix=RatingMatrix(ranks=tuple(tuple(row) for row in _require(rm, "ranks", f"rating_matrix {rm.get('id')}"))),
            items=tuple(rm.get("items", ())),
        )
        for rm in doc.get("rating_matrices", [])
    )

    project = Project(
        schema_version=version,
        name=doc.get("name", ""),
        weights=weights,
        scenarios=scenarios,
        strategies=strategies,
        dads=dads,
        portfolios=portfolios,
        lattice_defaults=lattice_defaults,
        whatif_configs=whatif_configs,
        rating_matrices=rating_matrices,
    )
    _check_integrity(project)
    return project


def _check_integrity(project: Project):
    qa_names = set(project.weights.names)
    strategy_ids = {s.id for s in project.strategies}
    dad_ids = {d.id for d in project.dads}
    portfolio_ids = {p.id for p in project.portfolios}

    for dup_kind, ids in (
        ("strategy", [s.id for s in project.strategies]),
        ("dad", [d.id for d in project.dads]),
        ("scenario", [s.id for s in project.scenarios]),
        ("portfolio", [p.id for p in project.portfolios if p.id is not None]),
    ):
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise IntegrityError(f"duplicate {dup_kind} ids: {dupes}")

    for scenario in project.scenarios:
        if scenario.qa_concern not in qa_names:
            raise IntegrityError(
                f"scenario {scenario.id}: qa_concern {scenario.qa_concern!r} "
                "does not reference an existing QA"
            )
        for dad_id in scenario.candidate_dads:
            if dad_id not in dad_ids:
                raise IntegrityError(
                    f"scenario {scenario.id}: unknown dad_id {dad_id!r}"
                )
    for dad in project.dads:
        if set(dad.contrib) != qa_names:
            missing = sorted(qa_names - set(dad.contrib))
            extra = sorted(set(dad.contrib) - qa_names)
            raise IntegrityError(
                f"dad {dad.id}: contrib keys must match the project QA set "
                f"(missing {missing}, extra {extra})"
            )
        for strategy_id in dad.strategies:
            if strategy_id not in strategy_ids:
                raise IntegrityError(f"dad {dad.id}: unknown strategy {strategy_id!r}")
    for portfolio in project.portfolios:
        for dad_id in portfolio.dad_ids:
            if dad_id not in dad_ids:
                raise IntegrityError(
                    f"portfolio {portfolio.id}: unknown dad_id {dad_id!r}"
                )
    for config in project.whatif_configs:
        if config.portfolio_id not in portfolio_ids:
            raise IntegrityError(
                f"whatif {config.id}: unknown portfolio_id {config.portfolio_id!r}"
            )


def project_to_doc(project: Project) -> dict:
    doc = {
        "schema_version": project.schema_version,
        "name": project.name,
        "weights": [
            {"qa_name": name, "score": score} for name, score in project.weights.entries
        ],
        "scenarios": [
            {
                "id": s.id,
                "description": s.description,
                "qa_concern": s.qa_concern,
                "response_measure": s.response_measure,
                "candidate_dads": list(s.candidate_dads),
            }
            for s in project.scenarios
        ],
        "strategies": [
            {"id": s.id, "name": s.name, "cost": s.cost} for s in project.strategies
        ],
        "dads": [
            {
                "id": d.id,
                "strategies": list(d.strategies),
                "contrib": d.contrib,
                "raw_cost": d.raw_cost,
                "scale_factor": d.scale_factor,
                "base_value": d.base_value,
            }
            for d in project.dads
        ],
        "portfolios": [
            {"id": p.id, "dad_ids": list(p.dad_ids), "budget": p.budget}
            for p in project.portfolios
        ],
        "lattice_defaults": {
            "v_s": project.lattice_defaults.v_s,
            "s0_dad": project.lattice_defaults.s0_dad,
            "u": project.lattice_defaults.u,
            "d": project.lattice_defaults.d,
            "r": project.lattice_defaults.r,
            "horizons": project.lattice_defaults.horizons,
            "convention": project.lattice_defaults.convention.value,
            "style": project.lattice_defaults.style.value,
        },
        "whatif_configs": [
            {"id": w.id, "portfolio_id": w.portfolio_id, "lo": w.lo, "hi": w.hi, "step": w.step}
            for w in project.whatif_configs
        ],
        "rating_matrices": [
            {
                "id": rm.id,
                "items": list(rm.items),
                "ranks": [list(row) for row in rm.matrix.ranks],
            }
            for rm in project.rating_matrices
        ],
    }
    return doc


def save_project(project: Project) -> bytes:
    """Canonical serialization: equal projects produce identical bytes."""
    doc = project_to_doc(project)
    text = json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)
    return (text + "\n").encode("utf-8")


def load_project_file(path: str | os.PathLike) -> Project:
    with open(path, "rb") as fh:
        return load_project(fh.read())


def save_project_file(project: Project, path: str | os.PathLike):
    """Atomic write: temp file in the target directory, then rename."""
    data = save_project(project)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


@dataclass(frozen=True)
class ImportedTable:
    kind: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    row_count: int
    column_count: int


def import_table(data: bytes | str, kind: str) -> ImportedTable:
    """Parse a CSV input of the given kind.

    contrib_matrix: header ``dad_id,<qa>...,cost``; one decision per row.
    ratings: header ``rater,<item>...``; one rater per row, cells are ranks.

    Numeric errors name the offending cell as (data-row, column), 1-based.
    """
    if kind not in ("contrib_matrix", "ratings"):
        raise ParseError(f"unknown table kind {kind!r}")
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    reader = csv.reader(io.StringIO(data))
    rows = [row for row in reader if row]
    if not rows:
        raise ParseError("empty CSV: missing header row")
    header = [cell.strip() for cell in rows[0]]

    if kind == "contrib_matrix":
        if len(header) < 3 or header[0] != "dad_id" or header[-1] != "cost":
            raise ParseError(
                "contrib_matrix header must be dad_id,<qa names>,cost; got "
                + ",".join(header)
            )
    else:
        if len(header) < 2 or header[0] != "rater":
            raise ParseError(
                "ratings header must be rater,<item names>; got " + ",".join(header)
            )

    parsed = []
    for row_idx, row in enumerate(rows[1:], start=1):
        if len(row) != len(header):
            raise ParseError(
                f"row {row_idx} has {len(row)} cells, expected {len(header)}"
            )
        values: list = [row[0].strip()]
        for col_idx, cell in enumerate(row[1:], start=2):
            try:
                values.append(float(cell))
            except ValueError:
                raise ParseError(
                    f"non-numeric cell {cell.strip()!r} at ({row_idx}, {col_idx})"
                ) from None
        parsed.append(tuple(values))

    return ImportedTable(
        kind=kind,
        columns=tuple(header),
        rows=tuple(parsed),
        row_count=len(parsed),
        column_count=len(header),
    )
