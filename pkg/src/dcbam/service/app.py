"""HTTP facade over the valuation engine.

Routes live under /v1/. Valuation responses are canonical JSON built by the
same report code the CLI uses, so the two frontends are byte-identical for
identical inputs. Compute responses echo the project revision in the
X-Revision header; project routes echo it in the body.
"""
from __future__ import annotations

import os

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.staticfiles import StaticFiles

from ..errors import (
    BudgetExceededError,
    DegenerateLatticeError,
    DomainError,
    IntegrityError,
    InvariantError,
    NoArbitrageError,
    ParseError,
    QaMismatchError,
    StaleRevisionError,
    VersionError,
)
from ..lattice import LatticeParams, grid_to_json_obj
from ..model import Portfolio, compute_scaled_benefit, rank_dads
from ..project import (
    Project,
    load_project,
    load_project_file,
    project_to_doc,
    save_project_file,
)
from ..report import canonical_json, valuation_report, whatif_report
from ..valuation import PortfolioValuationRequest, value_portfolio, whatif_sweep
from .schemas import (
    CreateProjectBody,
    LatticeOverrides,
    PortfolioSelector,
    SaveProjectBody,
    UpdateProjectBody,
    ValuationRequestBody,
    WhatIfRequestBody,
)
from .sessions import SessionStore

_STATUS_BY_ERROR = (
    (StaleRevisionError, 409),
    (IntegrityError, 404),
    (NoArbitrageError, 422),
    (DegenerateLatticeError, 422),
    (InvariantError, 400),
    (DomainError, 400),
    (ParseError, 400),
    (VersionError, 400),
    (BudgetExceededError, 400),
    (QaMismatchError, 400),
)


def _canonical_response(
    obj: dict | list, revision: int | None = None, status: int = 200
) -> Response:
    headers = {} if revision is None else {"X-Revision": str(revision)}
    return Response(
        content=canonical_json(obj),
        media_type="application/json",
        headers=headers,
        status_code=status,
    )


def _lattice_from(overrides: LatticeOverrides | None, project: Project) -> LatticeParams:
    defaults = project.lattice_defaults
    o = overrides or LatticeOverrides()
    return LatticeParams(
        v_s=o.v_s if o.v_s is not None else defaults.v_s,
        s0_dad=0.0,
        u=o.u if o.u is not None else defaults.u,
        d=o.d if o.d is not None else defaults.d,
        r=o.r if o.r is not None else defaults.r,
        horizons=o.horizons if o.horizons is not None else defaults.horizons,
        convention=o.convention or defaults.convention,
        style=o.style or defaults.style,
    )


def _resolve_selector(body: PortfolioSelector, project: Project):
    if (body.portfolio_id is None) == (body.dad_ids is None):
        raise DomainError("pass exactly one of portfolio_id or dad_ids")
    if body.portfolio_id is not None:
        portfolio = project.portfolio_map().get(body.portfolio_id)
        if portfolio is None:
            raise IntegrityError(f"unknown portfolio id {body.portfolio_id!r}")
    else:
        portfolio = Portfolio(dad_ids=tuple(body.dad_ids), budget=body.budget)

    defaults = project.base_values()
    base_map = {d: defaults[d] for d in portfolio.dad_ids if d in defaults}
    if body.per_dad_base_values:
        base_map.update(body.per_dad_base_values)
    request = PortfolioValuationRequest(
        portfolio=portfolio,
        per_dad_base_values=base_map,
        lattice=_lattice_from(body.lattice, project),
    )
    return request


def create_app() -> FastAPI:
    app = FastAPI(title="dcbam", version="1.0")
    store = SessionStore()

    def _make_handler(code: int):
        async def handler(request: Request, exc: Exception):
            return _canonical_response_error(exc, code)

        return handler

    for exc_type, status in _STATUS_BY_ERROR:
        app.add_exception_handler(exc_type, _make_handler(status))

    @app.exception_handler(RequestValidationError)
    async def bad_request_shape(request: Request, exc: RequestValidationError):
        return _canonical_response_error(exc, 400)

    @app.post("/v1/projects", status_code=201)
    def create_project(body: CreateProjectBody):
        if (body.project is None) == (body.path is None):
            raise DomainError("pass exactly one of project or path")
        if body.project is not None:
            project = load_project(canonical_json(body.project))
        else:
            project = load_project_file(body.path)
        session = store.create(project)
        return _canonical_response(
            {"session_id": session.session_id, "revision": session.revision},
            revision=session.revision,
            status=201,
        )

    @app.get("/v1/projects/{session_id}")
    def get_project(session_id: str):
        session = store.get(session_id)
        return _canonical_response(
            {
                "session_id": session.session_id,
                "revision": session.revision,
                "project": project_to_doc(session.project),
            },
            revision=session.revision,
        )

    @app.put("/v1/projects/{session_id}")
    def update_project(session_id: str, body: UpdateProjectBody):
        project = load_project(canonical_json(body.project))
        session = store.update(session_id, revision=body.revision, project=project)
        return _canonical_response(
            {"session_id": session.session_id, "revision": session.revision},
            revision=session.revision,
        )

    @app.post("/v1/projects/{session_id}/save")
    def save_project_route(session_id: str, body: SaveProjectBody):
        session = store.get(session_id)
        save_project_file(session.project, body.path)
        return _canonical_response(
            {"session_id": session.session_id, "revision": session.revision, "path": body.path},
            revision=session.revision,
        )

    @app.post("/v1/projects/{session_id}/valuation")
    def post_valuation(session_id: str, body: ValuationRequestBody):
        session = store.get(session_id)
        request = _resolve_selector(body, session.project)
        valuation = value_portfolio(
            request,
            session.project.dad_map(),
            dedup_shared_strategy_costs=body.dedup_shared_strategy_costs,
            strategy_costs=session.project.strategy_costs()
            if body.dedup_shared_strategy_costs
            else None,
        )
        return _canonical_response(valuation_report(valuation), revision=session.revision)

    @app.post("/v1/projects/{session_id}/whatif")
    def post_whatif(session_id: str, body: WhatIfRequestBody):
        session = store.get(session_id)
        request = _resolve_selector(body, session.project)
        table = whatif_sweep(
            request, session.project.dad_map(), lo=body.lo, hi=body.hi, step=body.step
        )
        return _canonical_response(whatif_report(table), revision=session.revision)

    @app.get("/v1/projects/{session_id}/rank")
    def get_rank(session_id: str, scenario: str | None = None):
        session = store.get(session_id)
        project = session.project
        dad_map = project.dad_map()
        if scenario is not None:
            selected = project.scenario_map().get(scenario)
            if selected is None:
                raise IntegrityError(f"unknown scenario id {scenario!r}")
            candidates = (
                [dad_map[d] for d in selected.candidate_dads]
                if selected.candidate_dads
                else list(project.dads)
            )
        else:
            candidates = list(project.dads)
        ranking = rank_dads(candidates, project.weights)
        payload = [
            {
                "dad_id": dad_id,
                "benefit": benefit,
                "scaled_benefit": compute_scaled_benefit(dad_map[dad_id], project.weights),
            }
            for dad_id, benefit in ranking
        ]
        return _canonical_response(payload, revision=session.revision)

    @app.get("/v1/projects/{session_id}/lattice")
    def get_lattice(
        session_id: str,
        portfolio_id: str | None = None,
        dad_ids: str | None = None,
        base: float | None = None,
        horizon: int | None = None,
        vs: float | None = None,
        u: float | None = None,
        d: float | None = None,
        r: float | None = None,
        convention: str | None = None,
        style: str | None = None,
    ):
        session = store.get(session_id)
        body = ValuationRequestBody(
            portfolio_id=portfolio_id,
            dad_ids=dad_ids.split(",") if dad_ids else None,
            lattice=LatticeOverrides(
                v_s=vs, u=u, d=d, r=r, convention=convention, style=style
            ),
        )
        request = _resolve_selector(body, session.project)
        if base is not None:
            # one combined seed override, spread onto the first member
            first = request.portfolio.dad_ids[0]
            bases = {dad_id: 0.0 for dad_id in request.portfolio.dad_ids}
            bases[first] = base
            request = PortfolioValuationRequest(
                portfolio=request.portfolio,
                per_dad_base_values=bases,
                lattice=request.lattice,
            )
        valuation = value_portfolio(request, session.project.dad_map())
        t = horizon if horizon is not None else valuation.horizons
        if not 1 <= t <= valuation.horizons:
            raise DomainError(f"horizon must lie in 1..{valuation.horizons}")
        grid = valuation.grids[t - 1]
        payload = grid_to_json_obj(grid)
        payload["horizon"] = grid.horizon
        payload["price"] = grid.price
        payload["exercise_cost"] = valuation.exercise_cost
        return _canonical_response(payload, revision=session.revision)

    @app.get("/v1/schema")
    def get_schema():
        return app.openapi()

    # serve the built what-if UI when present (local tool convenience)
    ui_dir = os.environ.get("DCBAM_UI_DIR", os.path.join(os.getcwd(), "frontend"))
    if os.path.isdir(ui_dir):
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _canonical_response_error(exc: Exception, status: int) -> Response:
    body = {"error": str(exc), "type": type(exc).__name__}
    return Response(
        content=canonical_json(body), media_type="application/json", status_code=status
    )


app = create_app()
