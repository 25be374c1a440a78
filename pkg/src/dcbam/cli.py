"""Batch command-line interface.

Sub-commands
------------
  validate     Check a project document against every data constraint.
  rank         Rank decisions by weighted benefit, optionally per scenario.
  value        Price a decision portfolio as a portfolio of call options.
  compare      Classify a stored portfolio against candidates (switch/wait/abandon).
  whatif       Revalue across a grid of base system values.
  kendall      Rater-consistency check (Kendall's W) on a rating matrix.
  export-tree  Write a valuation lattice as DOT or JSON.

Exit codes: 0 success, 1 validation/data failure, 2 usage error. Machine
output goes to stdout (canonical JSON under --json); diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import sys

from .concordance import RatingMatrix, consistency_report, kendalls_w
from .errors import DcbamError, IntegrityError
from .lattice import LatticeParams, grid_to_dot, grid_to_json_obj
from .model import Portfolio, check_budget, compute_scaled_benefit, rank_dads, validate_qa_scores
from .project import Project, import_table, load_project_file
from .report import canonical_json, valuation_report, whatif_report
from .valuation import (
    PortfolioValuationRequest,
    compare_portfolios,
    value_portfolio,
    whatif_sweep,
)

DEFAULT_WHATIF_LO = 300.0
DEFAULT_WHATIF_HI = 2200.0
DEFAULT_WHATIF_STEP = 100.0


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dcbam",
        description="Diversified cost-benefit analysis with real-options valuation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("project", help="path to a .dcbam.json project document")
        p.add_argument("--json", action="store_true", help="canonical JSON on stdout")

    def add_lattice_flags(p):
        p.add_argument("--vs", type=float, help="base system value (default: project)")
        p.add_argument("--u", type=float, help="up factor")
        p.add_argument("--d", type=float, help="down factor")
        p.add_argument("--r", type=float, help="risk-free rate per step")
        p.add_argument("--horizons", type=int, help="number of time steps")
        p.add_argument("--convention", choices=["one-minus-r", "one-plus-r"])
        p.add_argument("--style", choices=["european", "american"])

    def add_portfolio_flags(p):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--portfolio", help="comma-separated dad ids (ad-hoc portfolio)")
        group.add_argument("--portfolio-id", help="id of a portfolio stored in the project")
        p.add_argument("--base", help="comma-separated base values matching --portfolio order")
        p.add_argument("--budget", type=float, help="budget for an ad-hoc portfolio")

    p_validate = sub.add_parser("validate", help="validate a project document")
    add_common(p_validate)

    p_rank = sub.add_parser("rank", help="rank decisions by benefit")
    add_common(p_rank)
    p_rank.add_argument("--scenario", help="restrict to a scenario's candidate decisions")

    p_value = sub.add_parser("value", help="price a portfolio")
    add_common(p_value)
    add_portfolio_flags(p_value)
    add_lattice_flags(p_value)
    p_value.add_argument(
        "--dedup-shared-strategy-costs",
        action="store_true",
        help="count each shared strategy's cost once (needs strategy costs)",
    )

    p_compare = sub.add_parser("compare", help="compare stored portfolios")
    add_common(p_compare)
    p_compare.add_argument("--current", required=True, help="stored portfolio id to classify")
    p_compare.add_argument(
        "--candidates", required=True, help="comma-separated stored portfolio ids"
    )
    p_compare.add_argument("--switch-margin", type=float, default=0.05)
    p_compare.add_argument("--abandon-epsilon", type=float, default=1.0)
    add_lattice_flags(p_compare)

    p_whatif = sub.add_parser("whatif", help="sweep the base value")
    add_common(p_whatif)
    add_portfolio_flags(p_whatif)
    add_lattice_flags(p_whatif)
    p_whatif.add_argument("--lo", type=float, default=DEFAULT_WHATIF_LO)
    p_whatif.add_argument("--hi", type=float, default=DEFAULT_WHATIF_HI)
    p_whatif.add_argument("--step", type=float, default=DEFAULT_WHATIF_STEP)

    p_kendall = sub.add_parser("kendall", help="rater consistency (Kendall's W)")
    add_common(p_kendall)
    group = p_kendall.add_mutually_exclusive_group()
    group.add_argument("--matrix", help="id of a rating matrix stored in the project")
    group.add_argument("--csv", help="ratings CSV (header: rater,<item>...)")
    p_kendall.add_argument("--threshold", type=float, default=0.7)

    p_export = sub.add_parser("export-tree", help="export a valuation lattice")
    add_common(p_export)
    add_portfolio_flags(p_export)
    add_lattice_flags(p_export)
    p_export.add_argument("--horizon", type=int, help="expiry step (default: last horizon)")
    p_export.add_argument("--out", required=True, help="output path")
    p_export.add_argument("--format", choices=["dot", "json"], default="dot")

    return parser


def _lattice_template(args, project: Project) -> LatticeParams:
    defaults = project.lattice_defaults
    return LatticeParams(
        v_s=args.vs if args.vs is not None else defaults.v_s,
        s0_dad=0.0,
        u=args.u if args.u is not None else defaults.u,
        d=args.d if args.d is not None else defaults.d,
        r=args.r if args.r is not None else defaults.r,
        horizons=args.horizons if args.horizons is not None else defaults.horizons,
        convention=args.convention or defaults.convention,
        style=args.style or defaults.style,
    )


def _resolve_portfolio(args, project: Project) -> tuple[Portfolio, dict[str, float]]:
    """Ad-hoc (--portfolio) or stored (--portfolio-id) portfolio plus the
    per-decision base values to price it with."""
    defaults = project.base_values()
    if args.portfolio_id is not None:
        stored = project.portfolio_map().get(args.portfolio_id)
        if stored is None:
            raise IntegrityError(f"unknown portfolio id {args.portfolio_id!r}")
        portfolio = stored
        dad_ids = stored.dad_ids
    else:
        dad_ids = tuple(s.strip() for s in args.portfolio.split(",") if s.strip())
        portfolio = Portfolio(dad_ids=dad_ids, budget=args.budget)

    if args.base is not None:
        bases = [float(s) for s in args.base.split(",")]
        if len(bases) != len(dad_ids):
            raise UsageError(
                f"--base has {len(bases)} values for {len(dad_ids)} decisions"
            )
        base_map = dict(zip(dad_ids, bases))
    else:
        base_map = {d: defaults[d] for d in dad_ids if d in defaults}
    return portfolio, base_map


def cmd_validate(args) -> int:
    project = load_project_file(args.project)
    weight_check = validate_qa_scores(project.weights)
    dad_map = project.dad_map()
    budget_issues = []
    for portfolio in project.portfolios:
        result = check_budget(portfolio, dad_map)
        if not result.ok:
            budget_issues.extend(f"portfolio {portfolio.id}: {v}" for v in result.violations)
    ok = weight_check.ok and not budget_issues
    if args.json:
        print(
            canonical_json(
                {
                    "ok": ok,
                    "weights_ok": weight_check.ok,
                    "dads": len(project.dads),
                    "portfolios": len(project.portfolios),
                    "violations": list(weight_check.violations) + budget_issues,
                }
            )
        )
    else:
        if ok:
            print(f"weights ok, {len(project.dads)} DADs ok, {len(project.portfolios)} portfolios ok")
        else:
            for violation in list(weight_check.violations) + budget_issues:
                print(violation)
    return 0 if ok else 1


def cmd_rank(args) -> int:
    project = load_project_file(args.project)
    dad_map = project.dad_map()
    if args.scenario is not None:
        scenario = project.scenario_map().get(args.scenario)
        if scenario is None:
            raise IntegrityError(f"unknown scenario id {args.scenario!r}")
        if scenario.candidate_dads:
            candidates = [dad_map[d] for d in scenario.candidate_dads]
        else:
            candidates = list(project.dads)
    else:
        candidates = list(project.dads)
    ranking = rank_dads(candidates, project.weights)
    if args.json:
        print(
            canonical_json(
                [
                    {
                        "dad_id": dad_id,
                        "benefit": benefit,
                        "scaled_benefit": compute_scaled_benefit(dad_map[dad_id], project.weights),
                    }
                    for dad_id, benefit in ranking
                ]
            )
        )
    else:
        for dad_id, benefit in ranking:
            print(f"{dad_id}\t{benefit}")
    return 0


def _run_valuation(args, project: Project):
    portfolio, base_map = _resolve_portfolio(args, project)
    template = _lattice_template(args, project)
    request = PortfolioValuationRequest(
        portfolio=portfolio, per_dad_base_values=base_map, lattice=template
    )
    dedup = getattr(args, "dedup_shared_strategy_costs", False)
    return value_portfolio(
        request,
        project.dad_map(),
        dedup_shared_strategy_costs=dedup,
        strategy_costs=project.strategy_costs() if dedup else None,
    )


def cmd_value(args) -> int:
    project = load_project_file(args.project)
    valuation = _run_valuation(args, project)
    if args.json:
        print(canonical_json(valuation_report(valuation)))
    else:
        print(f"portfolio: {', '.join(valuation.dad_ids)}")
        print(f"exercise cost: {valuation.exercise_cost}")
        for t, price in enumerate(valuation.per_horizon_prices, start=1):
            print(f"horizon {t}: {price:.6f}")
        print(f"total: {valuation.total_price:.6f}")
        print(f"recommendation: {valuation.recommendation.value}")
    return 0


def cmd_compare(args) -> int:
    project = load_project_file(args.project)
    portfolio_map = project.portfolio_map()
    base_values = project.base_values()
    template = _lattice_template(args, project)
    dad_map = project.dad_map()

    def value_stored(pid: str):
        stored = portfolio_map.get(pid)
        if stored is None:
            raise IntegrityError(f"unknown portfolio id {pid!r}")
        request = PortfolioValuationRequest(
            portfolio=stored,
            per_dad_base_values={d: base_values[d] for d in stored.dad_ids},
            lattice=template,
        )
        return value_portfolio(request, dad_map)

    current = value_stored(args.current)
    candidate_ids = [s.strip() for s in args.candidates.split(",") if s.strip()]
    candidates = [value_stored(pid) for pid in candidate_ids]
    result = compare_portfolios(
        current,
        candidates,
        switch_margin=args.switch_margin,
        abandon_epsilon=args.abandon_epsilon,
    )
    if args.json:
        print(
            canonical_json(
                {
                    "current": valuation_report(result),
                    "candidates": [
                        {"portfolio_id": c.portfolio_id, "total_price": c.total_price}
                        for c in candidates
                    ],
                    "recommendation": result.recommendation.value,
                    "compared_against": result.compared_against,
                }
            )
        )
    else:
        print(f"current {args.current}: total {result.total_price:.6f}")
        for c in candidates:
            print(f"candidate {c.portfolio_id}: total {c.total_price:.6f}")
        suffix = f" (to {result.compared_against})" if result.compared_against else ""
        print(f"recommendation: {result.recommendation.value}{suffix}")
    return 0


def cmd_whatif(args) -> int:
    project = load_project_file(args.project)
    portfolio, base_map = _resolve_portfolio(args, project)
    template = _lattice_template(args, project)
    request = PortfolioValuationRequest(
        portfolio=portfolio, per_dad_base_values=base_map, lattice=template
    )
    table = whatif_sweep(request, project.dad_map(), lo=args.lo, hi=args.hi, step=args.step)
    if args.json:
        print(canonical_json(whatif_report(table)))
    else:
        for row in table.rows:
            print(f"{row.base_value}\t{row.total_price:.6f}\t{row.recommendation.value}")
    return 0


def cmd_kendall(args) -> int:
    project = load_project_file(args.project)
    if args.csv:
        with open(args.csv, "rb") as fh:
            table = import_table(fh.read(), kind="ratings")
        matrix = RatingMatrix(ranks=tuple(row[1:] for row in table.rows))
    else:
        matrices = {rm.id: rm for rm in project.rating_matrices}
        if args.matrix is not None:
            if args.matrix not in matrices:
                raise IntegrityError(f"unknown rating matrix id {args.matrix!r}")
            matrix = matrices[args.matrix].matrix
        elif len(matrices) == 1:
            matrix = next(iter(matrices.values())).matrix
        else:
            raise UsageError("project has multiple rating matrices; pass --matrix or --csv")
    w = kendalls_w(matrix)
    rep = consistency_report(w, threshold=args.threshold)
    if args.json:
        print(canonical_json({"w": rep.w, "threshold": rep.threshold, "verdict": rep.verdict}))
    else:
        print(f"W = {rep.w}")
        print(f"verdict: {rep.verdict} (threshold {rep.threshold})")
    return 0


def cmd_export_tree(args) -> int:
    project = load_project_file(args.project)
    valuation = _run_valuation(args, project)
    horizon = args.horizon if args.horizon is not None else valuation.horizons
    if not 1 <= horizon <= valuation.horizons:
        raise UsageError(f"--horizon must lie in 1..{valuation.horizons}")
    grid = valuation.grids[horizon - 1]
    if args.format == "dot":
        content = grid_to_dot(grid)
    else:
        content = canonical_json(grid_to_json_obj(grid)) + "\n"
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(content)
    print(f"wrote {args.out}", file=sys.stderr)
    return 0


_COMMANDS = {
    "validate": cmd_validate,
    "rank": cmd_rank,
    "value": cmd_value,
    "compare": cmd_compare,
    "whatif": cmd_whatif,
    "kendall": cmd_kendall,
    "export-tree": cmd_export_tree,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DcbamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
