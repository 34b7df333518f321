"""Command-line front end.

Commands::

    solve-single  --scenario F [--c-max X] [--step S]
    solve-duopoly --scenario F --grid lo:hi:step [--no-optout] [--out F.csv]
                  [--dynamics --start i,j --max-iter N]
    sweep         --scenario F --param gamma|benefit|rate --values lo:hi:step
                  [--grid lo:hi:step] [--out F.csv]
    simulate      --scenario F --n N --seed S [--cost C] [--cost2 C] [--out F.csv]

Every command accepts ``--dump-scenario``, which prints the validated
scenario as canonical JSON and exits.

Exit status is 0 on success, 1 for invalid flags or scenarios, 2 for
numeric failures such as an empty grid.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from . import population
from .decision import Offer, shares_exact, shares_monte_carlo
from .duopoly import (
    CostGrid,
    Converged,
    Cycle,
    DuopolyParams,
    ProviderParams,
    best_response_dynamics,
    payoff_matrix,
    pure_nash,
)
from .population import ValuationDistribution
from .ranges import parse_range
from .single_provider import MarketParams, optimal_cost
from .sweep import SweepSpec, duopoly_sweep, single_sweep

SINGLE_SWEEP_COLUMNS = ("c_star", "revenue_star", "revenue_no_optout", "optout_share")
DUOPOLY_COLUMNS = ("c1", "c2", "u1", "u2", "is_nash")


class ScenarioError(ValueError):
    pass


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class DuopolyBlock:
    benefit2: float
    revenue_rate2: float
    gamma2: float


@dataclass(frozen=True)
class Scenario:
    distribution: ValuationDistribution
    benefit: float
    revenue_rate: float
    gamma: float
    duopoly: Optional[DuopolyBlock] = None

    def market_params(self) -> MarketParams:
        return MarketParams(self.revenue_rate, self.gamma, self.distribution, self.benefit)

    def duopoly_params(self) -> DuopolyParams:
        """Provider 2 mirrors provider 1 when the scenario has no duopoly block."""
        p1 = ProviderParams(self.revenue_rate, self.gamma, self.benefit)
        if self.duopoly is None:
            return DuopolyParams(p1, p1, self.distribution)
        d = self.duopoly
        return DuopolyParams(p1, ProviderParams(d.revenue_rate2, d.gamma2, d.benefit2), self.distribution)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "distribution": self.distribution.to_dict(),
            "benefit": self.benefit,
            "revenue_rate": self.revenue_rate,
            "gamma": self.gamma,
        }
        if self.duopoly is not None:
            out["duopoly"] = {
                "benefit2": self.duopoly.benefit2,
                "revenue_rate2": self.duopoly.revenue_rate2,
                "gamma2": self.duopoly.gamma2,
            }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _no_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise ScenarioError(f"{key}: duplicated field")
        out[key] = value
    return out


def _number(obj: dict, name: str, prefix: str = "") -> float:
    if name not in obj:
        raise ScenarioError(f"{prefix}{name}: missing required field")
    x = obj[name]
    if not isinstance(x, (int, float)) or isinstance(x, bool) or not math.isfinite(x):
        raise ScenarioError(f"{prefix}{name}: must be a finite number, got {x!r}")
    return float(x)


def _check_fields(obj: dict, allowed: Sequence[str], prefix: str = "") -> None:
    for key in obj:
        if key not in allowed:
            raise ScenarioError(f"{prefix}{key}: unknown field")


def _in_range(value: float, name: str, lo: float, hi: float = math.inf, lo_open: bool = False) -> float:
    ok = (value > lo if lo_open else value >= lo) and value <= hi
    if not ok:
        left = "(" if lo_open else "["
        right = "]" if math.isfinite(hi) else ")"
        raise ScenarioError(f"{name}: must lie in {left}{lo:g}, {hi:g}{right}, got {value:g}")
    return value


def parse_scenario(text: str) -> Scenario:
    """Validate scenario JSON; the error message starts with the offending field."""
    try:
        data = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"malformed scenario JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    _check_fields(data, ("distribution", "benefit", "revenue_rate", "gamma", "duopoly"))
    if "distribution" not in data:
        raise ScenarioError("distribution: missing required field")
    try:
        dist = population.from_dict(data["distribution"])
    except ValueError as exc:
        msg = str(exc)
        raise ScenarioError(msg if msg.startswith("distribution") else f"distribution: {msg}") from None
    benefit = _in_range(_number(data, "benefit"), "benefit", 0.0)
    rate = _in_range(_number(data, "revenue_rate"), "revenue_rate", 0.0, lo_open=True)
    gamma = _in_range(_number(data, "gamma"), "gamma", 0.0, 1.0)
    block = None
    if "duopoly" in data:
        d = data["duopoly"]
        if not isinstance(d, dict):
            raise ScenarioError("duopoly: must be a JSON object")
        _check_fields(d, ("benefit2", "revenue_rate2", "gamma2"), "duopoly.")
        block = DuopolyBlock(
            benefit2=_in_range(_number(d, "benefit2", "duopoly."), "duopoly.benefit2", 0.0),
            revenue_rate2=_in_range(
                _number(d, "revenue_rate2", "duopoly."), "duopoly.revenue_rate2", 0.0, lo_open=True
            ),
            gamma2=_in_range(_number(d, "gamma2", "duopoly."), "duopoly.gamma2", 0.0, 1.0),
        )
    return Scenario(dist, benefit, rate, gamma, block)


def fmt(x: Optional[float]) -> str:
    """9 significant digits, locale-free; ``None`` (no opt-out) becomes ``none``."""
    if x is None:
        return "none"
    s = format(float(x), ".9g")
    return "0" if s == "-0" else s


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _parse_cost(text: str) -> Optional[float]:
    if text == "none":
        return None
    try:
        value = float(text)
    except ValueError:
        raise UsageError(f"cost must be a number or 'none', got {text!r}") from None
    if not (value >= 0 and math.isfinite(value)):
        raise UsageError(f"cost must be >= 0, got {text!r}")
    return value


def _parse_range_flag(text: str, flag: str) -> list[float]:
    try:
        return parse_range(text)
    except ValueError as exc:
        if type(exc) is ValueError:
            raise UsageError(f"{flag}: {exc}") from None
        raise


def _cmd_solve_single(args, scenario: Scenario) -> None:
    sol = optimal_cost(scenario.market_params(), args.c_max, args.step)
    print(
        f"c_star={fmt(sol.c_star)} revenue_star={fmt(sol.revenue_star)} "
        f"revenue_no_optout={fmt(sol.baseline_no_optout)} "
        f"optout_share={fmt(sol.shares_at_opt.optout[0])}"
    )


def _cmd_solve_duopoly(args, scenario: Scenario) -> None:
    grid = CostGrid(tuple(_parse_range_flag(args.grid, "--grid")), args.no_optout)
    matrix = payoff_matrix(scenario.duopoly_params(), grid)
    nash = set(pure_nash(matrix).pure_cells)
    entries = grid.entries
    rows = [
        (fmt(c1), fmt(c2), fmt(matrix.u1[i, j]), fmt(matrix.u2[i, j]), "1" if (i, j) in nash else "0")
        for i, c1 in enumerate(entries)
        for j, c2 in enumerate(entries)
    ]
    table = _csv_text(DUOPOLY_COLUMNS, rows)
    lines = [f"nash_cells={len(nash)}"]
    for i, j in sorted(nash):
        lines.append(
            f"nash c1={fmt(entries[i])} c2={fmt(entries[j])} "
            f"u1={fmt(matrix.u1[i, j])} u2={fmt(matrix.u2[i, j])}"
        )
    if args.dynamics:
        start = _parse_start(args.start, len(grid))
        res = best_response_dynamics(matrix, start, args.max_iter)
        if isinstance(res.outcome, Converged):
            i, j = res.outcome.cell
            lines.append(f"dynamics converged c1={fmt(entries[i])} c2={fmt(entries[j])} rounds={len(res.path)}")
        elif isinstance(res.outcome, Cycle):
            cyc = " ".join(f"({fmt(entries[i])},{fmt(entries[j])})" for i, j in res.outcome.cells)
            lines.append(f"dynamics cycle {cyc}")
        else:
            lines.append(f"dynamics max-iter rounds={len(res.path)}")
    summary = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(table)
        sys.stderr.write(summary)
    else:
        _emit(table, args.out)
        sys.stdout.write(summary)


def _parse_start(text: str, n: int) -> tuple[int, int]:
    try:
        i, j = (int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"--start must be 'i,j', got {text!r}") from None
    if not (0 <= i < n and 0 <= j < n):
        raise UsageError(f"--start {text} outside the {n}x{n} grid")
    return i, j


def _sweep_spec(*args, **kwargs) -> SweepSpec:
    try:
        return SweepSpec(*args, **kwargs)
    except ValueError as exc:
        raise UsageError(f"--values: {exc}") from None


def _cmd_sweep(args, scenario: Scenario) -> None:
    values = _parse_range_flag(args.values, "--values")
    if args.grid is None:
        spec = _sweep_spec(args.param, tuple(values), scenario.market_params(), c_max=args.c_max, step=args.step)
        rows = [
            (fmt(r.axis_value), fmt(r.c_star), fmt(r.revenue_star), fmt(r.revenue_no_optout), fmt(r.optout_share))
            for r in single_sweep(spec)
        ]
        _emit(_csv_text((args.param, *SINGLE_SWEEP_COLUMNS), rows), args.out)
        return
    grid = CostGrid(tuple(_parse_range_flag(args.grid, "--grid")), args.no_optout)
    spec = _sweep_spec(args.param, tuple(values), scenario.duopoly_params(), grid=grid)
    rows = []
    for r in duopoly_sweep(spec):
        for (c1, c2), (u1, u2) in zip(r.nash_costs, r.payoffs):
            rows.append((fmt(r.axis_value), fmt(c1), fmt(c2), fmt(u1), fmt(u2)))
    _emit(_csv_text((args.param, "c1", "c2", "u1", "u2"), rows), args.out)


def _cmd_simulate(args, scenario: Scenario) -> None:
    if args.n < 1:
        raise UsageError(f"--n must be >= 1, got {args.n}")
    if args.cost is None:
        cost = optimal_cost(scenario.market_params()).c_star
    else:
        cost = _parse_cost(args.cost)
    offers = [Offer(scenario.benefit, cost)]
    if scenario.duopoly is not None:
        cost2 = cost if args.cost2 is None else _parse_cost(args.cost2)
        offers.append(Offer(scenario.duopoly.benefit2, cost2))
    analytic = shares_exact(scenario.distribution, offers).as_dict()
    mc = shares_monte_carlo(scenario.distribution, offers, args.n, args.seed).as_dict()
    rows = [(k, fmt(analytic[k]), fmt(mc[k]), fmt(abs(analytic[k] - mc[k]))) for k in analytic]
    _emit(_csv_text(("component", "analytic", "monte_carlo", "abs_diff"), rows), args.out)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="optout-pricing", description="Revenue-optimal pricing of privacy opt-outs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument("--dump-scenario", action="store_true", help="print the parsed scenario and exit")
        return p

    p = command("solve-single", "revenue-maximizing opt-out cost for one provider")
    p.add_argument("--c-max", type=float, default=None)
    p.add_argument("--step", type=float, default=0.01)

    p = command("solve-duopoly", "payoff matrix and pure equilibria of the cost game")
    p.add_argument("--grid", required=True, help="cost grid lo:hi:step")
    p.add_argument("--no-optout", action="store_true", help="add 'no opt-out' as a strategy")
    p.add_argument("--dynamics", action="store_true", help="also run best-response dynamics")
    p.add_argument("--start", default="0,0", help="dynamics start cell i,j")
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--out", default=None, help="CSV output file (default: stdout)")

    p = command("sweep", "comparative statics over one parameter")
    p.add_argument("--param", required=True, choices=("gamma", "benefit", "rate"))
    p.add_argument("--values", required=True, help="lo:hi:step")
    p.add_argument("--c-max", type=float, default=None)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--grid", default=None, help="duopoly cost grid; switches to the duopoly sweep")
    p.add_argument("--no-optout", action="store_true")
    p.add_argument("--out", default=None)

    p = command("simulate", "Monte Carlo shares next to the exact ones")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--cost", default=None, help="provider 1 opt-out cost or 'none' (default: optimal)")
    p.add_argument("--cost2", default=None, help="provider 2 opt-out cost (default: same as --cost)")
    p.add_argument("--out", default=None)
    return parser


_COMMANDS = {
    "solve-single": _cmd_solve_single,
    "solve-duopoly": _cmd_solve_duopoly,
    "sweep": _cmd_sweep,
    "simulate": _cmd_simulate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with open(args.scenario, encoding="utf-8") as fh:
            scenario = parse_scenario(fh.read())
    except OSError as exc:
        print(f"error: cannot read scenario: {exc}", file=sys.stderr)
        return 1
    except ScenarioError as exc:
        print(f"error: invalid scenario: {exc}", file=sys.stderr)
        return 1
    if args.dump_scenario:
        sys.stdout.write(scenario.to_json())
        return 0
    try:
        _COMMANDS[args.command](args, scenario)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
