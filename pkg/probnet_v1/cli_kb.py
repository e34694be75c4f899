from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, NoReturn, Optional

from probnet_v1.core.compare import compare_network, render_compare_table
from probnet_v1.core.lp_oracle import EPS_MASS, check_consistency, exact_bounds
from probnet_v1.core.models import SaturationStatus
from probnet_v1.core.models.errors import InconsistentNetwork, InfeasibleKB, ProbnetError
from probnet_v1.core.network import EPS_Q, Network, parse_kb, serialize_kb
from probnet_v1.core.saturation import MAX_OUTER, parse_query, query, saturate
from probnet_v1.logging_config import get_logger
from probnet_v1.reports import (
    bound_records,
    compare_record,
    format_query_line,
    format_step,
    interval_record,
    json_line,
    query_record,
    saturation_record,
    step_record,
    verdict_record,
)

logger = get_logger(__name__)

COMMANDS = ("check", "saturate", "query", "exact", "compare")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONSISTENT = 2
EXIT_UNSOUND = 3


@dataclass
class CliConfig:
    command: str
    kb_path: Path
    query_string: Optional[str] = None
    tol: float = EPS_Q
    max_outer: int = MAX_OUTER
    output_path: Optional[Path] = None
    trace: bool = False
    force: bool = False
    json: bool = False
    strict: bool = False
    mass_floor: float = EPS_MASS
    solver: str = "simplex"
    workers: int = 1

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command '{self.command}'")
        if self.command in ("query", "exact") and not self.query_string:
            raise ValueError(f"'{self.command}' needs a query")
        if self.tol <= 0:
            raise ValueError("--tol must be positive")
        if self.max_outer < 1:
            raise ValueError("--max-outer must be at least 1")
        if self.mass_floor <= 0:
            raise ValueError("--mass-floor must be positive")
        if self.workers < 1:
            raise ValueError("--workers must be at least 1")


class _Finished(Exception):
    """A complete report whose exit code is not success."""

    def __init__(self, code: int, lines: List[str]) -> None:
        self.code = code
        self.lines = lines
        super().__init__(f"exit {code}")


def _load(config: CliConfig) -> Network:
    with open(config.kb_path, encoding="utf-8") as handle:
        return parse_kb(handle, strict=config.strict)


def _saturated(net: Network, config: CliConfig):
    report = saturate(net, tol=config.tol, max_outer=config.max_outer)
    if report.status is SaturationStatus.INCONSISTENT:
        if config.json:
            raise _Finished(EXIT_INCONSISTENT, [json_line(saturation_record(report))])
        raise _Finished(EXIT_INCONSISTENT, [f"Inconsistent: {report.witness}"])
    return report


def _run_check(net: Network, config: CliConfig) -> List[str]:
    verdict = check_consistency(net, config.mass_floor, config.force, config.solver)
    if config.json:
        lines = [json_line(verdict_record(verdict))]
    else:
        lines = [f"{verdict.status.value} (mass floor {config.mass_floor:g}, {verdict.details['worlds']} worlds)"]
        lines += [f"  {cid}" for cid in verdict.certificate]
    if not verdict.consistent:
        raise _Finished(EXIT_INCONSISTENT, lines)
    return lines


def _run_saturate(net: Network, config: CliConfig) -> List[str]:
    report = _saturated(net, config)
    steps = report.trace.steps if config.trace else []
    if config.json:
        lines = [json_line(saturation_record(report))]
        lines += [json_line(step_record(net, step)) for step in steps]
        lines += [json_line(record) for record in bound_records(net)]
        return lines
    # trace lines are comments so the dump still parses as a KB
    lines = [f"# {format_step(net, step)}" for step in steps]
    lines.append(serialize_kb(net).rstrip("\n"))
    return lines


def _run_query(net: Network, config: CliConfig) -> List[str]:
    q = parse_query(config.query_string)
    _saturated(net, config)
    result = query(net, q, tol=config.tol, max_outer=config.max_outer)
    steps = result.trace if config.trace else []
    if config.json:
        return [json_line(query_record(result))] + [json_line(step_record(net, s)) for s in steps]
    lines = [f"# {format_step(net, step)}" for step in steps]
    lines.append(format_query_line(str(result.query), result.interval))
    return lines


def _run_exact(net: Network, config: CliConfig) -> List[str]:
    q = parse_query(config.query_string)
    interval = exact_bounds(net, q, config.mass_floor, config.force, config.solver)
    if config.json:
        record = {"record": "query", "method": "exact", "query": str(q), "interval": interval_record(interval)}
        return [json_line(record)]
    return [format_query_line(str(q), interval)]


def _run_compare(net: Network, config: CliConfig) -> List[str]:
    rows = compare_network(
        net,
        tol=config.tol,
        max_outer=config.max_outer,
        mass_floor=config.mass_floor,
        force=config.force,
        solver=config.solver,
        workers=config.workers,
        progress=not config.json,
    )
    if config.json:
        lines = [json_line(compare_record(row)) for row in rows]
    else:
        lines = [render_compare_table(rows)]
    if any(row.failure for row in rows):
        raise _Finished(EXIT_UNSOUND, lines)
    return lines


HANDLERS = {
    "check": _run_check,
    "saturate": _run_saturate,
    "query": _run_query,
    "exact": _run_exact,
    "compare": _run_compare,
}


def _emit(lines: List[str], config: CliConfig) -> None:
    text = "\n".join(lines) + "\n"
    if config.output_path is not None:
        Path(config.output_path).write_text(text, encoding="utf-8")
        logger.info("Report written to %s", config.output_path)
    else:
        sys.stdout.write(text)


def run(config: CliConfig) -> int:
    """Execute one command and return its exit code."""
    logger.info("probnet %s %s", config.command, config.kb_path)
    try:
        net = _load(config)
        lines = HANDLERS[config.command](net, config)
    except _Finished as exc:
        _emit(exc.lines, config)
        return exc.code
    except InfeasibleKB as exc:
        if config.json:
            lines = [json_line(verdict_record(exc.verdict))]
        else:
            lines = ["Infeasible"] + [f"  {cid}" for cid in exc.verdict.certificate]
        _emit(lines, config)
        return EXIT_INCONSISTENT
    except InconsistentNetwork as exc:
        if config.json:
            record = {"record": "verdict", "status": "Inconsistent", "reason": exc.reason, "witness": exc.witness}
            lines = [json_line(record)]
        else:
            witness = f" {exc.witness}" if exc.witness is not None else ""
            lines = [f"Inconsistent: {exc.reason}{witness}"]
        _emit(lines, config)
        return EXIT_INCONSISTENT
    except (ProbnetError, OSError, UnicodeDecodeError) as exc:
        logger.error("%s failed: %s", config.command, exc)
        print(f"probnet: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception:
        logger.exception("probnet %s crashed", config.command)
        raise
    _emit(lines, config)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with EXIT_ERROR; 2 means an inconsistent KB."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="probnet",
        description="Bound conditional probabilities in a knowledge base of interval statements.",
    )
    parser.add_argument("command", choices=COMMANDS, help="What to do with the knowledge base")
    parser.add_argument("kb_path", type=Path, help="Knowledge base file")
    parser.add_argument("query", nargs="?", help="Query such as 'young | student' (query, exact)")
    parser.add_argument("--tol", type=float, default=EPS_Q, help="Smallest change that counts (default: 1e-9)")
    parser.add_argument("--max-outer", type=int, default=MAX_OUTER, help="Outer saturation rounds")
    parser.add_argument("-o", "--output", type=Path, help="Write the report here instead of stdout")
    parser.add_argument("--trace", action="store_true", help="List every tightening step")
    parser.add_argument("--force", action="store_true", help="Run the exact oracle past 12 base atoms")
    parser.add_argument("--json", action="store_true", help="Line-delimited JSON reports")
    parser.add_argument("--strict", action="store_true", help="Reject indep lines naming undeclared atoms")
    parser.add_argument("--mass-floor", type=float, default=EPS_MASS, help="Minimum probability of each atom")
    parser.add_argument("--solver", choices=("simplex", "highs"), default="simplex", help="Oracle LP solver")
    parser.add_argument("--workers", type=int, default=1, help="Concurrent oracle queries in compare")
    return parser


def main(argv: Optional[List[str]] = None) -> None:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = CliConfig(
            command=args.command,
            kb_path=args.kb_path,
            query_string=args.query,
            tol=args.tol,
            max_outer=args.max_outer,
            output_path=args.output,
            trace=args.trace,
            force=args.force,
            json=args.json,
            strict=args.strict,
            mass_floor=args.mass_floor,
            solver=args.solver,
            workers=args.workers,
        )
    except ValueError as exc:
        parser.error(str(exc))
    sys.exit(run(config))


if __name__ == "__main__":
    main()
