from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Tuple

from probnet_v1.core.lp_oracle import check_consistency
from probnet_v1.core.models import QueryResult, SaturationStatus
from probnet_v1.core.network import Network, parse_kb
from probnet_v1.core.saturation import query, saturate
from probnet_v1.reports import (
    format_query_line,
    query_record,
    saturation_record,
    verdict_record,
)

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "fixtures"


def load_fixture(name: str) -> Network:
    path = FIXTURE_DIR / name
    with open(path, encoding="utf-8") as handle:
        return parse_kb(handle)


def run_pipeline(net: Network, queries: Tuple[str, ...] = ()) -> Dict[str, object]:
    """check -> saturate -> queries; an inconsistent KB stops after the check."""
    verdict = check_consistency(net)
    outputs: Dict[str, object] = {"network": net, "verdict": verdict, "report": None, "answers": []}
    if not verdict.consistent:
        return outputs
    report = saturate(net)
    outputs["report"] = report
    if report.status is SaturationStatus.INCONSISTENT:
        return outputs
    outputs["answers"] = [query(net, text) for text in queries]
    return outputs


def summarize_outputs(label: str, outputs: Dict[str, object]) -> None:
    verdict = outputs["verdict"]
    report = outputs.get("report")
    answers: List[QueryResult] = outputs.get("answers") or []

    print(f"=== probnet reference pipeline: {label} ===")
    print("-- Consistency --")
    print(f"status={verdict.status.value} worlds={verdict.details.get('worlds')}")
    for cid in verdict.certificate:
        print(f"  {cid}")
    if report is not None:
        print("-- Saturation --")
        print(
            f"status={report.status.value} iterations={report.iterations} "
            f"changed_arcs={report.changed_arcs} wall_time={report.wall_time:.3f}s"
        )
        if report.witness:
            print(f"witness={report.witness}")
    if answers:
        print("-- Queries --")
        for result in answers:
            print(format_query_line(str(result.query), result.interval))


def output_records(outputs: Dict[str, object]) -> List[Dict[str, object]]:
    records = [verdict_record(outputs["verdict"])]
    if outputs.get("report") is not None:
        records.append(saturation_record(outputs["report"]))
    records += [query_record(result) for result in outputs.get("answers") or []]
    return records


def summarize_records(label: str, records: List[Dict[str, object]]) -> None:
    print(f"=== probnet reference pipeline: {label} ===")
    for record in records:
        kind = record.get("record")
        if kind == "verdict":
            print(f"-- Consistency --\nstatus={record['status']}")
            for cid in record.get("certificate", []):
                print(f"  cond {cid['target']} | {cid['given']} ({cid['side']})")
        elif kind == "saturation":
            print(
                f"-- Saturation --\nstatus={record['status']} iterations={record['iterations']} "
                f"changed_arcs={record['changed_arcs']}"
            )
        elif kind == "query":
            print(f"P({record['query']}) in {record['interval']['text']}")


@dataclass(frozen=True)
class ScenarioDefinition:
    fixture: str
    queries: Tuple[str, ...]
    description: str


SCENARIOS: Dict[str, ScenarioDefinition] = {
    "students": ScenarioDefinition(
        "students.kb",
        ("young|student", "student|single", "young|student&sport"),
        "Five-class student network, already saturated",
    ),
    "students-arcs": ScenarioDefinition(
        "students_arcs.kb",
        ("student|single", "single|student"),
        "Five arcs; the Bayes step recovers P(student|single)",
    ),
    "contradiction": ScenarioDefinition(
        "contradiction.kb",
        (),
        "Two coinciding classes with incompatible proportions",
    ),
    "conjunction": ScenarioDefinition(
        "conjunction.kb",
        ("a&b|c", "c|a&b", "a+b|c"),
        "A class inside two others",
    ),
}


def run_named_scenario(name: str, summarize: bool = True) -> Dict[str, object]:
    key = name.lower()
    definition = SCENARIOS.get(key)
    if definition is None:
        raise KeyError(f"Unknown scenario '{name}'. Available: {', '.join(SCENARIOS)}")
    outputs = run_pipeline(load_fixture(definition.fixture), definition.queries)
    if summarize:
        summarize_outputs(key, outputs)
    return outputs


def main(argv: list[str] | None = None) -> None:
    args = argv if argv is not None else sys.argv[1:]
    scenario = (args[0] if args else "students").lower()
    if scenario not in SCENARIOS:
        print(f"Unknown scenario '{scenario}'. Available: {', '.join(SCENARIOS)}")
        raise SystemExit(1)
    run_named_scenario(scenario)


if __name__ == "__main__":
    main()
