from __future__ import annotations

import json
from dataclasses import asdict, is_dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

from probnet_v1.core.intervals import format_interval
from probnet_v1.core.models import (
    CompareRow,
    ConstraintId,
    ProbInterval,
    QueryResult,
    SaturationReport,
    TraceStep,
    Verdict,
)
from probnet_v1.core.network import Network


def serialize_dataclass(instance: Any) -> Dict[str, Any]:
    return asdict(instance)


def interval_record(iv: Optional[ProbInterval]) -> Optional[Dict[str, Any]]:
    if iv is None:
        return None
    return {"lo": iv.lo, "hi": iv.hi, "text": format_interval(iv)}


def _arc_names(net: Network, arc) -> Dict[str, str]:
    return {"target": net.atoms[arc[0]].name, "given": net.atoms[arc[1]].name}


def step_record(net: Network, step: TraceStep) -> Dict[str, Any]:
    return {
        "record": "step",
        "rule": step.rule.value,
        "operands": [net.atoms[i].name for i in step.operands],
        **_arc_names(net, step.arc),
        "before": interval_record(step.before),
        "after": interval_record(step.after),
        "iteration": step.iteration,
    }


def format_step(net: Network, step: TraceStep) -> str:
    target, given = net.atoms[step.arc[0]].name, net.atoms[step.arc[1]].name
    operands = ",".join(net.atoms[i].name for i in step.operands)
    return (
        f"{step.rule.value}({operands}) P({target}|{given}) "
        f"{format_interval(step.before)} -> {format_interval(step.after)}"
    )


def saturation_record(report: SaturationReport) -> Dict[str, Any]:
    return {
        "record": "saturation",
        "status": report.status.value,
        "iterations": report.iterations,
        "changed_arcs": report.changed_arcs,
        "wall_time": report.wall_time,
        "witness": report.witness,
    }


def bound_records(net: Network) -> List[Dict[str, Any]]:
    """One record per non-vacuous off-diagonal entry over base atoms."""
    records = []
    for target in net.base_atoms():
        for given in net.base_atoms():
            if target.id == given.id:
                continue
            iv = net.bound(target.id, given.id)
            if iv.is_vacuous:
                continue
            records.append(
                {
                    "record": "bound",
                    "target": target.name,
                    "given": given.name,
                    "interval": interval_record(iv),
                }
            )
    return records


def query_record(result: QueryResult, method: str = "local") -> Dict[str, Any]:
    return {
        "record": "query",
        "method": method,
        "query": str(result.query),
        "interval": interval_record(result.interval),
        "steps": len(result.trace),
    }


def format_query_line(text: str, iv: ProbInterval) -> str:
    return f"P({text.replace(' ', '')}) in {format_interval(iv)}"


def constraint_record(cid: ConstraintId) -> Dict[str, Any]:
    return {"target": cid.target, "given": cid.given, "side": cid.side}


def verdict_record(verdict: Verdict) -> Dict[str, Any]:
    return {
        "record": "verdict",
        "status": verdict.status.value,
        "certificate": [constraint_record(cid) for cid in verdict.certificate],
        "details": dict(verdict.details),
    }


def compare_record(row: CompareRow) -> Dict[str, Any]:
    return {
        "record": "compare",
        "target": row.target,
        "given": row.given,
        "local": interval_record(row.local),
        "local_indep": interval_record(row.local_indep),
        "exact": interval_record(row.exact),
        "gap": row.gap,
        "failure": row.failure,
    }


def json_line(record: Dict[str, Any]) -> str:
    return json.dumps(record, default=_encode_extra)


def _encode_extra(value: Any) -> Any:
    if is_dataclass(value):
        return serialize_dataclass(value)
    if hasattr(value, "tolist"):
        return value.tolist()
    raise TypeError(f"Unsupported report value: {type(value).__name__}")


def save_report(path: str | Path, records: Iterable[Dict[str, Any]]) -> Path:
    destination = Path(path).expanduser().resolve()
    destination.parent.mkdir(parents=True, exist_ok=True)
    destination.write_text("".join(json_line(record) + "\n" for record in records), encoding="utf-8")
    return destination


def load_report(path: str | Path) -> List[Dict[str, Any]]:
    source = Path(path).expanduser().resolve()
    if not source.exists():
        raise FileNotFoundError(f"Report file not found: {source}")
    return [json.loads(line) for line in source.read_text(encoding="utf-8").splitlines() if line.strip()]
