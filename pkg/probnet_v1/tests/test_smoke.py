from __future__ import annotations

import pytest

from probnet_v1 import cli_smoke
from probnet_v1.core.models import SaturationStatus
from probnet_v1.scripts import smoke_pipeline


@pytest.mark.parametrize("name", sorted(smoke_pipeline.SCENARIOS))
def test_every_scenario_runs(name, capsys):
    outputs = smoke_pipeline.run_named_scenario(name)
    out = capsys.readouterr().out
    assert f"=== probnet reference pipeline: {name} ===" in out
    definition = smoke_pipeline.SCENARIOS[name]
    if outputs["verdict"].consistent:
        assert outputs["report"].status is not SaturationStatus.INCONSISTENT
        assert len(outputs["answers"]) == len(definition.queries)
        assert "-- Queries --" in out or not definition.queries


def test_contradiction_stops_after_check():
    outputs = smoke_pipeline.run_named_scenario("contradiction", summarize=False)
    assert not outputs["verdict"].consistent
    assert outputs["report"] is None
    assert outputs["answers"] == []


def test_conjunction_answers_are_intervals():
    outputs = smoke_pipeline.run_named_scenario("conjunction", summarize=False)
    for result in outputs["answers"]:
        assert 0.0 <= result.interval.lo <= result.interval.hi <= 1.0
    # c sits inside both a and b
    by_query = {str(result.query): result.interval for result in outputs["answers"]}
    assert by_query["a&b|c"].lo == pytest.approx(1.0)


def test_unknown_scenario():
    with pytest.raises(KeyError):
        smoke_pipeline.run_named_scenario("nowhere")


def test_save_and_load_records(tmp_path, capsys):
    destination = tmp_path / "records.jsonl"
    cli_smoke.main(["students-arcs", "--save", str(destination)])
    assert destination.exists()
    capsys.readouterr()

    cli_smoke.main(["--load", str(destination)])
    out = capsys.readouterr().out
    assert "=== probnet reference pipeline: loaded ===" in out
    assert "status=Consistent" in out
    assert "P(student|single) in [" in out


def test_load_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        cli_smoke.main(["--load", str(tmp_path / "absent.jsonl")])
