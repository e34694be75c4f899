from __future__ import annotations

import json

import pytest

from probnet_v1 import cli_kb
from probnet_v1.cli_kb import (
    EXIT_ERROR,
    EXIT_INCONSISTENT,
    EXIT_OK,
    EXIT_UNSOUND,
    CliConfig,
    build_parser,
    main,
    run,
)
from probnet_v1.core.models import CompareRow, ProbInterval
from probnet_v1.core.network import parse_kb


def _config(command, kb_path, query=None, **kwargs) -> CliConfig:
    return CliConfig(command=command, kb_path=kb_path, query_string=query, **kwargs)


def test_check_consistent(fixture_dir, capsys):
    assert run(_config("check", fixture_dir / "students.kb")) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("Consistent")
    assert "32 worlds" in out


def test_check_inconsistent_lists_certificate(fixture_dir, capsys):
    assert run(_config("check", fixture_dir / "contradiction.kb")) == EXIT_INCONSISTENT
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("Infeasible")
    assert any(line.strip().startswith("cond ") for line in lines[1:])


def test_query_line(fixture_dir, capsys):
    assert run(_config("query", fixture_dir / "students.kb", "young | student")) == EXIT_OK
    assert capsys.readouterr().out.strip() == "P(young|student) in [0.850000;0.850000]"


def test_query_with_trace_prefixes_steps(fixture_dir, capsys):
    code = run(_config("query", fixture_dir / "students_arcs.kb", "student|single", trace=True))
    assert code == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[-1].startswith("P(student|single) in [")
    assert all(line.startswith("# ") for line in lines[:-1])


def test_exact_json(fixture_dir, capsys):
    assert run(_config("exact", fixture_dir / "students.kb", "young|student", json=True)) == EXIT_OK
    record = json.loads(capsys.readouterr().out)
    assert record["record"] == "query"
    assert record["method"] == "exact"
    assert record["interval"]["lo"] == pytest.approx(0.85, abs=1e-6)


def test_saturate_output_parses_back(fixture_dir, capsys):
    assert run(_config("saturate", fixture_dir / "students_arcs.kb", trace=True)) == EXIT_OK
    out = capsys.readouterr().out
    net = parse_kb(out)
    assert {atom.name for atom in net.base_atoms()} == {"sport", "student", "single"}
    got = net.bound(net.atom("student").id, net.atom("single").id)
    assert got.hi < 1.0


def test_saturate_json_records(fixture_dir, capsys):
    assert run(_config("saturate", fixture_dir / "students_arcs.kb", json=True, trace=True)) == EXIT_OK
    records = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    kinds = {record["record"] for record in records}
    assert records[0]["record"] == "saturation"
    assert {"step", "bound"} <= kinds


def test_saturate_inconsistent(fixture_dir, capsys):
    assert run(_config("saturate", fixture_dir / "contradiction.kb")) == EXIT_INCONSISTENT
    assert capsys.readouterr().out.startswith("Inconsistent")


def test_exact_on_inconsistent_kb(fixture_dir, capsys):
    assert run(_config("exact", fixture_dir / "contradiction.kb", "c|a")) == EXIT_INCONSISTENT
    assert capsys.readouterr().out.startswith("Infeasible")


def test_output_file(fixture_dir, tmp_path, capsys):
    destination = tmp_path / "report.txt"
    assert run(_config("query", fixture_dir / "students.kb", "sport|student", output_path=destination)) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert destination.read_text(encoding="utf-8").startswith("P(sport|student) in [0.9")


def test_missing_file_and_bad_query(fixture_dir, tmp_path, capsys):
    assert run(_config("check", tmp_path / "missing.kb")) == EXIT_ERROR
    assert "probnet: error:" in capsys.readouterr().err
    assert run(_config("query", fixture_dir / "students.kb", "young|nobody")) == EXIT_ERROR


def test_malformed_kb(tmp_path, capsys):
    path = tmp_path / "bad.kb"
    path.write_text("cond b | a = [0.7, 0.2]\n", encoding="utf-8")
    assert run(_config("check", path)) == EXIT_ERROR
    assert "probnet: error:" in capsys.readouterr().err


def test_compare_success_and_failure(fixture_dir, capsys, monkeypatch):
    assert run(_config("compare", fixture_dir / "students_arcs.kb")) == EXIT_OK
    assert "query" in capsys.readouterr().out

    def failing(net, **kwargs):
        return [CompareRow("b", "a", ProbInterval(0.2, 0.3), ProbInterval(0.1, 0.4), -0.2, True)]

    monkeypatch.setattr(cli_kb, "compare_network", failing)
    assert run(_config("compare", fixture_dir / "students_arcs.kb")) == EXIT_UNSOUND
    assert "FAILURE P(b|a)" in capsys.readouterr().out


def test_config_validation(fixture_dir):
    with pytest.raises(ValueError):
        _config("query", fixture_dir / "students.kb")
    with pytest.raises(ValueError):
        _config("check", fixture_dir / "students.kb", tol=0.0)
    with pytest.raises(ValueError):
        _config("compare", fixture_dir / "students.kb", workers=0)


def test_parser_defaults():
    args = build_parser().parse_args(["query", "kb.kb", "a|b", "--solver", "highs"])
    assert args.query == "a|b"
    assert args.solver == "highs"
    assert args.tol == pytest.approx(1e-9)
    assert args.output is None


def test_main_exit_codes(fixture_dir, capsys):
    with pytest.raises(SystemExit) as info:
        main(["query", str(fixture_dir / "students.kb"), "young|student"])
    assert info.value.code == EXIT_OK
    assert "0.850000" in capsys.readouterr().out

    with pytest.raises(SystemExit) as info:
        main(["exact", str(fixture_dir / "students.kb")])
    assert info.value.code == EXIT_ERROR
    assert "needs a query" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["query", "{kb}"],
        ["prove", "{kb}"],
        ["query", "{kb}", "a|b", "--tol", "0"],
        ["check", "{kb}", "--max-outer", "0"],
        ["check", "{kb}", "--solver", "glpk"],
    ],
)
def test_usage_errors_are_not_inconsistency(argv, fixture_dir, capsys):
    kb = str(fixture_dir / "students.kb")
    with pytest.raises(SystemExit) as info:
        main([arg.format(kb=kb) for arg in argv])
    assert info.value.code == EXIT_ERROR
    assert "probnet: error:" in capsys.readouterr().err


def test_undecodable_kb_is_a_one_line_error(tmp_path, capsys):
    path = tmp_path / "binary.kb"
    path.write_bytes(b"atom a\n\xff\xfe cond\n")
    assert run(_config("check", path)) == EXIT_ERROR
    err = capsys.readouterr().err
    assert "Traceback" not in err
    assert len([line for line in err.splitlines() if line.startswith("probnet: error:")]) == 1


def test_unconstrained_exact_query_prints_plain_zero(tmp_path, capsys):
    path = tmp_path / "loose.kb"
    path.write_text("cond b | a = [0.4, 0.7]\natom c\n", encoding="utf-8")
    assert run(_config("exact", path, "c|a")) == EXIT_OK
    assert capsys.readouterr().out.strip() == "P(c|a) in [0.000000;1.000000]"
    assert run(_config("compare", path)) == EXIT_OK
    assert "-0.000000" not in capsys.readouterr().out
