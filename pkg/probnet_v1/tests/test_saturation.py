from __future__ import annotations

import pytest

from probnet_v1.core.intervals import contains
from probnet_v1.core.lp_oracle import exact_bounds
from probnet_v1.core.models import ProbInterval, SaturationStatus, SideKind
from probnet_v1.core.models.errors import QuerySyntaxError, TooManyAtoms, UnknownAtom
from probnet_v1.core.network import Network, parse_kb
from probnet_v1.core.saturation import MAX_ATOMS, format_query, parse_query, query, saturate

from .helpers import STUDENT_ATOMS


def test_students_table_is_stable_up_to_print_precision(students_net, students_table):
    report = saturate(students_net)
    assert report.status is not SaturationStatus.INCONSISTENT
    for (t, g), printed in students_table.items():
        got = students_net.bound(students_net.atom(t).id, students_net.atom(g).id)
        assert contains(printed, got, 1e-9)
        # the table is printed at two decimals
        assert got.lo == pytest.approx(printed.lo, abs=0.02), (t, g)
        assert got.hi == pytest.approx(printed.hi, abs=0.02), (t, g)
    assert report.wall_time < 5.0


def test_students_query_young_given_student(students_net):
    saturate(students_net)
    got = query(students_net, "young | student").interval
    assert got.lo == pytest.approx(0.85)
    assert got.hi == pytest.approx(0.85)


def test_five_arcs_recover_student_given_single(load_kb):
    net = load_kb("students_arcs.kb")
    report = saturate(net)
    assert report.status is not SaturationStatus.INCONSISTENT
    got = query(net, "student|single").interval
    assert got.lo == pytest.approx(0.2233, abs=5e-4)
    assert got.hi == pytest.approx(0.3660, abs=5e-4)
    assert report.changed_arcs >= 1
    assert len(query(net, "student|single").trace) >= 1


def test_two_atoms_are_already_saturated():
    net = parse_kb("cond b | a = [0.3, 0.6]\ncond a | b = [0.2, 0.9]\n")
    report = saturate(net)
    assert report.status is SaturationStatus.SATURATED
    assert report.changed_arcs == 0
    assert report.iterations == 1


def test_outer_limit_reports_max_iterations(load_kb):
    net = load_kb("students_arcs.kb")
    report = saturate(net, max_outer=1)
    assert report.status is SaturationStatus.MAX_ITERATIONS
    assert report.iterations == 1


def test_contradiction_is_reported_not_raised(load_kb):
    net = load_kb("contradiction.kb")
    report = saturate(net)
    assert report.status is SaturationStatus.INCONSISTENT
    assert report.witness


def test_saturation_only_narrows(random_kb):
    net, _ = random_kb(4)
    lo, hi = net.lo.copy(), net.hi.copy()
    saturate(net)
    assert (net.lo >= lo).all()
    assert (net.hi <= hi).all()


@pytest.mark.parametrize("n", [4, 5])
def test_saturated_bounds_contain_exact_bounds(random_kb, n):
    for _ in range(50):
        net, _ = random_kb(n, max_width=0.25)
        saturated = net.copy()
        assert saturate(saturated).status is not SaturationStatus.INCONSISTENT
        for t in range(n):
            for g in range(n):
                if t == g:
                    continue
                exact = exact_bounds(net, f"a{t}|a{g}")
                assert contains(saturated.bound(t, g), exact, 1e-7), (t, g)


def test_too_many_atoms():
    net = Network()
    for k in range(MAX_ATOMS + 1):
        net.add_atom(f"x{k}")
    with pytest.raises(TooManyAtoms):
        saturate(net)


def test_tolerance_must_be_positive():
    with pytest.raises(ValueError):
        saturate(parse_kb("atom a\n"), tol=0.0)


def test_parse_query_forms():
    q = parse_query(" young | student ")
    assert q.target.names == ("young",) and q.given.names == ("student",)
    q = parse_query("a & b | c")
    assert q.target.kind is SideKind.AND and q.target.names == ("a", "b")
    q = parse_query("c | a + b")
    assert q.given.kind is SideKind.OR
    assert format_query(q) == "c|a+b"


@pytest.mark.parametrize("text", ["a|b|c", "a", "a&b+c|d", "a&b|c&d", "a&a|b", "|b", "a&b&c|d"])
def test_parse_query_rejects(text):
    with pytest.raises(QuerySyntaxError):
        parse_query(text)


def test_diagonal_query_is_certain(students_net):
    for name in STUDENT_ATOMS:
        assert query(students_net, f"{name}|{name}").interval == ProbInterval.certain()


def test_unknown_atom_in_query(students_net):
    with pytest.raises(UnknownAtom):
        query(students_net, "nobody|student")


def test_query_conjunction_from_containment(load_kb):
    net = load_kb("conjunction.kb")
    saturate(net)
    got = query(net, "a & b | c")
    assert got.interval == ProbInterval.certain()
    assert net.n == 3
