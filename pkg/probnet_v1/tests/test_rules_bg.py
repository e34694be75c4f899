from __future__ import annotations

import math

import pytest

from probnet_v1.core.network import parse_kb
from probnet_v1.core.rules import (
    ArcWeightGraph,
    bg_tighten,
    circuit_log_weight,
    cycle_check,
    longest_paths,
)

from .helpers import precise_network, widened_network, world_conditionals

ARCS = """
cond sport | student = [0.9, 0.9]
cond student | sport = [0.4, 0.4]
cond single | sport = [0.85, 0.85]
cond sport | single = [0.7, 0.7]
cond single | student = [0.61, 1.0]
"""


def test_bayes_step_bounds_student_given_single():
    net = parse_kb(ARCS)
    assert bg_tighten(net)
    got = net.bound(net.atom("student").id, net.atom("single").id)
    assert got.lo == pytest.approx(0.2233, abs=5e-4)
    assert got.hi == pytest.approx(0.3660, abs=5e-4)


def test_bayes_step_traces_rule():
    net = parse_kb(ARCS)
    bg_tighten(net, iteration=2)
    arc = (net.atom("student").id, net.atom("single").id)
    steps = net.trace.for_arc(arc)
    assert steps[-1].rule.value == "BG"
    assert steps[-1].iteration == 2


def test_longest_paths_compose_ratios():
    net = parse_kb(ARCS)
    D = longest_paths(ArcWeightGraph.from_network(net))
    student, single = net.atom("student").id, net.atom("single").id
    assert D[student, single] == pytest.approx(math.log(0.4 / 0.9 * 0.7 / 0.85))
    assert D[student, student] == pytest.approx(0.0, abs=1e-12)


def test_precise_consistent_cycle_is_a_fixpoint(rng):
    x = rng.dirichlet(rng.uniform(0.5, 2.0, size=8))
    net = precise_network(world_conditionals(x, 3))
    assert cycle_check(net) is None
    assert not bg_tighten(net)


def test_circuit_weight_vanishes_on_precise_networks(rng):
    x = rng.dirichlet(rng.uniform(0.5, 2.0, size=16))
    graph = ArcWeightGraph.from_network(precise_network(world_conditionals(x, 4)))
    assert circuit_log_weight(graph, [0, 1, 2, 3]) == pytest.approx(0.0, abs=1e-12)
    assert circuit_log_weight(graph, [3, 1, 0]) == pytest.approx(0.0, abs=1e-12)


def test_precise_two_cycle_is_consistent():
    net = parse_kb("cond b | a = [0.9, 0.9]\ncond a | b = [0.4, 0.4]\n")
    assert cycle_check(net) is None


def test_positive_circuit_is_reported():
    net = parse_kb(
        """
        cond b | a = [0.9, 0.9]
        cond a | b = [0.4, 0.4]
        cond c | b = [1, 1]
        cond b | c = [1, 1]
        cond c | a = [0.1, 0.1]
        cond a | c = [0.9, 0.9]
        """
    )
    violation = cycle_check(net)
    assert violation is not None
    assert sorted(violation.circuit) == [0, 1, 2]
    assert violation.excess == pytest.approx(math.log(20.25))
    assert "log excess" in violation.describe(net)


def test_saturated_student_table_has_no_positive_circuit(students_net):
    assert cycle_check(students_net) is None


def test_bayes_step_is_sound_on_random_networks(rng):
    for _ in range(30):
        x = rng.dirichlet(rng.uniform(0.3, 2.0, size=16))
        true = world_conditionals(x, 4)
        net = widened_network(true, rng, max_width=0.15)
        bg_tighten(net)
        assert (net.lo <= true + 1e-9).all()
        assert (true <= net.hi + 1e-9).all()
