from __future__ import annotations

import pytest

from probnet_v1.core.models import IndepDecl, IndepKind, ProbInterval
from probnet_v1.core.network import parse_kb
from probnet_v1.core.rules import indep_tighten
from probnet_v1.core.saturation import query, saturate

from .helpers import independent_distribution, widened_network, world_conditionals

# conditioning atom and independent pair for a declaration over (a0, a1, a2)
LAYOUT = {
    IndepKind.I: (0, (1, 2)),
    IndepKind.II: (1, (0, 2)),
    IndepKind.III: (2, (0, 1)),
}


def _pair(net, target, given):
    return net.bound(net.atom(target).id, net.atom(given).id)


def test_common_source_with_certain_link():
    net = parse_kb("atom a\natom b\natom c\ncond c | b = [1, 1]\nindep i a ; b ; c\n")
    assert indep_tighten(net, net.indeps[0])
    assert _pair(net, "c", "a") == ProbInterval.certain()


def test_mediated_with_certain_first_link():
    net = parse_kb("atom a\natom b\natom c\ncond b | a = [1, 1]\ncond c | b = [0.3, 0.3]\nindep ii a ; b ; c\n")
    indep_tighten(net, net.indeps[0])
    got = _pair(net, "c", "a")
    assert got.lo == pytest.approx(0.3)
    assert got.hi == pytest.approx(0.3)


def test_mediated_bounds_from_point_values():
    net = parse_kb("atom a\natom b\natom c\ncond b | a = [0.5, 0.5]\ncond c | b = [0.8, 0.8]\nindep ii a ; b ; c\n")
    indep_tighten(net, net.indeps[0])
    got = _pair(net, "c", "a")
    assert got.lo == pytest.approx(0.4)
    assert got.hi == pytest.approx(0.9)


def test_query_sees_mediated_independence():
    net = parse_kb("atom a\natom b\natom c\ncond b | a = [1, 1]\ncond c | b = [0.35, 0.35]\nindep ii a ; b ; c\n")
    saturate(net)
    got = query(net, "c|a").interval
    assert got.lo == pytest.approx(0.35)
    assert got.hi == pytest.approx(0.35)


def test_query_sees_common_source_independence():
    net = parse_kb("atom a\natom b\natom c\ncond c | b = [1, 1]\nindep i a ; b ; c\n")
    saturate(net)
    assert query(net, "c|a").interval == ProbInterval.certain()


def test_without_declaration_nothing_follows():
    net = parse_kb("atom a\natom b\natom c\ncond c | b = [1, 1]\n")
    saturate(net)
    assert query(net, "c|a").interval.is_vacuous


@pytest.mark.parametrize("kind", list(IndepKind))
def test_tighteners_are_sound(rng, kind):
    given, pair = LAYOUT[kind]
    for _ in range(40):
        x = independent_distribution(rng, given, pair)
        true = world_conditionals(x, 3)
        net = widened_network(true, rng, max_width=0.2)
        net.add_indep(IndepDecl(kind, (0, 1, 2)))
        indep_tighten(net, net.indeps[0])
        assert (net.lo <= true + 1e-9).all(), kind
        assert (true <= net.hi + 1e-9).all(), kind
        saturate(net)
        assert (net.lo <= true + 1e-9).all(), kind
        assert (true <= net.hi + 1e-9).all(), kind


def test_declaration_order_within_symmetric_pairs(rng):
    x = independent_distribution(rng, 1, (0, 2))
    true = world_conditionals(x, 3)
    forward = widened_network(true, rng, max_width=0.2)
    backward = forward.copy()
    forward.add_indep(IndepDecl(IndepKind.II, (0, 1, 2)))
    backward.add_indep(IndepDecl(IndepKind.II, (2, 1, 0)))
    indep_tighten(forward, forward.indeps[0])
    indep_tighten(backward, backward.indeps[0])
    assert forward.lo == pytest.approx(backward.lo)
    assert forward.hi == pytest.approx(backward.hi)


def test_mediated_ratio_bound_needs_overlap():
    # a and b are disjoint, so nothing about c inside a follows
    net = parse_kb(
        "atom a\natom b\natom c\n"
        "cond b | a = [0, 0]\ncond a | b = [0, 0.5]\n"
        "cond c | b = [0.5, 0.5]\ncond b | c = [0.5, 0.5]\n"
        "indep ii a ; b ; c\n"
    )
    indep_tighten(net, net.indeps[0])
    assert _pair(net, "c", "a").is_vacuous
    saturate(net)
    got = query(net, "c|a").interval
    assert got.lo == 0.0
    assert got.hi == pytest.approx(1.0)
