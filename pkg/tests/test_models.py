from dataclasses import replace

import pytest

from cait.errors import ConfigViolation
from cait.frontend.parser import parse_model
from cait.models import (ScenarioConfig, build_smart_home, check_light_subsystems,
                         check_runtime_properties, light_subsystem, smart_home,
                         smart_home_text, smart_home_universe, stable_derivatives)
from cait.reduction import Barb, barbs, reduction_graph
from cait.universe import atom


@pytest.mark.parametrize("variant,nodes", [("proximity", 4), ("gps", 5)])
def test_builders(variant, nodes):
    cfg = ScenarioConfig(variant=variant)
    u, net = smart_home(cfg)
    assert len(net.nodes) == nodes
    assert build_smart_home(cfg) is net and smart_home_universe(cfg) is u
    assert Barb("boiler", "loc2", atom("off")) in barbs(net)


def test_text_matches_builder():
    cfg = ScenarioConfig(variant="gps")
    u, net = parse_model(smart_home_text(cfg))
    from cait.congruence import canon
    assert canon(net) == smart_home(cfg)[1]


@pytest.mark.parametrize("bad", [
    dict(theta=18), dict(temps=(20, 25)), dict(variant="zigbee"), dict(mode="eco"),
    dict(lights=("on",)), dict(delta=-1), dict(temp=99), dict(boiler="maybe"),
])
def test_config_validation(bad):
    with pytest.raises(ConfigViolation):
        smart_home(replace(ScenarioConfig(), **bad))


def test_state_space_sizes():
    for variant, size in [("proximity", (280, 585)), ("gps", (720, 1837))]:
        u, net = smart_home(ScenarioConfig(variant=variant))
        g = reduction_graph(net, u)
        assert (g.n_states, g.n_edges) == size


def test_stable_derivatives_include_initial_state():
    u, net = smart_home()
    g = reduction_graph(net, u)
    derivs = stable_derivatives(g)
    assert derivs[0] == g.states[g.initial]
    assert len(derivs) == 18


def test_runtime_properties_hold_by_default():
    r = check_runtime_properties()
    assert r.ok, r.counterexamples[:3]
    assert set(r.details["by-property"]) == {"manual-on", "cold-on", "warm-off", "lights-exclusive"}


def test_wide_light_channel_breaks_exclusivity():
    r = check_runtime_properties(ScenarioConfig(c1_range=3))
    assert r.details["by-property"]["lights-exclusive"] > 0
    assert r.details["by-property"]["manual-on"] == 0


def test_light_subsystem_drops_boiler():
    u, net = light_subsystem()
    assert not any(n.iface.has_actuator("boiler") for n in net.nodes)


def test_light_subsystems_bisimilar_golden_blocks():
    v = check_light_subsystems()
    assert v.bisimilar
    assert v.stats["blocks"] == 17
    assert (v.stats["left_states"], v.stats["right_states"]) == (112, 288)
