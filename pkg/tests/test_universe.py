import math

import pytest

from cait.errors import DanglingName, DomainViolation, MetricViolation
from cait.universe import (INF, LOCAL, ActuatorDecl, ChannelDecl, SensorDecl, atom, in_range,
                           load_universe, loc, make_universe, num, reachable_locations)


def line_universe(delta=1):
    return make_universe(["l1", "l2", "l3"], {("l1", "l2"): 1, ("l2", "l3"): 1, ("l1", "l3"): 2},
                         channels=[ChannelDecl("c", INF, (num(0),)),
                                   ChannelDecl("near", 1, (num(0),)),
                                   ChannelDecl("lc", LOCAL, (num(0),))],
                         sensors=[SensorDecl("s", (num(0), num(1)), "node")],
                         actuators=[ActuatorDecl("a", (atom("on"), atom("off")))],
                         delta=delta)


def test_distances_are_mirrored_and_diagonal_zero():
    u = line_universe()
    assert u.dist("l2", "l1") == 1
    assert u.dist("l3", "l3") == 0


def test_triangle_inequality_enforced():
    with pytest.raises(MetricViolation):
        make_universe(["a", "b", "c"], {("a", "b"): 1, ("b", "c"): 1, ("a", "c"): 5})


def test_missing_distance_rejected():
    with pytest.raises(MetricViolation):
        make_universe(["a", "b"], {})


def test_undeclared_location_in_distance():
    with pytest.raises(DanglingName):
        make_universe(["a"], {("a", "z"): 1})


def test_negative_delta_rejected():
    with pytest.raises(MetricViolation):
        make_universe(["a"], {}, delta=-1)


def test_empty_domain_rejected():
    with pytest.raises(DomainViolation):
        make_universe(["a"], {}, actuators=[ActuatorDecl("x", ())])


def test_name_clash_between_kinds():
    with pytest.raises(DanglingName):
        make_universe(["a"], {}, channels=[ChannelDecl("x", INF, (num(0),))],
                      actuators=[ActuatorDecl("x", (num(0),))])


def test_channel_ranges():
    u = line_universe()
    assert in_range(u, "c", "l1", "l3")
    assert in_range(u, "near", "l1", "l2")
    assert not in_range(u, "near", "l1", "l3")
    assert not in_range(u, "lc", "l1", "l1")
    assert u.rng("c") == math.inf


def test_reachable_locations_respect_delta():
    u = line_universe()
    assert set(reachable_locations(u, "l1")) == {"l1", "l2"}
    assert set(reachable_locations(u, "l2")) == {"l1", "l2", "l3"}
    assert reachable_locations(u.with_delta(0), "l1") == ("l1",)
    with pytest.raises(DanglingName):
        reachable_locations(u, "nowhere")


def test_with_actuator_and_channel():
    u = line_universe()
    u2 = u.with_actuator("obs", (num(0), num(1))).with_channel("w", INF, (num(0),))
    assert "obs" in u2.actuators and "w" in u2.channels
    assert "obs" not in u.actuators


def test_observational_compatibility():
    u = line_universe()
    assert u.observationally_compatible(u.with_channel("private", 0, (num(1),)), ["c"])
    assert not u.observationally_compatible(u.with_delta(2))
    assert not u.observationally_compatible(u.with_actuator("z", (num(0),)))


def test_load_universe_text():
    u = load_universe("location x y\ndist x y 3\ndelta 2\n"
                      "channel g range inf domain locations\n"
                      "sensor t location domain {1, 2}\n")
    assert u.dist("x", "y") == 3 and u.delta == 2
    assert set(u.channel_domain("g")) == {loc("x"), loc("y")}
    assert u.is_location_sensor("t")


def test_values_order_and_render():
    assert num(1) < num(2)
    assert str(atom("on")) == "on"
    assert sorted([atom("b"), num(3), atom("a")])[0] == num(3)
