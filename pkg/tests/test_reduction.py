import pytest

from oracles import TWO_WRITERS_CLOSURE
from cait.bundled import load_bundled
from cait.congruence import canon
from cait.errors import DomainViolation, IllFormed
from cait.frontend.parser import parse_network
from cait.labels import Act, Sigma, Tau
from cait.reduction import (Barb, barbs, instantaneous_closure, is_time_blocked, reduction_graph,
                            reductions, update_sensor, weak_barb)
from cait.universe import num


def labels(net, u):
    return sorted(l.render() for l, _ in reductions(net, u))


def test_internet_communication_is_tau(su, net_in):
    m = net_in(su, "n[|> timeout(c!<1>, nil)] stat @ h | m[a=0 |> timeout(c?(x).a!x, nil)] stat @ k")
    [(l, after)] = reductions(m, su)
    assert l == Tau()
    assert after == canon(net_in(su, "n[|> nil] stat @ h | m[a=0 |> a!1] stat @ k"))


def test_short_range_out_of_reach_times_out(su, net_in):
    m = net_in(su, "n[|> timeout(d!<1>, nil)] stat @ h | m[a=0 |> timeout(d?(x).a!x, nil)] stat @ k")
    assert labels(m, su) == ["sigma"]


def test_short_range_within_reach(su, net_in):
    m = net_in(su, "n[|> timeout(d!<1>, nil)] stat @ h | m[a=0 |> timeout(d?(x).a!x, nil)] stat @ h")
    assert labels(m, su) == ["tau"]


def test_actuator_write_kinds(su, net_in):
    assert labels(net_in(su, "n[a=0 |> a!0.sigma.a!1] stat @ h"), su) == ["tau"]
    [(l, after)] = reductions(net_in(su, "n[a=0 |> a!1] stat @ h"), su)
    assert l == Act("a")
    assert barbs(after) == {Barb("a", "h", num(1))}


def test_sensor_read_and_position(su, net_in):
    [(l, after)] = reductions(net_in(su, "n[s=1, b=0 |> s?(x).b!x] stat @ h"), su)
    assert l == Tau()
    assert after == canon(net_in(su, "n[s=1, b=0 |> b!1] stat @ h"))
    assert labels(net_in(su, "n[|> @(x).sigma.nil] stat @ h"), su) == ["tau"]


def test_mobile_nodes_move_with_time(su, net_in):
    succ = reductions(net_in(su, "n[|> sigma.nil] mob @ h"), su)
    assert {m.nodes[0].location for l, m in succ if l == Sigma()} == {"h", "k"}
    stat = reductions(net_in(su, "n[|> sigma.nil] stat @ h"), su)
    assert len(stat) == 1


def test_maximal_progress(su, net_in):
    m = net_in(su, "n[a=0 |> a!1] stat @ h | k[|> sigma.nil] stat @ k")
    assert labels(m, su) == ["act(a)"]
    assert not is_time_blocked(m, su)
    assert is_time_blocked(net_in(su, "n[|> sigma.nil] stat @ h"), su)


def test_update_sensor(su, net_in):
    m = net_in(su, "n[s=0 |> nil] stat @ h")
    assert update_sensor(m, "s", "h", num(1), su) == canon(net_in(su, "n[s=1 |> nil] stat @ h"))
    assert update_sensor(m, "s", "k", num(1), su) == canon(m)
    with pytest.raises(DomainViolation):
        update_sensor(m, "s", "h", num(9), su)


def test_weak_barb(su, net_in):
    m = net_in(su, "n[a=0 |> sigma.sigma.a!1] stat @ h")
    assert barbs(m) == {Barb("a", "h", num(0))}
    assert not weak_barb(m, Barb("a", "h", num(1)), su)   # actuator steps are not followed
    m2 = net_in(su, "n[b=0 |> sigma.sigma.b!0] stat @ h")
    assert weak_barb(m2, Barb("b", "h", num(0)), su)


def test_reductions_validate(su, net_in):
    with pytest.raises(IllFormed):
        reductions(net_in(su, "n[|> a!1] stat @ h"), su)


def test_example_two_writers_closure_matches_hand_enumeration():
    u, m = load_bundled("two_writers")
    hand = {canon(parse_network(t, u)) for t in TWO_WRITERS_CLOSURE}
    assert set(instantaneous_closure(m, u)) == hand
    assert len(hand) == 6


def test_reduction_graph_is_deterministic():
    u, m = load_bundled("smart_home_proximity")
    g1 = reduction_graph(m, u)
    g2 = reduction_graph(m, u)
    assert g1.states == g2.states and g1.edges == g2.edges
    assert (g1.n_states, g1.n_edges) == (280, 585)
