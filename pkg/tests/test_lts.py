from cait.bundled import load_bundled
from cait.congruence import canon
from cait.labels import (Act, ActuatorEnv, In, Out, RecvAt, RecvObs, SendAt, SendObs, SensorEnv,
                         Sigma, Tau)
from cait.lts import (build_lts, extensional_transitions, network_transitions,
                      process_transitions)
from cait.reduction import barbs, reductions
from cait.universe import num


def test_process_transitions_of_timeout(su, net_in):
    p = net_in(su, "n[|> timeout(c!<1>, nil)] stat @ h").nodes[0].process
    assert {l for l, _ in process_transitions(p, su)} == {Out("c", num(1)), Sigma()}
    q = net_in(su, "n[|> timeout(c?(x), nil)] stat @ h").nodes[0].process
    assert {l for l, _ in process_transitions(q, su)} == {In("c", num(0)), In("c", num(1)), Sigma()}


def test_intensional_network_labels(su, net_in):
    m = net_in(su, "n[|> timeout(c!<1>, nil)] stat @ h | m[a=0 |> timeout(c?(x).a!x, nil)] stat @ k")
    got = {l for l, _ in network_transitions(m, su)}
    assert got == {Tau(), SendAt("c", num(1), "h"), RecvAt("c", num(0), "k"), RecvAt("c", num(1), "k")}


def test_extensional_labels(su, net_in):
    m = net_in(su, "n[|> timeout(c!<1>, nil)] stat @ h | m[a=0 |> timeout(c?(x).a!x, nil)] stat @ k")
    got = {l for l, _ in extensional_transitions(m, su)}
    assert SendObs("c", num(1), "h") in got and SendObs("c", num(1), "k") in got
    assert RecvObs("c", num(1), "h") in got
    assert ActuatorEnv("a", "k", num(0)) in got
    assert SensorEnv("s", "h", num(1)) in got
    assert Tau() in got
    assert not any(isinstance(l, (SendAt, RecvAt)) for l in got)


def test_short_range_observations_need_proximity(su, net_in):
    m = net_in(su, "n[|> timeout(d!<1>, nil)] stat @ h")
    obs = {l for l, _ in extensional_transitions(m, su) if isinstance(l, SendObs)}
    assert obs == {SendObs("d", num(1), "h")}


def test_restricted_channels_are_not_observable(su, net_in):
    m = net_in(su, "new c. n[|> timeout(c!<1>, nil)] stat @ h")
    assert not any(isinstance(l, (SendObs, RecvObs)) for l, _ in extensional_transitions(m, su))


def test_harmony_on_small_networks(su, net_in):
    for text in ["n[a=0 |> a!1.sigma.a!0] mob @ h",
                 "n[|> timeout(c!<1>, nil)] stat @ h | m[a=0 |> timeout(c?(x).a!x, nil)] stat @ k",
                 "n[s=1, b=0 |> s?(x).b!x] stat @ h"]:
        m = canon(net_in(su, text))
        red = set(reductions(m, su))
        lts = {(l, t) for l, t in network_transitions(m, su) if isinstance(l, (Tau, Act, Sigma))}
        assert red == lts, text


def test_actuator_env_matches_barbs(su, net_in):
    m = net_in(su, "n[a=0, b=1 |> nil] stat @ h")
    env = {(l.actuator, l.location, l.value) for l, _ in extensional_transitions(m, su)
           if isinstance(l, ActuatorEnv)}
    assert env == {(b.actuator, b.location, b.value) for b in barbs(m)}


def test_example_intensional_lts_shape():
    u, n = load_bundled("one_writer")
    ts = build_lts(n, u, "intensional")
    assert ts.n_states == 4
    assert [l.render() for _, l, _ in ts.edges] == ["act(a)"] * 3 + ["sigma"]
    assert ts.edges[-1][0] == ts.edges[-1][2]


def test_exports(su, net_in):
    ts = build_lts(net_in(su, "n[a=0 |> a!1] stat @ h"), su, "intensional")
    g = ts.export_graph()
    assert "act(a)" in g
    dot = ts.export_dot(label_states=True)
    assert dot.startswith("digraph") and "n[a=0" in dot


def test_parallel_build_matches_serial():
    u, m = load_bundled("smart_home_proximity")
    a = build_lts(m, u, "intensional")
    b = build_lts(m, u, "intensional", workers=2)
    assert a.n_states == b.n_states and a.n_edges == b.n_edges
