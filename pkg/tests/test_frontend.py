import pytest
from hypothesis import given, settings, strategies as st

from cait.bundled import bundled_names, bundled_text, load_bundled
from cait.congruence import canon
from cait.errors import ParseError
from cait.frontend.parser import parse_model, parse_network, parse_process, tokenize
from cait.frontend.printer import (pretty_print, print_network, print_process, print_universe,
                                   print_value)
from cait.gen import gen_universe, random_network
from cait.syntax import ZERO, Fix, PVar, Timeout
from cait.universe import UNIT, num


def round_trip(net, u):
    return canon(parse_network(print_network(net), u)) == canon(net)


@pytest.mark.parametrize("name", ["delayed_send", "immediate_send", "two_writers", "one_writer",
                                  "smart_home_proximity", "smart_home_gps"])
def test_bundled_models_round_trip(name):
    u, net = load_bundled(name)
    assert round_trip(net, u)
    u2, net2 = parse_model(pretty_print(net, u))
    assert print_universe(u2) == print_universe(u)
    assert canon(net2) == canon(net)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 1_000_000))
def test_random_networks_round_trip(seed):
    u = gen_universe()
    assert round_trip(random_network(seed, u), u)


def test_zero_network(su):
    assert parse_network("0", su) == ZERO
    assert print_network(ZERO) == "0"


def test_derived_communication_prefix(su):
    p = parse_process("c!<1>.a!1", su)
    assert isinstance(p, Fix) and isinstance(p.body, Timeout)
    assert p.body.else_ == PVar(p.var)
    assert canon(parse_network(f"n[a=0 |> {print_process(p)}] stat @ h", su)) == \
        canon(parse_network("n[a=0 |> c!<1>.a!1] stat @ h", su))


def test_unit_payload_and_sigma_power(su):
    u, net = load_bundled("delayed_send")
    assert "c!<()>" in print_network(net)
    assert print_value(UNIT) == "()"
    assert print_process(parse_process("sigma^3.nil", su)).count("sigma") == 3


def test_unicode_rendering(su):
    u, net = load_bundled("delayed_send")
    text = print_network(net, unicode=True)
    assert "σ" in text and "⋈" in text and "⌊" in text


def test_comments_are_ignored():
    u, net = parse_model("location h  # a place\n# only comments here\nnetwork\n  0\n")
    assert net == ZERO


@pytest.mark.parametrize("text,line,col", [
    ("location h\nnetwork\n n[|> nil] stat @ k", 3, 19),
    ("location h\nnetwork\n n[|> nil$] stat @ h", 3, 10),
    ("location h\nnetwork\n n[|> nil] stat @ h x", 3, 21),
    ("location h\nactuator a domain {0,1}\nnetwork\n n[a=0 |> a!1.] stat @ h", 4, 15),
    ("location h\nnetwork\n n[|> fix x.nil] stat @ h", 3, 7),
])
def test_errors_carry_positions(text, line, col):
    with pytest.raises(ParseError) as e:
        parse_model(text)
    assert (e.value.line, e.value.column) == (line, col)
    assert str(e.value).startswith(f"{line}:{col}:")


def test_undeclared_names(su):
    with pytest.raises(ParseError):
        parse_network("n[zz=0 |> nil] stat @ h", su)
    with pytest.raises(ParseError):
        parse_network("n[|> timeout(nope!<1>, nil)] stat @ h", su)


def test_tokens_track_lines():
    toks = tokenize("a\n  b")
    assert [(t.text, t.line, t.col) for t in toks[:2]] == [("a", 1, 1), ("b", 2, 3)]


def test_bundled_registry():
    assert "two_writers" in bundled_names()
    assert bundled_text("one_writer").strip().endswith("stat @ h")
    assert num(0) in load_bundled("two_writers")[0].actuator_domain("a")
