from hypothesis import given, settings, strategies as st

from cait.congruence import canon, canonicalize, congruent, norm, structural_hash
from cait.frontend.parser import parse_network, parse_process
from cait.gen import random_network
from cait.syntax import NIL, Network, Par


def test_par_commutative_associative_with_nil_unit(su):
    p = parse_process("(a!1 | nil) | (sigma.nil | b!0)", su)
    q = parse_process("b!0 | (sigma.nil | a!1)", su)
    assert norm(p) == norm(q)
    assert norm(Par((NIL, NIL))) is NIL


def test_norm_is_idempotent_and_interned(su):
    p = parse_process("fix X.timeout(c!<1>.(a!1 | b!0), X) | sigma.nil", su)
    assert norm(norm(p)) is norm(p)


def test_network_order_irrelevant(su):
    m = parse_network("n[a=0 |> nil] stat @ h | k[|> sigma.nil] mob @ k", su)
    n = parse_network("k[|> sigma.nil] mob @ k | n[a=0 |> nil] stat @ h", su)
    assert canon(m) is canon(n)
    assert structural_hash(m) == structural_hash(n)
    assert len(structural_hash(m)) == 12


def test_zero_is_unit_of_composition(su):
    m = parse_network("n[a=0 |> nil] stat @ h", su)
    z = parse_network("0 | n[a=0 |> nil] stat @ h | 0", su)
    assert canon(m) == canon(z)
    assert canon(Network()) == Network()


def test_alpha_equivalent_restrictions(su):
    u = su.with_channel("e", float("inf"), su.channel_domain("c"))
    m = parse_network("new c. n[|> timeout(c!<1>, nil)] stat @ h", u)
    n = parse_network("new e. n[|> timeout(e!<1>, nil)] stat @ h", u)
    assert not congruent(m, n)
    assert congruent(m, n, u)
    assert canonicalize(m, u) == canonicalize(n, u)


def test_renaming_needs_matching_declarations(su):
    m = parse_network("new c. n[|> timeout(c!<1>, nil)] stat @ h", su)
    n = parse_network("new d. n[|> timeout(d!<1>, nil)] stat @ h", su)
    assert not congruent(m, n, su)   # c and d have different ranges


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_canon_is_idempotent_on_random_networks(seed):
    net = random_network(seed)
    c = canon(net)
    assert canon(c) is c
    shuffled = Network(net.restricted, tuple(reversed(net.nodes)))
    assert canon(shuffled) is c
