from cait.gen import NetworkGenerator, gen_universe, random_network
from cait.syntax import check_sanity, check_well_formed, is_time_guarded


def test_generator_is_deterministic():
    assert random_network(7) == random_network(7)


def test_generated_networks_are_valid():
    u = gen_universe()
    for seed in range(100):
        net = random_network(seed, u)
        assert check_well_formed(net, u) == [] and check_sanity(net, u) == []
        assert all(is_time_guarded(n.process) for n in net.nodes)
        assert 1 <= len(net.nodes) <= 3


def test_bounds_are_respected():
    u = gen_universe()
    g = NetworkGenerator(u, seed=1, max_depth=1, max_nodes=1)
    for _ in range(20):
        assert len(g.network().nodes) == 1
