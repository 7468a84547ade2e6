"""Random well-formed, time-guarded networks for property-based testing."""

from __future__ import annotations

import random

from .frontend.parser import parse_universe
from .syntax import (NIL, Cmp, Cond, Fix, GetPos, Interface, Network, Node, PVar, Par,
                     Prefix, ReadSensor, Receive, Send, Sleep, Timeout, Var, WriteActuator,
                     restrict, validate)
from .universe import ModelUniverse, loc

GEN_UNIVERSE = """\
location l1 l2 l3
dist l1 l2 1
dist l2 l3 1
dist l1 l3 2
delta 1
channel lc range local domain {0, 1}
channel web range inf domain {0, 1}
channel near range 1 domain {0, 1}
channel g range inf domain locations
sensor s node domain {0, 1}
sensor t location domain {0, 1}
actuator a domain {0, 1}
actuator b domain {0, 1}
"""


def gen_universe() -> ModelUniverse:
    return parse_universe(GEN_UNIVERSE)


class NetworkGenerator:
    """Seeded generator; every process it builds is closed and time-guarded."""

    def __init__(self, u: ModelUniverse, seed=None, max_depth: int = 6, max_nodes: int = 3):
        self.u = u
        self.rng = random.Random(seed)
        self.max_depth = max_depth
        self.max_nodes = max_nodes
        self._fresh = 0

    def fresh(self, prefix: str) -> str:
        self._fresh += 1
        return f"{prefix}{self._fresh}"

    # -- processes -------------------------------------------------------------

    def process(self, depth, scope: dict, bound: tuple, usable: tuple, sensors, actuators):
        """``scope`` maps variables to their domain; ``usable`` holds the process
        variables that are already under a time guard here."""
        r = self.rng
        if depth <= 0:
            if usable and r.random() < 0.5:
                return PVar(r.choice(usable))
            return NIL
        kinds = ["nil", "sigma", "timeout-send", "timeout-recv", "fix", "par", "cond", "getpos"]
        if sensors:
            kinds.append("read")
        if actuators:
            kinds += ["write", "write"]
        if usable:
            kinds.append("pvar")
        k = r.choice(kinds)
        sub = lambda sc=scope, us=usable, bd=bound: self.process(depth - 1, sc, bd, us, sensors, actuators)
        guarded = lambda sc=scope, bd=bound: self.process(depth - 1, sc, bd, bd, sensors, actuators)
        if k == "nil":
            return NIL
        if k == "pvar":
            return PVar(r.choice(usable))
        if k == "sigma":
            return Prefix(Sleep(), guarded())
        if k == "getpos":
            x = self.fresh("x")
            return Prefix(GetPos(x), sub({**scope, x: tuple(loc(h) for h in self.u.locations)}))
        if k == "read":
            s = r.choice(sensors)
            x = self.fresh("x")
            return Prefix(ReadSensor(x, s), sub({**scope, x: self.u.sensor_domain(s)}))
        if k == "write":
            a = r.choice(actuators)
            return Prefix(WriteActuator(self.value(self.u.actuator_domain(a), scope), a), sub())
        if k == "timeout-send":
            c = r.choice(sorted(self.u.channels))
            v = self.value(self.u.channel_domain(c), scope)
            return Timeout(Send(c, v), sub(), guarded())
        if k == "timeout-recv":
            c = r.choice(sorted(self.u.channels))
            x = self.fresh("x")
            return Timeout(Receive(c, x), sub({**scope, x: self.u.channel_domain(c)}), guarded())
        if k == "fix":
            X = self.fresh("X")
            return Fix(X, self.process(depth - 1, scope, bound + (X,), usable, sensors, actuators))
        if k == "par":
            return Par((sub(), sub()))
        if k == "cond":
            if scope and r.random() < 0.8:
                x = r.choice(sorted(scope))
                guard = Cmp(r.choice(["=", "<", "<="]), Var(x), r.choice(scope[x]))
            else:
                vals = self.u.actuator_domain("a")
                guard = Cmp(r.choice(["=", "<"]), r.choice(vals), r.choice(vals))
            return Cond(guard, sub(), sub())
        raise AssertionError(k)

    def value(self, domain, scope):
        same = [x for x, d in scope.items() if tuple(d) == tuple(domain)]
        if same and self.rng.random() < 0.5:
            return Var(self.rng.choice(sorted(same)))
        return self.rng.choice(tuple(domain))

    # -- networks ------------------------------------------------------------------

    def network(self) -> Network:
        r, u = self.rng, self.u
        nodes = []
        node_sensor_taken = False
        free_actuators = sorted(u.actuators)
        for i in range(r.randint(1, self.max_nodes)):
            mob = r.choice(["stat", "mob"])
            loc = r.choice(u.locations)
            sensors = {}
            if not node_sensor_taken and r.random() < 0.4:
                sensors["s"] = r.choice(u.sensor_domain("s"))
                node_sensor_taken = True
            if mob == "stat" and r.random() < 0.4:
                sensors["t"] = r.choice(u.sensor_domain("t"))
            actuators = {a: r.choice(u.actuator_domain(a)) for a in free_actuators
                         if r.random() < 0.5}
            free_actuators = [a for a in free_actuators if a not in actuators]
            depth = r.randint(1, self.max_depth)
            p = self.process(depth, {}, (), (), sorted(sensors), sorted(actuators))
            nodes.append(Node(f"n{i}", Interface.of(sensors, actuators), p, mob, loc))
        net = Network((), tuple(nodes))
        if r.random() < 0.3:
            net = restrict(net, r.choice(["web", "near"]))
        validate(net, u)
        return net


def random_network(seed, u: ModelUniverse | None = None, max_depth: int = 6,
                   max_nodes: int = 3) -> Network:
    return NetworkGenerator(u or gen_universe(), seed, max_depth, max_nodes).network()
