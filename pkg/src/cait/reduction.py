"""Reduction semantics: instantaneous (tau and actuator-changing) and timed
reductions, barbs and environment sensor updates.

This engine works directly on canonical networks and applies the reduction
axioms to the components a node exposes. It is deliberately independent of
the labelled semantics in :mod:`cait.lts` so the two can be compared.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from itertools import product

from .congruence import canon, components, norm
from .errors import DomainViolation
from .explore import DEFAULT_BUDGET, explore
from .labels import SIGMA, TAU, Act, Sigma, Tau
from .syntax import (Fix, GetPos, Network, Node, Par, Prefix, ReadSensor, Receive, Send,
                     Sleep, Timeout, WriteActuator, eval_value, substitute, unfold, validate)
from .universe import LOCAL, ModelUniverse, Value, loc


@dataclass(frozen=True)
class EngineFlags:
    """Switches for deliberately broken engine variants used in mutation tests."""

    drop_timepar_premise: bool = False
    drop_fix: bool = False


DEFAULT_FLAGS = EngineFlags()


@dataclass(frozen=True, order=True)
class Barb:
    actuator: str
    location: str
    value: Value

    def __str__(self):
        return f"{self.actuator}@{self.location}!{self.value}"


@dataclass
class NodeMoves:
    """Everything a single node can contribute to a network reduction."""

    local: list      # (label, Node) for tau and actuator-changing steps
    sends: list      # (channel, value, residue process)
    receives: list   # (channel, var, continuation, residue process)
    timed: object    # process after one time unit, or None if the node cannot tick


class ReductionEngine:
    def __init__(self, u: ModelUniverse, flags: EngineFlags = DEFAULT_FLAGS):
        self.u = u
        self.flags = flags
        self._heads = {}
        self._unf = {}
        self._nodes = {}
        self._steps = {}

    # -- exposing components ---------------------------------------------------

    def heads(self, comp) -> tuple:
        """Active components of one canonical parallel component, with their paths.

        Recursion is unfolded (possibly repeatedly) until every component is
        a prefix or a timeout. A path records which unfolded sub-component a
        head came from so that untouched siblings can stay folded.
        """
        try:
            return self._heads[comp]
        except KeyError:
            pass
        if isinstance(comp, Fix):
            out = tuple(((i,) + path, h)
                        for i, c in enumerate(self._unfolded(comp))
                        for path, h in self.heads(c))
        else:
            out = (((), comp),)
        self._heads[comp] = out
        return out

    def _unfolded(self, comp) -> tuple:
        try:
            return self._unf[comp]
        except KeyError:
            out = self._unf[comp] = components(norm(unfold(comp)))
            return out

    def _residue(self, comps, used) -> list:
        """Components left when the heads at ``used`` paths are consumed."""
        parts = []
        for i, c in enumerate(comps):
            sub = {p[1:] for p in used if p[0] == i}
            if not sub:
                parts.append(c)
            elif () not in sub:
                parts.extend(self._residue(self._unfolded(c), sub))
        return parts

    def _after(self, comps, used, extra=()):
        return norm(Par(tuple(self._residue(comps, used)) + tuple(extra)))

    # -- single node ------------------------------------------------------------

    def node_moves(self, node: Node) -> NodeMoves:
        try:
            return self._nodes[node]
        except KeyError:
            pass
        u, I, h = self.u, node.iface, node.location
        comps = components(node.process)
        flat = [((gi,) + path, hd) for gi, c in enumerate(comps) for path, hd in self.heads(c)]
        local, sends, receives = [], [], []

        def with_proc(p, iface=I):
            return Node(node.name, iface, p, node.mobility, node.location)

        for path, hd in flat:
            if isinstance(hd, Prefix):
                a = hd.action
                if isinstance(a, GetPos):
                    p = self._after(comps, {path}, [substitute(hd.cont, a.var, loc(h))])
                    local.append((TAU, with_proc(p)))
                elif isinstance(a, ReadSensor):
                    v = I.sensor(a.sensor)
                    if v is not None:
                        p = self._after(comps, {path}, [substitute(hd.cont, a.var, v)])
                        local.append((TAU, with_proc(p)))
                elif isinstance(a, WriteActuator):
                    v = eval_value(a.value)
                    u.check_actuator_value(a.actuator, v)
                    cur = I.actuator(a.actuator)
                    if cur is None:
                        continue
                    p = self._after(comps, {path}, [hd.cont])
                    if cur == v:
                        local.append((TAU, with_proc(p)))
                    else:
                        local.append((Act(a.actuator), with_proc(p, I.set_actuator(a.actuator, v))))
            elif isinstance(hd, Timeout):
                io = hd.io
                if u.rng(io.channel) == LOCAL:
                    continue
                if isinstance(io, Send):
                    v = eval_value(io.payload)
                    sends.append((io.channel, v, self._after(comps, {path}, [hd.then])))
                else:
                    receives.append((io.channel, io.var, hd.then, self._after(comps, {path})))
        # intra-node communication on local channels
        for spath, sh in flat:
            if not (isinstance(sh, Timeout) and isinstance(sh.io, Send)):
                continue
            c = sh.io.channel
            if u.rng(c) != LOCAL:
                continue
            for rpath, rh in flat:
                if rpath == spath or not isinstance(rh, Timeout):
                    continue
                if not (isinstance(rh.io, Receive) and rh.io.channel == c):
                    continue
                v = eval_value(sh.io.payload)
                u.check_message(c, v)
                p = self._after(comps, {spath, rpath},
                                [sh.then, substitute(rh.then, rh.io.var, v)])
                local.append((TAU, with_proc(p)))
        timed = None
        has_tau = any(isinstance(l, Tau) for l, _ in local)
        if not has_tau and all(isinstance(hd, Timeout) or
                               (isinstance(hd, Prefix) and isinstance(hd.action, Sleep))
                               for _, hd in flat):
            timed = norm(Par(tuple(hd.else_ if isinstance(hd, Timeout) else hd.cont
                                   for _, hd in flat)))
        moves = NodeMoves(local, sends, receives, timed)
        self._nodes[node] = moves
        return moves

    # -- network ------------------------------------------------------------------

    def step(self, net: Network) -> list:
        """One-step reducts of a canonical network, as an ordered, duplicate-free list."""
        try:
            return self._steps[net]
        except KeyError:
            pass
        u = self.u
        nodes = net.nodes
        moves = [self.node_moves(n) for n in nodes]
        out = []

        def rebuild(repl: dict):
            return canon(Network(net.restricted, tuple(repl.get(i, n) for i, n in enumerate(nodes))))

        for i, mv in enumerate(moves):
            for label, n2 in mv.local:
                out.append((label, rebuild({i: n2})))
        for i, mi in enumerate(moves):
            for c, v, res_s in mi.sends:
                for j, mj in enumerate(moves):
                    if i == j:
                        continue
                    for c2, x, then, res_r in mj.receives:
                        if c2 != c or u.dist(nodes[i].location, nodes[j].location) > u.rng(c):
                            continue
                        u.check_message(c, v)
                        ni = Node(nodes[i].name, nodes[i].iface, res_s, nodes[i].mobility, nodes[i].location)
                        pj = norm(Par((res_r, substitute(then, x, v))))
                        nj = Node(nodes[j].name, nodes[j].iface, pj, nodes[j].mobility, nodes[j].location)
                        out.append((TAU, rebuild({i: ni, j: nj})))
        no_tau = not any(isinstance(l, Tau) for l, _ in out)
        if (no_tau or self.flags.drop_timepar_premise) and all(m.timed is not None for m in moves):
            choices = []
            for n, m in zip(nodes, moves):
                if n.mobility == "mob":
                    locs = [k for k in u.locations if u.dist(n.location, k) <= u.delta]
                else:
                    locs = [n.location]
                choices.append([Node(n.name, n.iface, m.timed, n.mobility, k) for k in locs])
            for combo in product(*choices):
                out.append((SIGMA, canon(Network(net.restricted, tuple(combo)))))
        result = _dedup(out)
        self._steps[net] = result
        return result


def _dedup(pairs):
    seen, out = set(), []
    for p in pairs:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


_ENGINES: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def engine(u: ModelUniverse, flags: EngineFlags = DEFAULT_FLAGS) -> ReductionEngine:
    per_u = _ENGINES.setdefault(u, {})
    if flags not in per_u:
        per_u[flags] = ReductionEngine(u, flags)
    return per_u[flags]


def reductions(net: Network, u: ModelUniverse, flags: EngineFlags = DEFAULT_FLAGS,
               check: bool = True) -> list:
    """All one-step reducts ``(label, network)`` of ``net``; successors are canonical."""
    if check:
        validate(net, u)
    return engine(u, flags).step(canon(net))


def barbs(net: Network) -> set:
    return {Barb(a, n.location, v) for n in net.nodes for a, v in n.iface.actuators}


def update_sensor(net: Network, s: str, h: str, v: Value, u: ModelUniverse | None = None) -> Network:
    """The environment sets sensor ``s`` to ``v`` on every node at ``h`` that has it."""
    if u is not None and v not in u.sensor_domain(s):
        raise DomainViolation(f"{v} is outside the domain of sensor {s}")
    hit = [n.location == h and n.iface.has_sensor(s) and n.iface.sensor(s) != v for n in net.nodes]
    if not any(hit):
        return canon(net)
    nodes = tuple(Node(n.name, n.iface.set_sensor(s, v), n.process, n.mobility, n.location)
                  if flag else n for n, flag in zip(net.nodes, hit))
    return canon(Network(net.restricted, nodes))


def _restricted_succ(u, flags, allowed):
    eng = engine(u, flags)

    def succ(m):
        return [(l, t) for l, t in eng.step(m) if isinstance(l, allowed)]
    return succ


def weak_barb(net: Network, b: Barb, u: ModelUniverse, budget: int = DEFAULT_BUDGET,
              flags: EngineFlags = DEFAULT_FLAGS) -> bool:
    """Whether some state reachable by tau and time steps exhibits ``b``.

    Actuator-changing reductions are not part of the search relation.
    """
    validate(net, u)
    g = explore(canon(net), _restricted_succ(u, flags, (Tau, Sigma)), budget)
    return any(b in barbs(m) for m in g.states)


def instantaneous_closure(net: Network, u: ModelUniverse, budget: int = DEFAULT_BUDGET,
                          flags: EngineFlags = DEFAULT_FLAGS) -> list:
    """All states reachable through instantaneous reductions only, in BFS order."""
    validate(net, u)
    return explore(canon(net), _restricted_succ(u, flags, (Tau, Act)), budget).states


def reduction_graph(net: Network, u: ModelUniverse, budget: int = DEFAULT_BUDGET,
                    flags: EngineFlags = DEFAULT_FLAGS, workers: int = 1):
    """Reachable reduction graph (all three kinds of reduction)."""
    validate(net, u)
    return explore(canon(net), engine(u, flags).step, budget, workers)


def is_time_blocked(net: Network, u: ModelUniverse, flags: EngineFlags = DEFAULT_FLAGS) -> bool:
    """No instantaneous reduction is possible."""
    return not any(isinstance(l, (Tau, Act)) for l, _ in engine(u, flags).step(canon(net)))
