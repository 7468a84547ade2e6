"""Labelled transition semantics: intensional rules for processes and networks
and the extensional rules that add the environment's point of view."""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from itertools import product

from .congruence import canon, norm
from .explore import DEFAULT_BUDGET, Graph, explore
from .labels import (SIGMA, TAU, Act, ActuatorEnv, ActuatorWrite, AtLoc, In, Out, RecvAt,
                     RecvObs, SendAt, SendObs, SensorEnv, SensorRead, Sigma, Tau)
from .reduction import DEFAULT_FLAGS, EngineFlags, barbs, update_sensor
from .syntax import (Cond, Fix, GetPos, Network, Nil, Node, Par, PVar, Prefix, ReadSensor,
                     Send, Sleep, Timeout, WriteActuator, eval_bool, eval_value, expr_vars,
                     substitute, unfold, validate)
from .universe import LOCAL, ModelUniverse, loc


class LtsEngine:
    def __init__(self, u: ModelUniverse, flags: EngineFlags = DEFAULT_FLAGS):
        self.u = u
        self.flags = flags
        self._proc = {}
        self._node = {}
        self._net = {}
        self._ext = {}

    # -- processes -------------------------------------------------------------

    def process_transitions(self, p) -> list:
        try:
            return self._proc[p]
        except KeyError:
            pass
        out = self._derive(p)
        self._proc[p] = out
        return out

    def _derive(self, p) -> list:
        u = self.u
        if isinstance(p, Nil):
            return [(SIGMA, p)]
        if isinstance(p, Prefix):
            a = p.action
            if isinstance(a, Sleep):
                return [(SIGMA, p.cont)]
            if isinstance(a, GetPos):
                return [(AtLoc(h), substitute(p.cont, a.var, loc(h))) for h in u.locations]
            if isinstance(a, ReadSensor):
                return [(SensorRead(a.sensor, v), substitute(p.cont, a.var, v))
                        for v in u.sensor_domain(a.sensor)]
            if isinstance(a, WriteActuator):
                v = eval_value(a.value)
                u.check_actuator_value(a.actuator, v)
                return [(ActuatorWrite(a.actuator, v), p.cont)]
            raise TypeError(a)
        if isinstance(p, Timeout):
            io = p.io
            if isinstance(io, Send):
                v = eval_value(io.payload)
                u.check_message(io.channel, v)
                return [(Out(io.channel, v), p.then), (SIGMA, p.else_)]
            return ([(In(io.channel, v), substitute(p.then, io.var, v))
                     for v in u.channel_domain(io.channel)] + [(SIGMA, p.else_)])
        if isinstance(p, Cond):
            if expr_vars(p.guard):
                return []
            return self.process_transitions(p.then if eval_bool(p.guard) else p.else_)
        if isinstance(p, PVar):
            return []
        if isinstance(p, Fix):
            if self.flags.drop_fix:
                return []
            return self.process_transitions(unfold(p))
        if isinstance(p, Par):
            return self._derive_par(p.parts)
        raise TypeError(p)

    def _derive_par(self, parts) -> list:
        trans = [self.process_transitions(q) for q in parts]
        out = []

        def replaced(repl):
            return Par(tuple(repl.get(i, q) for i, q in enumerate(parts)))

        for i, ts in enumerate(trans):
            for lab, q2 in ts:
                if not isinstance(lab, Sigma):
                    out.append((lab, replaced({i: q2})))
        for i, ts in enumerate(trans):
            for lab, q2 in ts:
                if not isinstance(lab, Out) or self.u.rng(lab.channel) != LOCAL:
                    continue
                for j, tj in enumerate(trans):
                    if j == i:
                        continue
                    for lab2, r2 in tj:
                        if isinstance(lab2, In) and lab2.channel == lab.channel and lab2.value == lab.value:
                            out.append((TAU, replaced({i: q2, j: r2})))
        if not any(isinstance(l, Tau) for l, _ in out):
            sig = [[q2 for l, q2 in ts if isinstance(l, Sigma)] for ts in trans]
            if all(sig):
                for combo in product(*sig):
                    out.append((SIGMA, Par(tuple(combo))))
        return out

    # -- nodes -------------------------------------------------------------------

    def node_transitions(self, n: Node) -> list:
        try:
            return self._node[n]
        except KeyError:
            pass
        u, I, h = self.u, n.iface, n.location
        out = []

        def mk(p, iface=I, where=h):
            return Node(n.name, iface, norm(p), n.mobility, where)

        ticks = []
        for lab, p2 in self.process_transitions(n.process):
            if isinstance(lab, AtLoc):
                if lab.location == h:
                    out.append((TAU, mk(p2)))
            elif isinstance(lab, SensorRead):
                if I.sensor(lab.sensor) == lab.value:
                    out.append((TAU, mk(p2)))
            elif isinstance(lab, ActuatorWrite):
                cur = I.actuator(lab.actuator)
                if cur is None:
                    continue
                if cur == lab.value:
                    out.append((TAU, mk(p2)))
                else:
                    out.append((Act(lab.actuator), mk(p2, I.set_actuator(lab.actuator, lab.value))))
            elif isinstance(lab, Tau):
                out.append((TAU, mk(p2)))
            elif isinstance(lab, Out):
                if u.rng(lab.channel) >= 0:
                    out.append((SendAt(lab.channel, lab.value, h), mk(p2)))
            elif isinstance(lab, In):
                if u.rng(lab.channel) >= 0:
                    out.append((RecvAt(lab.channel, lab.value, h), mk(p2)))
            elif isinstance(lab, Sigma):
                ticks.append(p2)
        if not any(isinstance(l, Tau) for l, _ in out):
            for p2 in ticks:
                if n.mobility == "mob":
                    for k in u.locations:
                        if u.dist(h, k) <= u.delta:
                            out.append((SIGMA, mk(p2, where=k)))
                else:
                    out.append((SIGMA, mk(p2)))
        out = _dedup(out)
        self._node[n] = out
        return out

    # -- networks ------------------------------------------------------------------

    def network_transitions(self, net: Network) -> list:
        try:
            return self._net[net]
        except KeyError:
            pass
        u = self.u
        nodes = net.nodes
        trans = [self.node_transitions(n) for n in nodes]
        out = []

        def rebuild(repl):
            return canon(Network(net.restricted, tuple(repl.get(i, n) for i, n in enumerate(nodes))))

        for i, ts in enumerate(trans):
            for lab, n2 in ts:
                if isinstance(lab, Sigma):
                    continue
                if isinstance(lab, (SendAt, RecvAt)) and lab.channel in net.restricted:
                    continue
                out.append((lab, rebuild({i: n2})))
        for i, ts in enumerate(trans):
            for lab, n2 in ts:
                if not isinstance(lab, SendAt):
                    continue
                for j, tj in enumerate(trans):
                    if j == i:
                        continue
                    for lab2, m2 in tj:
                        if (isinstance(lab2, RecvAt) and lab2.channel == lab.channel
                                and lab2.value == lab.value
                                and u.dist(lab2.location, lab.location) <= u.rng(lab.channel)):
                            out.append((TAU, rebuild({i: n2, j: m2})))
        no_tau = not any(isinstance(l, Tau) for l, _ in out)
        if no_tau or self.flags.drop_timepar_premise:
            ticks = [[n2 for l, n2 in ts if isinstance(l, Sigma)] for ts in trans]
            if all(ticks):
                for combo in product(*ticks):
                    out.append((SIGMA, canon(Network(net.restricted, tuple(combo)))))
        out = _dedup(out)
        self._net[net] = out
        return out

    def extensional_transitions(self, net: Network) -> list:
        try:
            return self._ext[net]
        except KeyError:
            pass
        u = self.u
        out = []
        for lab, m2 in self.network_transitions(net):
            if isinstance(lab, SendAt):
                for k in u.locations:
                    if u.dist(lab.location, k) <= u.rng(lab.channel):
                        out.append((SendObs(lab.channel, lab.value, k), m2))
            elif isinstance(lab, RecvAt):
                for k in u.locations:
                    if u.dist(k, lab.location) <= u.rng(lab.channel):
                        out.append((RecvObs(lab.channel, lab.value, k), m2))
            else:
                out.append((lab, m2))
        for s in sorted(u.sensors):
            for h in u.locations:
                for v in u.sensor_domain(s):
                    out.append((SensorEnv(s, h, v), update_sensor(net, s, h, v)))
        for b in sorted(barbs(net)):
            out.append((ActuatorEnv(b.actuator, b.location, b.value), net))
        out = _dedup(out)
        self._ext[net] = out
        return out


def _dedup(pairs):
    seen, out = set(), []
    for p in pairs:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


_ENGINES: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def lts_engine(u: ModelUniverse, flags: EngineFlags = DEFAULT_FLAGS) -> LtsEngine:
    per_u = _ENGINES.setdefault(u, {})
    if flags not in per_u:
        per_u[flags] = LtsEngine(u, flags)
    return per_u[flags]


def process_transitions(p, u: ModelUniverse, flags: EngineFlags = DEFAULT_FLAGS) -> list:
    return lts_engine(u, flags).process_transitions(p)


def network_transitions(net: Network, u: ModelUniverse, flags: EngineFlags = DEFAULT_FLAGS,
                        check: bool = True) -> list:
    if check:
        validate(net, u)
    return lts_engine(u, flags).network_transitions(canon(net))


def extensional_transitions(net: Network, u: ModelUniverse, flags: EngineFlags = DEFAULT_FLAGS,
                            check: bool = True) -> list:
    if check:
        validate(net, u)
    return lts_engine(u, flags).extensional_transitions(canon(net))


@dataclass
class TransitionSystem:
    graph: Graph
    mode: str
    universe: ModelUniverse

    @property
    def states(self):
        return self.graph.states

    @property
    def edges(self):
        return self.graph.edges

    @property
    def initial(self):
        return self.graph.initial

    @property
    def n_states(self):
        return self.graph.n_states

    @property
    def n_edges(self):
        return self.graph.n_edges

    def export_graph(self) -> str:
        lines = [f"states {self.n_states} init {self.initial}"]
        lines += [f"{s}\t{l.render()}\t{t}" for s, l, t in self.edges]
        return "\n".join(lines) + "\n"

    def export_dot(self, label_states: bool = False) -> str:
        from .frontend.printer import print_network
        lines = ["digraph lts {", "  rankdir=LR;", "  node [shape=circle];"]
        for i, m in enumerate(self.states):
            text = print_network(m).replace('"', '\\"').replace("\n", "\\l") if label_states else str(i)
            shape = ', shape=doublecircle' if i == self.initial else ''
            lines.append(f'  s{i} [label="{text}"{shape}];')
        for s, l, t in self.edges:
            style = ", style=dotted" if s == t else ""
            lines.append(f'  s{s} -> s{t} [label="{l.render()}"{style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_lts(net: Network, u: ModelUniverse, mode: str = "extensional",
              budget: int = DEFAULT_BUDGET, flags: EngineFlags = DEFAULT_FLAGS,
              workers: int = 1) -> TransitionSystem:
    if mode not in ("intensional", "extensional"):
        raise ValueError(f"unknown mode {mode!r}")
    validate(net, u)
    eng = lts_engine(u, flags)
    succ = eng.network_transitions if mode == "intensional" else eng.extensional_transitions
    return TransitionSystem(explore(canon(net), succ, budget, workers), mode, u)
