"""Machine checks of the calculus' meta-theorems on concrete state spaces:
time properties, the well-timedness bound and harmony between the reduction
semantics and the intensional LTS."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx

from .congruence import canon, norm
from .errors import NotTimeGuarded, StateSpaceBudgetExceeded
from .explore import DEFAULT_BUDGET
from .labels import Act, Sigma, Tau
from .lts import lts_engine
from .reduction import DEFAULT_FLAGS, EngineFlags, engine, reduction_graph
from .syntax import (Cond, Fix, Network, Nil, PVar, Par, Prefix, Sleep, Timeout, validate)
from .universe import ModelUniverse


@dataclass
class PropertyReport:
    property: str
    states: int = 0
    counterexamples: list = field(default_factory=list)   # [(state, explanation)]
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def __bool__(self):
        return self.ok

    def summary(self) -> str:
        verdict = "ok" if self.ok else f"{len(self.counterexamples)} counterexample(s)"
        return f"{self.property}: {verdict} over {self.states} states"


# -- well-timedness bound ----------------------------------------------------------------

def pfx(p) -> int:
    """Untimed prefixes a process can fire before it must let time pass."""
    if isinstance(p, Nil):
        return 0
    if isinstance(p, Prefix):
        if isinstance(p.action, Sleep):
            return 0
        return 1 + pfx(p.cont)
    if isinstance(p, Timeout):
        return 1 + pfx(p.then)
    if isinstance(p, Cond):
        return max(pfx(p.then), pfx(p.else_))
    if isinstance(p, Par):
        return sum(pfx(q) for q in p.parts)
    if isinstance(p, Fix):
        return pfx(p.body)
    if isinstance(p, PVar):
        raise NotTimeGuarded(f"process variable {p.name} occurs without a time guard")
    raise TypeError(p)


def rd_bound(net: Network) -> int:
    """Upper bound on consecutive instantaneous reductions from ``net``."""
    return sum(pfx(n.process) for n in net.nodes)


def _instantaneous(label) -> bool:
    return isinstance(label, (Tau, Act))


def longest_chains(graph) -> tuple:
    """Longest instantaneous chain from every state of a reduction graph.

    Returns ``(lengths, cycle)``; ``cycle`` is a list of state indices when
    the instantaneous subgraph is cyclic, in which case ``lengths`` is None.
    """
    g = nx.DiGraph()
    g.add_nodes_from(range(graph.n_states))
    g.add_edges_from((s, t) for s, l, t in graph.edges if _instantaneous(l))
    try:
        order = list(nx.topological_sort(g))
    except nx.NetworkXUnfeasible:
        return None, [s for s, _ in nx.find_cycle(g)]
    length = [0] * graph.n_states
    for s in reversed(order):
        length[s] = max((length[t] + 1 for t in g.successors(s)), default=0)
    return length, None


# -- time properties -----------------------------------------------------------------------

def _time_determinism(m1: Network, m2: Network, u: ModelUniverse):
    """Why two time successors of one state violate local time determinism, or None."""
    if m1.restricted != m2.restricted:
        return "restricted channels differ"
    a = {n.name: n for n in m1.nodes}
    b = {n.name: n for n in m2.nodes}
    if a.keys() != b.keys():
        return "node names differ"
    for name in sorted(a):
        x, y = a[name], b[name]
        if x.iface != y.iface:
            return f"node {name}: interfaces differ"
        if norm(x.process) != norm(y.process):
            return f"node {name}: processes are not congruent"
        if x.mobility != y.mobility:
            return f"node {name}: mobility differs"
        if u.dist(x.location, y.location) > 2 * u.delta:
            return f"node {name}: locations {x.location} and {y.location} are more than 2δ apart"
    return None


def check_time_properties(net: Network, u: ModelUniverse, budget: int = DEFAULT_BUDGET,
                          flags: EngineFlags = DEFAULT_FLAGS) -> PropertyReport:
    """Maximal progress, patience, local time determinism and the rd bound,
    on every state reachable by reductions."""
    g = reduction_graph(net, u, budget, flags)
    report = PropertyReport("time", g.n_states)
    counts = {"maximal-progress": 0, "patience": 0, "time-determinism": 0, "well-timedness": 0}

    def bad(kind, state, why):
        counts[kind] += 1
        report.counterexamples.append((state, f"{kind}: {why}"))

    out = [[] for _ in range(g.n_states)]
    for s, l, t in g.edges:
        out[s].append((l, t))
    for s, m in enumerate(g.states):
        inst = [l for l, _ in out[s] if _instantaneous(l)]
        timed = [g.states[t] for l, t in out[s] if isinstance(l, Sigma)]
        if inst and timed:
            bad("maximal-progress", m, f"offers {inst[0].render()} and a time step")
        if not inst and not timed:
            bad("patience", m, "no instantaneous reduction and no time step")
        for m1, m2 in combinations(timed, 2):
            why = _time_determinism(m1, m2, u)
            if why:
                bad("time-determinism", m, why)
                break
    lengths, cycle = longest_chains(g)
    if cycle is not None:
        bad("well-timedness", g.states[cycle[0]], f"instantaneous cycle through {len(cycle)} states")
    else:
        worst = 0
        for s, m in enumerate(g.states):
            bound = rd_bound(m)
            worst = max(worst, lengths[s])
            if lengths[s] > bound:
                bad("well-timedness", m, f"chain of length {lengths[s]} exceeds rd = {bound}")
        report.details["longest-chain"] = worst
        report.details["rd"] = rd_bound(canon(net))
    report.details["by-property"] = counts
    return report


# -- harmony ---------------------------------------------------------------------------------

def _harmony_labels(pairs) -> set:
    return {(l, m) for l, m in pairs if isinstance(l, (Tau, Act, Sigma))}


def check_harmony(net: Network, u: ModelUniverse, budget: int = DEFAULT_BUDGET,
                  reduction_flags: EngineFlags = DEFAULT_FLAGS,
                  lts_flags: EngineFlags = DEFAULT_FLAGS) -> PropertyReport:
    """Compare reductions and intensional tau/act/sigma transitions state by state.

    Exploration follows the union of both successor relations, so the
    reachable sets of the two semantics are compared as well.
    """
    validate(net, u)
    red = engine(u, reduction_flags)
    lts = lts_engine(u, lts_flags)
    start = canon(net)
    seen = {start}
    todo = deque([start])
    report = PropertyReport("harmony")
    red_states, lts_states = {start}, {start}
    while todo:
        m = todo.popleft()
        r = set(red.step(m))
        t = _harmony_labels(lts.network_transitions(m))
        if r != t:
            only_r = sorted(l.render() for l, _ in r - t)
            only_t = sorted(l.render() for l, _ in t - r)
            report.counterexamples.append(
                (m, f"reduction only: {only_r or '-'}; transition only: {only_t or '-'}"))
        red_states.update(x for _, x in r)
        lts_states.update(x for _, x in t)
        for _, x in sorted(r | t, key=lambda p: repr(p[1])):
            if x not in seen:
                if len(seen) >= budget:
                    raise StateSpaceBudgetExceeded(budget, len(seen), len(todo))
                seen.add(x)
                todo.append(x)
    report.states = len(seen)
    report.details["same-reachable-sets"] = red_states == lts_states
    if red_states != lts_states and not report.counterexamples:
        report.counterexamples.append((start, "reachable state sets differ"))
    return report


def rd_is_finite(net: Network) -> bool:
    try:
        return rd_bound(net) < math.inf
    except NotTimeGuarded:
        return False
