"""Weak bisimilarity over the extensional LTS, the expansion preorder and the
observer networks that detect extensional actions through reductions."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import networkx as nx

from .congruence import canon
from .errors import ConfigViolation, UnobservableAction
from .explore import DEFAULT_BUDGET
from .labels import (TAU, Act, ActuatorEnv, RecvObs, SendObs, SensorEnv, Sigma, Tau, label_key)
from .lts import build_lts
from .reduction import Barb, barbs, engine
from .syntax import (NIL, Cmp, Cond, Interface, Network, Node, Prefix, Receive, Send, Timeout,
                     Var, WriteActuator, compose, free_channels, sigma)
from .universe import ModelUniverse, num


@dataclass
class EquivalenceVerdict:
    result: str                     # "bisimilar" or "distinct"
    witness: list = field(default_factory=list)   # [(side, label), ...]
    stats: dict = field(default_factory=dict)

    @property
    def bisimilar(self) -> bool:
        return self.result == "bisimilar"

    def __bool__(self):
        return self.bisimilar

    def witness_text(self) -> str:
        return " ; ".join(f"{side}:{lab.render()}" for side, lab in self.witness)


# -- joint LTS ----------------------------------------------------------------------

@dataclass
class Joint:
    """Disjoint union of two extensional LTSs."""

    succ: list          # per state: [(label, target)]
    init_left: int
    init_right: int
    n_left: int
    states: list


def joint_lts(m: Network, n: Network, u: ModelUniverse, budget: int = DEFAULT_BUDGET,
              u_right: ModelUniverse | None = None) -> Joint:
    u2 = u_right or u
    if u2 is not u:
        chans = free_channels(canon(m)) | free_channels(canon(n))
        if not u.observationally_compatible(u2, chans):
            raise ConfigViolation("the two universes disagree on something an observer can see")
    left = build_lts(m, u, "extensional", budget)
    right = build_lts(n, u2, "extensional", max(1, budget - left.n_states))
    off = left.n_states
    succ = [[] for _ in range(left.n_states + right.n_states)]
    for s, l, t in left.edges:
        succ[s].append((l, t))
    for s, l, t in right.edges:
        succ[s + off].append((l, t + off))
    return Joint(succ, 0, off, off, left.states + right.states)


# -- weak partition refinement -----------------------------------------------------------

class WeakRefiner:
    """Coarsest weak bisimulation by signature refinement over the tau-SCC DAG."""

    def __init__(self, succ: list):
        self.succ = succ
        n = len(succ)
        g = nx.DiGraph()
        g.add_nodes_from(range(n))
        for s, out in enumerate(succ):
            for l, t in out:
                if isinstance(l, Tau) and t != s:
                    g.add_edge(s, t)
        cg = nx.condensation(g)
        self.scc_of = [cg.graph["mapping"][s] for s in range(n)]
        self.members = [sorted(cg.nodes[c]["members"]) for c in range(cg.number_of_nodes())]
        self.scc_succ = [sorted(cg.successors(c)) for c in range(cg.number_of_nodes())]
        # successors before predecessors
        self.order = list(reversed(list(nx.topological_sort(cg))))
        self.visible = [[(l, t) for l, t in out if not isinstance(l, Tau)] for out in succ]
        # labels become small integers; id 0 stands for the reflexive tau closure
        ids = {}
        for out in self.visible:
            for l, _ in out:
                if l not in ids:
                    ids[l] = len(ids) + 1
        self._coded = [[(ids[l], t) for l, t in out] for out in self.visible]
        self.history = []

    def signatures(self, block: list) -> list:
        """Weak signature of every state, with (label, block) pairs packed into ints."""
        n = len(self.succ)
        reach = {}
        for c in self.order:
            r = {block[s] for s in self.members[c]}
            for d in self.scc_succ[c]:
                r |= reach[d]
            reach[c] = frozenset(r)
        scc_of = self.scc_of
        acts = {}
        for c in self.order:
            a = set()
            for s in self.members[c]:
                for lid, t in self._coded[s]:
                    base = lid * n
                    a.update(base + b for b in reach[scc_of[t]])
            succs = self.scc_succ[c]
            if len(succs) == 1 and not a:
                acts[c] = acts[succs[0]]
                continue
            for d in succs:
                a |= acts[d]
            acts[c] = frozenset(a)
        sig_of = {c: acts[c] | reach[c] for c in acts}
        return [sig_of[scc_of[s]] for s in range(n)]

    def run(self) -> list:
        n = len(self.succ)
        block = [0] * n
        self.history = [block]
        count = 1
        while True:
            sigs = self.signatures(block)
            ids, new = {}, []
            for s in range(n):
                key = (block[s], sigs[s])
                if key not in ids:
                    ids[key] = len(ids)
                new.append(ids[key])
            block = new
            self.history.append(block)
            if len(ids) == count:
                return block
            count = len(ids)

    def separation(self, s: int, t: int) -> int:
        """First refinement round in which ``s`` and ``t`` fall apart (0 = never)."""
        for r, blk in enumerate(self.history):
            if blk[s] != blk[t]:
                return r
        return 0

    # -- witness extraction ------------------------------------------------------------

    def tau_closure(self, s: int) -> list:
        seen, out, todo = {s}, [s], [s]
        while todo:
            x = todo.pop()
            for l, t in self.succ[x]:
                if isinstance(l, Tau) and t not in seen:
                    seen.add(t)
                    out.append(t)
                    todo.append(t)
        return out

    def weak_moves(self, s: int) -> dict:
        """label -> sorted list of weak targets; tau maps to the reflexive closure."""
        out = {}
        closure = self.tau_closure(s)
        out[None] = sorted(closure)
        for x in closure:
            for l, t in self.visible[x]:
                out.setdefault(l, set()).update(self.tau_closure(t))
        return {k: sorted(v) for k, v in out.items()}

    def witness(self, s: int, t: int, limit: int = 64) -> list:
        """Replay the bisimulation game from (s, t) as a list of (side, label).

        The attacker plays a weak move the other side cannot match within the
        previous refinement round; the defender answers with the target that
        stays together longest. A final move with no answer ends the game.
        """
        steps = []
        while len(steps) < limit:
            r = self.separation(s, t)
            if r == 0:
                break
            prev = self.history[r - 1]
            best = None
            for side, a, b in (("left", s, t), ("right", t, s)):
                ma, mb = self.weak_moves(a), self.weak_moves(b)
                for lab in sorted(ma, key=lambda x: () if x is None else (1,) + label_key(x)):
                    answers = mb.get(lab, [])
                    for a2 in ma[lab]:
                        if any(prev[a2] == prev[b2] for b2 in answers):
                            continue
                        if answers:
                            b2 = max(answers, key=lambda y: (self.separation(a2, y), -y))
                            depth = self.separation(a2, b2)
                        else:
                            b2, depth = None, -1
                        if best is None or depth < best[0]:
                            best = (depth, side, lab, a2, b2)
            if best is None:
                break
            _, side, lab, a2, b2 = best
            steps.append((side, TAU if lab is None else lab))
            if b2 is None:
                break
            s, t = (a2, b2) if side == "left" else (b2, a2)
        return steps


def weak_bisimilar(m: Network, n: Network, u: ModelUniverse, budget: int = DEFAULT_BUDGET,
                   u_right: ModelUniverse | None = None) -> EquivalenceVerdict:
    """Decide M ≈ N over the extensional LTS; on failure return a distinguishing game."""
    j = joint_lts(m, n, u, budget, u_right)
    ref = WeakRefiner(j.succ)
    block = ref.run()
    same = block[j.init_left] == block[j.init_right]
    stats = {"states": len(j.succ), "left_states": j.n_left,
             "right_states": len(j.succ) - j.n_left,
             "blocks": len(set(block)), "rounds": len(ref.history) - 1,
             "left_blocks": len(set(block[:j.n_left])),
             "right_blocks": len(set(block[j.n_left:]))}
    if same:
        return EquivalenceVerdict("bisimilar", [], stats)
    return EquivalenceVerdict("distinct", ref.witness(j.init_left, j.init_right), stats)


# -- expansion --------------------------------------------------------------------------

def expands(big: Network, small: Network, u: ModelUniverse, budget: int = DEFAULT_BUDGET,
            u_small: ModelUniverse | None = None) -> bool:
    """big ≳ small: bisimilar, with ``big`` doing at least as many tau moves.

    big -μ-> p' is answered by small -μ-> q' (or by standing still when μ is
    tau); small -μ-> q' is answered by big =μ=> p' with at least one tau when
    μ is tau.
    """
    j = joint_lts(big, small, u, budget, u_small)
    ref = WeakRefiner(j.succ)
    block = ref.run()
    nb = j.n_left
    if block[j.init_left] != block[j.init_right]:
        return False
    big_states = range(nb)
    small_states = range(nb, len(j.succ))
    # weak moves of big states: tau+ for tau, tau* a tau* otherwise
    weak = {}
    for p in big_states:
        moves = {}
        plus = set()
        for l, t in j.succ[p]:
            if isinstance(l, Tau):
                plus.update(ref.tau_closure(t))
        moves[None] = plus
        for x in ref.tau_closure(p):
            for l, t in ref.visible[x]:
                moves.setdefault(l, set()).update(ref.tau_closure(t))
        weak[p] = moves
    rel = {(p, q) for p in big_states for q in small_states if block[p] == block[q]}
    changed = True
    while changed:
        changed = False
        for p, q in sorted(rel):
            ok = True
            for l, p2 in j.succ[p]:
                if any(l2 == l and (p2, q2) in rel for l2, q2 in j.succ[q]):
                    continue
                if isinstance(l, Tau) and (p2, q) in rel:
                    continue
                ok = False
                break
            if ok:
                for l, q2 in j.succ[q]:
                    targets = weak[p].get(None if isinstance(l, Tau) else l, ())
                    if not any((p2, q2) in rel for p2 in targets):
                        ok = False
                        break
            if not ok:
                rel.discard((p, q))
                changed = True
    return (j.init_left, j.init_right) in rel


def expansion(m: Network, n: Network, u: ModelUniverse, budget: int = DEFAULT_BUDGET,
              u_right: ModelUniverse | None = None) -> bool:
    """M ≲ N, i.e. N expands M."""
    return expands(n, m, u, budget, u_right)


# -- observers -----------------------------------------------------------------------------

@dataclass
class ObserverTest:
    """A stationary single-node test together with what it needs to run."""

    action: object
    node: Node
    flag: Barb
    allowed: tuple      # reduction labels the search may use
    required: object    # a reduction label that must occur, or None
    actuator: str

    @property
    def network(self) -> Network:
        return Network((), (self.node,))

    def universe(self, u: ModelUniverse) -> ModelUniverse:
        return u.with_actuator(self.actuator, (num(0), num(1)))


def _fresh(base: str, taken: set) -> str:
    if base not in taken:
        return base
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def build_observer(action, u: ModelUniverse, net: Network | None = None,
                   location: str | None = None) -> ObserverTest:
    """The observer network that detects ``action`` through reductions.

    ``action`` is an Act, SendObs or RecvObs label, or Sigma for detecting a
    single time step. Physical actions have no observer.
    """
    if isinstance(action, (SensorEnv, ActuatorEnv)):
        raise UnobservableAction(f"no network context can observe {action.render()}")
    taken_nodes = {n.name for n in net.nodes} if net is not None else set()
    taken = set(u.actuators) | set(u.sensors) | set(u.channels)
    b = _fresh("obs", taken)
    name = _fresh("tester", taken_nodes)
    zero, one = num(0), num(1)
    iface = Interface.of(actuators={b: zero})
    b1_b0 = Prefix(WriteActuator(one, b), Prefix(WriteActuator(zero, b), NIL))
    if isinstance(action, Act):
        k = location or u.locations[0]
        node = Node(name, iface, Prefix(WriteActuator(one, b), NIL), "stat", k)
        return ObserverTest(action, node, Barb(b, k, zero), (Tau, Act), action, b)
    if isinstance(action, Tau):
        k = location or u.locations[0]
        node = Node(name, iface, Prefix(WriteActuator(one, b), NIL), "stat", k)
        return ObserverTest(action, node, Barb(b, k, zero), (Tau,), None, b)
    if isinstance(action, SendObs):
        k = action.location
        body = Timeout(Receive(action.channel, "x"),
                       Cond(Cmp("=", Var("x"), action.value), b1_b0, NIL), NIL)
        node = Node(name, iface, body, "stat", k)
        return ObserverTest(action, node, Barb(b, k, one), (Tau, Act), Act(b), b)
    if isinstance(action, RecvObs):
        k = action.location
        body = Timeout(Send(action.channel, action.value), b1_b0, NIL)
        node = Node(name, iface, body, "stat", k)
        return ObserverTest(action, node, Barb(b, k, one), (Tau, Act), Act(b), b)
    if isinstance(action, Sigma):
        k = location or u.locations[0]
        node = Node(name, iface, sigma(b1_b0), "stat", k)
        return ObserverTest(action, node, Barb(b, k, one), (Tau, Sigma, Act), None, b)
    raise UnobservableAction(f"no observer for {action!r}")


def observes(test: ObserverTest, net: Network, u: ModelUniverse,
             budget: int = DEFAULT_BUDGET) -> bool:
    """Run ``net | test`` and report whether the test's flag barb can be raised.

    The search follows only the test's allowed reductions; actuator changes
    are allowed only on the required actuator and on the test's own flag.
    """
    uu = test.universe(u)
    eng = engine(uu)
    start = canon(compose(net, test.network))
    own = test.actuator
    req = test.required

    def ok_label(l):
        if not isinstance(l, test.allowed):
            return False
        if isinstance(l, Act):
            return l.actuator == own or l == req
        return True

    start_state = (start, req is None)
    seen = {start_state}
    todo = deque([start_state])
    while todo:
        m, done = todo.popleft()
        if done and test.flag in barbs(m):
            return True
        for l, m2 in eng.step(m):
            if not ok_label(l):
                continue
            d2 = done or (l == req)
            if isinstance(req, Act) and req.actuator != own and isinstance(l, Act) and l.actuator == own:
                continue
            st = (m2, d2)
            if st not in seen:
                if len(seen) >= budget:
                    from .errors import StateSpaceBudgetExceeded
                    raise StateSpaceBudgetExceeded(budget, len(seen))
                seen.add(st)
                todo.append(st)
    return False
