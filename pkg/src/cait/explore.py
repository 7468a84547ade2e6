"""Breadth-first state-space exploration shared by the reduction and LTS engines."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Hashable

from .errors import StateSpaceBudgetExceeded

DEFAULT_BUDGET = 200_000


@dataclass
class Graph:
    """States numbered in BFS order with labelled edges ``(src, label, dst)``."""

    states: list
    edges: list
    initial: int = 0
    index: dict = field(default_factory=dict)

    def successors(self) -> list:
        out = [[] for _ in self.states]
        for s, l, t in self.edges:
            out[s].append((l, t))
        return out

    @property
    def n_states(self):
        return len(self.states)

    @property
    def n_edges(self):
        return len(self.edges)


def explore(initial: Hashable, succ: Callable, budget: int = DEFAULT_BUDGET,
            workers: int = 1) -> Graph:
    """Explore everything reachable from ``initial``.

    ``succ(state)`` returns an ordered list of ``(label, state)``. Numbering is
    deterministic: states are discovered layer by layer and, within a layer,
    in the order of their parents and of ``succ``'s output. With ``workers > 1``
    the successor computations of a layer run on a thread pool; the merge is
    sequential so the result is identical to the single-threaded run.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    index = {initial: 0}
    states = [initial]
    edges = []
    layer = [0]
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while layer:
            if pool is not None:
                results = list(pool.map(lambda i: succ(states[i]), layer))
            else:
                results = [succ(states[i]) for i in layer]
            nxt = []
            for pos, (src, out) in enumerate(zip(layer, results)):
                for label, t in out:
                    j = index.get(t)
                    if j is None:
                        if len(states) >= budget:
                            frontier = [states[i] for i in layer[pos:]] + [states[i] for i in nxt]
                            raise StateSpaceBudgetExceeded(budget, len(states), frontier)
                        j = len(states)
                        index[t] = j
                        states.append(t)
                        nxt.append(j)
                    edges.append((src, label, j))
            layer = nxt
    finally:
        if pool is not None:
            pool.shutdown()
    return Graph(states, edges, 0, index)


def reachable(initial: Hashable, succ: Callable, budget: int = DEFAULT_BUDGET) -> list:
    return explore(initial, succ, budget).states
