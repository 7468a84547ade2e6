"""Independent reference computations used to cross-check the library.

Each oracle deliberately avoids the algorithm it checks: longest chains are
found by enumerating paths, weak bisimilarity by a naive greatest fixpoint
over pairs, and the small example state spaces are written out by hand.
"""

from __future__ import annotations

from cait.labels import Act, Tau
from cait.reduction import reductions

# instantaneous closure of the two-writer example, enumerated by hand
TWO_WRITERS_CLOSURE = [
    "n[a=0 |> a!0.a!1 | a!1] stat @ h",
    "n[a=0 |> a!1 | a!1] stat @ h",
    "n[a=1 |> a!0.a!1] stat @ h",
    "n[a=1 |> a!1] stat @ h",
    "n[a=0 |> a!1] stat @ h",
    "n[a=1 |> nil] stat @ h",
]


def brute_longest_chain(net, u, limit: int = 200_000) -> int:
    """Longest sequence of instantaneous reductions from ``net``, by plain path
    enumeration without memoising results. Raises if a cycle is found."""
    succ_cache = {}
    work = [0]

    def succ(m):
        if m not in succ_cache:
            succ_cache[m] = [t for l, t in reductions(m, u, check=False)
                             if isinstance(l, (Tau, Act))]
        return succ_cache[m]

    def walk(m, on_path):
        work[0] += 1
        if work[0] > limit:
            raise RuntimeError("path enumeration limit reached")
        best = 0
        for t in succ(m):
            if t in on_path:
                raise RuntimeError("instantaneous cycle")
            on_path.add(t)
            best = max(best, 1 + walk(t, on_path))
            on_path.discard(t)
        return best

    return walk(net, {net})


def _closure(succ, s):
    seen, todo = {s}, [s]
    while todo:
        x = todo.pop()
        for l, t in succ[x]:
            if isinstance(l, Tau) and t not in seen:
                seen.add(t)
                todo.append(t)
    return seen


def naive_weak_bisimulation(succ: list) -> set:
    """Largest weak bisimulation on an LTS given as ``succ[s] = [(label, t)]``,
    returned as a set of state pairs."""
    n = len(succ)
    tau_star = [_closure(succ, s) for s in range(n)]
    weak = []
    for s in range(n):
        moves = {None: set(tau_star[s])}
        for x in tau_star[s]:
            for l, t in succ[x]:
                if not isinstance(l, Tau):
                    moves.setdefault(l, set()).update(tau_star[t])
        weak.append(moves)
    rel = {(p, q) for p in range(n) for q in range(n)}

    def answered(p, q):
        for l, p2 in succ[p]:
            key = None if isinstance(l, Tau) else l
            if not any((p2, q2) in rel for q2 in weak[q].get(key, ())):
                return False
        return True

    changed = True
    while changed:
        changed = False
        for p, q in list(rel):
            if not (answered(p, q) and answered(q, p)):
                rel.discard((p, q))
                rel.discard((q, p))
                changed = True
    return rel
