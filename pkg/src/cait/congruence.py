"""Structural congruence as a canonical form.

Canonicalisation removes nil components, flattens and sorts parallel
composition, resolves closed guards, keeps restrictions outermost and drops
restricted channels nobody uses. Recursion is never unfolded here; the
transition rules unfold it where needed.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache

from .syntax import (NIL, Cond, Fix, Network, Nil, Node, Par, Prefix, Receive, Send,
                     Timeout, channels_of_network, eval_bool, expr_vars, free_pvars)
from .universe import ModelUniverse


@lru_cache(maxsize=None)
def term_key(p) -> str:
    """A total order on terms used to sort parallel components."""
    return repr(p)


_INTERN: dict = {}


def _interned(p):
    """Share one object per canonical term so equality usually stops at ``is``."""
    return _INTERN.setdefault(p, p)


@lru_cache(maxsize=None)
def norm(p):
    """Canonical representative of a process modulo the process axioms."""
    return _interned(_norm(p))


def _norm(p):
    if isinstance(p, Prefix):
        return Prefix(p.action, norm(p.cont))
    if isinstance(p, Timeout):
        return Timeout(p.io, norm(p.then), norm(p.else_))
    if isinstance(p, Cond):
        if not expr_vars(p.guard):
            return norm(p.then if eval_bool(p.guard) else p.else_)
        return Cond(p.guard, norm(p.then), norm(p.else_))
    if isinstance(p, Par):
        parts = []
        for q in p.parts:
            q = norm(q)
            if isinstance(q, Par):
                parts.extend(q.parts)
            elif not isinstance(q, Nil):
                parts.append(q)
        if not parts:
            return NIL
        if len(parts) == 1:
            return parts[0]
        return Par(tuple(sorted(parts, key=term_key)))
    if isinstance(p, Fix):
        body = norm(p.body)
        # fix X.P with X absent from P unfolds to P itself
        if p.var not in free_pvars(body):
            return body
        return Fix(p.var, body)
    return p


def components(p) -> tuple:
    """Parallel components of a canonical process."""
    if isinstance(p, Par):
        return p.parts
    if isinstance(p, Nil):
        return ()
    return (p,)


def norm_node(n: Node) -> Node:
    q = norm(n.process)
    if q is n.process:
        return n
    return Node(n.name, n.iface, q, n.mobility, n.location)


@lru_cache(maxsize=None)
def canon(net: Network) -> Network:
    """Canonical network: sorted nodes, canonical processes, used restrictions only."""
    nodes = [norm_node(n) for n in net.nodes]
    if len({n.name for n in nodes}) == len(nodes):
        nodes = tuple(sorted(nodes, key=lambda n: n.name))
    else:
        nodes = tuple(sorted(nodes, key=lambda n: (n.name, term_key(n))))
    used = channels_of_network(Network((), nodes)) if net.restricted else set()
    restricted = tuple(sorted(set(c for c in net.restricted if c in used)))
    return Network(restricted, nodes)


@dataclass(frozen=True)
class CanonicalForm:
    network: Network
    key: object

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        return isinstance(other, CanonicalForm) and self.key == other.key


def _rename_channel(p, ren: dict):
    if isinstance(p, Prefix):
        return Prefix(p.action, _rename_channel(p.cont, ren))
    if isinstance(p, Timeout):
        io = p.io
        if io.channel in ren:
            io = (Send(ren[io.channel], io.payload) if isinstance(io, Send)
                  else Receive(ren[io.channel], io.var))
        return Timeout(io, _rename_channel(p.then, ren), _rename_channel(p.else_, ren))
    if isinstance(p, Cond):
        return Cond(p.guard, _rename_channel(p.then, ren), _rename_channel(p.else_, ren))
    if isinstance(p, Par):
        return Par(tuple(_rename_channel(q, ren) for q in p.parts))
    if isinstance(p, Fix):
        return Fix(p.var, _rename_channel(p.body, ren))
    return p


def _occurrence_order(net: Network) -> list:
    order = []
    wanted = set(net.restricted)

    def walk(p):
        if isinstance(p, Timeout):
            c = p.io.channel
            if c in wanted and c not in order:
                order.append(c)
        for q in _kids(p):
            walk(q)

    for n in net.nodes:
        walk(n.process)
    return order


def _kids(p):
    if isinstance(p, Prefix):
        return (p.cont,)
    if isinstance(p, (Timeout, Cond)):
        return (p.then, p.else_)
    if isinstance(p, Par):
        return p.parts
    if isinstance(p, Fix):
        return (p.body,)
    return ()


def canonicalize(net: Network, u: ModelUniverse | None = None) -> CanonicalForm:
    """Canonical form of ``net``.

    With a universe, restricted channels are renamed to #0, #1, ... in order
    of first occurrence; each renamed channel keeps its range and domain in
    the key so that only channels with equal declarations are identified.
    Without one, restricted names are compared literally.
    """
    c = canon(net)
    if u is None or not c.restricted:
        return CanonicalForm(c, c)
    order = _occurrence_order(c)
    ren = {ch: f"#{i}" for i, ch in enumerate(order)}
    nodes = tuple(Node(n.name, n.iface, norm(_rename_channel(n.process, ren)), n.mobility, n.location)
                  for n in c.nodes)
    sig = tuple((ren[ch], u.rng(ch), u.channel_domain(ch)) for ch in order)
    return CanonicalForm(c, (sig, Network(tuple(ren[ch] for ch in order), nodes)))


def congruent(m: Network, n: Network, u: ModelUniverse | None = None) -> bool:
    return canonicalize(m, u) == canonicalize(n, u)


def structural_hash(net: Network) -> str:
    """Short stable digest of a canonical network, used in traces."""
    return hashlib.sha1(repr(canon(net)).encode()).hexdigest()[:12]
