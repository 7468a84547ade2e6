"""Deterministic pretty-printer for the model text format.

Channel communication is always printed in the explicit ``timeout(...)``
form, so printed files never depend on the derived-form sugar.
"""

from __future__ import annotations

from ..congruence import canon
from ..syntax import (And, BoolConst, Cmp, Cond, Fix, GetPos, Network, Nil, Node, Not, PVar, Par,
                      Prefix, ReadSensor, Send, Sleep, Timeout, Var, WriteActuator)
from ..universe import INF, LOCAL, ModelUniverse, Value


def print_value(v) -> str:
    if isinstance(v, Var):
        return v.name
    if v.kind == "unit":
        return "()"
    return str(v)


def print_bexp(b, unicode=False) -> str:
    if isinstance(b, BoolConst):
        return "true" if b.value else "false"
    if isinstance(b, Not):
        inner = print_bexp(b.arg, unicode)
        if isinstance(b.arg, (And, Not)):
            inner = f"({inner})"
        return ("¬" if unicode else "!") + inner
    if isinstance(b, And):
        l, r = print_bexp(b.left, unicode), print_bexp(b.right, unicode)
        if isinstance(b.right, And):
            r = f"({r})"
        return f"{l} {'∧' if unicode else '&&'} {r}"
    op = {"<=": "≤"}.get(b.op, b.op) if unicode else b.op
    return f"{print_value(b.left)} {op} {print_value(b.right)}"


def _action(a, unicode) -> str:
    if isinstance(a, Sleep):
        return "σ" if unicode else "sigma"
    if isinstance(a, GetPos):
        return f"@({a.var})"
    if isinstance(a, ReadSensor):
        return f"{a.sensor}?({a.var})"
    if isinstance(a, WriteActuator):
        return f"{a.actuator}!{print_value(a.value)}"
    raise TypeError(a)


def _comm(io, unicode) -> str:
    if isinstance(io, Send):
        v = print_value(io.payload)
        return f"{io.channel}!⟨{v}⟩" if unicode else f"{io.channel}!<{v}>"
    return f"{io.channel}?({io.var})"


def print_process(p, unicode: bool = False) -> str:
    """Print a process; parallel composition below a prefix is parenthesised."""
    if isinstance(p, Par):
        return " | ".join(_seq(q, unicode) for q in p.parts)
    return _seq(p, unicode)


def _seq(p, unicode) -> str:
    if isinstance(p, Nil):
        return "nil"
    if isinstance(p, Par):
        return "(" + print_process(p, unicode) + ")"
    if isinstance(p, Prefix):
        return f"{_action(p.action, unicode)}.{_seq(p.cont, unicode)}"
    if isinstance(p, Timeout):
        then = _seq(p.then, unicode)
        if unicode:
            return f"⌊{_comm(p.io, unicode)}.{then}⌋{_seq(p.else_, unicode)}"
        return f"timeout({_comm(p.io, unicode)}.{then}, {print_process(p.else_, unicode)})"
    if isinstance(p, Cond):
        return f"[{print_bexp(p.guard, unicode)}] {_seq(p.then, unicode)}; {_seq(p.else_, unicode)}"
    if isinstance(p, PVar):
        return p.name
    if isinstance(p, Fix):
        return f"fix {p.var}.{_seq(p.body, unicode)}"
    raise TypeError(p)


def print_interface(iface, unicode=False) -> str:
    entries = [f"{k}={print_value(v)}" for k, v in iface.sensors + iface.actuators]
    return ", ".join(entries)


def print_node(n: Node, unicode: bool = False) -> str:
    iface = print_interface(n.iface)
    if unicode:
        i = "{" + iface + "}" if iface else "∅"
        mu = "s" if n.mobility == "stat" else "m"
        return f"{n.name}[{i} ⋈ {print_process(n.process, True)}]^{mu}_{n.location}"
    lead = f"{iface} " if iface else ""
    return f"{n.name}[{lead}|> {print_process(n.process)}] {n.mobility} @ {n.location}"


def print_network(net: Network, unicode: bool = False, canonical: bool = True) -> str:
    if canonical:
        net = canon(net)
    if not net.nodes:
        body = "0"
    else:
        sep = " |\n  " if not unicode else " | "
        body = sep.join(print_node(n, unicode) for n in net.nodes)
    if net.restricted:
        if unicode:
            return "".join(f"(ν{c})" for c in net.restricted) + f"({body})"
        inner = f"(\n  {body}\n)" if len(net.nodes) > 1 else body
        return f"new {', '.join(net.restricted)}. {inner}"
    return body


def _range(r) -> str:
    if r == LOCAL:
        return "local"
    if r == INF:
        return "inf"
    return str(int(r))


def _vset(vals) -> str:
    return "{" + ", ".join(print_value(v) for v in vals) + "}"


def print_universe(u: ModelUniverse) -> str:
    lines = ["location " + " ".join(u.locations)]
    locs = list(u.locations)
    for i, h in enumerate(locs):
        for k in locs[i + 1:]:
            lines.append(f"dist {h} {k} {u.dist(h, k)}")
    lines.append(f"delta {u.delta}")
    for c in sorted(u.channels):
        d = u.channels[c]
        lines.append(f"channel {c} range {_range(d.range)} domain {_vset(d.domain)}")
    for s in sorted(u.sensors):
        d = u.sensors[s]
        lines.append(f"sensor {s} {d.kind} domain {_vset(d.domain)}")
    for a in sorted(u.actuators):
        lines.append(f"actuator {a} domain {_vset(u.actuators[a].domain)}")
    return "\n".join(lines) + "\n"


def pretty_print(net: Network, u: ModelUniverse | None = None, unicode: bool = False) -> str:
    """Print a network, preceded by its universe declarations when one is given."""
    text = print_network(net, unicode)
    if u is None:
        return text
    return print_universe(u) + "network\n  " + text + "\n"


def value_text(v: Value) -> str:
    return print_value(v)
