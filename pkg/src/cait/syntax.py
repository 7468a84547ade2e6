"""Abstract syntax of networks and processes, substitution and well-formedness."""

from __future__ import annotations

from dataclasses import MISSING, dataclass, fields
from functools import lru_cache
from typing import Iterator

from .errors import IllFormed, NotTimeGuarded
from .universe import ModelUniverse, Value


_TERMS: dict = {}


def _term(cls):
    """Turn a frozen dataclass into a hash-consed term node.

    Terms are compared and hashed constantly during exploration. Every
    construction returns the shared instance for its field values, so
    equality is almost always decided by identity.
    """
    cls = dataclass(frozen=True, eq=False, repr=False)(cls)
    names = tuple(f.name for f in fields(cls))
    defaults = {f.name: f.default for f in fields(cls) if f.default is not MISSING}
    init = cls.__init__

    def __new__(klass, *args, **kw):
        if kw or len(args) < len(names):
            args = args + tuple(kw[n] if n in kw else defaults[n] for n in names[len(args):])
        key = (klass,) + args
        obj = _TERMS.get(key)
        if obj is None:
            obj = object.__new__(klass)
            init(obj, *args)
            _TERMS[key] = obj
        return obj

    def __init__(self, *args, **kw):
        pass

    def __hash__(self):
        try:
            return self.__dict__["_h"]
        except KeyError:
            h = hash((cls.__name__,) + tuple(getattr(self, n) for n in names))
            object.__setattr__(self, "_h", h)
            return h

    def __eq__(self, other):
        if self is other:
            return True
        if other.__class__ is not self.__class__ or hash(self) != hash(other):
            return False
        return all(getattr(self, n) == getattr(other, n) for n in names)

    def __repr__(self):
        args = ", ".join(repr(getattr(self, n)) for n in names)
        return f"{cls.__name__}({args})"

    def __reduce__(self):
        return (cls, tuple(getattr(self, n) for n in names))

    cls.__new__ = __new__
    cls.__init__ = __init__
    cls.__hash__ = __hash__
    cls.__eq__ = __eq__
    cls.__repr__ = __repr__
    cls.__reduce__ = __reduce__
    return cls


# -- expressions -------------------------------------------------------------

@_term
class Var:
    name: str


@_term
class Cmp:
    op: str  # "=", "<", "<="
    left: object
    right: object


@_term
class Not:
    arg: object


@_term
class And:
    left: object
    right: object


@_term
class BoolConst:
    value: bool


def eval_value(e) -> Value:
    if isinstance(e, Value):
        return e
    raise IllFormed([f"unbound variable {e.name}"])


def eval_bool(b) -> bool:
    if isinstance(b, BoolConst):
        return b.value
    if isinstance(b, Not):
        return not eval_bool(b.arg)
    if isinstance(b, And):
        return eval_bool(b.left) and eval_bool(b.right)
    l, r = eval_value(b.left), eval_value(b.right)
    if b.op == "=":
        return l == r
    # ordering is total over values; on integers it is the usual one
    if b.op == "<":
        return l.sort_key() < r.sort_key()
    if b.op == "<=":
        return l.sort_key() <= r.sort_key()
    raise ValueError(f"unknown comparison {b.op!r}")


def expr_vars(e) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Value) or isinstance(e, BoolConst):
        return set()
    if isinstance(e, Not):
        return expr_vars(e.arg)
    return expr_vars(e.left) | expr_vars(e.right)


def is_closed_expr(e) -> bool:
    return not expr_vars(e)


def subst_expr(e, x: str, v: Value):
    if isinstance(e, Var):
        return v if e.name == x else e
    if isinstance(e, (Value, BoolConst)):
        return e
    if isinstance(e, Not):
        return Not(subst_expr(e.arg, x, v))
    if isinstance(e, And):
        return And(subst_expr(e.left, x, v), subst_expr(e.right, x, v))
    return Cmp(e.op, subst_expr(e.left, x, v), subst_expr(e.right, x, v))


# -- actions -----------------------------------------------------------------

@_term
class Sleep:
    pass


@_term
class GetPos:
    var: str


@_term
class ReadSensor:
    var: str
    sensor: str


@_term
class WriteActuator:
    value: object
    actuator: str


@_term
class Send:
    channel: str
    payload: object


@_term
class Receive:
    channel: str
    var: str


SLEEP = Sleep()


def action_binder(a):
    """The value variable bound by an action, if any."""
    if isinstance(a, (GetPos, ReadSensor, Receive)):
        return a.var
    return None


# -- processes ---------------------------------------------------------------

@_term
class Nil:
    pass


@_term
class Prefix:
    action: object
    cont: object


@_term
class Timeout:
    io: object
    then: object
    else_: object


@_term
class Par:
    parts: tuple


@_term
class Cond:
    guard: object
    then: object
    else_: object


@_term
class PVar:
    name: str


@_term
class Fix:
    var: str
    body: object


NIL = Nil()


def par(*ps):
    """n-ary parallel composition, flattening nested Par and dropping nil."""
    out = []
    for p in ps:
        if isinstance(p, Par):
            out.extend(q for q in p.parts if not isinstance(q, Nil))
        elif not isinstance(p, Nil):
            out.append(p)
    if not out:
        return NIL
    if len(out) == 1:
        return out[0]
    return Par(tuple(out))


def sigma(p, n: int = 1):
    for _ in range(n):
        p = Prefix(SLEEP, p)
    return p


def guarded_loop(io, then, var: str = "_R"):
    """The derived form pi.P, i.e. fix X.timeout(pi.P, X)."""
    return Fix(var, Timeout(io, then, PVar(var)))


# -- nodes and networks ------------------------------------------------------

@_term
class Interface:
    sensors: tuple = ()    # sorted ((name, Value), ...)
    actuators: tuple = ()  # sorted ((name, Value), ...)

    @staticmethod
    def of(sensors=None, actuators=None) -> "Interface":
        return Interface(tuple(sorted((sensors or {}).items())),
                         tuple(sorted((actuators or {}).items())))

    def sensor(self, s):
        for n, v in self.sensors:
            if n == s:
                return v
        return None

    def actuator(self, a):
        for n, v in self.actuators:
            if n == a:
                return v
        return None

    def has_sensor(self, s) -> bool:
        return any(n == s for n, _ in self.sensors)

    def has_actuator(self, a) -> bool:
        return any(n == a for n, _ in self.actuators)

    def set_sensor(self, s, v) -> "Interface":
        return Interface(tuple((n, v if n == s else w) for n, w in self.sensors), self.actuators)

    def set_actuator(self, a, v) -> "Interface":
        return Interface(self.sensors, tuple((n, v if n == a else w) for n, w in self.actuators))

    @property
    def empty(self) -> bool:
        return not self.sensors and not self.actuators


EMPTY = Interface()


@_term
class Node:
    name: str
    iface: Interface
    process: object
    mobility: str  # "stat" or "mob"
    location: str


@_term
class Network:
    restricted: tuple = ()
    nodes: tuple = ()

    @staticmethod
    def of(*nodes, restricted=()) -> "Network":
        return Network(tuple(restricted), tuple(nodes))

    def node(self, name):
        for n in self.nodes:
            if n.name == name:
                return n
        raise KeyError(name)


ZERO = Network()


def compose(*nets: Network) -> Network:
    """Parallel composition of networks in prenex form.

    Restricted names must not clash with names of the other operands; the
    caller picks fresh names instead of relying on silent renaming.
    """
    restricted, nodes = [], []
    for i, m in enumerate(nets):
        others = [n for j, n in enumerate(nets) if j != i]
        for c in m.restricted:
            if any(c in channels_of_network(o) or c in o.restricted for o in others):
                raise IllFormed([f"restricted channel {c} clashes with a parallel component"])
        restricted.extend(m.restricted)
        nodes.extend(m.nodes)
    return Network(tuple(restricted), tuple(nodes))


def restrict(net: Network, *channels) -> Network:
    return Network(tuple(channels) + net.restricted, net.nodes)


# -- traversal helpers ---------------------------------------------------------

def subterms(p) -> Iterator:
    stack = [p]
    while stack:
        q = stack.pop()
        yield q
        if isinstance(q, Prefix):
            stack.append(q.cont)
        elif isinstance(q, (Timeout, Cond)):
            stack.extend((q.then, q.else_))
        elif isinstance(q, Par):
            stack.extend(q.parts)
        elif isinstance(q, Fix):
            stack.append(q.body)


def actions_of(p) -> Iterator:
    for q in subterms(p):
        if isinstance(q, Prefix):
            yield q.action
        elif isinstance(q, Timeout):
            yield q.io


def channels_of(p) -> set:
    return set(_channels(p))


@lru_cache(maxsize=None)
def _channels(p) -> frozenset:
    return frozenset(a.channel for a in actions_of(p) if isinstance(a, (Send, Receive)))


def channels_of_network(net: Network) -> set:
    out = set()
    for n in net.nodes:
        out |= _channels(n.process)
    return out


def free_channels(net: Network) -> set:
    return channels_of_network(net) - set(net.restricted)


def free_pvars(p, bound=frozenset()) -> set:
    if isinstance(p, PVar):
        return set() if p.name in bound else {p.name}
    if isinstance(p, Fix):
        return free_pvars(p.body, bound | {p.var})
    out = set()
    for q in _children(p):
        out |= free_pvars(q, bound)
    return out


def _children(p):
    if isinstance(p, Prefix):
        return (p.cont,)
    if isinstance(p, (Timeout, Cond)):
        return (p.then, p.else_)
    if isinstance(p, Par):
        return p.parts
    if isinstance(p, Fix):
        return (p.body,)
    return ()


def free_vars(p, bound=frozenset()) -> set:
    """Free value variables of a process."""
    if isinstance(p, (Nil, PVar)):
        return set()
    if isinstance(p, Prefix):
        a, inner = p.action, bound
        own = set()
        if isinstance(a, WriteActuator):
            own = expr_vars(a.value)
        b = action_binder(a)
        if b is not None:
            inner = bound | {b}
        return (own - bound) | free_vars(p.cont, inner)
    if isinstance(p, Timeout):
        own, inner = set(), bound
        if isinstance(p.io, Send):
            own = expr_vars(p.io.payload)
        else:
            inner = bound | {p.io.var}
        return (own - bound) | free_vars(p.then, inner) | free_vars(p.else_, bound)
    if isinstance(p, Cond):
        return (expr_vars(p.guard) - bound) | free_vars(p.then, bound) | free_vars(p.else_, bound)
    out = set()
    for q in _children(p):
        out |= free_vars(q, bound)
    return out


# -- substitution ----------------------------------------------------------------

def substitute(p, x: str, v: Value):
    """p{v/x}. Values are closed, so shadowing is the only capture concern."""
    if isinstance(p, (Nil, PVar)):
        return p
    if isinstance(p, Prefix):
        a = p.action
        if isinstance(a, WriteActuator):
            a = WriteActuator(subst_expr(a.value, x, v), a.actuator)
        if action_binder(a) == x:
            return Prefix(a, p.cont)
        return Prefix(a, substitute(p.cont, x, v))
    if isinstance(p, Timeout):
        io = p.io
        if isinstance(io, Send):
            io = Send(io.channel, subst_expr(io.payload, x, v))
            then = substitute(p.then, x, v)
        else:
            then = p.then if io.var == x else substitute(p.then, x, v)
        return Timeout(io, then, substitute(p.else_, x, v))
    if isinstance(p, Cond):
        return Cond(subst_expr(p.guard, x, v), substitute(p.then, x, v), substitute(p.else_, x, v))
    if isinstance(p, Par):
        return Par(tuple(substitute(q, x, v) for q in p.parts))
    if isinstance(p, Fix):
        return Fix(p.var, substitute(p.body, x, v))
    raise TypeError(p)


def subst_pvar(p, X: str, q):
    """p{q/X} for a closed q."""
    if isinstance(p, PVar):
        return q if p.name == X else p
    if isinstance(p, Nil):
        return p
    if isinstance(p, Prefix):
        return Prefix(p.action, subst_pvar(p.cont, X, q))
    if isinstance(p, Timeout):
        return Timeout(p.io, subst_pvar(p.then, X, q), subst_pvar(p.else_, X, q))
    if isinstance(p, Cond):
        return Cond(p.guard, subst_pvar(p.then, X, q), subst_pvar(p.else_, X, q))
    if isinstance(p, Par):
        return Par(tuple(subst_pvar(r, X, q) for r in p.parts))
    if isinstance(p, Fix):
        if p.var == X:
            return p
        return Fix(p.var, subst_pvar(p.body, X, q))
    raise TypeError(p)


def unfold(p: Fix):
    return subst_pvar(p.body, p.var, p)


# -- time guardedness --------------------------------------------------------------

def unguarded_pvars(p) -> set:
    """Process variables with an occurrence that is not time-guarded."""
    if isinstance(p, PVar):
        return {p.name}
    if isinstance(p, Nil):
        return set()
    if isinstance(p, Prefix):
        if isinstance(p.action, Sleep):
            return set()
        return unguarded_pvars(p.cont)
    if isinstance(p, Timeout):
        return unguarded_pvars(p.then)
    if isinstance(p, Cond):
        return unguarded_pvars(p.then) | unguarded_pvars(p.else_)
    if isinstance(p, Par):
        out = set()
        for q in p.parts:
            out |= unguarded_pvars(q)
        return out
    if isinstance(p, Fix):
        return unguarded_pvars(p.body) - {p.var}
    raise TypeError(p)


def time_guard_violations(p) -> list:
    out = []
    for q in subterms(p):
        if isinstance(q, Fix) and q.var in unguarded_pvars(q.body):
            out.append(q.var)
    return out


def is_time_guarded(p) -> bool:
    return not time_guard_violations(p)


def require_time_guarded(p):
    bad = time_guard_violations(p)
    if bad:
        raise NotTimeGuarded(f"recursion variable {bad[0]} occurs unguarded by time")


# -- well-formedness -------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self):
        return f"{self.kind}: {self.detail}"


WF_KINDS = ("DuplicateNodeName", "DuplicateActuator", "DuplicateNodeSensor",
            "UndefinedInterfaceEntry", "MobileLocationSensor")


def check_well_formed(net: Network, u: ModelUniverse) -> list:
    """The five structural well-formedness clauses; violations are returned as data."""
    out = []
    seen_names, seen_acts, seen_sens = {}, {}, {}
    for n in net.nodes:
        if n.name in seen_names:
            out.append(Violation("DuplicateNodeName", n.name))
        seen_names[n.name] = n
        for a, _ in n.iface.actuators:
            if a in seen_acts and seen_acts[a] != n.name:
                out.append(Violation("DuplicateActuator", f"{a} in {seen_acts[a]} and {n.name}"))
            seen_acts.setdefault(a, n.name)
        for s, _ in n.iface.sensors:
            if u.is_location_sensor(s):
                if n.mobility == "mob":
                    out.append(Violation("MobileLocationSensor", f"{s} in mobile node {n.name}"))
                continue
            if s in seen_sens and seen_sens[s] != n.name:
                out.append(Violation("DuplicateNodeSensor", f"{s} in {seen_sens[s]} and {n.name}"))
            seen_sens.setdefault(s, n.name)
        for a in actions_of(n.process):
            if isinstance(a, ReadSensor) and not n.iface.has_sensor(a.sensor):
                out.append(Violation("UndefinedInterfaceEntry", f"{n.name} reads undefined sensor {a.sensor}"))
            if isinstance(a, WriteActuator) and not n.iface.has_actuator(a.actuator):
                out.append(Violation("UndefinedInterfaceEntry", f"{n.name} writes undefined actuator {a.actuator}"))
    return out


def check_sanity(net: Network, u: ModelUniverse) -> list:
    """Everything besides the well-formedness clauses that execution relies on:
    closedness, time-guarded recursion and resolution against the universe."""
    out = []
    for n in net.nodes:
        if n.mobility not in ("stat", "mob"):
            out.append(Violation("BadMobility", f"{n.name}: {n.mobility!r}"))
        if n.location not in u.locations:
            out.append(Violation("DanglingName", f"{n.name} at undeclared location {n.location}"))
        for s, v in n.iface.sensors:
            if s not in u.sensors:
                out.append(Violation("DanglingName", f"undeclared sensor {s}"))
            elif v not in u.sensor_domain(s):
                out.append(Violation("DomainViolation", f"{n.name}: {s}={v} outside its domain"))
        for a, v in n.iface.actuators:
            if a not in u.actuators:
                out.append(Violation("DanglingName", f"undeclared actuator {a}"))
            elif v not in u.actuator_domain(a):
                out.append(Violation("DomainViolation", f"{n.name}: {a}={v} outside its domain"))
        fv = free_vars(n.process)
        if fv:
            out.append(Violation("FreeVariable", f"{n.name}: {', '.join(sorted(fv))}"))
        fp = free_pvars(n.process)
        if fp:
            out.append(Violation("FreeProcessVariable", f"{n.name}: {', '.join(sorted(fp))}"))
        for X in time_guard_violations(n.process):
            out.append(Violation("NotTimeGuarded", f"{n.name}: fix {X}"))
        for c in channels_of(n.process):
            if c not in u.channels:
                out.append(Violation("DanglingName", f"undeclared channel {c}"))
        for a in actions_of(n.process):
            if isinstance(a, Send) and isinstance(a.payload, Value) and a.channel in u.channels:
                if a.payload not in u.channel_domain(a.channel):
                    out.append(Violation("DomainViolation", f"{a.payload} cannot travel on {a.channel}"))
            if isinstance(a, WriteActuator) and isinstance(a.value, Value) and a.actuator in u.actuators:
                if a.value not in u.actuator_domain(a.actuator):
                    out.append(Violation("DomainViolation", f"{a.value} outside domain of {a.actuator}"))
    if len(set(net.restricted)) != len(net.restricted):
        out.append(Violation("DuplicateRestriction", ", ".join(net.restricted)))
    for c in net.restricted:
        if c not in u.channels:
            out.append(Violation("DanglingName", f"undeclared restricted channel {c}"))
    return out


def validate(net: Network, u: ModelUniverse) -> Network:
    """Raise IllFormed unless ``net`` is closed, well-formed and resolves in ``u``."""
    problems = check_well_formed(net, u) + check_sanity(net, u)
    if problems:
        raise IllFormed(problems)
    return net

