"""Hand-written tokenizer and recursive-descent parser for model files.

A model file is a sequence of declarations followed by ``network``::

    location loc1 loc2
    dist loc1 loc2 1
    delta 1
    channel c range inf domain {on, off}
    sensor temp location domain {15, 20, 25}
    actuator light domain {on, off}
    proc Blink = fix X.light!on.sigma.light!off.sigma.X
    network
      n1[light=off |> Blink] stat @ loc1

``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError
from ..syntax import (NIL, And, BoolConst, Cmp, Cond, Fix, GetPos, Interface, Network, Node,
                      Not, PVar, Par, Prefix, ReadSensor, Receive, Send, Timeout, Var,
                      WriteActuator, ZERO, compose, free_pvars, restrict, sigma)
from ..universe import (INF, LOCAL, UNIT, ActuatorDecl, ChannelDecl, ModelUniverse, SensorDecl,
                        Value, atom, boolean, loc, make_universe, num)

KEYWORDS = {"nil", "sigma", "timeout", "fix", "new", "true", "false", "stat", "mob",
            "location", "dist", "delta", "channel", "sensor", "actuator", "proc", "net",
            "network", "range", "domain", "local", "inf", "locations", "node"}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>-?\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>\|>|<=|&&|[\[\](){},.;|!?@=<>^:])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    out, line, start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind != "ws":
            out.append(Token(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


def _is_pvar_name(name: str) -> bool:
    return name[0].isupper() or name[0] == "_"


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.locations: list = []
        self.dists: dict = {}
        self.delta = 0
        self.channels: dict = {}
        self.sensors: dict = {}
        self.actuators: dict = {}
        self.procs: dict = {}
        self.nets: dict = {}
        self.fresh = 0
        self.universe: ModelUniverse | None = None

    # -- token helpers -------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def at(self, text) -> bool:
        return self.tok.text == text and self.tok.kind in ("sym", "ident")

    def accept(self, text) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        t = self.tok
        self.i += 1
        return t

    def ident(self, what="identifier") -> str:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            raise self.error(f"expected {what}, found {t.text or 'end of input'!r}")
        self.i += 1
        return t.text

    def number(self) -> int:
        t = self.tok
        if t.kind != "num":
            raise self.error(f"expected a number, found {t.text!r}")
        self.i += 1
        return int(t.text)

    # -- values ----------------------------------------------------------------

    def literal(self) -> Value:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return num(int(t.text))
        if self.accept("("):
            self.expect(")")
            return UNIT
        if self.accept("true"):
            return boolean(True)
        if self.accept("false"):
            return boolean(False)
        name = self.ident("a value")
        return loc(name) if name in self.locations else atom(name)

    def value_expr(self, scope):
        t = self.tok
        if t.kind == "ident" and t.text in scope:
            self.i += 1
            return Var(t.text)
        return self.literal()

    def value_set(self) -> tuple:
        if self.accept("locations"):
            return tuple(loc(h) for h in self.locations)
        self.expect("{")
        vals = []
        if not self.at("}"):
            vals.append(self.literal())
            while self.accept(","):
                vals.append(self.literal())
        self.expect("}")
        return tuple(vals)

    # -- declarations ------------------------------------------------------------

    def parse_declarations(self):
        while True:
            t = self.tok
            if t.kind == "eof" or self.at("network"):
                return
            if self.accept("location"):
                names = [self.ident("a location name")]
                while self.tok.kind == "ident" and self.tok.text not in KEYWORDS:
                    names.append(self.ident())
                for h in names:
                    if h in self.locations:
                        raise self.error(f"location {h} declared twice", t)
                    self.locations.append(h)
            elif self.accept("dist"):
                h, k = self.ident("a location"), self.ident("a location")
                d = self.number()
                if d < 0:
                    raise self.error("distances are natural numbers", t)
                self.dists[h, k] = d
            elif self.accept("delta"):
                self.delta = self.number()
            elif self.accept("channel"):
                c = self.ident("a channel name")
                self.expect("range")
                if self.accept("local"):
                    r = LOCAL
                elif self.accept("inf"):
                    r = INF
                else:
                    r = self.number()
                self.expect("domain")
                self.channels[c] = ChannelDecl(c, r, self.value_set())
            elif self.accept("sensor"):
                s = self.ident("a sensor name")
                kind = "node"
                if self.accept("location"):
                    kind = "location"
                else:
                    self.accept("node")
                self.expect("domain")
                self.sensors[s] = SensorDecl(s, self.value_set(), kind)
            elif self.accept("actuator"):
                a = self.ident("an actuator name")
                self.expect("domain")
                self.actuators[a] = ActuatorDecl(a, self.value_set())
            elif self.accept("proc"):
                name = self.tok
                n = self.ident("a process name")
                if not _is_pvar_name(n):
                    raise self.error("process names start with an upper-case letter", name)
                self.expect("=")
                body = self.proc(frozenset(), frozenset(), current=n)
                if _mentions(body, n):
                    body = Fix(n, body)
                self.procs[n] = body
            elif self.accept("net"):
                n = self.ident("a network name")
                self.expect("=")
                self._ensure_universe()
                self.nets[n] = self.network()
            else:
                raise self.error(f"unexpected {t.text!r} in declarations")

    def _ensure_universe(self):
        if self.universe is None:
            self.universe = make_universe(self.locations, self.dists,
                                          self.channels.values(), self.sensors.values(),
                                          self.actuators.values(), self.delta)
        return self.universe

    # -- processes ------------------------------------------------------------------

    def proc(self, scope, pvars, current=None):
        parts = [self.seq(scope, pvars, current)]
        while self.accept("|"):
            parts.append(self.seq(scope, pvars, current))
        return parts[0] if len(parts) == 1 else Par(tuple(parts))

    def cont(self, scope, pvars, current):
        """Optional ``.P`` continuation; a bare action continues as nil."""
        if self.accept("."):
            return self.seq(scope, pvars, current)
        return NIL

    def seq(self, scope, pvars, current=None):
        t = self.tok
        if self.accept("nil"):
            return NIL
        if self.accept("("):
            p = self.proc(scope, pvars, current)
            self.expect(")")
            return p
        if self.accept("sigma"):
            n = 1
            if self.accept("^"):
                n = self.number()
            self.expect(".")
            return sigma(self.seq(scope, pvars, current), n)
        if self.accept("@"):
            self.expect("(")
            x = self.ident("a variable")
            self.expect(")")
            return Prefix(GetPos(x), self.cont(scope | {x}, pvars, current))
        if self.accept("fix"):
            X = self.ident("a process variable")
            if not _is_pvar_name(X):
                raise self.error("process variables start with an upper-case letter or _", t)
            self.expect(".")
            return Fix(X, self.seq(scope, pvars | {X}, current))
        if self.accept("timeout"):
            self.expect("(")
            io, then = self.comm(scope, pvars, current)
            self.expect(",")
            else_ = self.proc(scope, pvars, current)
            self.expect(")")
            return Timeout(io, then, else_)
        if self.accept("["):
            g = self.bexp(scope)
            self.expect("]")
            then = self.seq(scope, pvars, current)
            self.expect(";")
            return Cond(g, then, self.seq(scope, pvars, current))
        if t.kind == "ident" and _is_pvar_name(t.text):
            self.i += 1
            if t.text in pvars or t.text == current:
                return PVar(t.text)
            if t.text in self.procs:
                return self.procs[t.text]
            # free here; bound by an enclosing fix where the macro is used
            return PVar(t.text)
        if t.kind == "ident" and t.text not in KEYWORDS:
            name = t.text
            nxt = self.peek()
            if nxt.text == "?":
                if name in self.sensors:
                    self.i += 2
                    self.expect("(")
                    x = self.ident("a variable")
                    self.expect(")")
                    return Prefix(ReadSensor(x, name), self.cont(scope | {x}, pvars, current))
                return self._derived(scope, pvars, current)
            if nxt.text == "!":
                if name in self.actuators:
                    self.i += 2
                    v = self.value_expr(scope)
                    return Prefix(WriteActuator(v, name), self.cont(scope, pvars, current))
                return self._derived(scope, pvars, current)
            raise self.error(f"{name!r} is not a declared sensor, actuator or channel")
        raise self.error(f"unexpected {t.text or 'end of input'!r} in a process")

    def _derived(self, scope, pvars, current):
        """``pi.P`` abbreviates ``fix X.timeout(pi.P, X)`` for a fresh X."""
        X = f"_R{self.fresh}"
        self.fresh += 1
        io, then = self.comm(scope, pvars | {X}, current)
        return Fix(X, Timeout(io, then, PVar(X)))

    def comm(self, scope, pvars, current):
        t = self.tok
        c = self.ident("a channel")
        if c not in self.channels:
            raise self.error(f"undeclared channel {c!r}", t)
        if self.accept("!"):
            self.expect("<")
            if self.at(">"):
                v = UNIT
            else:
                v = self.value_expr(scope)
            self.expect(">")
            return Send(c, v), self.cont(scope, pvars, current)
        self.expect("?")
        self.expect("(")
        if self.accept(")"):
            x = "_"
        else:
            x = self.ident("a variable")
            self.expect(")")
        return Receive(c, x), self.cont(scope | {x}, pvars, current)

    # -- guards ---------------------------------------------------------------------

    def bexp(self, scope):
        b = self.bunary(scope)
        while self.accept("&&"):
            b = And(b, self.bunary(scope))
        return b

    def bunary(self, scope):
        if self.accept("!"):
            return Not(self.bunary(scope))
        if self.accept("true"):
            return BoolConst(True)
        if self.accept("false"):
            return BoolConst(False)
        if self.at("(") and self.peek().text != ")":
            self.i += 1
            b = self.bexp(scope)
            self.expect(")")
            return b
        left = self.value_expr(scope)
        for op in ("<=", "<", "="):
            if self.accept(op):
                return Cmp(op, left, self.value_expr(scope))
        raise self.error("expected a comparison (=, < or <=)")

    # -- networks ---------------------------------------------------------------------

    def network(self) -> Network:
        parts = [self.natom()]
        while self.accept("|"):
            parts.append(self.natom())
        return parts[0] if len(parts) == 1 else compose(*parts)

    def natom(self) -> Network:
        t = self.tok
        if t.kind == "num" and t.text == "0":
            self.i += 1
            return ZERO
        if self.accept("("):
            m = self.network()
            self.expect(")")
            return m
        if self.accept("new"):
            chans = [self.ident("a channel")]
            while self.accept(","):
                chans.append(self.ident("a channel"))
            for c in chans:
                if c not in self.channels:
                    raise self.error(f"undeclared channel {c!r}", t)
            self.expect(".")
            inner = self.natom()
            clash = set(chans) & set(inner.restricted)
            if clash:
                raise self.error(f"channel {sorted(clash)[0]} restricted twice", t)
            return restrict(inner, *chans)
        if t.kind == "ident" and t.text in self.nets:
            self.i += 1
            return self.nets[t.text]
        return Network((), (self.node(),))

    def node(self) -> Node:
        name = self.ident("a node name")
        self.expect("[")
        sensors, actuators = {}, {}
        while not self.at("|>"):
            t = self.tok
            key = self.ident("a sensor or actuator")
            self.expect("=")
            v = self.literal()
            if key in self.sensors:
                sensors[key] = v
            elif key in self.actuators:
                actuators[key] = v
            else:
                raise self.error(f"{key!r} is neither a declared sensor nor actuator", t)
            if not self.accept(","):
                break
        self.expect("|>")
        p = self.proc(frozenset(), frozenset())
        self.expect("]")
        t = self.tok
        if self.accept("stat"):
            mob = "stat"
        elif self.accept("mob"):
            mob = "mob"
        else:
            raise self.error("expected 'stat' or 'mob'")
        self.expect("@")
        t = self.tok
        h = self.ident("a location")
        if h not in self.locations:
            raise self.error(f"undeclared location {h!r}", t)
        return Node(name, Interface.of(sensors, actuators), p, mob, h)


def _mentions(p, X) -> bool:
    return X in free_pvars(p)


def parse_model(text: str):
    """Parse a complete model file into ``(universe, network)``."""
    p = Parser(text)
    p.parse_declarations()
    u = p._ensure_universe()
    p.expect("network")
    net = p.network()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r} after the network")
    return u, net


def parse_universe(text: str) -> ModelUniverse:
    """Parse declarations only (no network block)."""
    p = Parser(text)
    p.parse_declarations()
    if p.tok.kind != "eof":
        raise p.error("a universe block cannot contain a network")
    return p._ensure_universe()


def parse_network(text: str, u: ModelUniverse, procs: dict | None = None) -> Network:
    """Parse a network against an existing universe."""
    p = Parser(text)
    p.locations = list(u.locations)
    p.dists = dict(u.distances)
    p.delta = u.delta
    p.channels = dict(u.channels)
    p.sensors = dict(u.sensors)
    p.actuators = dict(u.actuators)
    p.procs = dict(procs or {})
    p.universe = u
    net = p.network()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r} after the network")
    return net


def parse_process(text: str, u: ModelUniverse):
    p = Parser(text)
    p.locations = list(u.locations)
    p.channels = dict(u.channels)
    p.sensors = dict(u.sensors)
    p.actuators = dict(u.actuators)
    proc = p.proc(frozenset(), frozenset())
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r} after the process")
    return proc

