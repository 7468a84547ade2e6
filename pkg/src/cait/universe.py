"""Global finite structures a model lives in: locations, distances, channel
ranges, value domains and the mobility bound."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Mapping

from .errors import DanglingName, DomainViolation, MetricViolation

LOCAL = -1
INF = math.inf

_KIND_ORDER = {"unit": 0, "bool": 1, "int": 2, "atom": 3, "loc": 4}


@dataclass(frozen=True, slots=True)
class Value:
    """A basic value. ``kind`` is one of unit, bool, int, atom, loc."""

    kind: str
    data: object = None

    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.data if self.data is not None else 0)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        if self.kind == "unit":
            return "()"
        if self.kind == "bool":
            return "true" if self.data else "false"
        return str(self.data)

    def __repr__(self):
        return f"{self.kind}:{self}"


UNIT = Value("unit")
TRUE = Value("bool", True)
FALSE = Value("bool", False)


def num(n: int) -> Value:
    return Value("int", int(n))


def atom(name: str) -> Value:
    return Value("atom", name)


def loc(name: str) -> Value:
    return Value("loc", name)


def boolean(b: bool) -> Value:
    return TRUE if b else FALSE


@dataclass(frozen=True)
class ChannelDecl:
    name: str
    range: float  # LOCAL, a natural number, or INF
    domain: tuple

    @property
    def is_local(self):
        return self.range == LOCAL


@dataclass(frozen=True)
class SensorDecl:
    name: str
    domain: tuple
    kind: str = "node"  # "node" or "location"


@dataclass(frozen=True)
class ActuatorDecl:
    name: str
    domain: tuple


def range_str(r) -> str:
    if r == LOCAL:
        return "local"
    if r == INF:
        return "inf"
    return str(int(r))


@dataclass(frozen=True, eq=False)
class ModelUniverse:
    """Immutable after construction; identity-hashed so engines can cache on it."""

    locations: tuple
    distances: Mapping
    channels: Mapping = field(default_factory=dict)
    sensors: Mapping = field(default_factory=dict)
    actuators: Mapping = field(default_factory=dict)
    delta: int = 0

    def dist(self, h: str, k: str) -> int:
        try:
            return self.distances[h, k]
        except KeyError:
            raise DanglingName(f"no distance between {h!r} and {k!r}") from None

    def rng(self, c: str):
        try:
            return self.channels[c].range
        except KeyError:
            raise DanglingName(f"undeclared channel {c!r}") from None

    def channel_domain(self, c: str) -> tuple:
        try:
            return self.channels[c].domain
        except KeyError:
            raise DanglingName(f"undeclared channel {c!r}") from None

    def sensor_domain(self, s: str) -> tuple:
        try:
            return self.sensors[s].domain
        except KeyError:
            raise DanglingName(f"undeclared sensor {s!r}") from None

    def actuator_domain(self, a: str) -> tuple:
        try:
            return self.actuators[a].domain
        except KeyError:
            raise DanglingName(f"undeclared actuator {a!r}") from None

    def is_location_sensor(self, s: str) -> bool:
        return s in self.sensors and self.sensors[s].kind == "location"

    def check_message(self, c: str, v: Value):
        if v not in self.channel_domain(c):
            raise DomainViolation(f"value {v} is not in the message domain of {c}")

    def check_actuator_value(self, a: str, v: Value):
        if v not in self.actuator_domain(a):
            raise DomainViolation(f"value {v} is not in the domain of actuator {a}")

    def check_sensor_value(self, s: str, v: Value):
        if v not in self.sensor_domain(s):
            raise DomainViolation(f"value {v} is not in the domain of sensor {s}")

    # -- derived universes -------------------------------------------------

    def with_actuator(self, name: str, domain) -> "ModelUniverse":
        acts = dict(self.actuators)
        acts[name] = ActuatorDecl(name, tuple(domain))
        return replace(self, actuators=acts)

    def with_channel(self, name: str, rng, domain) -> "ModelUniverse":
        chans = dict(self.channels)
        chans[name] = ChannelDecl(name, rng, tuple(domain))
        return replace(self, channels=chans)

    def with_delta(self, delta: int) -> "ModelUniverse":
        return replace(self, delta=delta)

    def observationally_compatible(self, other: "ModelUniverse", free_channels=()) -> bool:
        """Whether two universes agree on everything an observer can see.

        Restricted channels may differ (they are private), but locations,
        distances, sensors, actuators and the listed free channels must match.
        """
        if set(self.locations) != set(other.locations) or self.delta != other.delta:
            return False
        if any(self.distances[p] != other.distances.get(p) for p in self.distances):
            return False
        if dict(self.sensors) != dict(other.sensors):
            return False
        if dict(self.actuators) != dict(other.actuators):
            return False
        return all(self.channels.get(c) == other.channels.get(c) for c in free_channels)


def make_universe(locations, distances, channels=(), sensors=(), actuators=(),
                  delta=0) -> ModelUniverse:
    """Build and validate a universe.

    ``distances`` maps location pairs to naturals; a pair given in one
    direction only is mirrored, the diagonal defaults to 0.
    """
    locations = tuple(locations)
    if len(set(locations)) != len(locations):
        raise MetricViolation("duplicate location names")
    if not locations:
        raise MetricViolation("a universe needs at least one location")
    table = {}
    for (h, k), d in dict(distances).items():
        for x in (h, k):
            if x not in locations:
                raise DanglingName(f"distance mentions undeclared location {x!r}")
        table[h, k] = d
    for h, k in list(table):
        table.setdefault((k, h), table[h, k])
    for h in locations:
        table.setdefault((h, h), 0)
    missing = [(h, k) for h, k in product(locations, repeat=2) if (h, k) not in table]
    if missing:
        h, k = missing[0]
        raise MetricViolation(f"no distance declared between {h} and {k}")
    validate_metric(locations, table)
    if delta < 0:
        raise MetricViolation("delta must be a natural number")

    chans = {}
    for decl in channels:
        if decl.name in chans:
            raise DanglingName(f"channel {decl.name} declared twice")
        _check_domain(decl.name, decl.domain)
        if not (decl.range == LOCAL or decl.range == INF or
                (decl.range >= 0 and int(decl.range) == decl.range)):
            raise MetricViolation(f"bad range for channel {decl.name}")
        chans[decl.name] = decl
    sens = {}
    for decl in sensors:
        _check_domain(decl.name, decl.domain)
        if decl.kind not in ("node", "location"):
            raise ValueError(f"unknown sensor kind {decl.kind!r}")
        sens[decl.name] = decl
    acts = {}
    for decl in actuators:
        _check_domain(decl.name, decl.domain)
        acts[decl.name] = decl
    clash = (set(chans) & set(sens)) | (set(chans) & set(acts)) | (set(sens) & set(acts))
    if clash:
        raise DanglingName(f"name used for two kinds of entity: {sorted(clash)}")
    return ModelUniverse(locations, table, chans, sens, acts, delta)


def _check_domain(name, domain):
    if not domain:
        raise DomainViolation(f"empty domain for {name}")
    if len(set(domain)) != len(domain):
        raise DomainViolation(f"repeated values in domain of {name}")


def validate_metric(locations, table):
    for h in locations:
        if table[h, h] != 0:
            raise MetricViolation(f"d({h},{h}) must be 0")
    for h, k in product(locations, repeat=2):
        d = table[h, k]
        if d < 0 or int(d) != d:
            raise MetricViolation(f"d({h},{k}) = {d} is not a natural number")
        if d != table[k, h]:
            raise MetricViolation(f"d({h},{k}) = {d} but d({k},{h}) = {table[k, h]}")
        if h != k and d == 0:
            # zero distance between distinct places is allowed (a pseudometric)
            pass
    for h, k, l in product(locations, repeat=3):
        if table[h, k] > table[h, l] + table[l, k]:
            raise MetricViolation(
                f"triangle inequality fails: d({h},{k}) > d({h},{l}) + d({l},{k})")


def in_range(u: ModelUniverse, c: str, h: str, k: str) -> bool:
    """Can two distinct nodes at ``h`` and ``k`` talk over channel ``c``?"""
    r = u.rng(c)
    if r == LOCAL:
        return False
    return u.dist(h, k) <= r


def reachable_locations(u: ModelUniverse, h: str, delta=None) -> tuple:
    """Locations a mobile node at ``h`` may occupy after one time unit."""
    if delta is None:
        delta = u.delta
    if h not in u.locations:
        raise DanglingName(f"undeclared location {h!r}")
    return tuple(k for k in u.locations if u.dist(h, k) <= delta)


def load_universe(text: str) -> ModelUniverse:
    """Parse a universe-only declaration block in the model text format."""
    from .frontend.parser import parse_universe
    return parse_universe(text)
