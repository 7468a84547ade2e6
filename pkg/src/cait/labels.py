"""Transition labels for the reduction relation and both labelled semantics."""

from __future__ import annotations

from dataclasses import dataclass

from .universe import Value


@dataclass(frozen=True, order=True)
class Label:
    def render(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.render()


@dataclass(frozen=True, order=True)
class Tau(Label):
    def render(self):
        return "tau"


@dataclass(frozen=True, order=True)
class Sigma(Label):
    def render(self):
        return "sigma"


@dataclass(frozen=True, order=True)
class Act(Label):
    actuator: str

    def render(self):
        return f"act({self.actuator})"


# process-level labels

@dataclass(frozen=True)
class Out(Label):
    channel: str
    value: Value

    def render(self):
        return f"{self.channel}!{self.value}"


@dataclass(frozen=True)
class In(Label):
    channel: str
    value: Value

    def render(self):
        return f"{self.channel}?{self.value}"


@dataclass(frozen=True)
class AtLoc(Label):
    location: str

    def render(self):
        return f"@{self.location}"


@dataclass(frozen=True)
class SensorRead(Label):
    sensor: str
    value: Value

    def render(self):
        return f"{self.sensor}?{self.value}"


@dataclass(frozen=True)
class ActuatorWrite(Label):
    actuator: str
    value: Value

    def render(self):
        return f"{self.actuator}!{self.value}"


# network-level labels

@dataclass(frozen=True)
class SendAt(Label):
    channel: str
    value: Value
    location: str

    def render(self):
        return f"out({self.channel},{self.value},{self.location})"


@dataclass(frozen=True)
class RecvAt(Label):
    channel: str
    value: Value
    location: str

    def render(self):
        return f"in({self.channel},{self.value},{self.location})"


# extensional labels

@dataclass(frozen=True)
class SendObs(Label):
    channel: str
    value: Value
    location: str

    def render(self):
        return f"snd({self.channel},{self.value},{self.location})"


@dataclass(frozen=True)
class RecvObs(Label):
    channel: str
    value: Value
    location: str

    def render(self):
        return f"rcv({self.channel},{self.value},{self.location})"


@dataclass(frozen=True)
class SensorEnv(Label):
    sensor: str
    location: str
    value: Value

    def render(self):
        return f"sensor({self.sensor},{self.location},{self.value})"


@dataclass(frozen=True)
class ActuatorEnv(Label):
    actuator: str
    location: str
    value: Value

    def render(self):
        return f"actuator({self.actuator},{self.location},{self.value})"


TAU = Tau()
SIGMA = Sigma()
TimeStep = Sigma


def is_instantaneous(label) -> bool:
    return isinstance(label, (Tau, Act))


def label_key(label):
    """Deterministic sort key for mixed label types."""
    return (type(label).__name__, label.render())
