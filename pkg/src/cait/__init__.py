"""Executable semantics for a timed calculus of IoT systems: located, possibly
mobile nodes with sensors, actuators and ranged channels."""

__version__ = "0.1.0"
