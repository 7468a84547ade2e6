"""Access to the model files shipped with the package."""

from __future__ import annotations

from importlib import resources

from .frontend.parser import parse_model


def bundled_names() -> list:
    files = resources.files("cait").joinpath("data")
    return sorted(f.name[:-5] for f in files.iterdir() if f.name.endswith(".cait"))


def bundled_text(name: str) -> str:
    return resources.files("cait").joinpath("data", f"{name}.cait").read_text()


def load_bundled(name: str):
    """``(universe, network)`` of a bundled model."""
    return parse_model(bundled_text(name))
