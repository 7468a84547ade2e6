"""Model text format: parser, pretty-printer and command-line interface."""

from .parser import parse_model, parse_network, parse_process, parse_universe
from .printer import pretty_print, print_network, print_process, print_universe

__all__ = ["parse_model", "parse_network", "parse_process", "parse_universe",
           "pretty_print", "print_network", "print_process", "print_universe"]
