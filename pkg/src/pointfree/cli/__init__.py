"""Command-line front end and its expression language."""

from .compile import compile_fun, compile_node, compile_set
from .language import FUN, SET, Node, from_json, parse, parse_index, to_json, to_source, tokenize

__all__ = [
    "FUN",
    "Node",
    "SET",
    "compile_fun",
    "compile_node",
    "compile_set",
    "from_json",
    "parse",
    "parse_index",
    "to_json",
    "to_source",
    "tokenize",
]
