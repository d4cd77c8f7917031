"""Colored trinet automata: writer-driven rewriting of edge-3-colored cubic graphs."""

from .core import (ColoredTrinet, Color, Simulator, SurroundingsType, SystemState,
                   canonical_form, edge_exchange, make_cube, make_k33, rooted_iso, step,
                   surroundings_type, triangle_expand, triangle_shrink, unrooted_iso, walk)
from .rules import (DEFAULT_TABLE, OptionTable, Rule, conjugate_rule, decode, encode,
                    enumerate_space, format_rule, parse_rule)
from .classify import Budget, ClassLabel, classify, detect_onedim, sweep

__all__ = [
    "ColoredTrinet", "Color", "Simulator", "SurroundingsType", "SystemState",
    "canonical_form", "edge_exchange", "make_cube", "make_k33", "rooted_iso", "step",
    "surroundings_type", "triangle_expand", "triangle_shrink", "unrooted_iso", "walk",
    "DEFAULT_TABLE", "OptionTable", "Rule", "conjugate_rule", "decode", "encode",
    "enumerate_space", "format_rule", "parse_rule",
    "Budget", "ClassLabel", "classify", "detect_onedim", "sweep",
]
