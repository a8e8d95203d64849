"""Orientation-preserving transformations on finite chains and the rational line."""

from .chain import FiniteChain, IntervalUnion, Q, QInterval, interval_union_normalize, parse_union
from .errors import ChainmorphError
from .transforms import ClassTag, PartialMap, classify, compose, find_ideals, parse_map

__version__ = "0.1.0"

__all__ = [
    "ChainmorphError",
    "ClassTag",
    "FiniteChain",
    "IntervalUnion",
    "PartialMap",
    "Q",
    "QInterval",
    "classify",
    "compose",
    "find_ideals",
    "interval_union_normalize",
    "parse_map",
    "parse_union",
]
