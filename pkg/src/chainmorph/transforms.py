"""Partial transformations of a finite chain.

Maps compose left to right: ``x(ab) = (xa)b``.  A :class:`PartialMap` stores
one slot per chain element, ``None`` where the map is undefined.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple, Optional

from .chain import FiniteChain
from .errors import (
    ChainMismatch,
    ConstantMap,
    NotAnIdeal,
    NotFull,
    NotIdempotent,
    NotInjective,
    NotOrientationPreserving,
    ParseError,
)


class ClassTag(str, enum.Enum):
    PT = "PT"
    T = "T"
    I = "I"  # noqa: E741
    O = "O"  # noqa: E741
    PO = "PO"
    POI = "POI"
    OP = "OP"
    POP = "POP"
    POPI = "POPI"

    @property
    def full_only(self):
        return self in (ClassTag.T, ClassTag.O, ClassTag.OP)

    @classmethod
    def parse(cls, text):
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise ParseError(f"unknown class {text!r}") from None


@dataclass(frozen=True)
class PartialMap:
    n: int
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.n:
            raise ParseError(f"expected {self.n} slots, got {len(self.values)}")
        for v in self.values:
            if v is not None and not (1 <= v <= self.n):
                raise ParseError(f"value {v} outside chain 1..{self.n}")

    @classmethod
    def full(cls, values):
        values = tuple(values)
        return cls(len(values), values)

    @classmethod
    def from_dict(cls, n, mapping):
        slots = [None] * n
        for k, v in mapping.items():
            k = int(k)
            if not 1 <= k <= n:
                raise ParseError(f"domain element {k} outside chain 1..{n}")
            slots[k - 1] = int(v)
        return cls(n, tuple(slots))

    @classmethod
    def empty(cls, n):
        return cls(n, (None,) * n)

    @classmethod
    def identity(cls, n):
        return cls(n, tuple(range(1, n + 1)))

    @property
    def chain(self):
        return FiniteChain(self.n)

    @property
    def dom(self):
        return tuple(i + 1 for i, v in enumerate(self.values) if v is not None)

    @property
    def image(self):
        return frozenset(v for v in self.values if v is not None)

    def __call__(self, x):
        return self.values[x - 1]

    def items(self):
        return [(x, self.values[x - 1]) for x in self.dom]

    @property
    def is_full(self):
        return None not in self.values

    @property
    def is_empty(self):
        return all(v is None for v in self.values)

    @property
    def is_injective(self):
        vals = [v for v in self.values if v is not None]
        return len(vals) == len(set(vals))

    @property
    def is_constant(self):
        """Nonempty domain and a single image value."""
        return len(self.image) == 1

    def kernel(self):
        classes = {}
        for x, v in self.items():
            classes.setdefault(v, []).append(x)
        return frozenset(frozenset(c) for c in classes.values())

    def preimage(self, y):
        return tuple(x for x, v in self.items() if v == y)

    def spec(self):
        if self.is_full:
            return "[" + ",".join(str(v) for v in self.values) + "]"
        return "{" + ",".join(f"{x}:{v}" for x, v in self.items()) + "}"

    def to_json(self):
        if self.is_full:
            return {"chain": self.n, "full": list(self.values)}
        return {"chain": self.n, "map": {str(x): v for x, v in self.items()}}

    def __str__(self):
        return self.spec()


def parse_map(text, n=None) -> PartialMap:
    """Parse ``[2,3,1]``, ``{1:2,3:1}`` or either JSON object form."""
    t = text.strip() if isinstance(text, str) else text
    if isinstance(t, dict) or (isinstance(t, str) and t.startswith("{") and '"' in t):
        obj = json.loads(t) if isinstance(t, str) else t
        chain = int(obj.get("chain", n or 0))
        if "full" in obj:
            m = PartialMap.full(int(v) for v in obj["full"])
            if chain and m.n != chain:
                raise ParseError(f"full map has {m.n} values but chain is {chain}")
            return m
        if "map" in obj:
            if not chain:
                raise ParseError("partial map needs a chain size")
            return PartialMap.from_dict(chain, obj["map"])
        raise ParseError(f"map object needs 'full' or 'map': {text!r}")
    if t.startswith("["):
        body = t[1:-1].strip()
        values = [int(v) for v in body.split(",")] if body else []
        if n is not None and len(values) != n:
            raise ParseError(f"full map has {len(values)} values but chain is {n}")
        if not values:
            raise ParseError("a full map needs at least one value")
        return PartialMap.full(values)
    if t.startswith("{"):
        if n is None:
            raise ParseError("partial map needs a chain size")
        body = t[1:-1].strip()
        mapping = {}
        if body:
            for item in body.split(","):
                m = re.fullmatch(r"\s*(\d+)\s*(?::|->|↦)\s*(\d+)\s*", item)
                if not m:
                    raise ParseError(f"bad map item {item!r}")
                mapping[int(m.group(1))] = int(m.group(2))
        return PartialMap.from_dict(n, mapping)
    raise ParseError(f"bad map spec {text!r}")


def parse_subset(text) -> frozenset:
    t = text.strip().strip("{}[]")
    return frozenset(int(v) for v in t.split(",") if v.strip())


def _order_preserving_on(values):
    return all(a <= b for a, b in zip(values, values[1:]))


def is_order_preserving(a: PartialMap) -> bool:
    return _order_preserving_on([v for v in a.values if v is not None])


def _satisfies_op(a: PartialMap, y: frozenset) -> bool:
    """(OP1) and (OP2) for a candidate ideal ``y``."""
    inside = [(x, v) for x, v in a.items() if x in y]
    outside = [(x, v) for x, v in a.items() if x not in y]
    if not _order_preserving_on([v for _, v in inside]):
        return False
    if not _order_preserving_on([v for _, v in outside]):
        return False
    for x1, v1 in inside:
        for x2, v2 in outside:
            if not (x1 <= x2 and v1 >= v2):
                return False
    return True


def find_ideals(a: PartialMap) -> list:
    """Every ideal of ``a``, smallest first.

    Only prefixes of the domain are scanned; an ideal is always an order
    ideal of the domain.  The empty map gets the single ideal ``frozenset()``.
    """
    if a.is_empty:
        return [frozenset()]
    dom = a.dom
    return [
        frozenset(dom[:k]) for k in range(1, len(dom) + 1) if _satisfies_op(a, frozenset(dom[:k]))
    ]


def find_ideals_all_subsets(a: PartialMap) -> list:
    """Same as :func:`find_ideals` but over all nonempty subsets of the domain."""
    if a.is_empty:
        return [frozenset()]
    dom = a.dom
    found = []
    for k in range(1, len(dom) + 1):
        for y in combinations(dom, k):
            if _satisfies_op(a, frozenset(y)):
                found.append(frozenset(y))
    return found


def is_ideal(a: PartialMap, y) -> bool:
    y = frozenset(y)
    if a.is_empty:
        return not y
    return bool(y) and y <= set(a.dom) and _satisfies_op(a, y)


def is_orientation_preserving(a: PartialMap) -> bool:
    return a.is_empty or bool(find_ideals(a))


def unique_ideal(a: PartialMap) -> frozenset:
    ideals = find_ideals(a)
    if not ideals:
        raise NotOrientationPreserving(f"{a} admits no ideal")
    if a.is_constant:
        raise ConstantMap(f"{a} is constant and admits {len(ideals)} ideals; pass one explicitly")
    assert len(ideals) == 1, f"non-constant map {a} with ideals {ideals}"
    return ideals[0]


def resolve_ideal(a: PartialMap, y=None) -> frozenset:
    """Validate a supplied ideal, or compute it (the whole domain for constants)."""
    if y is None:
        if a.is_constant:
            return frozenset(a.dom)
        return unique_ideal(a)
    y = frozenset(y)
    if not is_ideal(a, y):
        if not is_orientation_preserving(a):
            raise NotOrientationPreserving(f"{a} admits no ideal")
        raise NotAnIdeal(f"{sorted(y)} is not an ideal of {a}")
    return y


def glued_point(a: PartialMap, y) -> Optional[int]:
    y = frozenset(y)
    if not is_ideal(a, y):
        raise NotAnIdeal(f"{sorted(y)} is not an ideal of {a}")
    inside = {v for x, v in a.items() if x in y}
    outside = {v for x, v in a.items() if x not in y}
    common = inside & outside
    if not common:
        return None
    (m,) = common
    assert m == min(inside) == max(outside)
    return m


def _check_same_chain(a, b):
    if a.n != b.n:
        raise ChainMismatch(f"chain sizes differ: {a.n} vs {b.n}")


def compose(a: PartialMap, b: PartialMap) -> PartialMap:
    """Left-to-right product: first ``a``, then ``b``."""
    _check_same_chain(a, b)
    bv = b.values
    return PartialMap(a.n, tuple(None if v is None else bv[v - 1] for v in a.values))


def restrict(a: PartialMap, subset) -> PartialMap:
    subset = frozenset(subset)
    return PartialMap(a.n, tuple(v if (i + 1) in subset else None for i, v in enumerate(a.values)))


def invert(a: PartialMap) -> PartialMap:
    if not a.is_injective:
        raise NotInjective(f"{a} is not injective")
    return PartialMap.from_dict(a.n, {v: x for x, v in a.items()})


def in_class(a: PartialMap, tag: ClassTag) -> bool:
    tag = ClassTag(tag)
    if tag is ClassTag.PT:
        return True
    if tag is ClassTag.T:
        return a.is_full
    if tag is ClassTag.I:
        return a.is_injective
    if tag is ClassTag.O:
        return a.is_full and is_order_preserving(a)
    if tag is ClassTag.PO:
        return is_order_preserving(a)
    if tag is ClassTag.POI:
        return a.is_injective and is_order_preserving(a)
    if tag is ClassTag.OP:
        return a.is_full and is_orientation_preserving(a)
    if tag is ClassTag.POP:
        return is_orientation_preserving(a)
    return a.is_injective and is_orientation_preserving(a)


def classify(a: PartialMap) -> set:
    full, inj = a.is_full, a.is_injective
    order = is_order_preserving(a)
    orient = order or is_orientation_preserving(a)
    tags = {ClassTag.PT}
    if full:
        tags.add(ClassTag.T)
    if inj:
        tags.add(ClassTag.I)
    if order:
        tags.add(ClassTag.PO)
        if full:
            tags.add(ClassTag.O)
        if inj:
            tags.add(ClassTag.POI)
    if orient:
        tags.add(ClassTag.POP)
        if full:
            tags.add(ClassTag.OP)
        if inj:
            tags.add(ClassTag.POPI)
    return tags


class IdempotentShape(NamedTuple):
    """``kind`` is ``order_preserving``, ``min_anchored`` or ``max_anchored``."""

    kind: str
    anchor: Optional[int] = None


def classify_idempotent(a: PartialMap, y=None) -> IdempotentShape:
    if not a.is_full:
        raise NotFull(f"{a} is not a full map")
    if compose(a, a) != a:
        raise NotIdempotent(f"{a} is not idempotent")
    if not is_orientation_preserving(a):
        raise NotOrientationPreserving(f"{a} is not orientation-preserving")
    if is_order_preserving(a):
        return IdempotentShape("order_preserving")
    y = resolve_ideal(a, y)
    rest = frozenset(a.dom) - y
    im = a.image
    y_img = {a(x) for x in y}
    rest_img = {a(x) for x in rest}
    if im <= y:
        m = min(im)
        assert y_img == im and rest_img == {m}
        return IdempotentShape("min_anchored", m)
    m = max(im)
    assert im <= rest and rest_img == im and y_img == {m}
    return IdempotentShape("max_anchored", m)
