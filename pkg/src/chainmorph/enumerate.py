"""Exhaustive class enumeration, monoid tables and brute-force oracles.

Nothing here calls the criterion modules.  The oracle predicates below use
the cyclic-sequence description of orientation-preserving maps and the raw
ideal-containment definitions of Green's relations, so they stay independent
of the code they are used to check.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

from .errors import ClosureViolation, SizeLimit
from .transforms import ClassTag, PartialMap, in_class

DEFAULT_MAX_CANDIDATES = 10**8
ENV_MAX_CANDIDATES = "CHAINMORPH_MAX_CANDIDATES"


def max_candidates(override=None):
    if override is not None:
        return int(override)
    env = os.environ.get(ENV_MAX_CANDIDATES)
    return int(env) if env else DEFAULT_MAX_CANDIDATES


def candidate_count(tag, n):
    tag = ClassTag(tag)
    return n**n if tag.full_only else (n + 1) ** n


def iter_candidates(tag, n, limit=None):
    """All candidate maps for ``tag`` in lexicographic order (undefined sorts first)."""
    tag = ClassTag(tag)
    total = candidate_count(tag, n)
    ceiling = max_candidates(limit)
    if total > ceiling:
        raise SizeLimit(f"{tag.value} on {n} points needs {total} candidates, limit {ceiling}")
    if tag.full_only:
        for vals in product(range(1, n + 1), repeat=n):
            yield PartialMap(n, vals)
    else:
        for vals in product(range(n + 1), repeat=n):
            yield PartialMap(n, tuple(v or None for v in vals))


def enumerate_class(tag, n, limit=None) -> list:
    tag = ClassTag(tag)
    return [a for a in iter_candidates(tag, n, limit) if in_class(a, tag)]


def count_class(tag, n, limit=None) -> int:
    tag = ClassTag(tag)
    return sum(1 for a in iter_candidates(tag, n, limit) if in_class(a, tag))


# -- independent membership oracle ------------------------------------------


def cyclic_descents(seq) -> int:
    """Descents of ``seq`` read cyclically (last element wraps to first)."""
    t = len(seq)
    return sum(1 for i in range(t) if seq[i] > seq[(i + 1) % t]) if t > 1 else 0


def oracle_in_class(a: PartialMap, tag) -> bool:
    tag = ClassTag(tag)
    seq = [v for v in a.values if v is not None]
    full = len(seq) == a.n
    inj = len(set(seq)) == len(seq)
    order = all(x <= y for x, y in zip(seq, seq[1:]))
    orient = cyclic_descents(seq) <= 1
    return {
        ClassTag.PT: True,
        ClassTag.T: full,
        ClassTag.I: inj,
        ClassTag.O: full and order,
        ClassTag.PO: order,
        ClassTag.POI: order and inj,
        ClassTag.OP: full and orient,
        ClassTag.POP: orient,
        ClassTag.POPI: orient and inj,
    }[tag]


def oracle_count(tag, n, limit=None) -> int:
    return sum(1 for a in iter_candidates(tag, n, limit) if oracle_in_class(a, tag))


def write_count_fixtures(directory, n_max=5, limit=None):
    """Write ``counts_<TAG>.json`` files from the oracle predicates."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for tag in ClassTag:
        counts = {str(n): oracle_count(tag, n, limit) for n in range(1, n_max + 1)}
        path = directory / f"counts_{tag.value}.json"
        path.write_text(json.dumps(counts, indent=2, sort_keys=True) + "\n")
        written.append(path)
    return written


# -- monoid tables ------------------------------------------------------------


@dataclass
class MonoidTable:
    tag: ClassTag
    n: int
    elements: list
    index: dict
    product: list
    identity_index: int

    def __len__(self):
        return len(self.elements)

    def mul(self, i, j):
        return self.product[i][j]

    def find(self, a: PartialMap) -> int:
        return self.index[a.values]


def build_monoid(tag, n, limit=None) -> MonoidTable:
    tag = ClassTag(tag)
    elements = enumerate_class(tag, n, limit)
    index = {a.values: i for i, a in enumerate(elements)}
    vals = [a.values for a in elements]
    table = []
    for av in vals:
        row = []
        for bv in vals:
            prod = tuple(None if v is None else bv[v - 1] for v in av)
            j = index.get(prod)
            if j is None:
                raise ClosureViolation(
                    f"{PartialMap(n, av)} * {PartialMap(n, bv)} = {PartialMap(n, prod)} left {tag.value}"
                )
            row.append(j)
        table.append(row)
    ident = index.get(tuple(range(1, n + 1)))
    if ident is None:
        raise ClosureViolation(f"{tag.value} on {n} points has no identity")
    return MonoidTable(tag, n, elements, index, table, ident)


# -- Green's relations by ideal containment -----------------------------------

RELATIONS = ("L", "R", "H", "D", "J")


@dataclass
class GreenOracleResult:
    relation: str
    classes: list
    key: list = field(repr=False)

    def related(self, i, j) -> bool:
        return self.key[i] == self.key[j]


def _classes_from_keys(keys):
    groups = {}
    for i, k in enumerate(keys):
        groups.setdefault(k, []).append(i)
    classes = sorted(tuple(g) for g in groups.values())
    label = {}
    for c, members in enumerate(classes):
        for i in members:
            label[i] = c
    return classes, [label[i] for i in range(len(keys))]


class GreenOracle:
    """Principal left, right and two-sided ideals of every element, as bitmasks."""

    def __init__(self, table: MonoidTable):
        self.table = table
        size = len(table)
        prod = table.product
        self.left = [0] * size
        self.right = [0] * size
        for a in range(size):
            r = m = 0
            for s in range(size):
                r |= 1 << prod[a][s]
                m |= 1 << prod[s][a]
            self.right[a] = r
            self.left[a] = m
        self.two_sided = []
        for a in range(size):
            m, bits = 0, self.left[a]
            while bits:
                low = bits & -bits
                m |= self.right[low.bit_length() - 1]
                bits ^= low
            self.two_sided.append(m)
        self._cache = {}

    def result(self, relation) -> GreenOracleResult:
        relation = relation.upper()
        if relation in self._cache:
            return self._cache[relation]
        if relation == "L":
            keys = self.left
        elif relation == "R":
            keys = self.right
        elif relation == "H":
            keys = list(zip(self.left, self.right))
        elif relation == "J":
            keys = self.two_sided
        elif relation == "D":
            # a D b iff the R-class of a meets the L-class of b
            r_members = {}
            for i, k in enumerate(self.right):
                r_members.setdefault(k, []).append(i)
            keys = [frozenset(self.left[c] for c in r_members[self.right[i]]) for i in range(len(self.right))]
        else:
            raise ValueError(f"unknown relation {relation!r}")
        classes, key = _classes_from_keys(keys)
        res = GreenOracleResult(relation, classes, key)
        self._cache[relation] = res
        return res


def green_oracle(table: MonoidTable, relation) -> GreenOracleResult:
    return GreenOracle(table).result(relation)


def regular_oracle(table: MonoidTable, idx):
    """Index of some inner inverse of element ``idx``, or None."""
    prod = table.product
    for b in range(len(table)):
        if prod[prod[idx][b]][idx] == idx:
            return b
    return None
