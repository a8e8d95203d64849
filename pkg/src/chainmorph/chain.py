"""Chains and exact set algebra over them.

Two chains are supported: the finite chain ``1 < 2 < ... < n`` and the
rational line.  Sets of rationals are finite unions of intervals whose
endpoints are exact rationals or infinities, kept in a canonical form so that
structural equality is set equality.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Union

from .errors import BadInterval, EmptySet, ParseError

NEG_INF = -math.inf
POS_INF = math.inf

# An extended rational: a Fraction, or one of the float infinities.  Fraction
# compares correctly against float infinities, so plain <, ==, max, min work.
ExtRat = Union[Fraction, float]


@dataclass(frozen=True)
class FiniteChain:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise BadInterval(f"finite chain needs n >= 1, got {self.n!r}")

    def __iter__(self):
        return iter(range(1, self.n + 1))

    def __str__(self):
        return f"finite:{self.n}"


class RationalChain:
    """The rational line, as a singleton."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Q"

    def __str__(self):
        return "q"


Q = RationalChain()


def parse_chain(text):
    text = text.strip().lower()
    if text in ("q", "rationals"):
        return Q
    m = re.fullmatch(r"finite:(\d+)", text)
    if not m:
        raise ParseError(f"bad chain spec {text!r}; expected finite:<n> or q")
    return FiniteChain(int(m.group(1)))


def ext(value) -> ExtRat:
    """Coerce to an extended rational."""
    if isinstance(value, float):
        if math.isinf(value):
            return value
        raise ParseError("floats are not exact; pass a Fraction or a string")
    if isinstance(value, str):
        return parse_ext(value)
    return Fraction(value)


def is_finite(value: ExtRat) -> bool:
    return not (isinstance(value, float) and math.isinf(value))


def parse_ext(text: str) -> ExtRat:
    t = text.strip().lower()
    if t in ("inf", "+inf", "oo", "+oo"):
        return POS_INF
    if t in ("-inf", "-oo"):
        return NEG_INF
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational {text!r}") from None


def format_ext(value: ExtRat) -> str:
    if not is_finite(value):
        return "inf" if value > 0 else "-inf"
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class QInterval:
    """A nonempty interval of rationals."""

    lo: ExtRat
    lo_closed: bool
    hi: ExtRat
    hi_closed: bool

    def __post_init__(self):
        object.__setattr__(self, "lo", ext(self.lo))
        object.__setattr__(self, "hi", ext(self.hi))
        if (self.lo_closed and not is_finite(self.lo)) or (
            self.hi_closed and not is_finite(self.hi)
        ):
            raise BadInterval("infinite endpoints are never closed")
        if self.lo == POS_INF or self.hi == NEG_INF:
            raise BadInterval(f"empty interval {self}")
        if not (self.lo < self.hi or (self.lo == self.hi and self.lo_closed and self.hi_closed)):
            raise BadInterval(f"empty interval {self}")

    @classmethod
    def closed(cls, lo, hi):
        return cls(lo, True, hi, True)

    @classmethod
    def open(cls, lo, hi):
        return cls(lo, False, hi, False)

    @classmethod
    def point(cls, p):
        return cls(p, True, p, True)

    @classmethod
    def whole(cls):
        return cls(NEG_INF, False, POS_INF, False)

    @classmethod
    def maybe(cls, lo, lo_closed, hi, hi_closed):
        """Build the interval, or return None when it would be empty."""
        lo, hi = ext(lo), ext(hi)
        if lo < hi or (lo == hi and lo_closed and hi_closed and is_finite(lo)):
            return cls(lo, lo_closed and is_finite(lo), hi, hi_closed and is_finite(hi))
        return None

    @property
    def is_point(self):
        return self.lo == self.hi

    @property
    def bounded(self):
        return is_finite(self.lo) and is_finite(self.hi)

    def __contains__(self, q) -> bool:
        q = Fraction(q)
        above = q > self.lo or (self.lo_closed and q == self.lo)
        below = q < self.hi or (self.hi_closed and q == self.hi)
        return above and below

    def intersect(self, other: "QInterval"):
        if self.lo > other.lo:
            lo, lc = self.lo, self.lo_closed
        elif self.lo < other.lo:
            lo, lc = other.lo, other.lo_closed
        else:
            lo, lc = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hc = self.hi, self.hi_closed
        elif self.hi > other.hi:
            hi, hc = other.hi, other.hi_closed
        else:
            hi, hc = self.hi, self.hi_closed and other.hi_closed
        return QInterval.maybe(lo, lc, hi, hc)

    def sample(self):
        """Some rational inside the interval, chosen canonically."""
        if self.lo_closed:
            return self.lo
        if self.hi_closed:
            return self.hi
        if self.bounded:
            return (self.lo + self.hi) / 2
        if is_finite(self.lo):
            return self.lo + 1
        if is_finite(self.hi):
            return self.hi - 1
        return Fraction(0)

    def __str__(self):
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{format_ext(self.lo)},{format_ext(self.hi)}{right}"


def parse_interval(text: str) -> QInterval:
    t = text.strip()
    if len(t) < 5 or t[0] not in "([]" or t[-1] not in ")][" or "," not in t:
        raise ParseError(f"bad interval {text!r}")
    lo_txt, _, hi_txt = t[1:-1].partition(",")
    return QInterval(parse_ext(lo_txt), t[0] == "[", parse_ext(hi_txt), t[-1] == "]")


def _start_key(iv: QInterval):
    # closed starts sort before open starts at the same point
    return (iv.lo, not iv.lo_closed)


class Signature(NamedTuple):
    has_min: bool
    has_max: bool
    bounded_below: bool
    bounded_above: bool


@dataclass(frozen=True)
class IntervalUnion:
    """A finite union of rational intervals in canonical form.

    Construct through :func:`interval_union_normalize` (or
    :meth:`from_parts`); the raw constructor trusts its input.
    """

    parts: tuple = ()

    @classmethod
    def from_parts(cls, parts: Iterable[QInterval]):
        return interval_union_normalize(list(parts))

    @classmethod
    def whole(cls):
        return cls((QInterval.whole(),))

    @property
    def is_empty(self):
        return not self.parts

    def __bool__(self):
        return bool(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __contains__(self, q) -> bool:
        return any(q in p for p in self.parts)

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return interval_union_normalize(list(self.parts) + list(other.parts))

    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        out = []
        for p in self.parts:
            for r in other.parts:
                x = p.intersect(r)
                if x is not None:
                    out.append(x)
        return interval_union_normalize(out)

    def complement(self) -> "IntervalUnion":
        out = []
        lo, lc = NEG_INF, False
        for p in self.parts:
            gap = QInterval.maybe(lo, lc, p.lo, not p.lo_closed)
            if gap is not None:
                out.append(gap)
            lo, lc = p.hi, not p.hi_closed
        gap = QInterval.maybe(lo, lc, POS_INF, False)
        if gap is not None:
            out.append(gap)
        return IntervalUnion(tuple(out))

    def difference(self, other: "IntervalUnion") -> "IntervalUnion":
        return self.intersect(other.complement())

    def issubset(self, other: "IntervalUnion") -> bool:
        return self.difference(other).is_empty

    @property
    def lo(self):
        return self.parts[0].lo

    @property
    def hi(self):
        return self.parts[-1].hi

    def __str__(self):
        return "{" + ", ".join(str(p) for p in self.parts) + "}"


def interval_union_normalize(parts) -> IntervalUnion:
    """Canonical form: sorted, disjoint, and no two parts mergeable over Q."""
    if not parts:
        return IntervalUnion(())
    ordered = sorted(parts, key=_start_key)
    merged = []
    lo, lc, hi, hc = ordered[0].lo, ordered[0].lo_closed, ordered[0].hi, ordered[0].hi_closed
    for p in ordered[1:]:
        # over a dense chain, touching intervals merge unless the touch point is missing
        if p.lo < hi or (p.lo == hi and (hc or p.lo_closed)):
            if p.hi > hi:
                hi, hc = p.hi, p.hi_closed
            elif p.hi == hi:
                hc = hc or p.hi_closed
        else:
            merged.append(QInterval(lo, lc, hi, hc))
            lo, lc, hi, hc = p.lo, p.lo_closed, p.hi, p.hi_closed
    merged.append(QInterval(lo, lc, hi, hc))
    return IntervalUnion(tuple(merged))


_INTERVAL_TOKEN = re.compile(r"[\(\[\]]\s*[^,\s()\[\]]+\s*,\s*[^,\s()\[\]]+\s*[\)\]\[]")


def parse_union(text: str) -> IntervalUnion:
    t = text.strip()
    if not (t.startswith("{") and t.endswith("}")):
        # a bare interval is accepted as a one-part union
        return interval_union_normalize([parse_interval(t)])
    body = t[1:-1]
    tokens = _INTERVAL_TOKEN.findall(body)
    if _INTERVAL_TOKEN.sub("", body).replace(",", "").strip():
        raise ParseError(f"bad interval union {text!r}")
    return interval_union_normalize([parse_interval(tok) for tok in tokens])


def union_signature(u: IntervalUnion) -> Signature:
    if u.is_empty:
        raise EmptySet("signature of an empty set")
    first, last = u.parts[0], u.parts[-1]
    return Signature(
        has_min=first.lo_closed,
        has_max=last.hi_closed,
        bounded_below=is_finite(first.lo),
        bounded_above=is_finite(last.hi),
    )


class Gap(NamedTuple):
    left_attained: bool
    right_attained: bool


def gap_list(u: IntervalUnion) -> list:
    """One entry per pair of consecutive parts.

    ``left_attained`` says the part below the gap has a maximum,
    ``right_attained`` that the part above it has a minimum.
    """
    if u.is_empty:
        raise EmptySet("gap list of an empty set")
    return [Gap(a.hi_closed, b.lo_closed) for a, b in zip(u.parts, u.parts[1:])]
