"""Piecewise Möbius transformations of the rational line.

A map is a sorted list of pieces ``(interval, fn)`` where ``fn`` is either a
strictly increasing Möbius map ``x -> (ax+b)/(cx+d)`` with ``ad - bc > 0`` or
a constant.  All arithmetic is exact.  Composition is left to right, as for
finite maps.

Endpoint behaviour uses one-sided limits.  An increasing Möbius map tends to
``-inf`` when its pole is approached from the right and to ``+inf`` from the
left, and to ``a/c`` at either infinity when ``c != 0``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .chain import (
    NEG_INF,
    POS_INF,
    IntervalUnion,
    QInterval,
    format_ext,
    interval_union_normalize,
    is_finite,
    parse_ext,
    parse_interval,
)
from .errors import BadInterval, MalformedMap, UnboundedUnsupported, UnsupportedShape


def _rat(v):
    if isinstance(v, str):
        v = parse_ext(v)
        if not is_finite(v):
            raise MalformedMap("coefficients must be finite")
        return v
    if isinstance(v, float):
        raise MalformedMap("coefficients must be exact (int or 'p/q' string)")
    return Fraction(v)


@dataclass(frozen=True)
class Moebius:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for k in "abcd":
            object.__setattr__(self, k, _rat(getattr(self, k)))
        if self.det == 0:
            raise MalformedMap(f"degenerate Möbius coefficients {self.coeffs}")

    @classmethod
    def affine(cls, slope, intercept=0):
        return cls(slope, intercept, 0, 1)

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @property
    def coeffs(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def pole(self):
        return None if self.c == 0 else -self.d / self.c

    def __call__(self, x):
        den = self.c * x + self.d
        if den == 0:
            raise ZeroDivisionError(f"{x} is the pole of {self}")
        return (self.a * x + self.b) / den

    def limit(self, x, from_above: bool):
        """One-sided limit at an extended rational, for an increasing map."""
        if not is_finite(x):
            if self.c != 0:
                return self.a / self.c
            return x if self.a / self.d > 0 else -x
        if self.c * x + self.d == 0:
            return NEG_INF if from_above else POS_INF
        return self(x)

    def inverse(self):
        return Moebius(self.d, -self.b, -self.c, self.a)

    def then(self, g: "Moebius") -> "Moebius":
        """The map ``x -> g(self(x))``."""
        a, b, c, d = self.coeffs
        ga, gb, gc, gd = g.coeffs
        return Moebius(ga * a + gb * c, ga * b + gb * d, gc * a + gd * c, gc * b + gd * d)

    def same_as(self, other: "Moebius") -> bool:
        """Projective equality of coefficient vectors."""
        u, v = self.coeffs, other.coeffs
        return all(u[i] * v[j] == u[j] * v[i] for i in range(4) for j in range(i + 1, 4))

    def to_json(self):
        return [format_ext(x) if x.denominator != 1 else int(x) for x in self.coeffs]

    def __str__(self):
        return "moebius(" + ",".join(format_ext(x) for x in self.coeffs) + ")"


@dataclass(frozen=True)
class Const:
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", _rat(self.value))

    def __call__(self, x):
        return self.value

    def __str__(self):
        return f"const({format_ext(self.value)})"


class Piece(NamedTuple):
    interval: QInterval
    fn: object

    def image(self) -> QInterval:
        iv, f = self.interval, self.fn
        if isinstance(f, Const):
            return QInterval.point(f.value)
        lo = f.limit(iv.lo, from_above=True)
        hi = f.limit(iv.hi, from_above=False)
        return QInterval(lo, iv.lo_closed, hi, iv.hi_closed)

    def preimage(self, target: QInterval) -> Optional[QInterval]:
        """Points of the piece's interval sent into ``target``."""
        iv, f = self.interval, self.fn
        if isinstance(f, Const):
            return iv if f.value in target else None
        hit = self.image().intersect(target)
        if hit is None:
            return None
        g = f.inverse()
        return QInterval.maybe(
            g.limit(hit.lo, from_above=True), hit.lo_closed, g.limit(hit.hi, from_above=False), hit.hi_closed
        )


def _touches(p: QInterval, q: QInterval):
    return p.hi > q.lo or (p.hi == q.lo and p.hi_closed and q.lo_closed)


@dataclass(frozen=True)
class PiecewiseMoebiusMap:
    pieces: tuple

    def __post_init__(self):
        pieces = tuple(Piece(*p) for p in self.pieces)
        object.__setattr__(self, "pieces", pieces)
        for p in pieces:
            f = p.fn
            if isinstance(f, Moebius):
                if f.det < 0:
                    raise UnsupportedShape(f"{f} is decreasing; only increasing or constant pieces are allowed")
                if f.pole is not None and f.pole in p.interval:
                    raise MalformedMap(f"pole {format_ext(f.pole)} of {f} lies in {p.interval}")
            elif not isinstance(f, Const):
                raise MalformedMap(f"unknown piece function {f!r}")
        for p, q in zip(pieces, pieces[1:]):
            if (p.interval.lo, not p.interval.lo_closed) > (q.interval.lo, not q.interval.lo_closed) or _touches(
                p.interval, q.interval
            ):
                raise MalformedMap(f"pieces {p.interval} and {q.interval} overlap or are out of order")

    @classmethod
    def build(cls, pieces):
        """Sort the pieces first, then validate."""
        pieces = sorted((Piece(*p) for p in pieces), key=lambda p: (p.interval.lo, not p.interval.lo_closed))
        return cls(tuple(pieces))

    @classmethod
    def identity(cls, interval=None):
        return cls(((interval or QInterval.whole(), Moebius.identity()),))

    @property
    def domain(self) -> IntervalUnion:
        return interval_union_normalize([p.interval for p in self.pieces])

    @property
    def is_full(self):
        return self.domain == IntervalUnion.whole()

    @property
    def is_empty(self):
        return not self.pieces

    def piece_at(self, x):
        for p in self.pieces:
            if x in p.interval:
                return p
        return None

    def __call__(self, x):
        p = self.piece_at(Fraction(x))
        return None if p is None else p.fn(Fraction(x))

    def to_json(self):
        out = []
        for p in self.pieces:
            entry = {"interval": str(p.interval)}
            if isinstance(p.fn, Const):
                entry["const"] = format_ext(p.fn.value)
            else:
                entry["moebius"] = p.fn.to_json()
            out.append(entry)
        return {"pieces": out}

    def __str__(self):
        return "; ".join(f"{p.fn} on {p.interval}" for p in self.pieces) or "empty"


def parse_symbolic_map(spec) -> PiecewiseMoebiusMap:
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise MalformedMap(f"bad JSON: {exc}") from None
    if not isinstance(spec, dict) or set(spec) != {"pieces"} or not isinstance(spec["pieces"], list):
        raise MalformedMap('expected {"pieces": [...]}')
    pieces = []
    for entry in spec["pieces"]:
        if not isinstance(entry, dict):
            raise MalformedMap(f"bad piece {entry!r}")
        keys = set(entry)
        if "interval" not in keys or len(keys) != 2 or not keys & {"moebius", "const"}:
            raise MalformedMap(f"a piece needs 'interval' plus one of 'moebius'/'const', got {sorted(keys)}")
        iv = parse_interval(entry["interval"])
        if "const" in entry:
            fn = Const(_rat(entry["const"]))
        else:
            coeffs = entry["moebius"]
            if not isinstance(coeffs, list) or len(coeffs) != 4:
                raise MalformedMap("'moebius' takes four coefficients [a,b,c,d]")
            fn = Moebius(*(_rat(c) for c in coeffs))
        pieces.append((iv, fn))
    return PiecewiseMoebiusMap.build(pieces)


def image_of(alpha: PiecewiseMoebiusMap) -> IntervalUnion:
    return interval_union_normalize([p.image() for p in alpha.pieces])


def restrict_symbolic(alpha: PiecewiseMoebiusMap, region: IntervalUnion) -> PiecewiseMoebiusMap:
    out = []
    for p in alpha.pieces:
        for r in region:
            iv = p.interval.intersect(r)
            if iv is not None:
                out.append((iv, p.fn))
    return PiecewiseMoebiusMap.build(out)


def compose_symbolic(alpha: PiecewiseMoebiusMap, beta: PiecewiseMoebiusMap) -> PiecewiseMoebiusMap:
    """First ``alpha``, then ``beta``."""
    out = []
    for p in alpha.pieces:
        for q in beta.pieces:
            sub = p.preimage(q.interval)
            if sub is None:
                continue
            if isinstance(p.fn, Const):
                fn = Const(q.fn(p.fn.value))
            elif isinstance(q.fn, Const):
                fn = q.fn
            else:
                fn = p.fn.then(q.fn)
            out.append((sub, fn))
    return PiecewiseMoebiusMap.build(out)


def maps_equal(alpha: PiecewiseMoebiusMap, beta: PiecewiseMoebiusMap) -> bool:
    if alpha.domain != beta.domain:
        return False
    for p in alpha.pieces:
        for q in beta.pieces:
            iv = p.interval.intersect(q.interval)
            if iv is None:
                continue
            if iv.is_point:
                if p.fn(iv.lo) != q.fn(iv.lo):
                    return False
            elif isinstance(p.fn, Const) and isinstance(q.fn, Const):
                if p.fn.value != q.fn.value:
                    return False
            elif isinstance(p.fn, Moebius) and isinstance(q.fn, Moebius):
                if not p.fn.same_as(q.fn):
                    return False
            else:
                # a strictly increasing piece never agrees with a constant on a non-degenerate interval
                return False
    return True


# -- orientation ---------------------------------------------------------------


def _inf_sup(p: Piece):
    im = p.image()
    return im.lo, im.hi


def _order_preserving_run(pieces) -> bool:
    bounds = [_inf_sup(p) for p in pieces]
    return all(s <= i for (_, s), (i, _) in zip(bounds, bounds[1:]))


def ideal_prefixes(alpha: PiecewiseMoebiusMap) -> list:
    """Piece counts ``k`` such that the first ``k`` pieces form an ideal, largest first.

    A cut inside a strictly increasing piece breaks (OP2) and a cut inside a
    constant piece forces the whole map to be constant, so cuts between
    pieces are enough to decide membership.
    """
    pieces = alpha.pieces
    found = []
    for k in range(len(pieces), 0, -1):
        y, rest = pieces[:k], pieces[k:]
        if not (_order_preserving_run(y) and _order_preserving_run(rest)):
            continue
        if rest and _inf_sup(y[0])[0] < _inf_sup(rest[-1])[1]:
            continue
        found.append(k)
    return found


def is_orientation_preserving_symbolic(alpha: PiecewiseMoebiusMap) -> Optional[IntervalUnion]:
    """An ideal of ``alpha`` as a set, or None when ``alpha`` is not orientation-preserving."""
    if alpha.is_empty:
        return IntervalUnion(())
    ks = ideal_prefixes(alpha)
    if not ks:
        return None
    return interval_union_normalize([p.interval for p in alpha.pieces[: ks[0]]])


def is_order_preserving_symbolic(alpha: PiecewiseMoebiusMap) -> bool:
    return _order_preserving_run(alpha.pieces)


def is_injective_symbolic(alpha: PiecewiseMoebiusMap) -> bool:
    ims = []
    for p in alpha.pieces:
        if isinstance(p.fn, Const) and not p.interval.is_point:
            return False
        ims.append(p.image())
    return all(a.intersect(b) is None for i, a in enumerate(ims) for b in ims[i + 1 :])


def inverse_symbolic(alpha: PiecewiseMoebiusMap) -> PiecewiseMoebiusMap:
    if not is_injective_symbolic(alpha):
        from .errors import NotInjective

        raise NotInjective("map is not injective")
    out = []
    for p in alpha.pieces:
        if isinstance(p.fn, Const):
            out.append((QInterval.point(p.fn.value), Const(p.interval.lo)))
        else:
            out.append((p.image(), p.fn.inverse()))
    return PiecewiseMoebiusMap.build(out)


# -- interval types and bijections ---------------------------------------------

POINT, CC, CO, OC, OO = "POINT", "CC", "CO", "OC", "OO"
_FLAG_TYPE = {(True, True): CC, (True, False): CO, (False, True): OC, (False, False): OO}


def interval_type(iv: QInterval) -> str:
    """Order type of a bounded rational interval.

    Bounded non-degenerate intervals with the same endpoint attainment are
    order-isomorphic (countable dense orders, with endpoints added back), so
    this label is a complete invariant.  Singletons get their own label.
    """
    if not iv.bounded:
        raise UnboundedUnsupported(f"{iv} is unbounded")
    if iv.is_point:
        return POINT
    return _FLAG_TYPE[(iv.lo_closed, iv.hi_closed)]


def _as_type(x):
    if isinstance(x, QInterval):
        return interval_type(x)
    if isinstance(x, str):
        return x
    return _FLAG_TYPE[tuple(bool(v) for v in x)]


def q_interval_signature_iso(a, b) -> bool:
    """Whether two bounded intervals (or signatures ``(has_min, has_max)``) are order-isomorphic."""
    return _as_type(a) == _as_type(b)


class Split(NamedTuple):
    """A decomposition of an interval into a lower order ideal and the complementary filter."""

    kind: str
    lower: Optional[str]
    upper: Optional[str]


def interval_splits(iv: QInterval) -> list:
    t = interval_type(iv)
    out = [Split("trivial", t, None), Split("trivial", None, t)]
    if t == POINT:
        return out
    l, r = iv.lo_closed, iv.hi_closed
    out.append(Split("rational-lower", _FLAG_TYPE[(l, True)], _FLAG_TYPE[(False, r)]))
    if l:
        out.append(Split("rational-lower", POINT, _FLAG_TYPE[(False, r)]))
    out.append(Split("rational-upper", _FLAG_TYPE[(l, False)], _FLAG_TYPE[(True, r)]))
    if r:
        out.append(Split("rational-upper", _FLAG_TYPE[(l, False)], POINT))
    out.append(Split("gap", _FLAG_TYPE[(l, False)], _FLAG_TYPE[(False, r)]))
    return out


def _realize(iv: QInterval, split: Split):
    """Concrete (lower, upper) intervals for a rational or trivial split."""
    if split.kind == "trivial":
        return (iv, None) if split.upper is None else (None, iv)
    mid = (iv.lo + iv.hi) / 2
    if split.kind == "rational-lower":
        u = iv.lo if split.lower == POINT else mid
        return QInterval(iv.lo, iv.lo_closed, u, True), QInterval(u, False, iv.hi, iv.hi_closed)
    u = iv.hi if split.upper == POINT else mid
    return QInterval(iv.lo, iv.lo_closed, u, False), QInterval(u, True, iv.hi, iv.hi_closed)


def _affine_iso(src: QInterval, dst: QInterval):
    if src.is_point:
        return Const(dst.lo)
    slope = (dst.hi - dst.lo) / (src.hi - src.lo)
    return Moebius.affine(slope, dst.lo - slope * src.lo)


@dataclass
class BijectionAnalysis:
    exists: bool
    certificate: str
    matches: list
    witness: Optional[PiecewiseMoebiusMap] = None

    def to_json(self):
        return {
            "exists": self.exists,
            "certificate": self.certificate,
            "matches": [
                {"source": s._asdict(), "target": t._asdict()} for s, t in self.matches
            ],
            "witness": None if self.witness is None else self.witness.to_json(),
        }


def _assemble_witness(i_iv, j_iv, s_split, t_split):
    y, f = _realize(i_iv, s_split)
    j1, j2 = _realize(j_iv, t_split)
    pieces = [(y, _affine_iso(y, j2))]
    if f is not None:
        pieces.append((f, _affine_iso(f, j1)))
    w = PiecewiseMoebiusMap.build(pieces)
    ok = (
        is_orientation_preserving_symbolic(w) is not None
        and is_injective_symbolic(w)
        and image_of(w) == interval_union_normalize([j_iv])
        and w.domain == interval_union_normalize([i_iv])
    )
    return w if ok else None


def orientation_bijection_analysis(i_iv: QInterval, j_iv: QInterval) -> BijectionAnalysis:
    """Decide whether an orientation-preserving bijection ``I -> J`` exists.

    Such a bijection with ideal ``Y`` sends ``Y`` onto a filter ``J2`` of ``J``
    and ``I \\ Y`` onto the complementary ideal ``J1``, each part by an order
    isomorphism, and conversely any such pair of isomorphisms glues to one.
    Splits are enumerated by order type only.  Matches using rational cuts
    get an explicit affine witness; matches that need an irrational cut are
    certified by the back-and-forth theorem.
    """
    src = [s for s in interval_splits(i_iv) if s.lower is not None]
    dst = [t for t in interval_splits(j_iv) if t.upper is not None]
    matches = [(s, t) for s in src for t in dst if s.lower == t.upper and s.upper == t.lower]
    if not matches:
        return BijectionAnalysis(False, "obstruction", [])
    for s, t in matches:
        if s.kind != "gap" and t.kind != "gap":
            w = _assemble_witness(i_iv, j_iv, s, t)
            if w is not None:
                return BijectionAnalysis(True, "witness", matches, w)
    return BijectionAnalysis(True, "back-and-forth", matches)


def orientation_bijection_exists(i_iv: QInterval, j_iv: QInterval) -> bool:
    return orientation_bijection_analysis(i_iv, j_iv).exists


# -- D versus J on the rational line --------------------------------------------


def dj_gap_witness(a, b, c, d) -> dict:
    """Partial identities on ``]a,b[`` and ``[c,d]``: not D-related, but J-related."""
    a, b, c, d = (_rat(x) for x in (a, b, c, d))
    if not (a < b and c < d):
        raise BadInterval(f"need a<b and c<d, got {a},{b},{c},{d}")
    i_iv, j_iv = QInterval.open(a, b), QInterval.closed(c, d)
    alpha, beta = PiecewiseMoebiusMap.identity(i_iv), PiecewiseMoebiusMap.identity(j_iv)
    im_a, im_b = image_of(alpha), image_of(beta)
    d_analysis = orientation_bijection_analysis(im_a.parts[0], im_b.parts[0])

    theta = PiecewiseMoebiusMap(((i_iv, Moebius(d - c, 2 * b * c - 2 * a * d + b * d - a * c, 0, 3 * (b - a))),))
    tau = PiecewiseMoebiusMap(((j_iv, Moebius(b - a, 2 * a * d - 2 * b * c + b * d - a * c, 0, 3 * (d - c))),))

    def injection_ok(f, src, dst):
        inv = inverse_symbolic(f)
        return {
            "order_preserving": is_order_preserving_symbolic(f),
            "injective": is_injective_symbolic(f),
            "domain_ok": f.domain == src,
            "image_inside_target": image_of(f).issubset(dst),
            "inverse_orientation_preserving": is_orientation_preserving_symbolic(inv) is not None,
            "image": str(image_of(f)),
        }

    theta_chk = injection_ok(theta, im_a, im_b)
    tau_chk = injection_ok(tau, im_b, im_a)
    # alpha = lambda beta theta^-1 with lambda = alpha theta (beta's own choice map is the identity)
    lam = compose_symbolic(alpha, theta)
    back = compose_symbolic(compose_symbolic(lam, beta), inverse_symbolic(theta))
    lam2 = compose_symbolic(beta, tau)
    back2 = compose_symbolic(compose_symbolic(lam2, alpha), inverse_symbolic(tau))
    identities = {"alpha_eq_lambda_beta_thetainv": maps_equal(back, alpha), "beta_eq_delta_alpha_tauinv": maps_equal(back2, beta)}

    def all_ok(chk):
        return all(v for k, v in chk.items() if k != "image")

    j_holds = all_ok(theta_chk) and all_ok(tau_chk) and all(identities.values())
    return {
        "alpha": alpha.to_json(),
        "beta": beta.to_json(),
        "image_alpha": str(im_a),
        "image_beta": str(im_b),
        "D": d_analysis.exists,
        "D_certificate": d_analysis.certificate,
        "J": j_holds,
        "theta": theta.to_json(),
        "tau": tau.to_json(),
        "theta_checks": theta_chk,
        "tau_checks": tau_chk,
        "identities": identities,
    }


# -- curated maps --------------------------------------------------------------


def _m(*pieces):
    return PiecewiseMoebiusMap.build([(parse_interval(iv), fn) for iv, fn in pieces])


def curated_maps() -> dict:
    """Named full maps of the rational line with their expected regularity."""
    return {
        "identity": (_m(("(-inf,inf)", Moebius.identity())), True),
        "shift-gap": (_m(("(-inf,0)", Moebius.identity()), ("[0,inf)", Moebius.affine(1, 1))), True),
        "first-example": (_m(("(-inf,1)", Const(-1)), ("[1,inf)", Moebius(0, -1, 1, 0))), True),
        "wrapped-regular": (
            _m(("(-inf,0)", Moebius(1, -2, 1, -1)), ("[0,1)", Moebius.affine(1, -2)), ("[1,inf)", Const(-1))),
            True,
        ),
        "glued": (
            _m(
                ("(-inf,-1)", Const(1)),
                ("[-1,0]", Moebius.affine(1, 2)),
                ("(0,1)", Moebius.identity()),
                ("[1,inf)", Const(1)),
            ),
            True,
        ),
        "open-image": (open_image_map(), False),
        "wrapped-open-gap": (_m(("(-inf,0)", Moebius(1, -2, 1, -1)), ("[0,inf)", Moebius(-1, -2, 1, 1))), False),
    }


def open_image_map() -> PiecewiseMoebiusMap:
    """x/(x+1) on [0,inf) and -x/(x-1) below 0; image ]-1,1[."""
    return _m(("(-inf,0)", Moebius(-1, 0, 1, -1)), ("[0,inf)", Moebius(1, 0, 1, 1)))


def first_example_pair():
    """An order-preserving map with image [-1,0[ and a mutual inverse outside O."""
    alpha = curated_maps()["first-example"][0]
    beta = _m(("(-inf,-1)", Const(1)), ("[-1,0)", Moebius(0, -1, 1, 0)), ("[0,inf)", Const(1)))
    return alpha, beta
