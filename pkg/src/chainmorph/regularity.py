"""Inner inverses and regularity criteria.

Finite maps get two constructions: the partial inverse ``zeta`` (defined on
the image only) and the full inverse ``beta`` that extends it to non-image
points.  Both criteria work on an image representation, so finite and
symbolic callers share them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from .chain import NEG_INF, POS_INF, IntervalUnion, Signature, gap_list, union_signature
from .errors import (
    ChainMismatch,
    CriterionFails,
    EmptyImage,
    NotAnIdeal,
    NotFull,
    NotOrientationPreserving,
    VerificationError,
)
from .symbolic import (
    Const,
    PiecewiseMoebiusMap,
    QInterval,
    compose_symbolic,
    ideal_prefixes,
    image_of,
    interval_union_normalize,
    is_orientation_preserving_symbolic,
    maps_equal,
)
from .transforms import PartialMap, compose, is_orientation_preserving, resolve_ideal


@dataclass(frozen=True)
class ChoiceFunction:
    """``z_of[x]`` is a preimage of ``x``, taken inside the ideal whenever possible."""

    z_of: dict

    def __call__(self, x):
        return self.z_of[x]


def default_choice(alpha: PartialMap, y) -> ChoiceFunction:
    y = frozenset(y)
    z = {}
    for x, v in alpha.items():
        if v not in z or (x in y and z[v] not in y):
            z[v] = x
    return ChoiceFunction(z)


def all_choices(alpha: PartialMap, y):
    """Every ideal-preferring choice function for ``alpha``."""
    y = frozenset(y)
    image = sorted(alpha.image)
    options = []
    for v in image:
        pre = alpha.preimage(v)
        inside = [x for x in pre if x in y]
        options.append(inside or list(pre))
    for pick in product(*options):
        yield ChoiceFunction(dict(zip(image, pick)))


def _check_choice(alpha, y, choice):
    y = frozenset(y)
    y_img = {alpha(x) for x in y}
    for v in alpha.image:
        z = choice(v)
        if alpha(z) != v or (v in y_img and z not in y):
            raise ValueError(f"choice {z} for {v} is not an ideal-preferring preimage")


def zeta_inverse(alpha: PartialMap, y=None, choice: Optional[ChoiceFunction] = None) -> PartialMap:
    """Partial inverse on the image: ``x -> z_x``."""
    if not is_orientation_preserving(alpha):
        raise NotOrientationPreserving(f"{alpha} is not orientation-preserving")
    y = resolve_ideal(alpha, y)
    if choice is None:
        choice = default_choice(alpha, y)
    else:
        _check_choice(alpha, y, choice)
    return PartialMap.from_dict(alpha.n, {v: choice(v) for v in alpha.image})


def build_op_inverse(alpha: PartialMap, y=None, choice: Optional[ChoiceFunction] = None) -> PartialMap:
    """Full inverse of a full orientation-preserving map of a finite chain."""
    if not alpha.is_full:
        raise NotFull(f"{alpha} is not full")
    if not is_orientation_preserving(alpha):
        raise NotOrientationPreserving(f"{alpha} is not orientation-preserving")
    y = resolve_ideal(alpha, y)
    z = default_choice(alpha, y) if choice is None else choice
    if choice is not None:
        _check_choice(alpha, y, choice)
    im = sorted(alpha.image)
    lo, hi = im[0], im[-1]
    out = []
    for x in range(1, alpha.n + 1):
        if x in alpha.image:
            out.append(z(x))
        elif x < lo or x > hi:
            # a finite image always has a maximum
            out.append(z(hi))
        else:
            out.append(z(max(t for t in im if t < x)))
    return PartialMap.full(out)


def verify_inner_inverse(alpha, beta) -> bool:
    """Whether ``alpha beta alpha == alpha``."""
    if isinstance(alpha, PartialMap):
        if not isinstance(beta, PartialMap) or alpha.n != beta.n:
            raise ChainMismatch("maps live on different chains")
        return compose(compose(alpha, beta), alpha) == alpha
    if not isinstance(beta, PiecewiseMoebiusMap):
        raise ChainMismatch("maps live on different chains")
    return maps_equal(compose_symbolic(compose_symbolic(alpha, beta), alpha), alpha)


def convex_closure(values) -> list:
    values = list(values)
    return list(range(min(values), max(values) + 1)) if values else []


def beta_structure(alpha: PartialMap, y, beta: PartialMap, choice: Optional[ChoiceFunction] = None) -> dict:
    """Structural facts a full inverse is expected to satisfy, each as a bool."""
    y = frozenset(y)
    z = default_choice(alpha, y) if choice is None else choice
    rest = frozenset(alpha.dom) - y
    y_img = {alpha(x) for x in y}
    rest_img = {alpha(x) for x in rest}
    glued = y_img & rest_img
    im = alpha.image
    lo, hi = min(im), max(im)

    def monotone_on(points):
        vals = [beta(x) for x in points]
        return all(a <= b for a, b in zip(vals, vals[1:]))

    cl_y = convex_closure(y_img)
    cl_rest = convex_closure(rest_img - glued)
    bounds = [x for x in range(1, alpha.n + 1) if x < lo or x > hi]
    return {
        "order_preserving_on_cl_Y_image": monotone_on(cl_y),
        "cl_Y_image_lands_in_Y": all(beta(x) in y for x in cl_y),
        "order_preserving_on_cl_rest_image": monotone_on(cl_rest),
        "bounds_go_to_extremes": all(beta(x) in {z(hi), z(lo)} for x in bounds),
    }


@dataclass
class RegCriterionReport:
    criterion: str
    condition1: bool
    condition2: bool
    condition3: Optional[bool] = None
    failing_gap: Optional[dict] = None
    failing_condition: Optional[str] = None
    verdict: bool = field(init=False)

    def __post_init__(self):
        conds = [self.condition1, self.condition2]
        if self.condition3 is not None:
            conds.append(self.condition3)
        self.verdict = all(conds)

    def to_json(self):
        out = {
            "criterion": self.criterion,
            "condition1": self.condition1,
            "condition2": self.condition2,
            "verdict": self.verdict,
            "failing_gap": self.failing_gap,
            "failing_condition": self.failing_condition,
        }
        if self.condition3 is not None:
            out["condition3"] = self.condition3
        return out


def _image_facts(im):
    """(signature, list of (gap ok, gap descriptor)) for either image representation."""
    if isinstance(im, IntervalUnion):
        if im.is_empty:
            raise EmptyImage("empty image")
        sig = union_signature(im)
        gaps = []
        for j, g in enumerate(gap_list(im)):
            gaps.append((g.left_attained or g.right_attained, {"index": j, "below": str(im.parts[j]), "above": str(im.parts[j + 1])}))
        return sig, gaps
    if not im:
        raise EmptyImage("empty image")
    # finite chains: every nonempty subset has both extremes and every gap is attained on both sides
    return Signature(True, True, True, True), []


def _first_failing(gaps):
    for ok, desc in gaps:
        if not ok:
            return desc
    return None


def reg_o_criterion(im, chain=None) -> RegCriterionReport:
    """Regularity test for order-preserving full maps, from the image alone."""
    sig, gaps = _image_facts(im)
    c1 = (not sig.bounded_above) or sig.has_max
    c2 = (not sig.bounded_below) or sig.has_min
    c3 = all(ok for ok, _ in gaps)
    failing = None if c1 else "condition1"
    failing = failing or (None if c2 else "condition2") or (None if c3 else "condition3")
    return RegCriterionReport("o", c1, c2, c3, _first_failing(gaps), failing)


def reg_op_criterion(im, chain=None) -> RegCriterionReport:
    """Regularity test for orientation-preserving full maps, from the image alone."""
    sig, gaps = _image_facts(im)
    c1 = not (sig.bounded_above or sig.bounded_below) or sig.has_max or sig.has_min
    c2 = all(ok for ok, _ in gaps)
    failing = None if c1 else "condition1"
    failing = failing or (None if c2 else "condition2")
    return RegCriterionReport("op", c1, c2, None, _first_failing(gaps), failing)


def build_op_inverse_symbolic(alpha: PiecewiseMoebiusMap, y: Optional[IntervalUnion] = None) -> PiecewiseMoebiusMap:
    """Full inverse of a full orientation-preserving map of the rational line.

    Image points are sent back through the first piece that reaches them,
    ideal pieces first.  Points below or above the image go to the preimage
    of the maximum (or, failing that, the minimum); points in a gap go to the
    preimage of the attained side of that gap.
    """
    if not alpha.is_full:
        raise NotFull("map is not defined on all of Q")
    ks = ideal_prefixes(alpha)
    if not ks:
        raise NotOrientationPreserving("map is not orientation-preserving")
    if y is None:
        k = ks[0]
    else:
        match = [k for k in ks if interval_union_normalize([p.interval for p in alpha.pieces[:k]]) == y]
        if not match:
            raise NotAnIdeal(f"{y} is not an ideal made of whole pieces")
        k = match[0]
    im = image_of(alpha)
    report = reg_op_criterion(im)
    if not report.verdict:
        raise CriterionFails(f"not regular, criterion {report.failing_condition} failed")

    out = []
    covered = IntervalUnion(())
    for p in alpha.pieces[:k] + alpha.pieces[k:]:
        piece_im = interval_union_normalize([p.image()])
        fresh = piece_im.difference(covered)
        for part in fresh:
            if isinstance(p.fn, Const):
                out.append((part, Const(p.interval.sample())))
            else:
                out.append((part, p.fn.inverse()))
        covered = covered.union(piece_im)
    partial = PiecewiseMoebiusMap.build(out)

    def z(v):
        return partial(v)

    sig = union_signature(im)
    extreme = z(im.hi) if sig.has_max else (z(im.lo) if sig.has_min else None)
    fill = []
    below = QInterval.maybe(NEG_INF, False, im.lo, not im.parts[0].lo_closed)
    above = QInterval.maybe(im.hi, not im.parts[-1].hi_closed, POS_INF, False)
    for region in (below, above):
        if region is not None:
            # the criterion guarantees an attained extreme whenever a bound exists
            fill.append((region, Const(extreme)))
    for left, right in zip(im.parts, im.parts[1:]):
        gap = QInterval(left.hi, not left.hi_closed, right.lo, not right.lo_closed)
        fill.append((gap, Const(z(left.hi) if left.hi_closed else z(right.lo))))
    beta = PiecewiseMoebiusMap.build(out + fill)
    if not beta.is_full:
        raise VerificationError("constructed inverse is not full")
    if not verify_inner_inverse(alpha, beta):
        raise VerificationError("constructed inverse fails alpha beta alpha = alpha")
    return beta


def symbolic_inverse_report(alpha: PiecewiseMoebiusMap) -> dict:
    beta = build_op_inverse_symbolic(alpha)
    return {
        "beta": beta.to_json(),
        "alpha_beta_alpha_eq_alpha": verify_inner_inverse(alpha, beta),
        "beta_orientation_preserving": is_orientation_preserving_symbolic(beta) is not None,
        "beta_alpha_beta_eq_beta": verify_inner_inverse(beta, alpha),
    }
