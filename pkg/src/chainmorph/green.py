"""Green's relations through image, kernel and bijection criteria.

For full orientation-preserving maps of a finite chain, R, D and J hinge on
whether certain partial bijections extend to full members of OP (or O).
That is decided by exhaustive search over completions.  Every positive
verdict carries the maps that realise it, and those are re-checked by
composition before they are returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import NamedTuple, Optional

from .errors import KernelMismatch, NotFull, NotInClass, NotInjective, SizeLimit, VerificationError
from .transforms import (
    ClassTag,
    PartialMap,
    compose,
    in_class,
    invert,
    is_order_preserving,
    is_orientation_preserving,
    resolve_ideal,
)

DEFAULT_COMPLETION_LIMIT = 10**7
MAX_BIJECTION_IMAGE = 8


class CompletabilityWitness(NamedTuple):
    extension: PartialMap
    target_class: ClassTag


@dataclass
class GreenVerdict:
    relation: str
    holds: bool
    witnesses: list = field(default_factory=list)

    def to_json(self):
        def enc(v):
            if isinstance(v, PartialMap):
                return v.spec()
            if isinstance(v, dict):
                return {k: enc(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            return v

        return {"relation": self.relation, "holds": self.holds, "witnesses": enc(self.witnesses)}


def canonical_bijection(alpha: PartialMap, beta: PartialMap) -> PartialMap:
    """The map ``a -> b`` on images with equal preimage classes."""
    if alpha.n != beta.n or alpha.kernel() != beta.kernel():
        raise KernelMismatch(f"{alpha} and {beta} have different kernels")
    pairs = {}
    for x, v in alpha.items():
        pairs[v] = beta(x)
    return PartialMap.from_dict(alpha.n, pairs)


# -- completions -----------------------------------------------------------------


@lru_cache(maxsize=1 << 16)
def _complete(n, values, tag, limit):
    free = values.count(None)
    if n**free > limit:
        raise SizeLimit(f"{n ** free} completions exceed limit {limit}")
    max_desc = 0 if tag is ClassTag.O else 1
    out = [0] * n

    def go(i, prev, desc, first):
        if i == n:
            total = desc + (1 if (tag is ClassTag.OP and n > 1 and out[-1] > first) else 0)
            return total <= max_desc
        options = [values[i]] if values[i] is not None else range(1, n + 1)
        for v in options:
            d = desc + (1 if i > 0 and prev > v else 0)
            if d > max_desc:
                continue
            out[i] = v
            if go(i + 1, v, d, first if i > 0 else v):
                return True
        return False

    return tuple(out) if go(0, 0, 0, 0) else None


def is_completable(theta: PartialMap, tag=ClassTag.OP, limit=DEFAULT_COMPLETION_LIMIT) -> Optional[CompletabilityWitness]:
    """A full map of class ``tag`` (OP or O) extending ``theta``, or None."""
    tag = ClassTag(tag)
    if tag not in (ClassTag.OP, ClassTag.O):
        raise ValueError("completions are searched in OP or O only")
    found = _complete(theta.n, theta.values, tag, limit)
    if found is None:
        return None
    ext = PartialMap(theta.n, found)
    if not in_class(ext, tag) or any(ext(x) != v for x, v in theta.items()):
        raise VerificationError(f"completion {ext} of {theta} failed its check")
    return CompletabilityWitness(ext, tag)


def is_bicompletable(theta: PartialMap, tag=ClassTag.OP, limit=DEFAULT_COMPLETION_LIMIT) -> bool:
    if not theta.is_injective:
        raise NotInjective(f"{theta} is not injective")
    return bool(is_completable(theta, tag, limit)) and bool(is_completable(invert(theta), tag, limit))


# -- helpers ---------------------------------------------------------------------


def _map_from_pairs(n, keys, vals):
    return PartialMap.from_dict(n, dict(zip(keys, vals)))


def injective_maps(a, b, n):
    """Every injection from ``a`` into ``b`` (as partial maps on the n-chain)."""
    a = sorted(a)
    for vals in permutations(sorted(b), len(a)):
        yield _map_from_pairs(n, a, vals)


def bijections(a, b, n, flavor=None):
    """Bijections ``a -> b``, optionally filtered to order or orientation flavor."""
    if len(a) != len(b):
        return
    for th in injective_maps(a, b, n):
        if flavor == "order" and not is_order_preserving(th):
            continue
        if flavor == "orientation" and not is_orientation_preserving(th):
            continue
        yield th


def injection_exists(a, b, flavor="order", n=None) -> Optional[PartialMap]:
    """An order- or orientation-preserving injection ``a -> b``, or None.

    Matching the sorted lists gives an order-preserving injection whenever
    ``|a| <= |b|``, and it is also orientation-preserving.
    """
    a, b = sorted(a), sorted(b)
    n = n or max(a + b + [1])
    if len(a) > len(b):
        return None
    th = _map_from_pairs(n, a, b[: len(a)])
    ok = is_order_preserving(th) if flavor == "order" else is_orientation_preserving(th)
    if not (ok and th.is_injective):
        raise VerificationError(f"sorted matching {th} is not a valid witness")
    return th


def choice_inverse(beta: PartialMap, ideal=None) -> PartialMap:
    """A partial map on ``Im(beta)`` picking preimages, orientation-compatible.

    With ``ideal`` B, values hit from outside B pick a preimage outside B and
    the rest pick one inside B.  Without it, the smallest preimage is used.
    """
    out = {}
    b = frozenset(ideal) if ideal is not None else frozenset(beta.dom)
    outside = {beta(x) for x in beta.dom if x not in b}
    for c in sorted(beta.image):
        pre = beta.preimage(c)
        pool = [x for x in pre if x not in b] if c in outside else [x for x in pre if x in b]
        out[c] = min(pool)
    return PartialMap.from_dict(beta.n, out)


def _orientation_choice(beta: PartialMap) -> PartialMap:
    return choice_inverse(beta, resolve_ideal(beta) if not beta.is_empty else frozenset())


def _require(cond, msg):
    if not cond:
        raise VerificationError(msg)


def _l_witness(alpha, beta, chooser):
    lam = compose(alpha, chooser(beta))
    mu = compose(beta, chooser(alpha))
    _require(compose(lam, beta) == alpha and compose(mu, alpha) == beta, "L witness failed")
    return {"lambda": lam, "mu": mu, "identity": "alpha = lambda beta, beta = mu alpha"}


def _j_witness(alpha, beta, theta, theta_inv_ext, chooser):
    lam = compose(compose(alpha, theta), chooser(beta))
    _require(compose(compose(lam, beta), theta_inv_ext) == alpha, "J witness failed")
    return lam


# -- OP(X_n) ---------------------------------------------------------------------


def _check_op(*maps):
    for m in maps:
        if not m.is_full:
            raise NotFull(f"{m} is not full")
        if not in_class(m, ClassTag.OP):
            raise NotInClass(f"{m} is not in OP")


@lru_cache(maxsize=1 << 14)
def _bicompletable_bijection(n, a, b):
    if len(a) != len(b):
        return None
    if len(a) > MAX_BIJECTION_IMAGE:
        raise SizeLimit(f"image of size {len(a)} exceeds {MAX_BIJECTION_IMAGE}")
    for th in injective_maps(a, b, n):
        fwd = is_completable(th)
        if fwd is None:
            continue
        back = is_completable(invert(th))
        if back is not None:
            return th, fwd.extension, back.extension
    return None


@lru_cache(maxsize=1 << 14)
def _injection_with_completable_inverse(n, a, b):
    if len(a) > MAX_BIJECTION_IMAGE:
        raise SizeLimit(f"image of size {len(a)} exceeds {MAX_BIJECTION_IMAGE}")
    for th in injective_maps(a, b, n):
        back = is_completable(invert(th))
        if back is not None:
            return th, back.extension
    return None


def green_check_op(alpha: PartialMap, beta: PartialMap, relation) -> GreenVerdict:
    """Green's relation ``relation`` between two members of OP(X_n), by the criteria."""
    _check_op(alpha, beta)
    rel = relation.upper()
    n = alpha.n
    if rel == "L":
        holds = alpha.image == beta.image
        return GreenVerdict("L", holds, [_l_witness(alpha, beta, _orientation_choice)] if holds else [])
    if rel in ("R", "H"):
        if rel == "H" and alpha.image != beta.image:
            return GreenVerdict(rel, False)
        try:
            theta = canonical_bijection(alpha, beta)
        except KernelMismatch:
            return GreenVerdict(rel, False)
        fwd = is_completable(theta)
        back = is_completable(invert(theta))
        if fwd is None or back is None:
            return GreenVerdict(rel, False, [{"canonical_bijection": theta, "completable": fwd is not None, "inverse_completable": back is not None}])
        lam, gam = fwd.extension, back.extension
        _require(compose(alpha, lam) == beta and compose(beta, gam) == alpha, "R witness failed")
        return GreenVerdict(rel, True, [{"canonical_bijection": theta, "lambda": lam, "gamma": gam, "identity": "beta = alpha lambda, alpha = beta gamma"}])
    if rel == "D":
        found = _bicompletable_bijection(n, tuple(sorted(alpha.image)), tuple(sorted(beta.image)))
        if found is None:
            return GreenVerdict("D", False)
        theta, xi, back = found
        gamma = compose(alpha, xi)
        _require(gamma.image == beta.image, "D witness: gamma not L-related to beta")
        _require(compose(gamma, back) == alpha and compose(alpha, xi) == gamma, "D witness: gamma not R-related to alpha")
        return GreenVerdict("D", True, [{"bijection": theta, "xi": xi, "gamma": gamma, "identity": "gamma = alpha xi, alpha = gamma xi'; Im gamma = Im beta"}])
    if rel == "J":
        wit = []
        for src, dst in ((alpha, beta), (beta, alpha)):
            found = _injection_with_completable_inverse(n, tuple(sorted(src.image)), tuple(sorted(dst.image)))
            if found is None:
                return GreenVerdict("J", False)
            theta, gam = found
            lam = _j_witness(src, dst, theta, gam, _orientation_choice)
            _require(in_class(lam, ClassTag.OP), "J witness lambda left OP")
            wit.append({"injection": theta, "lambda": lam, "gamma": gam})
        return GreenVerdict("J", True, wit)
    raise ValueError(f"unknown relation {relation!r}")


# -- PO, POP, POI, POPI ----------------------------------------------------------

REGULAR_CLASSES = (ClassTag.PO, ClassTag.POP, ClassTag.POI, ClassTag.POPI)


def _flavor(tag):
    return "order" if tag in (ClassTag.PO, ClassTag.POI) else "orientation"


def green_check_regular(alpha: PartialMap, beta: PartialMap, relation, tag) -> GreenVerdict:
    tag = ClassTag(tag)
    if tag not in REGULAR_CLASSES:
        raise ValueError(f"{tag.value} is not one of PO, POP, POI, POPI")
    for m in (alpha, beta):
        if not in_class(m, tag):
            raise NotInClass(f"{m} is not in {tag.value}")
    if alpha.n != beta.n:
        from .errors import ChainMismatch

        raise ChainMismatch("maps live on different chains")
    rel = relation.upper()
    flavor = _flavor(tag)
    chooser = choice_inverse if flavor == "order" else _orientation_choice
    n = alpha.n
    same_image = alpha.image == beta.image
    same_kernel = alpha.kernel() == beta.kernel()
    if rel == "L":
        return GreenVerdict("L", same_image, [_l_witness(alpha, beta, chooser)] if same_image else [])
    if rel in ("R", "H"):
        holds = same_kernel and (same_image or rel == "R")
        wit = []
        if holds:
            gam, lam = compose(chooser(beta), alpha), compose(chooser(alpha), beta)
            _require(compose(beta, gam) == alpha and compose(alpha, lam) == beta, "R witness failed")
            wit.append({"lambda": lam, "gamma": gam, "identity": "beta = alpha lambda, alpha = beta gamma"})
        return GreenVerdict(rel, holds, wit)
    if rel == "D":
        if len(alpha.image) != len(beta.image):
            return GreenVerdict("D", False)
        theta = injection_exists(alpha.image, beta.image, flavor, n)
        gamma = compose(alpha, theta)
        _require(in_class(gamma, tag) and gamma.image == beta.image and gamma.kernel() == alpha.kernel(), "D witness failed")
        return GreenVerdict("D", True, [{"bijection": theta, "gamma": gamma, "identity": "gamma = alpha theta; Ker gamma = Ker alpha, Im gamma = Im beta"}])
    if rel == "J":
        wit = []
        for src, dst in ((alpha, beta), (beta, alpha)):
            theta = injection_exists(src.image, dst.image, flavor, n)
            if theta is None:
                return GreenVerdict("J", False)
            inv = invert(theta)
            lam = _j_witness(src, dst, theta, inv, chooser)
            _require(in_class(lam, tag) and in_class(inv, tag), "J witness left the class")
            wit.append({"injection": theta, "lambda": lam, "identity": "src = lambda dst theta^-1"})
        return GreenVerdict("J", True, wit)
    raise ValueError(f"unknown relation {relation!r}")


def green_check(alpha, beta, relation, tag) -> GreenVerdict:
    tag = ClassTag(tag)
    if tag is ClassTag.OP:
        return green_check_op(alpha, beta, relation)
    return green_check_regular(alpha, beta, relation, tag)
