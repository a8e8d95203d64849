import itertools
import random

import pytest

from chainmorph.enumerate import GreenOracle
from chainmorph.errors import KernelMismatch, NotFull, NotInClass, NotInjective
from chainmorph.green import (
    bijections,
    canonical_bijection,
    choice_inverse,
    green_check,
    green_check_op,
    green_check_regular,
    injection_exists,
    is_bicompletable,
    is_completable,
)
from chainmorph.transforms import ClassTag, PartialMap, compose, in_class, parse_map

from conftest import members, table

T = ClassTag
F = PartialMap.full


def test_canonical_bijection_examples():
    assert canonical_bijection(F([1, 1, 2]), F([2, 2, 3])) == parse_map("{1:2,2:3}", 3)
    a = F([2, 3, 1])
    assert canonical_bijection(a, a) == PartialMap.identity(3)
    assert canonical_bijection(F([2, 2, 1]), F([1, 1, 2])) == parse_map("{2:1,1:2}", 3)
    with pytest.raises(KernelMismatch):
        canonical_bijection(F([1, 1, 2]), F([1, 2, 2]))


def test_completable_examples():
    w = is_completable(parse_map("{1:2,2:3}", 3))
    assert w is not None and w.extension(1) == 2 and w.extension(2) == 3 and in_class(w.extension, T.OP)
    assert is_completable(parse_map("{1:1}", 3)) is not None
    assert is_completable(parse_map("{1:1,2:3,3:2}", 3)) is None
    assert is_completable(parse_map("{1:2,2:1}", 2), T.O) is None
    assert is_completable(parse_map("{1:2,2:1}", 2), T.OP) is not None


def test_bicompletable_examples():
    assert is_bicompletable(parse_map("{2:2}", 3))
    assert is_bicompletable(parse_map("{1:2,2:3}", 3))
    assert not is_bicompletable(parse_map("{1:1,2:3,3:2}", 3))
    with pytest.raises(NotInjective):
        is_bicompletable(parse_map("{1:1,2:1}", 3))


def test_completion_search_matches_brute_force():
    # every partial map on X_3 and X_4, against filtering all full maps
    for n in (3, 4):
        full = [F(v) for v in itertools.product(range(1, n + 1), repeat=n)]
        for tag in (T.OP, T.O):
            cls = [f for f in full if in_class(f, tag)]
            for vals in itertools.product(range(n + 1), repeat=n):
                th = PartialMap(n, tuple(v or None for v in vals))
                brute = any(all(f(x) == v for x, v in th.items()) for f in cls)
                assert (is_completable(th, tag) is not None) == brute


def test_injection_exists_examples():
    assert injection_exists({1, 2}, {1, 2, 3}, n=3) == parse_map("{1:1,2:2}", 3)
    assert injection_exists({1, 2, 3}, {2}, n=3) is None
    assert injection_exists({2, 3}, {1, 3}, n=3) == parse_map("{2:1,3:3}", 3)
    assert injection_exists({2, 3}, {1, 3}, "orientation", n=3) is not None


def test_green_op_examples():
    assert green_check_op(F([1, 1, 2]), F([2, 1, 1]), "L").holds
    a = F([2, 3, 1])
    for rel in "LRHDJ":
        assert green_check_op(a, a, rel).holds
    c, i = F([1, 1, 1]), PartialMap.identity(3)
    assert not green_check_op(c, i, "D").holds
    assert not green_check_op(c, i, "J").holds
    with pytest.raises(NotFull):
        green_check_op(parse_map("{1:1}", 3), i, "L")
    with pytest.raises(NotInClass):
        green_check_op(F([1, 3, 2]), i, "L")


def test_green_regular_examples():
    a, b = parse_map("{1:1,2:2}", 3), parse_map("{2:2,3:3}", 3)
    assert green_check_regular(a, b, "D", T.POI).holds
    assert not green_check_regular(a, b, "R", T.POI).holds
    for rel in "LRHDJ":
        assert green_check_regular(a, a, rel, T.POI).holds
    e, i = PartialMap.empty(3), PartialMap.identity(3)
    for rel in "LRDJ":
        assert not green_check_regular(e, i, rel, T.POPI).holds
    with pytest.raises(NotInClass):
        green_check_regular(F([2, 3, 1]), i, "L", T.PO)


def _crossval(tag, n, pairs):
    t = table(tag, n)
    g = GreenOracle(t)
    keys = {r: g.result(r).key for r in "LRHDJ"}
    for i, j in pairs:
        a, b = t.elements[i], t.elements[j]
        for rel in "LRHDJ":
            v = green_check(a, b, rel, tag)
            assert v.holds == (keys[rel][i] == keys[rel][j]), (a, b, rel)


@pytest.mark.parametrize("tag,n", [(tag, n) for tag in (T.OP, T.PO, T.POP, T.POI, T.POPI) for n in (1, 2, 3)])
def test_crossval_exhaustive_small(tag, n):
    size = len(table(tag, n))
    _crossval(tag, n, itertools.product(range(size), repeat=2))


@pytest.mark.parametrize("tag", [T.PO, T.POP, T.POPI])
def test_crossval_sampled_n4(tag):
    size = len(table(tag, 4))
    rng = random.Random(11)
    _crossval(tag, 4, [(rng.randrange(size), rng.randrange(size)) for _ in range(2000)])


@pytest.mark.parametrize("tag,n", [(T.POP, 3), (T.POP, 4), (T.PO, 3), (T.PO, 4)])
def test_canonical_bijection_class(tag, n):
    target = T.POPI if tag is T.POP else T.POI
    by_kernel = {}
    for a in members(tag, n):
        by_kernel.setdefault(a.kernel(), []).append(a)
    for group in by_kernel.values():
        for a, b in itertools.product(group, repeat=2):
            th = canonical_bijection(a, b)
            assert in_class(th, target)
            assert compose(a, th) == b


@pytest.mark.parametrize("n", [2, 3, 4])
def test_size_reduction_against_bijection_search(n):
    # D in the regular classes reduces to equal image sizes
    subsets = [frozenset(c) for k in range(n + 1) for c in itertools.combinations(range(1, n + 1), k)]
    for a, b in itertools.product(subsets, repeat=2):
        for flavor in ("order", "orientation"):
            found = next(bijections(sorted(a), sorted(b), n, flavor), None)
            assert (found is not None) == (len(a) == len(b))
            inj = injection_exists(a, b, flavor, n)
            assert (inj is not None) == (len(a) <= len(b))


def test_verdict_witnesses_verify():
    a, b = F([1, 2, 2]), F([2, 3, 3])
    v = green_check_op(a, b, "R")
    assert v.holds
    w = v.witnesses[0]
    assert compose(a, w["lambda"]) == b and compose(b, w["gamma"]) == a
    v = green_check_op(F([1, 1, 2]), F([3, 3, 1]), "D")
    assert v.holds and v.witnesses[0]["gamma"].image == {1, 3}
    js = v.to_json()
    assert js["holds"] and isinstance(js["witnesses"][0]["bijection"], str)


def test_choice_inverse_lands_in_preimages():
    b = F([2, 3, 2])
    ch = choice_inverse(b)
    for c in b.image:
        assert b(ch(c)) == c
