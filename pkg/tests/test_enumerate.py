import itertools

import pytest

from chainmorph.enumerate import (
    GreenOracle,
    build_monoid,
    count_class,
    cyclic_descents,
    enumerate_class,
    iter_candidates,
    oracle_count,
    regular_oracle,
)
from chainmorph.errors import SizeLimit
from chainmorph.suites import load_golden_counts
from chainmorph.transforms import ClassTag, PartialMap, compose

from conftest import table

T = ClassTag

# independent closed forms for the classes that have them
FORMULAS = {
    T.PT: lambda n: (n + 1) ** n,
    T.T: lambda n: n ** n,
    T.O: lambda n: _binom(2 * n - 1, n),
    T.POI: lambda n: _binom(2 * n, n),
}


def _binom(a, b):
    from math import comb
    return comb(a, b)


def test_enumerate_examples():
    assert len(enumerate_class(T.OP, 2)) == 4
    assert len(enumerate_class(T.OP, 3)) == 24
    assert enumerate_class(T.O, 1) == [PartialMap.identity(1)]
    assert count_class(T.T, 2) == 4
    assert count_class(T.O, 3) == 10


def test_enumeration_is_lexicographic_and_duplicate_free():
    maps = enumerate_class(T.POP, 3)
    keys = [tuple(v or 0 for v in m.values) for m in maps]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)


@pytest.mark.parametrize("tag", list(T))
def test_counts_match_golden_fixtures_and_oracle(tag):
    golden = load_golden_counts(tag)
    for n in range(1, 6):
        c = count_class(tag, n)
        assert c == golden[n] == oracle_count(tag, n)
        if tag in FORMULAS:
            assert c == FORMULAS[tag](n)


def test_op_spot_values():
    assert [count_class(T.OP, n) for n in range(1, 6)] == [1, 4, 24, 128, 610]


@pytest.mark.parametrize("tag", list(T))
def test_counts_monotone(tag):
    counts = [count_class(tag, n) for n in range(1, 6)]
    assert counts == sorted(counts)


@pytest.mark.parametrize("n", range(1, 6))
def test_containment_counts(n):
    c = {t: count_class(t, n) for t in T}
    assert c[T.O] <= c[T.OP] <= c[T.T]
    assert c[T.POI] <= c[T.POPI] <= c[T.POP] <= c[T.PT]
    # as sets, not only as numbers
    if n <= 4:
        sets = {t: set(enumerate_class(t, n)) for t in T}
        assert sets[T.O] <= sets[T.OP] <= sets[T.POP]
        assert sets[T.PO] <= sets[T.POP] and sets[T.O] <= sets[T.PO]
        assert sets[T.POI] <= sets[T.POPI] <= sets[T.POP]


def test_size_limit(monkeypatch):
    with pytest.raises(SizeLimit):
        enumerate_class(T.PT, 5, limit=1000)
    monkeypatch.setenv("CHAINMORPH_MAX_CANDIDATES", "10")
    with pytest.raises(SizeLimit):
        list(iter_candidates(T.T, 3))


def test_cyclic_descents():
    assert cyclic_descents([2, 3, 1]) == 1
    assert cyclic_descents([1, 3, 2]) == 2
    assert cyclic_descents([1, 1, 1]) == 0


def test_build_monoid_examples():
    t = build_monoid(T.OP, 2)
    assert len(t) == 4
    assert t.elements[t.identity_index] == PartialMap.identity(2)
    t = build_monoid(T.POPI, 1)
    assert set(t.elements) == {PartialMap.empty(1), PartialMap.identity(1)}
    t = build_monoid(T.POP, 2)
    assert len(t) == 9
    for i, j in itertools.product(range(len(t)), repeat=2):
        assert t.elements[t.mul(i, j)] == compose(t.elements[i], t.elements[j])


def _partition(res):
    return {frozenset(c) for c in res.classes}


def _refines(fine, coarse):
    return all(any(c <= d for d in coarse) for c in fine)


@pytest.mark.parametrize("tag,n", [(t, n) for t in (T.OP, T.O, T.POP, T.PO, T.POPI, T.POI) for n in (2, 3)] + [(T.OP, 4), (T.POI, 4)])
def test_green_lattice_sanity(tag, n):
    g = GreenOracle(table(tag, n))
    L, R, H, D, J = (_partition(g.result(r)) for r in "LRHDJ")
    assert _refines(H, L) and _refines(H, R)
    assert _refines(L, D) and _refines(R, D) and _refines(D, J)
    # finite semigroup: D = J
    assert D == J
    # H is the meet of L and R
    lk, rk, hk = (g.result(r).key for r in "LRH")
    assert all((lk[i], rk[i]) == (lk[j], rk[j]) or hk[i] != hk[j] for i in range(len(hk)) for j in range(len(hk)))
    ident = table(tag, n).identity_index
    assert ident in next(c for c in H if ident in c)


def test_green_d_is_join_of_l_and_r():
    g = GreenOracle(table(T.OP, 3))
    lk, rk, dk = g.result("L").key, g.result("R").key, g.result("D").key
    size = len(lk)
    # transitive closure of L union R
    comp = list(range(size))

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for i in range(size):
        for j in range(i + 1, size):
            if lk[i] == lk[j] or rk[i] == rk[j]:
                comp[find(i)] = find(j)
    for i in range(size):
        for j in range(size):
            assert (find(i) == find(j)) == (dk[i] == dk[j])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_op_l_and_r_against_image_and_kernel(n):
    t = table(T.OP, n)
    g = GreenOracle(t)
    lk, rk = g.result("L").key, g.result("R").key
    els = t.elements
    for i in range(len(els)):
        for j in range(len(els)):
            assert (lk[i] == lk[j]) == (els[i].image == els[j].image)
            assert (rk[i] == rk[j]) == (els[i].kernel() == els[j].kernel())


def test_op2_l_classes_grouped_by_image():
    t = table(T.OP, 2)
    classes = [{t.elements[i].image for i in c} for c in GreenOracle(t).result("L").classes]
    assert all(len(c) == 1 for c in classes)
    assert len(classes) == 3


@pytest.mark.parametrize("tag,n", [(T.OP, 4), (T.POP, 4), (T.PO, 3), (T.POPI, 3)])
def test_regular_oracle_finds_inverses(tag, n):
    t = table(tag, n)
    assert t.elements[regular_oracle(t, t.identity_index)] == t.elements[t.identity_index]
    for i in range(len(t)):
        b = regular_oracle(t, i)
        assert b is not None and t.mul(t.mul(i, b), i) == i


def test_regular_oracle_none_outside_regular_classes():
    from chainmorph.enumerate import MonoidTable
    # {1, a, 0} with a*a = 0: a has no inner inverse
    elements = ["1", "a", "0"]
    prod = [[0, 1, 2], [1, 2, 2], [2, 2, 2]]
    t = MonoidTable(None, 0, elements, {e: i for i, e in enumerate(elements)}, prod, 0)
    assert regular_oracle(t, 1) is None
    assert regular_oracle(t, 2) == 0
