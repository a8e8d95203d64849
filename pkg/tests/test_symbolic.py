import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chainmorph.chain import NEG_INF, POS_INF, QInterval, interval_union_normalize, is_finite, parse_interval, parse_union
from chainmorph.errors import BadInterval, MalformedMap, UnboundedUnsupported, UnsupportedShape
from chainmorph.symbolic import (
    Const,
    Moebius,
    PiecewiseMoebiusMap,
    compose_symbolic,
    curated_maps,
    dj_gap_witness,
    image_of,
    interval_type,
    inverse_symbolic,
    is_order_preserving_symbolic,
    is_orientation_preserving_symbolic,
    maps_equal,
    orientation_bijection_analysis,
    orientation_bijection_exists,
    open_image_map,
    parse_symbolic_map,
    q_interval_signature_iso,
)

CURATED = curated_maps()
rng = random.Random(2024)


def one_piece(interval, fn):
    return PiecewiseMoebiusMap.build([(parse_interval(interval), fn)])


def probe(iv, k=200):
    """Random rationals inside an interval."""
    out = []
    while len(out) < k:
        if iv.is_point:
            return [iv.lo] * k
        lo = iv.lo if is_finite(iv.lo) else (iv.hi if is_finite(iv.hi) else 0) - 1000
        hi = iv.hi if is_finite(iv.hi) else lo + 1000
        x = lo + (hi - lo) * Fraction(rng.randint(0, 10**6), 10**6)
        if x in iv:
            out.append(x)
    return out


def test_moebius_basics():
    f = Moebius(1, 0, 1, 1)
    assert f(0) == 0 and f(1) == Fraction(1, 2)
    assert f.limit(POS_INF, False) == 1
    assert f.pole == -1
    assert f.limit(-1, True) == NEG_INF and f.limit(-1, False) == POS_INF
    g = f.inverse()
    assert all(g(f(Fraction(k, 3))) == Fraction(k, 3) for k in range(0, 9))
    h = f.then(Moebius.affine(2, 1))
    assert all(h(Fraction(k, 5)) == 2 * f(Fraction(k, 5)) + 1 for k in range(10))
    assert Moebius(2, 0, 0, 2).same_as(Moebius.identity())
    with pytest.raises(MalformedMap):
        Moebius(1, 1, 1, 1)


def test_image_examples():
    assert image_of(open_image_map()) == parse_union("(-1,1)")
    assert image_of(PiecewiseMoebiusMap.identity()) == parse_union("(-inf,inf)")
    assert image_of(one_piece("[0,inf)", Moebius(1, 0, 1, 1))) == parse_union("[0,1)")
    assert image_of(one_piece("[0,1]", Const(5))) == parse_union("[5,5]")


def test_orientation_examples():
    y = is_orientation_preserving_symbolic(open_image_map())
    assert y == parse_union("(-inf,inf)")
    assert is_order_preserving_symbolic(open_image_map())
    wrap = CURATED["wrapped-regular"][0]
    assert not is_order_preserving_symbolic(wrap)
    assert is_orientation_preserving_symbolic(wrap) == parse_union("(-inf,0)")
    # low, high, low, high wraps around twice
    pieces = [("(-inf,0)", 0), ("[0,1)", 5), ("[1,2)", 0), ("[2,inf)", 5)]
    bad = PiecewiseMoebiusMap.build([(parse_interval(i), Const(v)) for i, v in pieces])
    assert is_orientation_preserving_symbolic(bad) is None


def test_malformed_maps():
    with pytest.raises(MalformedMap):
        parse_symbolic_map('{"pieces": [{"interval": "(-inf,inf)", "poly": [1,0,0]}]}')
    with pytest.raises(MalformedMap):
        parse_symbolic_map('{"pieces": [{"interval": "[0,2]", "moebius": [1,0,1,-1]}]}')
    with pytest.raises(MalformedMap):
        parse_symbolic_map('{"pieces": [{"interval": "[0,2]", "const": 1}, {"interval": "[1,3]", "const": 1}]}')
    with pytest.raises(MalformedMap):
        parse_symbolic_map('{"pieces": [{"interval": "[0,2]", "moebius": [0.5,0,0,1]}]}')
    with pytest.raises(UnsupportedShape):
        parse_symbolic_map('{"pieces": [{"interval": "(-inf,inf)", "moebius": [-1,0,0,1]}]}')


def test_json_round_trip():
    for alpha, _ in CURATED.values():
        assert parse_symbolic_map(alpha.to_json()) == alpha


def test_maps_equal_examples():
    ident = PiecewiseMoebiusMap.identity()
    assert maps_equal(ident, ident)
    assert maps_equal(ident, one_piece("(-inf,inf)", Moebius(2, 0, 0, 2)))
    assert not maps_equal(ident, one_piece("(-inf,inf)", Moebius.affine(1, 1)))
    split = PiecewiseMoebiusMap.build([(parse_interval("(-inf,0)"), Moebius.identity()), (parse_interval("[0,inf)"), Moebius.identity())])
    assert maps_equal(ident, split)


def test_compose_examples():
    ident = PiecewiseMoebiusMap.identity()
    a = open_image_map()
    assert maps_equal(compose_symbolic(ident, ident), ident)
    assert maps_equal(compose_symbolic(a, ident), a)
    aa = compose_symbolic(a, a)
    # each half of the image stays inside the matching half of the domain
    assert [str(p.interval) for p in aa.pieces] == ["(-inf,0)", "[0,inf)"]
    for x in probe(QInterval.whole(), 25):
        assert aa(x) == a(a(x))


@pytest.mark.parametrize("name", sorted(CURATED))
def test_image_probe_oracle(name):
    alpha = CURATED[name][0]
    im = image_of(alpha)
    for p in alpha.pieces:
        for x in probe(p.interval):
            assert alpha(x) in im
        # image endpoints are approached from inside the piece
        piece_im = p.image()
        eps = Fraction(1, 1000)
        for end, inside in ((piece_im.lo, p.interval.lo), (piece_im.hi, p.interval.hi)):
            if not is_finite(end):
                continue
            if is_finite(inside):
                toward = 1 if inside == p.interval.lo else -1
                pts = [inside + toward * Fraction(1, 10**k) for k in range(1, 12)]
                if (inside == p.interval.lo and p.interval.lo_closed) or (inside == p.interval.hi and p.interval.hi_closed):
                    pts.append(inside)
            else:
                pts = [(1 if inside == POS_INF else -1) * 10**k for k in range(1, 12)]
            pts = [x for x in pts if x in p.interval]
            assert any(abs(alpha(x) - end) < eps for x in pts)


@pytest.mark.parametrize("pair", list(itertools.product(sorted(CURATED), repeat=2)))
def test_compose_probe_oracle_and_closure(pair):
    a, b = CURATED[pair[0]][0], CURATED[pair[1]][0]
    ab = compose_symbolic(a, b)
    for x in probe(QInterval.whole()):
        assert ab(x) == b(a(x))
    assert is_orientation_preserving_symbolic(ab) is not None


def test_inverse_symbolic():
    a = open_image_map()
    inv = inverse_symbolic(a)
    assert inv.domain == parse_union("(-1,1)")
    for x in probe(QInterval.whole(), 50):
        assert inv(a(x)) == x


def test_interval_types():
    assert interval_type(parse_interval("(0,1)")) == "OO"
    assert interval_type(parse_interval("[2,2]")) == "POINT"
    assert q_interval_signature_iso(parse_interval("(0,1)"), parse_interval("(5,7)"))
    assert not q_interval_signature_iso(parse_interval("(0,1)"), parse_interval("[0,1]"))
    assert q_interval_signature_iso(parse_interval("[0,1)"), parse_interval("[3,9)"))
    with pytest.raises(UnboundedUnsupported):
        interval_type(parse_interval("[0,inf)"))


def _check_witness(w, i_iv, j_iv):
    assert w.domain == interval_union_normalize([i_iv])
    assert image_of(w) == interval_union_normalize([j_iv])
    assert is_orientation_preserving_symbolic(w) is not None
    pts = sorted(set(probe(i_iv, 60)))
    vals = [w(x) for x in pts]
    assert len(set(vals)) == len(vals)
    assert all(v in j_iv for v in vals)


def test_bijection_examples():
    a = orientation_bijection_analysis(parse_interval("(0,1)"), parse_interval("[0,1]"))
    assert not a.exists and a.certificate == "obstruction"
    i = parse_interval("[0,1)")
    a = orientation_bijection_analysis(i, i)
    assert a.exists and a.certificate == "witness"
    i, j = parse_interval("(0,1]"), parse_interval("[0,1)")
    a = orientation_bijection_analysis(i, j)
    assert a.exists and a.certificate == "witness"
    _check_witness(a.witness, i, j)


KINDS = ["(0,1)", "[0,1]", "[0,1)", "(0,1]", "[0,0]"]


@pytest.mark.parametrize("src,dst", list(itertools.product(KINDS, repeat=2)))
def test_bijection_witnesses_and_symmetry(src, dst):
    i, j = parse_interval(src), parse_interval(dst)
    fwd = orientation_bijection_analysis(i, j)
    back = orientation_bijection_analysis(j, i)
    if fwd.witness is not None:
        _check_witness(fwd.witness, i, j)
    if fwd.witness is not None and back.witness is not None:
        assert fwd.exists and back.exists
    assert fwd.certificate in ("witness", "back-and-forth", "obstruction")
    # a point only matches a point
    if (i.is_point or j.is_point) and i.is_point != j.is_point:
        assert not fwd.exists


def test_closed_interval_only_matches_itself():
    # both extremes attained: the ideal part keeps the min and the filter part the max,
    # which forces the target to have both too
    nondeg = [parse_interval(t) for t in KINDS[:4]]
    bad = {(str(i), str(j)) for i in nondeg for j in nondeg if not orientation_bijection_exists(i, j)}
    assert bad == {(k, "[0,1]") for k in KINDS[:4] if k != "[0,1]"} | {("[0,1]", k) for k in KINDS[:4] if k != "[0,1]"}


def test_dj_witness_examples():
    rep = dj_gap_witness(0, 1, 0, 1)
    assert rep["D"] is False and rep["J"] is True
    assert rep["D_certificate"] == "obstruction"
    rep = dj_gap_witness(0, 3, 1, 2)
    assert rep["D"] is False and rep["J"] is True
    assert parse_union(rep["theta_checks"]["image"]).issubset(parse_union("[1,2]"))
    # theta at the endpoints of ]0,3[: (d-c)x + 2bc-2ad+bd-ac over 3(b-a)
    theta = parse_symbolic_map(rep["theta"])
    f = theta.pieces[0].fn
    assert f.limit(Fraction(0), True) == Fraction(4, 3) and f.limit(Fraction(3), False) == Fraction(5, 3)
    with pytest.raises(BadInterval):
        dj_gap_witness(0, 0, 1, 2)


@settings(max_examples=60, deadline=None)
@given(
    st.fractions(min_value=-5, max_value=5, max_denominator=7),
    st.fractions(min_value=Fraction(1, 7), max_value=5, max_denominator=7),
    st.fractions(min_value=-5, max_value=5, max_denominator=7),
    st.fractions(min_value=Fraction(1, 7), max_value=5, max_denominator=7),
)
def test_dj_witness_holds_for_any_intervals(a, w1, c, w2):
    rep = dj_gap_witness(a, a + w1, c, c + w2)
    assert rep["D"] is False and rep["J"] is True
    assert all(rep["identities"].values())
