"""Named verification suites, each returning a JSON-ready report."""

from __future__ import annotations

import json
import random
from importlib import resources

from .chain import parse_union
from .enumerate import GreenOracle, RELATIONS, build_monoid, count_class, enumerate_class, regular_oracle
from .errors import CriterionFails, UnknownSuite
from .green import canonical_bijection, green_check, is_completable
from .regularity import (
    all_choices,
    beta_structure,
    build_op_inverse,
    build_op_inverse_symbolic,
    reg_o_criterion,
    reg_op_criterion,
    verify_inner_inverse,
    zeta_inverse,
)
from .symbolic import (
    curated_maps,
    dj_gap_witness,
    first_example_pair,
    image_of,
    is_order_preserving_symbolic,
    is_orientation_preserving_symbolic,
    maps_equal,
    open_image_map,
    compose_symbolic,
)
from .transforms import ClassTag, PartialMap, compose, find_ideals, find_ideals_all_subsets, in_class, invert

MAX_LISTED = 20
SUITES = {}


def suite(name):
    def deco(fn):
        SUITES[name] = fn
        return fn

    return deco


class _Report:
    def __init__(self, name, **params):
        self.name = name
        self.params = params
        self.checked = 0
        self.violations = []
        self.count = 0
        self.info = {}

    def check(self, ok, detail):
        self.checked += 1
        if not ok:
            self.count += 1
            if len(self.violations) < MAX_LISTED:
                self.violations.append(detail() if callable(detail) else detail)

    def done(self):
        out = {
            "suite": self.name,
            "params": self.params,
            "checked": self.checked,
            "violation_count": self.count,
            "violations": self.violations,
            "pass": self.count == 0,
        }
        out.update(self.info)
        return out


def run_suite(name, **params) -> dict:
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}")
    params = {k: v for k, v in params.items() if v is not None}
    return SUITES[name](**params)


def _compose_values(av, bv):
    return tuple(None if v is None else bv[v - 1] for v in av)


@suite("closure")
def closure_suite(n=4, samples=100_000, seed=0, **_):
    rep = _Report("closure", n=n, samples=samples if n > 4 else None, seed=seed)
    for tag in (ClassTag.POP, ClassTag.OP):
        members = enumerate_class(tag, n)
        if n <= 4:
            pairs = ((a, b) for a in members for b in members)
        else:
            rng = random.Random(seed)
            pairs = ((rng.choice(members), rng.choice(members)) for _ in range(samples))
        for a, b in pairs:
            ab = PartialMap(n, _compose_values(a.values, b.values))
            rep.check(in_class(ab, tag), lambda: f"{tag.value}: {a} * {b} = {ab}")
    return rep.done()


@suite("unique-ideal")
def unique_ideal_suite(n=5, **_):
    rep = _Report("unique-ideal", n=n)
    for a in enumerate_class(ClassTag.POP, n):
        ideals = find_ideals(a)
        if a.is_constant:
            rep.check(len(ideals) == len(a.dom), lambda: f"constant {a}: {len(ideals)} ideals")
        else:
            rep.check(len(ideals) == 1, lambda: f"{a}: {len(ideals)} ideals")
        if n <= 4:
            raw = find_ideals_all_subsets(a)
            rep.check(sorted(map(sorted, raw)) == sorted(map(sorted, ideals)), lambda: f"{a}: prefix scan differs")
    return rep.done()


@suite("zeta-soundness")
def zeta_suite(n=4, **_):
    rep = _Report("zeta-soundness", n=n)
    for a in enumerate_class(ClassTag.POP, n):
        for y in find_ideals(a):
            z = zeta_inverse(a, y)
            rep.check(compose(compose(a, z), a) == a, lambda: f"{a} Y={sorted(y)}: a z a != a")
            rep.check(in_class(z, ClassTag.POPI), lambda: f"{a} Y={sorted(y)}: zeta {z} not in POPI")
            if in_class(a, ClassTag.PO):
                rep.check(in_class(z, ClassTag.POI), lambda: f"{a} Y={sorted(y)}: zeta {z} not in POI")
    return rep.done()


@suite("beta-soundness")
def beta_suite(n=5, **_):
    rep = _Report("beta-soundness", n=n)
    mutual = total = 0
    for a in enumerate_class(ClassTag.OP, n):
        for y in find_ideals(a):
            b = build_op_inverse(a, y)
            rep.check(in_class(b, ClassTag.OP), lambda: f"{a} Y={sorted(y)}: beta {b} not in OP")
            rep.check(verify_inner_inverse(a, b), lambda: f"{a} Y={sorted(y)}: a b a != a")
            for lemma, ok in beta_structure(a, y, b).items():
                rep.check(ok, lambda: f"{a} Y={sorted(y)}: {lemma} fails for beta {b}")
            total += 1
            mutual += compose(compose(b, a), b) == b
    rep.info["beta_alpha_beta_eq_beta"] = {"holds": mutual, "of": total}
    return rep.done()


@suite("choice-independence")
def choice_suite(n=3, samples=2000, seed=0, **_):
    rep = _Report("choice-independence", n=n)
    rng = random.Random(seed)
    for a in enumerate_class(ClassTag.OP, n):
        for y in find_ideals(a):
            choices = list(all_choices(a, y))
            if n > 3 and len(choices) > 8:
                choices = rng.sample(choices, 8)
            for ch in choices:
                b = build_op_inverse(a, y, ch)
                rep.check(verify_inner_inverse(a, b), lambda: f"{a} Y={sorted(y)} z={ch.z_of}: a b a != a")
                rep.check(in_class(b, ClassTag.OP), lambda: f"{a} Y={sorted(y)} z={ch.z_of}: beta not in OP")
    return rep.done()


@suite("criterion-oracle")
def criterion_oracle_suite(n=4, **_):
    rep = _Report("criterion-oracle", n=n)
    table = build_monoid(ClassTag.OP, n)
    for i, a in enumerate(table.elements):
        crit = reg_op_criterion(a.image).verdict
        found = regular_oracle(table, i) is not None
        rep.check(crit and found, lambda: f"OP {a}: criterion {crit}, oracle {found}")
    # partial classes are regular outright
    for tag in (ClassTag.POP, ClassTag.PO):
        table = build_monoid(tag, n)
        for i, a in enumerate(table.elements):
            rep.check(regular_oracle(table, i) is not None, lambda: f"{tag.value} {a}: no inner inverse")
    return rep.done()


def _green_pairs(size, n, sample, seed):
    total = size * size
    if sample is None or n <= 3 or total <= sample:
        return [(i, j) for i in range(size) for j in range(size)]
    rng = random.Random(seed)
    return [(rng.randrange(size), rng.randrange(size)) for _ in range(sample)]


@suite("green-crossval")
def green_suite(n=3, cls="OP", sample=10_000, seed=0, **_):
    tag = ClassTag.parse(cls)
    rep = _Report("green-crossval", n=n, cls=tag.value)
    table = build_monoid(tag, n)
    oracle = GreenOracle(table)
    els = table.elements
    pairs = _green_pairs(len(els), n, None if tag is ClassTag.OP else sample, seed)
    rep.params["pairs"] = len(pairs)
    for rel in RELATIONS:
        res = oracle.result(rel)
        for i, j in pairs:
            got = green_check(els[i], els[j], rel, tag).holds
            want = res.related(i, j)
            rep.check(got == want, lambda: f"{rel}: {els[i]} vs {els[j]} criterion {got}, oracle {want}")
    return rep.done()


@suite("canonical-bijection")
def canonical_suite(n=4, **_):
    rep = _Report("canonical-bijection", n=n)
    for tag, target in ((ClassTag.POP, ClassTag.POPI), (ClassTag.PO, ClassTag.POI)):
        groups = {}
        for a in enumerate_class(tag, n):
            groups.setdefault(a.kernel(), []).append(a)
        for members in groups.values():
            for a in members:
                for b in members:
                    th = canonical_bijection(a, b)
                    rep.check(in_class(th, target), lambda: f"{tag.value}: theta({a},{b}) = {th} not in {target.value}")
                    rep.check(compose(a, th) == b and compose(b, invert(th)) == a, lambda: f"{a},{b}: identities fail")
    return rep.done()


@suite("q-open-image")
@suite("q-paper-example")
def q_open_image_suite(**_):
    rep = _Report("q-open-image")
    alpha = open_image_map()
    im = image_of(alpha)
    rep.check(im == parse_union("{(-1,1)}"), f"image is {im}, expected (-1,1)")
    rep.check(is_order_preserving_symbolic(alpha), "map is not order-preserving")
    report = reg_op_criterion(im)
    rep.check(not report.verdict and not report.condition1, "criterion did not fail on condition1")
    try:
        build_op_inverse_symbolic(alpha)
        raised = None
    except CriterionFails as exc:
        raised = str(exc)
    rep.check(raised is not None, "inverse construction did not refuse")
    rep.info["image"] = str(im)
    rep.info["criterion"] = report.to_json()
    rep.info["result"] = "not regular, criterion condition1 failed" if not report.condition1 else "regular"
    return rep.done()


@suite("q-first-example")
def q_first_suite(**_):
    rep = _Report("q-first-example")
    alpha, beta = first_example_pair()
    im = image_of(alpha)
    rep.check(im == parse_union("[-1,0)"), f"image is {im}")
    rep.check(is_order_preserving_symbolic(alpha), "alpha not order-preserving")
    o_rep, op_rep = reg_o_criterion(im), reg_op_criterion(im)
    rep.check(not o_rep.verdict, "O criterion should fail")
    rep.check(op_rep.verdict, "OP criterion should pass")
    rep.check(is_orientation_preserving_symbolic(beta) is not None, "beta not orientation-preserving")
    rep.check(not is_order_preserving_symbolic(beta), "beta should lie outside O")
    rep.check(verify_inner_inverse(alpha, beta), "alpha beta alpha != alpha")
    rep.check(verify_inner_inverse(beta, alpha), "beta alpha beta != beta")
    rep.check(im.parts[0].bounded, "image of alpha should be bounded")
    rep.info["image"] = str(im)
    rep.info["o_criterion"] = o_rep.to_json()
    rep.info["op_criterion"] = op_rep.to_json()
    return rep.done()


@suite("dj-witness")
def dj_suite(a=0, b=1, c=0, d=1, **_):
    rep = _Report("dj-witness", a=str(a), b=str(b), c=str(c), d=str(d))
    out = dj_gap_witness(a, b, c, d)
    rep.check(out["D"] is False, "D should fail")
    rep.check(out["J"] is True, "J should hold")
    rep.info["witness"] = out
    return rep.done()


def load_golden_counts(tag) -> dict:
    text = resources.files("chainmorph").joinpath("fixtures", f"counts_{ClassTag(tag).value}.json").read_text()
    return {int(k): v for k, v in json.loads(text).items()}


@suite("golden-counts")
def golden_suite(n=5, **_):
    rep = _Report("golden-counts", n=n)
    counts = {}
    for tag in ClassTag:
        gold = load_golden_counts(tag)
        for k in range(1, n + 1):
            got = count_class(tag, k)
            counts.setdefault(tag.value, {})[k] = got
            rep.check(got == gold.get(k), lambda: f"{tag.value} n={k}: {got} != fixture {gold.get(k)}")
    rep.info["counts"] = counts
    return rep.done()


@suite("symbolic-beta")
def symbolic_beta_suite(**_):
    rep = _Report("symbolic-beta")
    results = {}
    for name, (alpha, regular) in curated_maps().items():
        try:
            beta = build_op_inverse_symbolic(alpha)
        except CriterionFails:
            beta = None
        if regular:
            ok = beta is not None and maps_equal(compose_symbolic(compose_symbolic(alpha, beta), alpha), alpha)
            rep.check(ok, f"{name}: no verified inverse")
            rep.check(
                beta is not None and is_orientation_preserving_symbolic(beta) is not None,
                f"{name}: inverse not orientation-preserving",
            )
            results[name] = {"regular": True, "beta": None if beta is None else beta.to_json()}
        else:
            rep.check(beta is None, f"{name}: expected CriterionFails")
            results[name] = {"regular": False}
    rep.info["maps"] = results
    return rep.done()


@suite("completability")
def completability_suite(n=5, **_):
    """Empirical: is every orientation-preserving partial injection completable in OP?"""
    rep = _Report("completability", n=n)
    stats = {}
    for k in range(1, n + 1):
        members = enumerate_class(ClassTag.POPI, k)
        bad = [m.spec() for m in members if is_completable(m) is None]
        stats[k] = {"partial_injections": len(members), "not_completable": len(bad), "examples": bad[:5]}
    rep.info["empirical"] = stats
    rep.info["note"] = "recorded only; not asserted"
    return rep.done()


def suite_names():
    return sorted(SUITES)
