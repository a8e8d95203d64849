"""Command-line front end.  Every command prints one JSON document.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 suite violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .chain import FiniteChain, parse_chain, parse_interval, parse_union
from .enumerate import ENV_MAX_CANDIDATES, count_class, enumerate_class
from .errors import ChainmorphError, ParseError
from .green import green_check
from .regularity import (
    build_op_inverse,
    build_op_inverse_symbolic,
    reg_o_criterion,
    reg_op_criterion,
    verify_inner_inverse,
    zeta_inverse,
)
from .suites import run_suite
from .symbolic import (
    curated_maps,
    dj_gap_witness,
    image_of,
    is_order_preserving_symbolic,
    is_orientation_preserving_symbolic,
    orientation_bijection_analysis,
    parse_symbolic_map,
)
from .transforms import (
    ClassTag,
    classify,
    find_ideals,
    glued_point,
    is_orientation_preserving,
    parse_map,
    parse_subset,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _tags(tags):
    order = list(ClassTag)
    return [t.value for t in sorted(tags, key=order.index)]


def _finite(args):
    chain = parse_chain(args.chain)
    if not isinstance(chain, FiniteChain):
        raise ParseError("this command needs --chain finite:<n>")
    return chain.n


def _map(args, text=None, n=None):
    if text is None and not args.map:
        raise ParseError("pass --map")
    return parse_map(text if text is not None else args.map, n if n is not None else _finite(args))


def _symbolic(args):
    if getattr(args, "curated", None):
        maps = curated_maps()
        if args.curated not in maps:
            raise ParseError(f"unknown curated map {args.curated!r}; known: {', '.join(sorted(maps))}")
        return maps[args.curated][0]
    if not args.map:
        raise ParseError("pass --map or --curated")
    return parse_symbolic_map(args.map)


def cmd_classify(args):
    a = _map(args)
    return {"map": a.spec(), "tags": _tags(classify(a)), "orientation_preserving": is_orientation_preserving(a)}


def cmd_ideal(args):
    a = _map(args)
    ideals = find_ideals(a)
    out = {"map": a.spec(), "ideals": [sorted(y) for y in ideals], "constant": a.is_constant}
    if ideals and not a.is_empty:
        out["glued_points"] = [glued_point(a, y) for y in ideals]
    return out


def cmd_regular(args):
    crit = reg_o_criterion if args.criterion == "o" else reg_op_criterion
    chain = parse_chain(args.chain)
    if isinstance(chain, FiniteChain):
        a = _map(args, n=chain.n)
        return crit(a.image, chain).to_json()
    im = parse_union(args.image) if args.image else image_of(_symbolic(args))
    out = crit(im, chain).to_json()
    out["image"] = str(im)
    return out


def cmd_inverse(args):
    chain = parse_chain(args.chain)
    if not isinstance(chain, FiniteChain):
        if args.construct != "beta":
            raise ParseError("only the beta construction is available on q")
        alpha = _symbolic(args)
        beta = build_op_inverse_symbolic(alpha)
        return {"inverse": beta.to_json(), "verified": verify_inner_inverse(alpha, beta)}
    a = _map(args, n=chain.n)
    y = parse_subset(args.ideal) if args.ideal else None
    inv = zeta_inverse(a, y) if args.construct == "zeta" else build_op_inverse(a, y)
    return {"map": a.spec(), "construct": args.construct, "inverse": inv.spec(), "verified": verify_inner_inverse(a, inv)}


def cmd_green(args):
    n = _finite(args)
    a, b = parse_map(args.alpha, n), parse_map(args.beta, n)
    return green_check(a, b, args.rel, ClassTag.parse(args.cls)).to_json()


def cmd_enumerate(args):
    tag = ClassTag.parse(args.cls)
    return {"class": tag.value, "n": args.n, "maps": [m.spec() for m in enumerate_class(tag, args.n)]}


def cmd_count(args):
    tag = ClassTag.parse(args.cls)
    return {"class": tag.value, "n": args.n, "count": count_class(tag, args.n)}


def cmd_symbolic(args):
    if args.action == "djwitness":
        return dj_gap_witness(args.a, args.b, args.c, args.d)
    if args.action == "bijection":
        return orientation_bijection_analysis(parse_interval(args.source), parse_interval(args.target)).to_json()
    alpha = _symbolic(args)
    if args.action == "image":
        return {"image": str(image_of(alpha))}
    if args.action == "classify":
        ideal = is_orientation_preserving_symbolic(alpha)
        return {
            "full": alpha.is_full,
            "order_preserving": is_order_preserving_symbolic(alpha),
            "orientation_preserving": ideal is not None,
            "ideal": None if ideal is None else str(ideal),
        }
    if args.action == "regular":
        im = image_of(alpha)
        crit = reg_o_criterion if args.criterion == "o" else reg_op_criterion
        out = crit(im).to_json()
        out["image"] = str(im)
        return out
    beta = build_op_inverse_symbolic(alpha)
    return {"inverse": beta.to_json(), "verified": verify_inner_inverse(alpha, beta)}


def cmd_suite(args):
    params = {"n": args.n, "cls": args.cls, "sample": args.sample, "samples": args.samples, "seed": args.seed}
    return run_suite(args.name, **params)


def build_parser():
    p = _Parser(prog="chainmorph", description="Orientation-preserving transformations on chains.")
    p.add_argument("--max-candidates", type=int, help="ceiling on enumerated candidate maps")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_map(sp, chain_default=None):
        sp.add_argument("--chain", required=chain_default is None, default=chain_default)
        sp.add_argument("--map")

    sp = sub.add_parser("classify")
    with_map(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("ideal")
    with_map(sp)
    sp.set_defaults(func=cmd_ideal)

    sp = sub.add_parser("regular")
    with_map(sp)
    sp.add_argument("--criterion", choices=["o", "op"], default="op")
    sp.add_argument("--image", help="image as an interval union (q only)")
    sp.add_argument("--curated")
    sp.set_defaults(func=cmd_regular)

    sp = sub.add_parser("inverse")
    with_map(sp)
    sp.add_argument("--construct", choices=["zeta", "beta"], default="beta")
    sp.add_argument("--ideal", help="ideal as a comma list, needed for constants")
    sp.add_argument("--curated")
    sp.set_defaults(func=cmd_inverse)

    sp = sub.add_parser("green")
    sp.add_argument("--class", dest="cls", default="op")
    sp.add_argument("--chain", required=True)
    sp.add_argument("--rel", required=True, choices=list("LRHDJ") + list("lrhdj"))
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--beta", required=True)
    sp.set_defaults(func=cmd_green)

    for name, fn in (("enumerate", cmd_enumerate), ("count", cmd_count)):
        sp = sub.add_parser(name)
        sp.add_argument("--class", dest="cls", required=True)
        sp.add_argument("--n", type=int, required=True)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("symbolic")
    sp.add_argument("action", choices=["image", "classify", "regular", "inverse", "djwitness", "bijection"])
    sp.add_argument("--map")
    sp.add_argument("--curated")
    sp.add_argument("--criterion", choices=["o", "op"], default="op")
    for k, default in zip("abcd", ("0", "1", "0", "1")):
        sp.add_argument(f"--{k}", default=default)
    sp.add_argument("--source", help="interval, for bijection")
    sp.add_argument("--target", help="interval, for bijection")
    sp.set_defaults(func=cmd_symbolic)

    sp = sub.add_parser("suite")
    sp.add_argument("--name", required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--class", dest="cls")
    sp.add_argument("--sample", type=int)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_suite)
    return p


def _emit(obj, stream=None):
    print(json.dumps(obj, indent=2, default=str), file=stream or sys.stdout)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        _emit({"error": "UsageError", "message": str(exc)}, sys.stderr)
        return 1
    saved = os.environ.get(ENV_MAX_CANDIDATES)
    if args.max_candidates is not None:
        os.environ[ENV_MAX_CANDIDATES] = str(args.max_candidates)
    try:
        result = args.func(args)
    except ChainmorphError as exc:
        _emit({"error": exc.code, "message": str(exc)})
        return 2
    finally:
        # main() may be called in-process; leave the environment as found
        if args.max_candidates is not None:
            if saved is None:
                os.environ.pop(ENV_MAX_CANDIDATES, None)
            else:
                os.environ[ENV_MAX_CANDIDATES] = saved
    _emit(result)
    if args.command == "suite" and not result.get("pass", False):
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
