"""Command-line front end.

Exit codes: 0 on success, 1 on a domain error, 2 on a syntax error, and 3
when a verification run reports failures.
"""

from __future__ import annotations

import argparse
import json
import sys

from .contexts import AtomicHorn, atomic_horn, marked_horn, pp_horn, pp_marked_horn
from .errors import ExprSyntaxError, ShapeError
from .exprlang import eval_text
from .harness import LEMMAS, Bounds, SuiteConfig, run_suite
from .ids import parse_sid, sid
from .marked import boundary_inclusion_marked, boundary_inclusion_min
from .molecule import Molecule, is_round
from .poset import find_iso
from .render import marked_map_to_dict, poset_to_dict, render, to_json_bytes

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_SYNTAX = 2
EXIT_VERIFY = 3


def _eval_shape(text: str):
    value = eval_text(text)
    if isinstance(value, AtomicHorn):
        return value.shape.poset.restrict(value.horn)
    return value


def cmd_build(args) -> int:
    shape = _eval_shape(args.expr)
    sys.stdout.buffer.write(to_json_bytes(poset_to_dict(shape)))
    return EXIT_OK


def cmd_boundary(args) -> int:
    shape = eval_text(args.expr)
    if not isinstance(shape, Molecule):
        raise ShapeError("boundary needs a molecule expression")
    sub = shape.boundary_molecule(args.n, args.sign)
    sys.stdout.buffer.write(to_json_bytes(poset_to_dict(sub)))
    return EXIT_OK


def cmd_check(args) -> int:
    shape = eval_text(args.expr)
    if isinstance(shape, AtomicHorn):
        doc = {
            "kind": "horn",
            "atom_elements": len(shape.shape),
            "facet": sid(shape.facet),
            "sign": shape.sign,
            "carrier_elements": len(shape.horn),
        }
    else:
        p = shape.poset if isinstance(shape, Molecule) else shape
        doc = {
            "kind": "molecule" if isinstance(shape, Molecule) else "poset",
            "elements": len(p),
            "dim": p.dim,
            "maximal": len(p.maximal_elements()),
            "round": is_round(shape),
            "atom": isinstance(shape, Molecule) and shape.is_atom(),
        }
        if isinstance(shape, Molecule):
            doc["certificate_kind"] = shape.certificate.get("kind")
    sys.stdout.buffer.write(to_json_bytes(doc))
    return EXIT_OK


def cmd_iso(args) -> int:
    a, b = _eval_shape(args.left), _eval_shape(args.right)
    pa = a.poset if isinstance(a, Molecule) else a
    pb = b.poset if isinstance(b, Molecule) else b
    iso = find_iso(pa, pb)
    if iso is None:
        sys.stdout.buffer.write(to_json_bytes(None))
    else:
        sys.stdout.buffer.write(to_json_bytes(
            {sid(k): sid(v) for k, v in sorted(iso.mapping.items(), key=lambda i: sid(i[0]))}
        ))
    return EXIT_OK


def cmd_horn(args) -> int:
    shape = eval_text(args.expr)
    if not isinstance(shape, Molecule):
        raise ShapeError("horn needs a molecule expression")
    h = atomic_horn(shape, parse_sid(args.facet))
    doc = poset_to_dict(shape.poset.restrict(h.horn))
    doc["facet"] = sid(h.facet)
    doc["sign"] = h.sign
    if args.marking is not None:
        mh = marked_horn(shape, h.facet, frozenset(map(parse_sid, args.marking)))
        doc["marking"] = sorted(map(sid, mh.marking))
        doc["enlarged"] = sorted(map(sid, mh.enlarged))
    sys.stdout.buffer.write(to_json_bytes(doc))
    return EXIT_OK


def cmd_pp(args) -> int:
    u = eval_text(args.left)
    v = eval_text(args.right)
    if not isinstance(u, Molecule) or not isinstance(v, Molecule):
        raise ShapeError("pp needs molecule expressions")
    h = atomic_horn(u, parse_sid(args.facet))
    if args.what == "horn":
        out = pp_horn(h, v, args.order)
        doc = {
            "facet": sid(out.facet),
            "sign": out.sign,
            "carrier": sorted(map(sid, out.horn)),
        }
    else:
        mh = marked_horn(u, h.facet, frozenset(map(parse_sid, args.marking or ())))
        gen = (boundary_inclusion_min(v) if args.family == "minbd"
               else boundary_inclusion_marked(v))
        out = pp_marked_horn(mh, gen, args.order)
        doc = {
            "facet": sid(out.horn.facet),
            "marking": sorted(map(sid, out.marking)),
            "enlarged": sorted(map(sid, out.enlarged)),
            "map": marked_map_to_dict(out.as_marked_map()),
        }
    sys.stdout.buffer.write(to_json_bytes(doc))
    return EXIT_OK


def cmd_verify(args) -> int:
    lemmas = tuple(args.lemma) if args.lemma else tuple(LEMMAS)
    for lid in lemmas:
        if lid not in LEMMAS:
            print(f"unknown lemma id {lid!r}; known: {', '.join(LEMMAS)}",
                  file=sys.stderr)
            return EXIT_DOMAIN
    config = SuiteConfig(
        bounds=Bounds(depth=args.depth, max_dim=args.max_dim,
                      max_elements=args.max_elems),
        lemmas=lemmas,
        seed=args.seed,
        jobs=args.jobs,
    )
    reports = run_suite(config)
    doc = {
        "config": {
            "depth": args.depth,
            "max_dim": args.max_dim,
            "max_elems": args.max_elems,
            "seed": args.seed,
            "lemmas": list(lemmas),
        },
        "reports": [r.to_dict() for r in reports],
    }
    sys.stdout.buffer.write(to_json_bytes(doc))
    failed = [r for r in reports if r.status == "fail"]
    for r in reports:
        note = f" ({r.warning})" if r.warning else ""
        print(f"{r.lemma}: {r.status} [{r.instances} instances]{note}",
              file=sys.stderr)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_render(args) -> int:
    shape = _eval_shape(args.expr)
    sys.stdout.buffer.write(render(shape, args.format))
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ogpkit",
        description="Build and verify shapes of oriented graded posets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="evaluate an expression and print its JSON")
    p.add_argument("expr")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("boundary", help="boundary of a shape")
    p.add_argument("expr")
    p.add_argument("n", type=int)
    p.add_argument("sign", choices=["-", "+"])
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("check", help="validate a shape and print a summary")
    p.add_argument("expr")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("iso", help="find an isomorphism between two shapes")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("horn", help="atomic horn of an atom at a facet")
    p.add_argument("expr")
    p.add_argument("facet")
    p.add_argument("--marking", nargs="*", default=None,
                   help="recognise as a marked horn with this marking")
    p.set_defaults(func=cmd_horn)

    p = sub.add_parser("pp", help="pushout-products of horns")
    p.add_argument("what", choices=["horn", "marked-horn"])
    p.add_argument("left", help="atom expression carrying the horn")
    p.add_argument("facet")
    p.add_argument("right", help="atom expression for the other factor")
    p.add_argument("--order", choices=["uv", "vu"], default="uv")
    p.add_argument("--marking", nargs="*", default=None)
    p.add_argument("--family", choices=["minbd", "markbd"], default="minbd")
    p.set_defaults(func=cmd_pp)

    p = sub.add_parser("verify", help="run the lemma-checking suite")
    p.add_argument("--lemma", action="append", default=None,
                   help="lemma id to run (repeatable; default all)")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--max-dim", type=int, default=4)
    p.add_argument("--max-elems", type=int, default=16)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="serialize a shape")
    p.add_argument("expr")
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.set_defaults(func=cmd_render)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ExprSyntaxError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return EXIT_SYNTAX
    except ShapeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
