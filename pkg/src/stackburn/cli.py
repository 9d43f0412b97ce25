"""Command-line interface: JSON documents in, canonical JSON out.

Exit status: 0 success, 1 ``equal`` found the elements different, 2 invalid
input, 3 computation error (the error class name is printed on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import classes, lattice, maps, serialize, symbols, toric
from .abelian import FinAbGroup, cokernel, quotient, smith_normal_form
from .errors import BurnsideError
from .serialize import SchemaError, check, dumps
from .symbols import BurnElement

PRESENTATION_CHOICES = ("obar", "oburn", "cburn")


def _read(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from None


def _element(doc, grading):
    """An element document, or a single symbol document."""
    if isinstance(doc, dict):
        doc = [{"symbol": doc, "coeff": 1}]
    return serialize.parse_element(doc, grading)


def _elem_out(e: BurnElement) -> dict:
    return {"n": e.n, "element": e.to_json()}


# ---------------------------------------------------------------------------
# subcommands


def cmd_snf(args):
    doc = _read(args.input)
    check(doc, {"type": "object", "properties": {"matrix": serialize._MATRIX}, "required": ["matrix"]}, "matrix")
    d = smith_normal_form(doc["matrix"])
    return {"U": [list(r) for r in d.U], "D": [list(r) for r in d.D], "V": [list(r) for r in d.V],
            "diagonal": list(d.diagonal)}


def cmd_group(args):
    doc = _read(args.input)
    check(doc, {
        "type": "object",
        "properties": {"orders": serialize._INT_LIST, "cokernel": serialize._MATRIX,
                       "rows": {"type": "integer", "minimum": 0}, "quotient_by": serialize._MATRIX},
        "oneOf": [
            {"required": ["orders"]},
            {"required": ["cokernel", "rows"]},
            {"required": ["A", "quotient_by"]},
        ],
    }, "group request")
    if "orders" in doc:
        g = FinAbGroup.from_orders(doc["orders"])
        return {"group": g.to_json(), "order": g.order}
    if "cokernel" in doc:
        g, proj = cokernel(doc["cokernel"], doc["rows"])
        return {"group": g.to_json(), "order": g.order, "projection": proj.to_json()}
    check(doc["A"], serialize.GROUP, "group")
    a = FinAbGroup.from_json(doc["A"])
    q, proj = quotient(a, [a.element(x) for x in doc["quotient_by"]])
    return {"group": q.to_json(), "order": q.order, "projection": proj.to_json()}


def cmd_normalize(args):
    e = _element(_read(args.input), args.grading)
    return _elem_out(symbols.normalize_element(e, args.presentation))


def cmd_relate(args):
    doc = _read(args.input)
    sym = symbols.symbol_from_json(doc)
    lhs = BurnElement.of(sym)
    if args.kind == "cburn":
        rhs = symbols.blowup_relation_cburn(sym, args.i, args.j)
        return {"lhs": _elem_out(lhs), "rhs": _elem_out(rhs)}
    if args.kind == "expansion":
        rhs = symbols.derived_blowup_expansion(sym, args.prefix, args.i0)
        return {"lhs": _elem_out(lhs), "rhs": _elem_out(rhs)}
    if args.kind == "vanishing":
        steps = symbols.derived_vanishing(sym, args.prefix)
        cert: dict[str, int] = {}
        for st in steps:
            rid = lattice.RelationInstance(st.kind, st.symbol, st.i, st.j).id
            cert[rid] = cert.get(rid, 0) + st.coeff
        return {"lhs": _elem_out(symbols.normalize_obar(sym)),
                "certificate": {k: v for k, v in cert.items() if v}}
    if args.kind == "oburn":
        rhs = symbols.blowup_relation_oburn(sym, args.i, args.j)
        return {"lhs": _elem_out(BurnElement.of(symbols.normalize_oburn(sym))), "rhs": _elem_out(rhs)}
    rhs = symbols.blowup_relation_obar(sym, args.i, args.j)
    return {"lhs": _elem_out(symbols.normalize_obar(sym)), "rhs": _elem_out(rhs)}


def _pair(args):
    doc = _read(args.input)
    check(doc, {"type": "object", "required": ["lhs", "rhs"]}, "equality request")
    n = args.grading if args.grading is not None else doc.get("n")
    lhs, rhs = serialize.parse_element(doc["lhs"], n), serialize.parse_element(doc["rhs"], n)
    if lhs.n != rhs.n and lhs and rhs:
        raise SchemaError("lhs and rhs have different gradings")
    n = lhs.n if lhs else rhs.n
    return (lhs or BurnElement.zero(n)), (rhs or BurnElement.zero(n))


def cmd_equal(args):
    lhs, rhs = _pair(args)
    verdict, lat = lattice.decide_equal(lhs, rhs, args.presentation, args.max_universe)
    out = {"equal": verdict.is_zero, "presentation": args.presentation, "n": lhs.n if lhs else rhs.n,
           "universe_size": len(lat.universe), "relations": len(lat.vectors)}
    if verdict.is_zero:
        out["certificate"] = verdict.certificate
        out["element"] = (lhs - rhs).to_json()
    else:
        w = verdict.witness
        out["witness"] = {"functional": {lat.universe.symbols[k].key(): v
                                         for k, v in sorted(w.functional.items())},
                          "modulus": w.modulus}
    return out, (0 if verdict.is_zero else 1)


def cmd_certify(args):
    doc = _read(args.input)
    check(doc, serialize.CERTIFICATE, "certificate")
    e = serialize.parse_element(doc["element"], doc["n"])
    lattice.check_certificate(e, doc["certificate"], doc["presentation"])
    return {"valid": True, "relations": len(doc["certificate"])}


def cmd_class(args):
    doc = _read(args.input)
    if args.formula in ("open", "open_punctured"):
        desc = serialize.parse_snc_open(doc)
        fn = classes.class_open if args.formula == "open" else classes.class_open_punctured_form
        return _elem_out(fn(desc))
    desc = serialize.parse_orbifold(doc)
    fn = classes.class_of_orbifold if args.formula == "cburn" else classes.naive_class_open
    return _elem_out(fn(desc))


def cmd_toric_class(args):
    fan = serialize.parse_fan(_read(args.input))
    desc = toric.stabilizer_components(fan)
    e = toric.toric_class(fan, args.mode)
    return {**_elem_out(e), "components": serialize.orbifold_to_json(desc)["components"]}


def cmd_subdivide(args):
    fan = serialize.parse_fan(_read(args.input))
    out = toric.stacky_star_subdivision(fan, args.ray)
    return (out.canonical() if args.canonical else out).to_json()


def cmd_root(args):
    fan = serialize.parse_fan(_read(args.input))
    out = toric.root_ray(fan, args.index, args.order)
    return (out.canonical() if args.canonical else out).to_json()


def cmd_kappa(args):
    return _elem_out(maps.kappa_bar_element(_element(_read(args.input), args.grading)))


def cmd_inv_kappa(args):
    return _elem_out(maps.kappa_bar_inverse_element(_element(_read(args.input), args.grading)))


def cmd_classical(args):
    e = _element(_read(args.input), args.grading)
    c = maps.to_classical(e)
    return {"n": c.n, "class": c.to_json()}


def cmd_grothendieck(args):
    e = _element(_read(args.input), args.grading)
    c = maps.to_grothendieck(e)
    return {"n": c.n, "class": c.to_json()}


def cmd_specialize(args):
    model, n = serialize.parse_model(_read(args.input))
    return _elem_out(maps.specialize(model, args.grading if args.grading is not None else n))


# ---------------------------------------------------------------------------
# parser


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace("(", "").replace(")", "").split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stackburn", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, grading=False, presentation=None):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("input", help="input JSON file ('-' for stdin)")
        sp.add_argument("-o", "--output", help="write the result here instead of stdout")
        if grading:
            sp.add_argument("--grading", type=int, help="grading n (needed for empty elements)")
        if presentation:
            sp.add_argument("--presentation", choices=presentation, default=presentation[0])
        sp.set_defaults(func=fn)
        return sp

    add("snf", cmd_snf, "Smith normal form of {\"matrix\": [[...]]}")
    add("group", cmd_group, "canonical group from orders, a cokernel, or a quotient")
    add("normalize", cmd_normalize, "normal form of an element", True, PRESENTATION_CHOICES)
    sp = add("relate", cmd_relate, "apply one relation instance to a symbol")
    sp.add_argument("--kind", choices=("obar", "oburn", "cburn", "expansion", "vanishing"), default="obar")
    sp.add_argument("--i", type=int, default=0)
    sp.add_argument("--j", type=int, default=1)
    sp.add_argument("--prefix", type=int, default=2, help="prefix length j for derived relations")
    sp.add_argument("--i0", choices=("min", "max"), default="min")
    sp = add("equal", cmd_equal, "decide equality of {\"lhs\", \"rhs\"}", True, ("obar", "oburn"))
    sp.add_argument("--max-universe", type=int, default=lattice.DEFAULT_MAX_SIZE)
    add("certify", cmd_certify, "replay a certificate against its element")
    sp = add("class", cmd_class, "Burnside class of a described orbifold")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--cburn", dest="formula", action="store_const", const="cburn")
    g.add_argument("--naive", dest="formula", action="store_const", const="naive")
    g.add_argument("--open", dest="formula", action="store_const", const="open")
    g.add_argument("--open-punctured", dest="formula", action="store_const", const="open_punctured")
    sp = add("toric-class", cmd_toric_class, "class of the toric DM stack of a stacky fan")
    sp.add_argument("--mode", choices=("obar", "cburn"), default="obar")
    sp = add("subdivide", cmd_subdivide, "stacky star subdivision at a lattice vector")
    sp.add_argument("--ray", type=_int_list, required=True, help="e.g. 2,1")
    sp.add_argument("--canonical", action="store_true", help="emit the canonical fan form")
    sp = add("root", cmd_root, "root operation: scale one ray generator")
    sp.add_argument("--index", type=int, required=True)
    sp.add_argument("--order", type=int, default=2)
    sp.add_argument("--canonical", action="store_true")
    add("kappa", cmd_kappa, "comparison map oBurn-bar -> oBurn", True)
    add("inv-kappa", cmd_inv_kappa, "inverse comparison map oBurn -> oBurn-bar", True)
    add("classical", cmd_classical, "projection to classical Burn_n", True)
    add("grothendieck", cmd_grothendieck, "projection keeping empty character sequences", True)
    add("specialize", cmd_specialize, "orbifold Burnside volume of a model", True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except SchemaError as exc:
        print(f"error: schema: {exc}", file=sys.stderr)
        return 2
    except BurnsideError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, TypeError) as exc:
        print(f"error: schema: malformed input ({type(exc).__name__}: {exc})", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    status = 0
    if isinstance(result, tuple):
        result, status = result
    text = dumps(result)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
