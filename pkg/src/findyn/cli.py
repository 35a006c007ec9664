"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 failed ``--assert``, 3 resource budget
exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys as _sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import gallery
from .chain import build_chain_graph, chain_graph_to_dot, decompose
from .errors import DynamicsError, InputFormatError, ParameterError, ResourceError
from .invlimit import classify_expansivity
from .shadow import check_forward_shadowing_exact
from .space import as_number
from .sysio import dumps_system, load_system

EXIT_OK, EXIT_INPUT, EXIT_ASSERT, EXIT_RESOURCE = 0, 1, 2, 3

GALLERY_PARAMS = ("N", "I", "M", "K", "n")

ASSERT_ALIASES = {
    "bi_asymptotic_c": "bi_asymptotically_c_expansive",
    "positive": "positively_expansive",
    "asymptotic": "asymptotically_expansive",
    "shadowing": "forward_shadowing",
}

EXPANSIVITY_FIELDS = ("positively_expansive", "c_expansive",
                      "asymptotically_expansive", "bi_asymptotically_c_expansive")


def parse_number(text: str):
    """``p/q`` and decimal strings become exact fractions."""
    try:
        return as_number(text)
    except InputFormatError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _num_str(v):
    return str(v) if isinstance(v, Fraction) else repr(v)


def _source_args(p):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--input", help="system JSON file")
    src.add_argument("--gallery", help="gallery item name")
    for name in GALLERY_PARAMS:
        p.add_argument(f"--{name}", type=int, dest=f"g_{name}", default=None,
                       help=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=None, help="seed for random gallery items")
    p.add_argument("--out", help="write the artifact here instead of stdout")


def _load(args):
    if args.input:
        return load_system(args.input)
    if args.gallery:
        return _gallery_item(args.gallery, args).system
    raise InputFormatError("give --input FILE or --gallery NAME")


def _gallery_item(name, args):
    if name not in gallery.REGISTRY:
        raise InputFormatError(f"unknown gallery item {name!r}")
    defaults = gallery.REGISTRY[name].defaults
    params = {}
    for key in GALLERY_PARAMS:
        val = getattr(args, f"g_{key}", None)
        if val is not None:
            if key not in defaults:
                raise InputFormatError(f"gallery item {name!r} has no parameter {key}")
            params[key] = val
    if getattr(args, "seed", None) is not None and "seed" in defaults:
        params["seed"] = args.seed
    return gallery.build(name, **params)


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        _sys.stdout.write(text)


def _check_asserts(names, values: dict) -> int:
    status = EXIT_OK
    for raw in names or ():
        key = ASSERT_ALIASES.get(raw, raw)
        if key not in values:
            raise InputFormatError(f"cannot assert unknown verdict {raw!r}")
        if values[key] is not True:
            print(f"assertion failed: {key} = {values[key]}", file=_sys.stderr)
            status = EXIT_ASSERT
    return status


def cmd_decompose(args) -> int:
    sys = _load(args)
    if args.format == "dot":
        _emit(chain_graph_to_dot(sys, build_chain_graph(sys, args.epsilon)), args.out)
        return EXIT_OK
    dec = decompose(sys, args.epsilon)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["basic_set", "period", "component", "mixing", "points"])
        for k, b in enumerate(dec.basic_sets):
            for i, (comp, mix) in enumerate(zip(b.components, b.mixing)):
                writer.writerow([k, b.period, i, str(mix.holds).lower(),
                                 " ".join(sys.labels[x] for x in sorted(comp))])
        _emit(buf.getvalue(), args.out)
        return EXIT_OK
    doc = dec.to_dict()
    doc["labels"] = list(sys.labels)
    _emit(json.dumps(doc, indent=1) + "\n", args.out)
    return EXIT_OK


def cmd_expansivity(args) -> int:
    sys = _load(args)
    report = classify_expansivity(sys, args.c)
    doc = report.to_dict()
    _emit(json.dumps(doc, indent=1) + "\n", args.out)
    return _check_asserts(args.assert_, doc)


def cmd_shadow(args) -> int:
    sys = _load(args)
    res = check_forward_shadowing_exact(sys, args.delta, args.epsilon)
    doc = res.to_dict(args.delta, args.epsilon)
    _emit(json.dumps(doc, indent=1) + "\n", args.out)
    return _check_asserts(args.assert_, doc)


def cmd_gallery(args) -> int:
    if args.action == "list":
        lines = []
        for name, entry in gallery.REGISTRY.items():
            params = " ".join(f"--{k} {v}" for k, v in entry.defaults.items())
            lines.append(f"{name}\t{params}\t{entry.description}")
        _emit("\n".join(lines) + "\n", args.out)
        return EXIT_OK
    if not args.name:
        raise InputFormatError(f"gallery {args.action} needs an item name")
    item = _gallery_item(args.name, args)
    if args.action == "emit":
        meta = {"name": item.name, "params": item.params, **item.meta}
        system_text = dumps_system(item.system, meta)
        exp_text = json.dumps({"name": item.name, "params": item.params,
                               "expectations": [e.to_dict() for e in item.expectations]},
                              indent=1) + "\n"
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"{item.name}.system.json").write_text(system_text)
            (out / f"{item.name}.expectations.json").write_text(exp_text)
        else:
            _sys.stdout.write(system_text)
        return EXIT_OK
    results = gallery.run_expectations(item)
    lines = []
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        e = r.expectation
        lines.append(f"{mark}\t{e.operation}\t{json.dumps(e.params)}\t"
                     f"expected={json.dumps(e.expected)}\tactual={json.dumps(r.actual)}\t{e.provenance}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_ASSERT


def _grid(text, sys):
    if text is None:
        return None
    if text.strip() == "distances":
        return [v for v in sys.space.distance_values()]
    vals = [parse_number(t) for t in text.split(",") if t.strip()]
    return sorted(set(vals))


def cmd_sweep(args) -> int:
    sys = _load(args)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    figure_rows = []
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        if args.kind == "shadow":
            deltas, epsilons = _grid(args.deltas, sys), _grid(args.epsilons, sys)
            if not deltas or not epsilons:
                raise InputFormatError("shadow sweep needs nonempty --deltas and --epsilons")
            cells = [(d, e) for d in deltas for e in epsilons]
            verdicts = pool.map(
                lambda de: check_forward_shadowing_exact(sys, *de).holds, cells)
            writer.writerow(["delta", "epsilon", "verdict"])
            for (d, e), v in zip(cells, verdicts):
                writer.writerow([_num_str(d), _num_str(e), str(v).lower()])
                figure_rows.append((d, e, v))
        elif args.kind == "expansivity":
            cs = _grid(args.cs, sys)
            cs = [c for c in cs or () if c > 0]
            if not cs:
                raise InputFormatError("expansivity sweep needs a nonempty positive --cs grid")
            reports = pool.map(lambda c: classify_expansivity(sys, c), cs)
            writer.writerow(["c", *EXPANSIVITY_FIELDS])
            for c, rep in zip(cs, reports):
                writer.writerow([_num_str(c), *(str(getattr(rep, f)).lower()
                                               for f in EXPANSIVITY_FIELDS)])
                figure_rows.append((c, getattr(rep, args.verdict)))
        else:
            epsilons = _grid(args.epsilons, sys)
            if not epsilons:
                raise InputFormatError("decompose sweep needs a nonempty --epsilons grid")
            decs = pool.map(lambda e: decompose(sys, e), epsilons)
            writer.writerow(["epsilon", "chain_recurrent", "basic_sets", "periods"])
            for e, dec in zip(epsilons, decs):
                writer.writerow([_num_str(e), len(dec.chain_recurrent), len(dec.basic_sets),
                                 " ".join(str(b.period) for b in dec.basic_sets)])
    _emit(buf.getvalue(), args.out)
    if args.figure and figure_rows:
        from . import figures
        if args.kind == "shadow":
            figures.verdict_grid_figure(figure_rows, args.figure,
                                        title="forward shadowing")
        elif args.kind == "expansivity":
            figures.verdict_line_figure(figure_rows, args.figure, title=args.verdict)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="findyn",
        description="Spectral decomposition, expansivity and shadowing on finite systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="chain-recurrent basic sets and cyclic classes")
    _source_args(p)
    p.add_argument("--epsilon", type=parse_number, default=Fraction(0))
    p.add_argument("--format", choices=("json", "dot", "csv"), default="json")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("expansivity", help="expansivity verdicts at threshold c")
    _source_args(p)
    p.add_argument("--c", type=parse_number, required=True)
    p.add_argument("--format", choices=("json",), default="json")
    p.add_argument("--assert", dest="assert_", action="append", metavar="VERDICT")
    p.set_defaults(func=cmd_expansivity)

    p = sub.add_parser("shadow", help="exact forward shadowing at (delta, epsilon)")
    _source_args(p)
    p.add_argument("--delta", type=parse_number, required=True)
    p.add_argument("--epsilon", type=parse_number, required=True)
    p.add_argument("--format", choices=("json",), default="json")
    p.add_argument("--assert", dest="assert_", action="append", metavar="VERDICT")
    p.set_defaults(func=cmd_shadow)

    p = sub.add_parser("gallery", help="list, emit or check gallery items")
    p.add_argument("action", choices=("list", "emit", "check"))
    p.add_argument("name", nargs="?")
    for name in GALLERY_PARAMS:
        p.add_argument(f"--{name}", type=int, dest=f"g_{name}", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gallery)

    p = sub.add_parser("sweep", help="verdict grids as CSV")
    _source_args(p)
    p.add_argument("--kind", choices=("shadow", "expansivity", "decompose"), default="shadow")
    p.add_argument("--deltas", help="comma list, or 'distances'")
    p.add_argument("--epsilons", help="comma list, or 'distances'")
    p.add_argument("--cs", help="comma list, or 'distances'")
    p.add_argument("--verdict", default="bi_asymptotically_c_expansive",
                   choices=EXPANSIVITY_FIELDS, help="verdict drawn in --figure")
    p.add_argument("--format", choices=("csv",), default="csv")
    p.add_argument("--figure", help="also render the grid to this image file")
    p.add_argument("--jobs", type=int, default=4)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ResourceError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_RESOURCE
    except (DynamicsError, ParameterError, OSError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
