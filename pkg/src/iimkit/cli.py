"""Command-line front end: ``iimkit generate | verify | analyze``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from .clique import chromatic_number, clique_number
from .distance import diameter, dom
from .errors import IIMError, SizeLimitError
from .generator import ChoiceSequence, iim_from_graph, iim_generate, sample_iim
from .graph import Graph, parse_edge_list, to_dot, to_edge_list
from .seeds import named_seed, seed_names
from .spectral import spectral_gap
from .verify import THEOREMS, Options, default_budget, verify

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
ANALYZE_FIELDS = ("n", "m", "diam", "dom", "omega", "chi", "gap", "isolated")


def _load_seed(args) -> tuple[Graph, str]:
    if getattr(args, "graph", None):
        return parse_edge_list(Path(args.graph).read_text()), f"file:{args.graph}"
    return named_seed(args.seed), args.seed


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def cmd_generate(args) -> int:
    g0, _ = _load_seed(args)
    if args.choices is not None and args.random is not None:
        raise IIMError("give either --choices or --random, not both")
    if args.random is not None:
        if args.rng is None:
            raise IIMError("--random needs --rng")
        _, h = sample_iim(g0, args.steps, args.random, args.rng)
    else:
        seq = ChoiceSequence.from_hex(args.choices or "", g0.n)
        if len(seq.levels) != args.steps:
            raise IIMError(f"--steps {args.steps} but {len(seq.levels)} levels were given")
        h = iim_generate(g0, seq) if seq.levels else iim_from_graph(g0)
    if args.out is None:
        sys.stdout.write(to_edge_list(h.graph))
        return EXIT_OK
    out = Path(args.out)
    _write(out / f"{args.name}.edges", to_edge_list(h.graph))
    _write(out / f"{args.name}.dot", to_dot(h.graph, args.name, list(h.levels)))
    _write(out / f"{args.name}.json", json.dumps(h.to_json(), indent=2))
    print(f"{h.choices.to_hex() or '(no levels)'} -> {h.n} vertices in {out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    opt = Options(budget=args.budget, samples=args.samples, rng=args.rng, p=args.p, subsets=args.subsets)
    rep = verify(args.theorem, args.seed, args.steps, opt, workers=args.workers)
    text = rep.dumps()
    stem = f"{args.theorem}-{args.seed}-l{args.steps}"
    if args.out is not None:
        _write(Path(args.out) / f"{stem}.report.json", text + "\n")
    print(text)
    if rep.passed:
        return EXIT_OK
    witness = Path(args.out or ".") / f"{stem}.witness.json"
    _write(witness, json.dumps({"theorem_id": rep.theorem_id, "violations": rep.violations}, indent=2) + "\n")
    print(f"violation: witnesses written to {witness}", file=sys.stderr)
    return EXIT_VIOLATION


def _field(fn):
    try:
        return fn()
    except SizeLimitError:
        return "skipped(limit)"


def analyze_graph(g: Graph) -> dict:
    """Property table; exact solvers that exceed their size limit report ``skipped(limit)``."""
    iso = len(g.isolated_vertices())
    d = diameter(g)
    row = {
        "n": g.n,
        "m": g.edge_count(),
        "diam": "inf" if math.isinf(d) else int(d),
        "dom": _field(lambda: dom(g)),
        "omega": _field(lambda: clique_number(g)[0]),
        "chi": _field(lambda: chromatic_number(g)[0]),
        "gap": "skipped(isolated)" if iso or g.n == 0 else _field(lambda: spectral_gap(g)),
        "isolated": iso,
    }
    return row


def cmd_analyze(args) -> int:
    if args.graph is None and args.seed is None:
        raise IIMError("give a graph file or --seed")
    g, _ = _load_seed(args)
    row = analyze_graph(g)
    if args.format == "json":
        print(json.dumps(row))
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=ANALYZE_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerow(row)
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="iimkit", description="Generate, analyze and verify IIM graphs.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    gen = sub.add_parser("generate", help="build one graph from a seed and a choice sequence")
    src = gen.add_mutually_exclusive_group(required=True)
    src.add_argument("--seed", choices=seed_names())
    src.add_argument("--graph", help="edge-list file for the seed graph")
    gen.add_argument("--steps", type=int, required=True)
    gen.add_argument("--choices", help='hex levels, e.g. "L1=0x1;L2=0x3"')
    gen.add_argument("--random", type=float, metavar="P", help="sample with clone probability P")
    gen.add_argument("--rng", type=int)
    gen.add_argument("--out", help="directory for .edges, .dot and .json files")
    gen.add_argument("--name", default="graph")
    gen.set_defaults(func=cmd_generate)

    ver = sub.add_parser("verify", help="check one bound over an enumerated or sampled family")
    ver.add_argument("theorem", choices=THEOREMS)
    ver.add_argument("--seed", choices=seed_names(), required=True)
    ver.add_argument("--steps", type=int, required=True)
    ver.add_argument("--budget", type=int, default=default_budget(), help="max enumeration bits")
    ver.add_argument("--workers", type=int, default=1)
    ver.add_argument("--samples", type=int, default=0, help="sample instead of enumerating")
    ver.add_argument("--rng", type=int)
    ver.add_argument("--p", type=float, default=0.5)
    ver.add_argument("--subsets", type=int, default=100, help="random sets per graph (mixing-lemma)")
    ver.add_argument("--out", help="directory for the report and any witness file")
    ver.set_defaults(func=cmd_verify)

    ana = sub.add_parser("analyze", help="exact properties of one graph")
    ana.add_argument("graph", nargs="?", help="edge-list file")
    ana.add_argument("--seed", choices=seed_names())
    ana.add_argument("--format", choices=("json", "csv"), default="json")
    ana.set_defaults(func=cmd_analyze)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (IIMError, OSError) as e:
        print(f"iimkit: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
