"""Compare the compiled and pure-Python kernels on model-sized inputs.

    python bench/benchmark.py [--repeat 3] [--json out.json]

Every kernel runs on the same workload under both backends; results are
checked for agreement before timings are reported.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from iimkit import _kernels
from iimkit.generator import sample_iim
from iimkit.graph import Graph, complete_graph, cycle_graph, path_graph
from iimkit.spectral import normalized_laplacian


def _graphs(seed_graph: Graph, steps: int, count: int, rng: int) -> list[Graph]:
    gen = np.random.Generator(np.random.PCG64(rng))
    out = []
    while len(out) < count:
        _, h = sample_iim(seed_graph, steps, 0.5, gen)
        if not h.graph.isolated_vertices():
            out.append(h.graph)
    return out


def _gnp(n: int, p: float, count: int, rng: int) -> list[Graph]:
    gen = np.random.Generator(np.random.PCG64(rng))
    out = []
    for _ in range(count):
        upper = np.triu(gen.random((n, n)) < p, 1)
        out.append(Graph.from_edges(n, zip(*map(list, np.nonzero(upper)))))
    return out


def workloads() -> dict[str, tuple[callable, list]]:
    g16 = _graphs(complete_graph(1), 4, 200, 1)
    g128c = _graphs(complete_graph(1), 7, 20, 2)
    g40 = _graphs(cycle_graph(5), 3, 10, 3)
    g128 = _graphs(path_graph(4), 5, 20, 4)
    dense = _gnp(80, 0.5, 5, 5)
    sparse = _gnp(40, 0.12, 5, 6)
    lap = [normalized_laplacian(g) for g in g16]
    return {
        "jacobi (n=16, 200 graphs)": (lambda k, a: k.jacobi_eigenvalues(a, 1e-10, 100)[0], lap),
        "max_clique (n=128, 20 graphs)": (lambda k, g: k.max_clique(g.adj, g.n, g.full), g128c),
        "min_dominating_set (n=40, 10 graphs)": (lambda k, g: k.min_dominating_set(g.adj, g.n), g40),
        "max_clique (G(80, 0.5), 5 graphs)": (lambda k, g: k.max_clique(g.adj, g.n, g.full), dense),
        "min_dominating_set (G(40, 0.12), 5 graphs)": (lambda k, g: k.min_dominating_set(g.adj, g.n), sparse),
        "eccentricities (n=128, 20 graphs)": (lambda k, g: k.eccentricities(g.adj, g.n), g128),
    }


def _time(fn, kernel, items, repeat: int) -> tuple[float, list]:
    best, out = float("inf"), []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = [fn(kernel, x) for x in items]
        best = min(best, time.perf_counter() - t0)
    return best, out


def _same(a, b) -> bool:
    if isinstance(a, np.ndarray):
        return np.allclose(np.sort(a), np.sort(b), atol=1e-9)
    return list(a) == list(b) if isinstance(a, (list, tuple)) else a == b


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json")
    args = ap.parse_args(argv)
    try:
        ck = _kernels.backend("cython")
    except ImportError:
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
        return 1
    py = _kernels.backend("python")
    rows = []
    print(f"{'kernel':44s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, (fn, items) in workloads().items():
        tp, rp = _time(fn, py, items, args.repeat)
        tc, rc = _time(fn, ck, items, args.repeat)
        if not all(_same(a, b) for a, b in zip(rp, rc)):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 2
        rows.append({"kernel": name, "python": tp, "cython": tc, "speedup": tp / tc})
        print(f"{name:44s} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}x")
    if args.json:
        with open(args.json, "w") as f:
            json.dump(rows, f, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
