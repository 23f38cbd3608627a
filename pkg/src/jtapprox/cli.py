"""Command-line front end.

Subcommands: `triangulate` runs the full pipeline on a `.gr` file and
can emit the junction tree as `.td`; `compare` pits the pipeline
against the enhanced greedy baseline over a corpus; `verify` checks a
small instance against the exact optimum; `gen` writes reproducible
random instances; `bench` times the jit kernels against the pure-numpy
fallback.

Exit codes: 0 success, 1 bad input (parse, domain, or size refusal),
3 internal invariant violation (a bug, never bad input), 2 usage.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import kernels
from .chordal import format_td
from .errors import InvariantError, JtapproxError
from .graph import (
    Graph,
    StateSpace,
    format_graph,
    format_state_space,
    parse_graph,
    parse_state_space,
)
from .oracle import exact_cliquewidth
from .pipeline import run_baseline, run_pipeline
from .triangulate import EscalationPolicy, escalate

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BUG = 3


def _load(graph_path: str, ss_path: str | None) -> tuple[Graph, StateSpace | None]:
    graph = parse_graph(Path(graph_path).read_text())
    ss = None
    if ss_path is not None:
        ss = parse_state_space(Path(ss_path).read_text(), graph)
    return graph, ss


def random_graph(n: int, m: int, rng: np.random.Generator) -> Graph:
    """Uniform random simple graph with exactly m edges, 1-based ids."""
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    if m > len(pairs):
        raise JtapproxError(f"m={m} exceeds the {len(pairs)} possible edges for n={n}")
    chosen = rng.choice(len(pairs), size=m, replace=False)
    return Graph(range(1, n + 1), [pairs[i] for i in sorted(chosen)])


def _geometric_mean(lo: int, hi: int, q: float) -> float:
    weights = [q ** (s - lo) for s in range(lo, hi + 1)]
    return sum(s * w for s, w in zip(range(lo, hi + 1), weights)) / sum(weights)


def skewed_sizes(
    count: int, lo: int, hi: int, mean: float, rng: np.random.Generator
) -> list[int]:
    """Truncated-geometric draw on lo..hi with the ratio bisected so
    the distribution mean hits `mean` (must lie strictly inside)."""
    if not lo < mean < hi:
        raise JtapproxError(f"target mean {mean} must lie strictly inside {lo}..{hi}")
    a, b = 1e-9, 1e6
    for _ in range(200):
        q = (a + b) / 2
        if _geometric_mean(lo, hi, q) < mean:
            a = q
        else:
            b = q
    q = (a + b) / 2
    weights = np.array([q ** (s - lo) for s in range(lo, hi + 1)])
    cdf = np.cumsum(weights / weights.sum())
    return [lo + int(np.searchsorted(cdf, u)) for u in rng.random(count)]


def _human_report(rep) -> str:
    ratio = "-" if rep.ratio_bound is None else f"{rep.ratio_bound:.4f}"
    k = "-" if rep.k_accepted is None else f"{rep.k_accepted:.4f}".rstrip("0").rstrip(".")
    lines = [
        f"n={rep.n} m={rep.m} mode={rep.mode} alpha={rep.alpha:g}",
        f"k_accepted={k}  l={rep.largest_clique_size}  ratio_bound={ratio}",
        f"M={rep.M:.4f}  T={rep.T:.4f}",
        f"fills={rep.fills_before} -> {rep.fills_after}  bags={len(rep.tree.bags)}",
        f"stripped={rep.stripped} (largest clique {rep.stripped_max_clique})"
        f"  wall={rep.wall_ms:.0f}ms",
    ]
    for i, c in enumerate(rep.components):
        lines.append(
            f"  component {i}: n={c.vertices} m={c.edges} k={c.k_accepted:g}"
            f" l={c.largest_clique_size} {c.wall_ms:.0f}ms"
        )
    return "\n".join(lines)


def cmd_triangulate(args) -> int:
    graph, ss = _load(args.graph, args.state_space)
    mode = args.mode or ("weighted" if ss is not None else "card")
    rep = run_pipeline(
        graph,
        ss,
        mode=mode,
        alpha=args.alpha,
        jump=args.jump,
        minimize=not args.no_minimize,
        force_tree=args.force_tree,
    )
    if args.emit_td:
        Path(args.emit_td).write_text(format_td(rep.tree, rep.n))
    print(json.dumps(rep.to_json()) if args.json else _human_report(rep))
    return EXIT_OK


def _compare_corpus(args) -> list[tuple[Graph, StateSpace]]:
    if args.graph is not None:
        if args.state_space is None:
            raise JtapproxError("compare needs a state-space file with the graph")
        graph, ss = _load(args.graph, args.state_space)
        return [(graph, ss)]
    rng = np.random.default_rng(args.seed)
    corpus = []
    for _ in range(args.trials):
        g = random_graph(args.n, args.m, rng)
        lo, hi = args.size_range
        sizes = skewed_sizes(g.n, lo, hi, args.size_mean, rng)
        corpus.append((g, StateSpace(dict(zip(sorted(g.vertices), sizes)))))
    return corpus


def cmd_compare(args) -> int:
    corpus = _compare_corpus(args)
    rows = {"M": [], "T": []}
    for g, ss in corpus:
        ours = run_pipeline(g, ss, mode="weighted", alpha=args.alpha, jump=args.jump)
        base = run_baseline(g, ss)
        rows["M"].append((ours.M, base.M))
        rows["T"].append((ours.T, base.T))
    out: dict[str, dict] = {"instances": len(corpus)}
    lines = [f"{len(corpus)} instance(s); delta = baseline - ours (positive: ours better)"]
    lines.append(f"{'':>3} {'wins':>5} {'ties':>5} {'losses':>7} {'d_ave':>9} {'d_max':>9}")
    for name, pairs in rows.items():
        deltas = [b - o for o, b in pairs]
        wins = sum(1 for d in deltas if d > 1e-9)
        losses = sum(1 for d in deltas if d < -1e-9)
        ties = len(deltas) - wins - losses
        d_ave = sum(deltas) / len(deltas)
        d_max = max(deltas)
        out[name] = {"wins": wins, "ties": ties, "losses": losses,
                     "d_ave": d_ave, "d_max": d_max}
        lines.append(
            f"{name:>3} {wins:>5} {ties:>5} {losses:>7} {d_ave:>9.4f} {d_max:>9.4f}"
        )
    print(json.dumps(out) if args.json else "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    graph, ss = _load(args.graph, args.state_space)
    opt = exact_cliquewidth(graph, ss)
    k, res = escalate(graph, args.alpha, EscalationPolicy(jump=args.jump), ss=ss)
    bound = (2 * args.alpha + 1) * k
    if ss is None:
        achieved = res.largest_clique_size
        bound_ok = achieved < bound
    else:
        achieved = max(
            (ss.weight_of(b) for b in _final_bags(graph, res)), default=0.0
        )
        bound_ok = achieved < bound + 1e-9
    sound_ok = True
    if res.ratio_bound is not None:
        sound_ok = opt > k - 1
    verdict = {
        "oracle": opt,
        "k_accepted": int(k) if ss is None else k,
        "achieved": achieved,
        "ratio_bound": res.ratio_bound,
        "bound_ok": bound_ok,
        "sound_ok": sound_ok,
    }
    if args.json:
        print(json.dumps(verdict))
    else:
        for key, val in verdict.items():
            print(f"{key}: {val}")
    if not (bound_ok and sound_ok):
        raise InvariantError("verification against the exact optimum failed")
    return EXIT_OK


def _final_bags(graph: Graph, res) -> list[frozenset[int]]:
    from .chordal import check_chordal, extract_cliques
    from .graph import with_edges

    filled = with_edges(graph, res.fill_edges)
    return extract_cliques(filled, check_chordal(filled).peo)


def cmd_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    g = random_graph(args.n, args.m, rng)
    lo, hi = args.size_range
    if args.uniform_sizes:
        sizes = [int(s) for s in rng.integers(lo, hi + 1, size=g.n)]
    else:
        sizes = skewed_sizes(g.n, lo, hi, args.size_mean, rng)
    ss = StateSpace(dict(zip(sorted(g.vertices), sizes)))
    gr = Path(f"{args.out}.gr")
    sspath = Path(f"{args.out}.ss")
    gr.write_text(format_graph(g))
    sspath.write_text(format_state_space(ss))
    print(f"wrote {gr} and {sspath}")
    return EXIT_OK


def cmd_bench(args) -> int:
    rng = np.random.default_rng(args.seed)
    g = random_graph(args.n, args.m, rng)
    lo, hi = args.size_range
    ss = StateSpace(dict(zip(sorted(g.vertices), skewed_sizes(g.n, lo, hi, 6.0, rng))))
    results = {}
    for backend in ("numba", "numpy"):
        try:
            prev = kernels.set_backend(backend)
        except ValueError as exc:
            print(f"{backend}: skipped ({exc})")
            continue
        try:
            run_pipeline(g, ss, mode="weighted")  # warm up jit compilation
            t0 = time.perf_counter()
            for _ in range(args.repeat):
                run_pipeline(g, ss, mode="weighted")
            results[backend] = (time.perf_counter() - t0) / args.repeat
        finally:
            kernels.set_backend(prev)
    for backend, sec in results.items():
        print(f"{backend:>6}: {sec * 1000:.1f} ms/run")
    if len(results) == 2:
        print(f"speedup: {results['numpy'] / results['numba']:.1f}x")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="jtapprox",
        description="Triangulation and junction trees with a provable clique bound.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, state_space=True):
        sp.add_argument("--alpha", type=float, default=2.0)
        sp.add_argument("--jump", choices=("inc", "kstar"), default="inc")
        if state_space:
            sp.add_argument("--state-space", help="per-vertex state-size sidecar file")

    tri = sub.add_parser("triangulate", help="run the full pipeline on a .gr file")
    tri.add_argument("graph")
    common(tri)
    tri.add_argument("--mode", choices=("card", "weighted"),
                     help="default: weighted iff a state space is given")
    tri.add_argument("--no-minimize", action="store_true")
    tri.add_argument("--force-tree", action="store_true",
                     help="join disconnected components into one tree")
    tri.add_argument("--emit-td", metavar="PATH")
    tri.add_argument("--json", action="store_true")
    tri.set_defaults(fn=cmd_triangulate)

    cmp_ = sub.add_parser("compare", help="pipeline vs enhanced greedy baseline")
    cmp_.add_argument("graph", nargs="?")
    common(cmp_)
    cmp_.add_argument("--trials", type=int, default=10)
    cmp_.add_argument("--n", type=int, default=30)
    cmp_.add_argument("--m", type=int, default=70)
    cmp_.add_argument("--seed", type=int, default=0)
    cmp_.add_argument("--size-range", type=int, nargs=2, default=(3, 21))
    cmp_.add_argument("--size-mean", type=float, default=6.0)
    cmp_.add_argument("--json", action="store_true")
    cmp_.set_defaults(fn=cmd_compare)

    ver = sub.add_parser("verify", help="check a small instance against the exact optimum")
    ver.add_argument("graph")
    common(ver)
    ver.add_argument("--json", action="store_true")
    ver.set_defaults(fn=cmd_verify)

    gen = sub.add_parser("gen", help="write a reproducible random instance")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--size-range", type=int, nargs=2, default=(3, 21))
    gen.add_argument("--size-mean", type=float, default=6.0)
    gen.add_argument("--uniform-sizes", action="store_true")
    gen.add_argument("-o", "--out", required=True, metavar="BASE")
    gen.set_defaults(fn=cmd_gen)

    ben = sub.add_parser("bench", help="time the jit kernels against pure numpy")
    ben.add_argument("--n", type=int, default=24)
    ben.add_argument("--m", type=int, default=55)
    ben.add_argument("--seed", type=int, default=0)
    ben.add_argument("--size-range", type=int, nargs=2, default=(3, 21))
    ben.add_argument("--repeat", type=int, default=3)
    ben.set_defaults(fn=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InvariantError as exc:
        print(f"invariant violation (bug): {exc}", file=sys.stderr)
        return EXIT_BUG
    except (JtapproxError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
