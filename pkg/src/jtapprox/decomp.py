"""Search for a W-decomposition with respect to (k, alpha).

A decomposition (X, A, B, C) partitions the vertices so that no edge
joins two of A, B, C and A, B are nonempty. It is a W-decomposition
when, with t the threshold and measure either cardinality or total
weight: measure(V) >= (2a+1)t, measure(W) < (a+1)t, measure(X) <= a*t,
and measure((W n P) u X) < (a+1)t for each part P.

find_w_decomposition enumerates splits of the monitored set W into
(W_A, W_B, W_C, W_X) and runs a 3-way cut procedure when the largest
group is small or a plain minimum-cut procedure when it is large. If
the threshold is attainable at all, some decomposition is induced by a
bag of an optimal tree: its X has measure <= t and no W-group holds
more than half of W, so the enumeration is restricted to splits with
those properties without losing completeness. A returned decomposition
is always re-verified against the predicate and the structural
invariants; when nothing is found, the conclusion "(weighted)
cliquewidth exceeds the threshold" is a sound output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels
from .cuts import (
    TOL,
    CapacityAssignment,
    FlowNetwork,
    StCutSolver,
    separates,
    three_way_cut_2approx,
)
from .errors import BudgetExceededError, DomainError, InvariantError
from .graph import Graph, StateSpace, connected_components, induced_subgraph

MODE_CARDINALITY = "cardinality"
MODE_WEIGHTED = "weighted"


@dataclass(frozen=True)
class WPartition:
    """Disjoint split of W into the group destined for A, B, C and X."""

    w_a: frozenset[int]
    w_b: frozenset[int]
    w_c: frozenset[int]
    w_x: frozenset[int]

    def __post_init__(self):
        groups = (self.w_a, self.w_b, self.w_c, self.w_x)
        total = sum(len(g) for g in groups)
        if total != len(self.w_a | self.w_b | self.w_c | self.w_x):
            raise DomainError("partition groups must be pairwise disjoint")

    @property
    def w(self) -> frozenset[int]:
        return self.w_a | self.w_b | self.w_c | self.w_x


@dataclass(frozen=True)
class Decomposition:
    x: frozenset[int]
    a: frozenset[int]
    b: frozenset[int]
    c: frozenset[int]


@dataclass
class DecompBudget:
    """Threshold, approximation parameter, and measuring mode.

    state_space supplies weights in weighted mode. flip_recorder, when
    set to a list, collects the smallest thresholds at which tested
    candidates would have passed; the escalation driver uses it to jump.
    """

    k_or_m: float
    alpha: float = 2.0
    mode: str = MODE_CARDINALITY
    state_space: StateSpace | None = None
    flip_recorder: list[float] | None = None

    def __post_init__(self):
        if self.mode not in (MODE_CARDINALITY, MODE_WEIGHTED):
            raise DomainError(f"unknown mode {self.mode!r}")
        if self.mode == MODE_WEIGHTED and self.state_space is None:
            raise DomainError("weighted mode needs a state space")
        if self.mode == MODE_CARDINALITY and self.k_or_m != int(self.k_or_m):
            raise DomainError("cardinality mode needs an integer threshold")
        if self.alpha < 1:
            raise DomainError("alpha must be >= 1")

    @property
    def tol(self) -> float:
        return 0.0 if self.mode == MODE_CARDINALITY else TOL

    def measure(self, vertices: Iterable[int]) -> float:
        if self.mode == MODE_CARDINALITY:
            return float(len(set(vertices)))
        return self.state_space.weight_of(set(vertices))

    # comparisons are lenient in weighted mode so that the oracle, which
    # shares the same log2 sums, can never disagree over float dust
    def lt(self, a: float, b: float) -> bool:
        return a < b + self.tol

    def le(self, a: float, b: float) -> bool:
        return a <= b + self.tol

    def ge(self, a: float, b: float) -> bool:
        return a >= b - self.tol

    def capacities(self, graph: Graph) -> CapacityAssignment:
        if self.mode == MODE_CARDINALITY:
            return CapacityAssignment.unit(graph)
        return CapacityAssignment.from_weights(graph, self.state_space)

    def record_flip(self, value: float):
        if self.flip_recorder is not None:
            self.flip_recorder.append(value)


@dataclass
class SearchStats:
    """Counters filled in during a decomposition search."""

    partitions_tested: int = 0
    cuts_computed: int = 0


def check_decomposition(graph: Graph, d: Decomposition) -> bool:
    """Structural invariants: X, A, B, C partition V, A and B are
    nonempty, and no edge joins two of A, B, C."""
    parts = (d.x, d.a, d.b, d.c)
    if sum(len(p) for p in parts) != len(d.x | d.a | d.b | d.c):
        return False
    if (d.x | d.a | d.b | d.c) != graph.vertices:
        return False
    if not d.a or not d.b:
        return False
    label = {}
    for name, part in (("a", d.a), ("b", d.b), ("c", d.c)):
        for v in part:
            label[v] = name
    for u, v in graph.edges():
        lu, lv = label.get(u), label.get(v)
        if lu is not None and lv is not None and lu != lv:
            return False
    return True


def is_w_decomposition(
    graph: Graph,
    d: Decomposition,
    w: Iterable[int],
    budget: DecompBudget,
) -> bool:
    """The size tests of the W-decomposition definition (pure predicate;
    the structural invariants are assumed, see check_decomposition)."""
    w = frozenset(w)
    t = budget.k_or_m
    a = budget.alpha
    if not budget.ge(budget.measure(graph.vertices), (2 * a + 1) * t):
        return False
    if not budget.lt(budget.measure(w), (a + 1) * t):
        return False
    if not budget.le(budget.measure(d.x), a * t):
        return False
    for part in (d.a, d.b, d.c):
        if not budget.lt(budget.measure((w & part) | d.x), (a + 1) * t):
            return False
    return True


def _candidate_flip(graph: Graph, d: Decomposition, w: frozenset[int], budget: DecompBudget):
    """Record the smallest threshold at which this tested candidate
    would have been a W-decomposition, if one exists."""
    a = budget.alpha
    mv = budget.measure(graph.vertices)
    mx = budget.measure(d.x)
    strict = [budget.measure(w)] + [budget.measure((w & p) | d.x) for p in (d.a, d.b, d.c)]
    if budget.mode == MODE_CARDINALITY:
        t_need = max([math.ceil(mx / a)] + [math.floor(s / (a + 1)) + 1 for s in strict])
        if t_need > budget.k_or_m and mv >= (2 * a + 1) * t_need:
            budget.record_flip(float(t_need))
    else:
        t_need = max([mx / a] + [s / (a + 1) for s in strict])
        if t_need > budget.k_or_m + TOL and budget.ge(mv, (2 * a + 1) * t_need):
            budget.record_flip(t_need)


def _assemble(graph: Graph, x: frozenset[int], w_a: frozenset[int], w_b: frozenset[int]):
    """Parts from a cut: A takes the components meeting w_a, B those
    meeting w_b, C everything else."""
    comps = connected_components(induced_subgraph(graph, graph.vertices - x))
    a_part: set[int] = set()
    b_part: set[int] = set()
    rest: set[int] = set()
    for comp in comps:
        if comp & w_a:
            if comp & w_b:
                raise InvariantError("cut left the two terminal groups connected")
            a_part |= comp
        elif comp & w_b:
            b_part |= comp
        else:
            rest |= comp
    return frozenset(a_part), frozenset(b_part), frozenset(rest)


def _accept(
    graph: Graph,
    d: Decomposition,
    w: frozenset[int],
    budget: DecompBudget,
) -> bool:
    """Final gate for every constructed candidate; failures feed the
    flip recorder for threshold escalation."""
    if not check_decomposition(graph, d):
        return False
    if is_w_decomposition(graph, d, w, budget):
        return True
    _candidate_flip(graph, d, w, budget)
    return False


def procedure_one(
    graph: Graph,
    p: WPartition,
    budget: DecompBudget,
    stats: SearchStats | None = None,
) -> Decomposition | None:
    """The small-largest-group case: split the three groups of W by an
    approximate 3-way vertex cut of the graph without W_X.

    With the cut Y, the candidate is X = Y u W_X, A the components
    meeting W_A, B those meeting W_B, C the rest. The stated acceptance
    tests (measure(X) < (a+1)t - measure(W_A) and measure(X) <= a*t)
    are subsumed by the full predicate, which is what gets checked.
    When W_C is empty it is replaced by each single vertex outside the
    other groups in turn and the cheapest accepted candidate wins.
    """
    w = p.w
    if not p.w_a or not p.w_b:
        return None
    work = induced_subgraph(graph, graph.vertices - p.w_x)
    base_cap = budget.capacities(work).with_infinite(p.w_a | p.w_b | p.w_c)
    if p.w_c:
        third_choices: list[frozenset[int]] = [p.w_c]
    else:
        third_choices = [
            frozenset({c})
            for c in sorted(work.vertices - p.w_a - p.w_b)
        ]
    best: tuple[float, int, Decomposition] | None = None
    for rank, third in enumerate(third_choices):
        cap = base_cap.with_infinite(third)
        if stats is not None:
            stats.cuts_computed += 3
        cut = three_way_cut_2approx(work, p.w_a, p.w_b, third, cap)
        if cut is None:
            continue
        x = cut.cut | p.w_x
        a_part, b_part, rest = _assemble(graph, x, p.w_a, p.w_b)
        d = Decomposition(x, a_part, b_part, rest)
        if _accept(graph, d, w, budget):
            key = budget.measure(x)
            if best is None or key < best[0] - budget.tol:
                best = (key, rank, d)
    return best[2] if best else None


def procedure_two(
    graph: Graph,
    p: WPartition,
    budget: DecompBudget,
    stats: SearchStats | None = None,
) -> Decomposition | None:
    """The large-largest-group case: a minimum vertex cut between W_A
    and W_B u W_C in the graph without W_X.

    The candidate is X = Y u W_X, A the components meeting W_A,
    B = V - (A u X), C empty; B must be nonempty. When W_B u W_C is
    empty (W concentrated in one group), the sink is replaced by each
    single vertex outside W_A in turn, cheapest accepted wins. No
    vertex needs infinite capacity here: terminals bypass their own
    capacity arc, so they can never appear in the cut.
    """
    w = p.w
    if not p.w_a:
        return None
    work = induced_subgraph(graph, graph.vertices - p.w_x)
    solver = StCutSolver(work, budget.capacities(work))
    sink_group = p.w_b | p.w_c
    if sink_group:
        sink_choices: list[frozenset[int]] = [sink_group]
    else:
        sink_choices = [frozenset({c}) for c in sorted(work.vertices - p.w_a)]
    best: tuple[float, int, Decomposition] | None = None
    for rank, sink in enumerate(sink_choices):
        if stats is not None:
            stats.cuts_computed += 1
        cut = solver.min_cut(p.w_a, sink)
        if cut is None:
            continue
        x = cut.cut | p.w_x
        a_part, _, _ = _assemble(graph, x, p.w_a, sink)
        b_part = frozenset(graph.vertices - a_part - x)
        if not b_part:
            continue
        d = Decomposition(x, a_part, b_part, frozenset())
        if _accept(graph, d, w, budget):
            key = budget.measure(x)
            if best is None or key < best[0] - budget.tol:
                best = (key, rank, d)
    return best[2] if best else None


def _pair_route(
    graph: Graph,
    w_x: frozenset[int],
    protected: frozenset[int],
    w: frozenset[int],
    budget: DecompBudget,
    stats: SearchStats | None,
) -> Decomposition | None:
    """Minimum cuts over all non-adjacent vertex pairs, cheapest first.

    Used both as the fast path (w_x empty, all of W protected by
    infinite capacity) and for the split that sends all of W into
    X (w_x = W, nothing protected). Each candidate cut X yields parts
    A = component of s, B = component of t, C = the rest, and the
    first candidate passing the predicate wins.
    """
    work = induced_subgraph(graph, graph.vertices - w_x)
    cap = budget.capacities(work).with_infinite(protected)
    solver = StCutSolver(work, cap)
    sources = sorted(work.vertices - protected)
    found: list[tuple[float, int, int, frozenset[int]]] = []
    for i, s in enumerate(sources):
        for t in sources[i + 1:]:
            if work.has_edge(s, t):
                continue
            if stats is not None:
                stats.cuts_computed += 1
            cut = solver.min_cut({s}, {t})
            if cut is not None:
                found.append((cut.weight, s, t, cut.cut))
    found.sort(key=lambda item: (item[0], item[1], item[2]))
    for _, s, t, y in found:
        x = y | w_x
        comps = connected_components(induced_subgraph(graph, graph.vertices - x))
        a_part = b_part = None
        rest: set[int] = set()
        for comp in comps:
            if s in comp:
                a_part = comp
            elif t in comp:
                b_part = comp
            else:
                rest |= comp
        if a_part is None or b_part is None:
            raise InvariantError("verified cut lost a terminal component")
        d = Decomposition(x, a_part, b_part, frozenset(rest))
        if _accept(graph, d, w, budget):
            return d
    return None


def _rest_splits(rest_elems: list[int], ma: float, budget: DecompBudget):
    """Splits of the non-X, non-A remainder into the two lighter groups
    (both nonempty), with measures no heavier than the largest group
    and sorted between themselves. Exact mirror pairs appear once."""
    nr = len(rest_elems)
    full = (1 << nr) - 1
    sub = full
    while True:
        b_mask = sub
        c_mask = full ^ sub
        if b_mask and c_mask:
            w_b = frozenset(rest_elems[i] for i in range(nr) if (b_mask >> i) & 1)
            w_c = frozenset(rest_elems[i] for i in range(nr) if (c_mask >> i) & 1)
            mb = budget.measure(w_b)
            mc = budget.measure(w_c)
            if budget.le(mb, ma) and budget.le(mc, mb):
                if not (mb == mc and b_mask < c_mask):
                    yield w_b, w_c
        if sub == 0:
            break
        sub = (sub - 1) & full


# Mask tables in the split search grow as 2^|W|; beyond this the search
# would not finish in reasonable time anyway, so fail loudly instead.
_MAX_W_SEARCH = 22

# Cut searches abandon a candidate once its flow exceeds what the size
# tests could accept at this slack factor times the threshold. Anything
# heavier can neither pass now nor supply a useful flip value (the
# escalation driver never jumps past the slack in one step).
_FLIP_SLACK = 1.2


def _two_group_build(
    graph: Graph,
    x: frozenset[int],
    w_a: frozenset[int],
    sink: frozenset[int],
) -> Decomposition | None:
    """Candidate from a cut: A takes the components meeting w_a, B is
    everything else, C empty. None when B would come out empty."""
    a_part, _, _ = _assemble(graph, x, w_a, sink)
    b_part = frozenset(graph.vertices - a_part - x)
    if not b_part:
        return None
    return Decomposition(x, a_part, b_part, frozenset())


class _FlipProbe:
    """Tracks the best potential flip value seen during a sweep scan.

    Entries whose flow completed but whose candidate cannot pass at the
    current threshold still tell at which threshold they would pass;
    the cheapest such candidate per search is rebuilt structurally and
    fed to the budget's flip recorder. Scalar screening keeps the
    rebuilds rare.
    """

    def __init__(self, graph: Graph, w: frozenset[int], budget: DecompBudget, mv: float, mw: float):
        self.graph = graph
        self.w = w
        self.budget = budget
        self.mv = mv
        self.mw = mw
        self.active = budget.flip_recorder is not None
        self.best = math.inf

    def threshold_needed(self, mx: float, strict: list[float]) -> float:
        a = self.budget.alpha
        if self.budget.mode == MODE_CARDINALITY:
            return float(
                max([math.ceil(mx / a)] + [math.floor(s / (a + 1)) + 1 for s in strict])
            )
        return max([mx / a] + [s / (a + 1) for s in strict])

    def offer(self, mx: float, strict: list[float], build) -> None:
        """`build` produces the candidate decomposition on demand."""
        if not self.active:
            return
        t_need = self.threshold_needed(mx, [self.mw] + strict)
        if t_need >= self.best or t_need <= self.budget.k_or_m + self.budget.tol:
            return
        if not self.budget.ge(self.mv, (2 * self.budget.alpha + 1) * t_need):
            return
        self.best = t_need
        d = build()
        if d is not None and check_decomposition(self.graph, d):
            _candidate_flip(self.graph, d, self.w, self.budget)


def _run_sweep(
    net: FlowNetwork | None,
    w_sorted: list[int],
    w_x: frozenset[int],
    src_m: list[int],
    snk_m: list[int],
    prot_m: list[int] | None,
    extra: list[int],
    limits: list[float],
    stats: SearchStats | None,
):
    """Feed one batch of cut entries through the sweep kernel."""
    if net is None or not src_m:
        return np.empty(0, np.float64), np.zeros((0, 0), np.bool_)
    live = [(bit, net.idx[u]) for bit, u in enumerate(w_sorted) if u not in w_x]
    w_bit = np.array([b for b, _ in live], np.int64)
    w_workidx = np.array([i for _, i in live], np.int64)
    if stats is not None:
        stats.cuts_computed += len(src_m)
    prot = (
        np.zeros(len(src_m), np.int64)
        if prot_m is None
        else np.array(prot_m, np.int64)
    )
    return kernels.cut_sweep(
        net.arc_to,
        net.arc_cap0,
        net.csr_off,
        net.csr_arc,
        net.nv,
        net.vert_arc,
        net.src_arc,
        net.snk_arc,
        w_workidx,
        w_bit,
        np.array(src_m, np.int64),
        np.array(snk_m, np.int64),
        prot,
        np.array(extra, np.int64),
        np.array(limits, np.float64),
    )


def _checked_x(
    budget: DecompBudget,
    cut_set: frozenset[int],
    flow: float,
    w_x: frozenset[int],
    terminals: frozenset[int],
) -> frozenset[int]:
    """Sanity checks on a sweep-extracted cut, then X = cut u w_x."""
    if cut_set & terminals:
        raise InvariantError("cut contains a terminal")
    if abs(budget.measure(cut_set) - flow) > 1e-6:
        raise InvariantError(
            f"cut weight {budget.measure(cut_set)} disagrees with flow value {flow}"
        )
    return cut_set | w_x


def _scan_x_group(
    graph: Graph,
    w: frozenset[int],
    w_sorted: list[int],
    table,
    adja,
    x_mask: int,
    a_masks: list[int],
    budget: DecompBudget,
    probe: _FlipProbe,
    stats: SearchStats | None,
) -> Decomposition | None:
    """Process every surviving split that sends exactly `x_mask` of W
    into X: batch the minimum-cut candidates through the sweep kernel,
    then walk them in emission order and return the first acceptance.
    Splits that need the 3-way cut fallback are batched the same way
    afterwards."""
    t = budget.k_or_m
    alpha = budget.alpha
    tol = budget.tol
    full = (1 << len(w_sorted)) - 1
    nw = len(w_sorted)

    def decode(mask: int) -> frozenset[int]:
        return frozenset(w_sorted[i] for i in range(nw) if (mask >> i) & 1)

    w_x = decode(x_mask)
    mx = float(table[x_mask])
    work = induced_subgraph(graph, graph.vertices - w_x)
    net: FlowNetwork | None = None

    def limit_pair(heavy: float) -> tuple[float, float]:
        exact = min(alpha * t, (alpha + 1) * t - heavy) - mx + tol
        lax = min(alpha * t, (alpha + 1) * t - heavy) * _FLIP_SLACK - mx + tol
        return exact, lax

    # entry arrays for the sweep; combos carry slices into them
    src_m: list[int] = []
    snk_m: list[int] = []
    extra: list[int] = []
    limits: list[float] = []
    combos: list[tuple] = []  # (kind, a_mask, rest_mask, lo, hi, lim_exact)

    for a_mask in a_masks:
        if stats is not None:
            stats.partitions_tested += 1
        rest_mask = full ^ x_mask ^ a_mask
        if a_mask == 0:
            combos.append(("pairs", 0, 0, 0, 0, 0.0))
            continue
        if net is None:
            net = FlowNetwork(work, budget.capacities(work))
        ma = float(table[a_mask])
        if rest_mask == 0:
            lim_exact, lim_flip = limit_pair(ma)
            if lim_flip < 0.0:
                continue
            w_a = decode(a_mask)
            adj_a: set[int] = set()
            for u in w_a:
                adj_a |= work.neighbors(u)
            lo = len(src_m)
            for c in sorted(work.vertices - w_a):
                if c in adj_a:
                    continue
                src_m.append(a_mask)
                snk_m.append(0)
                extra.append(net.idx[c])
                limits.append(lim_flip)
            combos.append(("sink", a_mask, 0, lo, len(src_m), lim_exact))
        else:
            mr = float(table[rest_mask])
            lim_exact, lim_flip = limit_pair(max(ma, mr))
            lo = len(src_m)
            if lim_flip >= 0.0:
                src_m.append(a_mask)
                snk_m.append(rest_mask)
                extra.append(-1)
                limits.append(lim_flip)
            combos.append(("two", a_mask, rest_mask, lo, len(src_m), lim_exact))

    flows, cuts = _run_sweep(net, w_sorted, w_x, src_m, snk_m, None, extra, limits, stats)

    split_combos: list[tuple[int, int]] = []  # (a_mask, rest_mask)
    for kind, a_mask, rest_mask, lo, hi, lim_exact in combos:
        if kind == "pairs":
            # the whole of W travels into X
            d = _pair_route(graph, w_x, frozenset(), w, budget, stats)
            if d is not None:
                return d
            continue
        w_a = decode(a_mask)
        ma = float(table[a_mask])
        if kind == "sink":
            # aborted entries carry flows past their limit, so the sorted
            # walk sees every completed candidate first, cheapest X first
            order = sorted(range(lo, hi), key=lambda e: (flows[e], e))
            for e in order:
                f = float(flows[e])
                if f > limits[e] or f == math.inf:
                    break
                sink = frozenset({net.verts[extra[e]]})
                x = _checked_x(budget, net.decode_row(cuts[e]), f, w_x, w_a | sink)
                if f <= lim_exact:
                    d = _two_group_build(graph, x, w_a, sink)
                    if d is not None and _accept(graph, d, w, budget):
                        return d
                else:
                    probe.offer(
                        mx + f,
                        [ma + mx + f, mx + f, mx + f],
                        lambda x=x, w_a=w_a, s=sink: _two_group_build(graph, x, w_a, s),
                    )
        else:
            rest = decode(rest_mask)
            mr = float(table[rest_mask])
            for e in range(lo, hi):
                f = float(flows[e])
                if f > limits[e] or f == math.inf:
                    continue
                x = _checked_x(budget, net.decode_row(cuts[e]), f, w_x, w_a | rest)
                if f <= lim_exact:
                    d = _two_group_build(graph, x, w_a, rest)
                    if d is not None and _accept(graph, d, w, budget):
                        return d
                else:
                    probe.offer(
                        mx + f,
                        [ma + mx + f, mr + mx + f, mx + f],
                        lambda x=x, w_a=w_a, s=rest: _two_group_build(graph, x, w_a, s),
                    )
            if (
                rest_mask & (rest_mask - 1)
                and budget.lt(ma, t)
                and limit_pair(ma)[1] >= 0.0
            ):
                split_combos.append((a_mask, rest_mask))

    if not split_combos:
        return None
    return _scan_splits(
        graph, w, w_sorted, table, adja, w_x, mx, work, net, split_combos, budget, probe, stats
    )


def _scan_splits(
    graph: Graph,
    w: frozenset[int],
    w_sorted: list[int],
    table,
    adja,
    w_x: frozenset[int],
    mx: float,
    work: Graph,
    net: FlowNetwork,
    split_combos: list[tuple[int, int]],
    budget: DecompBudget,
    probe: _FlipProbe,
    stats: SearchStats | None,
) -> Decomposition | None:
    """3-way cut fallback for the splits whose largest group stayed
    below the threshold: enumerate the two lighter groups, batch the
    three pairwise cuts per split, and union the two cheapest exactly
    like the standalone 3-way routine (including its tie fallback)."""
    t = budget.k_or_m
    alpha = budget.alpha
    tol = budget.tol
    nw = len(w_sorted)

    def decode(mask: int) -> frozenset[int]:
        return frozenset(w_sorted[i] for i in range(nw) if (mask >> i) & 1)

    rest_arr = np.array([r for _, r in split_combos], np.int64)
    ma_arr = np.array([float(table[a]) for a, _ in split_combos], np.float64)
    rows, bs = kernels.split_enum(table, adja, rest_arr, ma_arr, tol)
    n_splits = rows.shape[0]
    if n_splits == 0:
        return None
    if stats is not None:
        stats.partitions_tested += n_splits

    src_m: list[int] = []
    snk_m: list[int] = []
    prot_m: list[int] = []
    extra: list[int] = []
    limits: list[float] = []
    for s in range(n_splits):
        a_mask, rest_mask = split_combos[rows[s]]
        b_mask = int(bs[s])
        c_mask = rest_mask ^ b_mask
        lim = (
            min(alpha * t, (alpha + 1) * t - float(table[a_mask])) * _FLIP_SLACK
            - mx
            + tol
        )
        for sm, tm, pm in (
            (a_mask, b_mask, c_mask),
            (a_mask, c_mask, b_mask),
            (b_mask, c_mask, a_mask),
        ):
            src_m.append(sm)
            snk_m.append(tm)
            prot_m.append(pm)
            extra.append(-1)
            limits.append(lim)
    flows, cuts = _run_sweep(net, w_sorted, w_x, src_m, snk_m, prot_m, extra, limits, stats)

    wvec = np.array([net.cap.of(v) for v in net.verts], np.float64)
    dense_solver: StCutSolver | None = None
    for s in range(n_splits):
        e = 3 * s
        if any(flows[e + i] > limits[e + i] or flows[e + i] == np.inf for i in range(3)):
            continue
        ranked = sorted(range(3), key=lambda i: (flows[e + i], i))
        union_row = cuts[e + ranked[0]] | cuts[e + ranked[1]]
        mu = float(wvec[union_row].sum())
        m_x = mx + mu
        a_mask, rest_mask = split_combos[rows[s]]
        b_mask = int(bs[s])
        c_mask = rest_mask ^ b_mask
        ma = float(table[a_mask])
        mb = float(table[b_mask])
        mc = float(table[c_mask])
        strict = [ma + m_x, mb + m_x, mc + m_x]
        passing = budget.le(m_x, alpha * t) and all(
            budget.lt(s_, (alpha + 1) * t) for s_ in strict
        )
        w_a = decode(a_mask)
        w_b = decode(b_mask)
        w_c = decode(c_mask)

        def build(union_row=union_row, w_a=w_a, w_b=w_b, w_c=w_c):
            union_set = net.decode_row(union_row)
            if not separates(work, union_set, [w_a, w_b, w_c]):
                return None
            a_part, b_part, c_part = _assemble(graph, union_set | w_x, w_a, w_b)
            return Decomposition(union_set | w_x, a_part, b_part, c_part)

        if passing:
            d = build()
            if d is None:
                # two-cut union failed in a tie layout; the standalone
                # routine falls back to isolating cuts, reuse it
                if dense_solver is None:
                    dense_solver = StCutSolver(work, net.cap)
                cut = three_way_cut_2approx(
                    work, w_a, w_b, w_c, net.cap,
                    solver=dense_solver, limit=limits[e],
                )
                if cut is not None:
                    a_part, b_part, c_part = _assemble(graph, cut.cut | w_x, w_a, w_b)
                    d = Decomposition(cut.cut | w_x, a_part, b_part, c_part)
            if d is not None and _accept(graph, d, w, budget):
                return d
        else:
            probe.offer(m_x, strict, build)
    return None


def find_w_decomposition(
    graph: Graph,
    w: Iterable[int],
    budget: DecompBudget,
    stats: SearchStats | None = None,
) -> Decomposition | None:
    """Find a W-decomposition wrt the budget, or None.

    A fast path first tries minimum cuts that avoid W entirely (for
    |W| <= 1 this is exactly the any-minimal-cut-avoiding-W argument);
    when it fails, the split enumeration runs over every (W_A, W_X)
    consistent with a witness decomposition (see split_candidates).
    For each one the minimum-cut procedure runs with the remainder of W
    as the sink side; when the largest group is below the threshold the
    3-way cut procedure additionally runs over the sorted two-group
    splits of the remainder. A largest group that carries all of W
    falls back to single-vertex sinks, and the split sending all of W
    into X falls back to minimum cuts over all vertex pairs. None is
    only returned after this enumeration is exhausted, which makes
    "cliquewidth > threshold" a sound conclusion.

    The cut network is rebuilt only when the X-bound group changes, and
    every cut search carries a flow limit past which no candidate could
    be accepted (see _FLIP_SLACK); splits whose groups are joined by an
    edge are skipped outright since no finite cut separates them.
    """
    w = frozenset(w)
    t = budget.k_or_m
    a = budget.alpha
    if not w <= graph.vertices:
        raise DomainError(f"W vertices {sorted(w - graph.vertices)} not in graph")
    if not budget.lt(budget.measure(w), (a + 1) * t):
        raise DomainError("measure(W) must stay below (alpha+1) * threshold")
    if not budget.ge(budget.measure(graph.vertices), (2 * a + 1) * t):
        raise DomainError("graph too small: measure(V) below (2*alpha+1) * threshold")

    if stats is not None:
        stats.partitions_tested += 1
    d = _pair_route(graph, frozenset(), w, w, budget, stats)
    if d is not None:
        return d
    if not w:
        # every cut yielding a decomposition with empty W is a pair cut
        return None

    w_sorted = sorted(w)
    if len(w_sorted) > _MAX_W_SEARCH:
        raise BudgetExceededError(
            f"monitored set of {len(w_sorted)} vertices is too large to search"
        )
    if budget.mode == MODE_CARDINALITY:
        wts = np.ones(len(w_sorted), dtype=np.float64)
    else:
        wts = np.array([budget.state_space.weight(v) for v in w_sorted], dtype=np.float64)
    pos = {u: i for i, u in enumerate(w_sorted)}
    adj_bits = np.zeros(len(w_sorted), np.int64)
    for i, u in enumerate(w_sorted):
        for v in graph.neighbors(u) & w:
            adj_bits[i] |= 1 << pos[v]
    table = kernels.subset_sums(wts)
    adja = kernels.mask_union_table(adj_bits)
    xs, as_ = kernels.split_candidates(table, adja, t, a, budget.tol)

    probe = _FlipProbe(
        graph, w, budget, budget.measure(graph.vertices), budget.measure(w)
    )
    xs_list = xs.tolist()
    as_list = as_.tolist()
    n = len(xs_list)
    i = 0
    while i < n:
        x_mask = xs_list[i]
        j = i
        while j < n and xs_list[j] == x_mask:
            j += 1
        d = _scan_x_group(
            graph, w, w_sorted, table, adja, x_mask, as_list[i:j], budget, probe, stats
        )
        if d is not None:
            if not check_decomposition(graph, d) or not is_w_decomposition(graph, d, w, budget):
                raise InvariantError("procedure returned an invalid decomposition")
            return d
        i = j
    return None
