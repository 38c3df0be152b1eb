"""Call-graph construction, cycle detection, and bottom-up time propagation.

Sample counts are credited to symbols, arcs are aggregated per symbol pair,
strongly connected components are collapsed, and each function's total is
pushed to its callers proportionally to arc call counts. All arithmetic is
exact (Fraction), so total time is conserved to the last sample.
"""

from __future__ import annotations

import bisect
import heapq
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CycleInCondensation, NoSymbols
from .model import Histogram, RawProfile, Symbol, SymbolTable, bin_range

ZERO = Fraction(0)


@dataclass
class Node:
    """One function in the graph with its direct and propagated times."""

    symbol: Symbol
    self_samples: Fraction = ZERO
    self_time: Fraction = ZERO  # seconds credited by the histogram
    calls_in: int = 0  # total recorded calls into this function
    cycle_id: int | None = None
    prop_self: Fraction = ZERO
    prop_child: Fraction = ZERO
    spontaneous: bool = False

    @property
    def name(self) -> str:
        return self.symbol.name

    @property
    def total(self) -> Fraction:
        return self.prop_self + self.prop_child


@dataclass
class ArcEdge:
    """Aggregated caller->callee edge.

    self_sample_groups, when present, are the callee self-sample groups
    recorded on this arc (largest first across all merged call sites).
    """

    caller: Node
    callee: Node
    count: int
    self_sample_groups: tuple[int, ...] | None = None
    attributed_time: Fraction = ZERO
    cycle_internal: bool = False


@dataclass
class Component:
    """A condensation unit: a single node, or a cycle treated as one node."""

    nodes: tuple[Node, ...]
    cycle_id: int | None = None
    external_calls_in: int = 0
    prop_self: Fraction = ZERO
    prop_child: Fraction = ZERO

    @property
    def total(self) -> Fraction:
        return self.prop_self + self.prop_child

    @property
    def min_name(self) -> str:
        return min(n.name for n in self.nodes)


@dataclass
class CallGraph:
    nodes: list[Node]
    edges: list[ArcEdge]
    quantum: Fraction
    unattributed_time: Fraction = ZERO
    dropped_arcs: int = 0
    cycles: list[tuple[Node, ...]] = field(default_factory=list)
    components: list[Component] = field(default_factory=list)  # leaves first
    spontaneous: list[Node] = field(default_factory=list)
    _by_name: dict[str, Node] = field(default_factory=dict)
    _out: dict[str, list[ArcEdge]] = field(default_factory=dict)
    _in: dict[str, list[ArcEdge]] = field(default_factory=dict)
    _component_of: dict[str, Component] = field(default_factory=dict)

    def node(self, name: str) -> Node | None:
        return self._by_name.get(name)

    def out_edges(self, node: Node) -> list[ArcEdge]:
        return self._out.get(node.name, [])

    def in_edges(self, node: Node) -> list[ArcEdge]:
        return self._in.get(node.name, [])

    def component_of(self, node: Node) -> Component:
        return self._component_of[node.name]


def assign_samples(
    hist: Histogram, table: SymbolTable
) -> tuple[dict[Symbol, Fraction], Fraction]:
    """Credit each bin's time to symbols by address overlap.

    A bin straddling several symbols is split proportionally to the overlap
    length. Returns (seconds per symbol, unattributed seconds); the two
    always sum to the histogram's total time exactly.
    """
    credit: dict[Symbol, Fraction] = {}
    unattributed = ZERO
    width = hist.bin_width
    quantum = hist.quantum
    symbols = table.symbols
    lows = [s.low for s in symbols]
    for i, count in enumerate(hist.bins):
        if count == 0:
            continue
        lo, hi = bin_range(hist, i)
        bin_time = count * quantum
        credited = ZERO
        # first symbol that could overlap: the one covering lo, or the next
        j = max(bisect.bisect_right(lows, lo) - 1, 0)
        while j < len(symbols):
            sym = symbols[j]
            j += 1
            if sym.high <= lo:
                continue
            if sym.low >= hi:
                break
            overlap = min(sym.high, hi) - max(sym.low, lo)
            share = bin_time * Fraction(overlap, width)
            credit[sym] = credit.get(sym, ZERO) + share
            credited += share
        unattributed += bin_time - credited
    return credit, unattributed


def build_call_graph(profile: RawProfile, table: SymbolTable) -> CallGraph:
    """Resolve addresses to symbols and aggregate arcs per symbol pair.

    Arcs with an endpoint outside every symbol are dropped and counted in
    dropped_arcs. The result is deterministic regardless of input arc order.
    """
    if len(table) == 0:
        raise NoSymbols("cannot build a call graph without symbols")

    nodes = {s.name: Node(symbol=s) for s in table}
    quantum = profile.quantum

    unattributed = ZERO
    for hist in profile.histograms:
        credit, missed = assign_samples(hist, table)
        unattributed += missed
        for sym, seconds in credit.items():
            node = nodes[sym.name]
            node.self_time += seconds
            node.self_samples += seconds / quantum

    # Aggregate parallel raw arcs (distinct call sites) between one symbol
    # pair; sample groups are combined and kept largest-first.
    counts: dict[tuple[str, str], int] = {}
    groups: dict[tuple[str, str], list[int]] = {}
    grouped_flags: dict[tuple[str, str], bool] = {}
    dropped = 0
    for arc in profile.arcs:
        caller = table.lookup(arc.from_pc)
        callee = table.lookup(arc.self_pc)
        if caller is None or callee is None:
            dropped += 1
            continue
        key = (caller.name, callee.name)
        counts[key] = counts.get(key, 0) + arc.count
        if arc.self_samples is not None:
            groups.setdefault(key, []).extend(arc.self_samples)
            grouped_flags[key] = grouped_flags.get(key, True)
        else:
            grouped_flags[key] = False

    edges = []
    for key in sorted(counts):
        caller_name, callee_name = key
        sample_groups = None
        if grouped_flags[key] and key in groups:
            sample_groups = tuple(sorted(groups[key], reverse=True))
        edge = ArcEdge(
            caller=nodes[caller_name],
            callee=nodes[callee_name],
            count=counts[key],
            self_sample_groups=sample_groups,
        )
        edges.append(edge)
        nodes[callee_name].calls_in += edge.count

    graph = CallGraph(
        nodes=[nodes[s.name] for s in sorted(table, key=lambda s: s.index)],
        edges=edges,
        quantum=quantum,
        unattributed_time=unattributed,
        dropped_arcs=dropped,
    )
    graph._by_name = nodes
    for e in edges:
        graph._out.setdefault(e.caller.name, []).append(e)
        graph._in.setdefault(e.callee.name, []).append(e)
    return graph


def find_cycles(graph: CallGraph) -> CallGraph:
    """Tarjan SCCs; components of size > 1 or with a self-loop are cycles."""
    order = [n.name for n in graph.nodes]
    succ = {
        name: sorted({e.callee.name for e in graph._out.get(name, [])})
        for name in order
    }

    index_of: dict[str, int] = {}
    lowlink: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    sccs: list[list[str]] = []
    counter = 0

    for root in order:
        if root in index_of:
            continue
        # iterative Tarjan: (node, iterator position into succ[node])
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index_of[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            advanced = False
            children = succ[v]
            while pi < len(children):
                w = children[pi]
                pi += 1
                if w not in index_of:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index_of[w])
            if advanced:
                continue
            work.pop()
            if lowlink[v] == index_of[v]:
                scc = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    scc.append(w)
                    if w == v:
                        break
                sccs.append(scc)
            if work:
                parent, _ = work[-1]
                lowlink[parent] = min(lowlink[parent], lowlink[v])

    cycles = []
    for scc in sccs:
        is_cycle = len(scc) > 1 or scc[0] in succ[scc[0]]
        if is_cycle:
            cycles.append(tuple(sorted(scc)))
    cycles.sort()  # number cycles by ascending smallest member name

    for node in graph.nodes:
        node.cycle_id = None
    graph.cycles = []
    for cid, members in enumerate(cycles, start=1):
        member_nodes = tuple(graph._by_name[m] for m in members)
        for n in member_nodes:
            n.cycle_id = cid
        graph.cycles.append(member_nodes)
    return graph


def topo_order(graph: CallGraph) -> CallGraph:
    """Order condensation components leaves first.

    For every cross-component edge the callee's component comes before the
    caller's; ties break on each component's smallest symbol name.
    """
    comp_of_name: dict[str, int] = {}
    comps: list[list[str]] = []
    cycle_ids: list[int | None] = []
    for cid, members in enumerate(graph.cycles, start=1):
        idx = len(comps)
        comps.append([n.name for n in members])
        cycle_ids.append(cid)
        for n in members:
            comp_of_name[n.name] = idx
    for node in graph.nodes:
        if node.name not in comp_of_name:
            comp_of_name[node.name] = len(comps)
            comps.append([node.name])
            cycle_ids.append(None)

    # Kahn over reversed call edges: a component is ready once every
    # component it calls has been emitted.
    pending: list[set[int]] = [set() for _ in comps]  # unfinished callees
    callers: list[set[int]] = [set() for _ in comps]
    for e in graph.edges:
        cu = comp_of_name[e.caller.name]
        cv = comp_of_name[e.callee.name]
        if cu != cv:
            pending[cu].add(cv)
            callers[cv].add(cu)

    min_names = [min(members) for members in comps]
    ready = [(min_names[i], i) for i in range(len(comps)) if not pending[i]]
    heapq.heapify(ready)
    emitted: list[int] = []
    done: set[int] = set()
    while ready:
        _, i = heapq.heappop(ready)
        emitted.append(i)
        done.add(i)
        for caller in callers[i]:
            pending[caller].discard(i)
            if not pending[caller] and caller not in done:
                heapq.heappush(ready, (min_names[caller], caller))

    if len(emitted) != len(comps):
        raise CycleInCondensation(
            f"only {len(emitted)} of {len(comps)} components ordered"
        )

    graph.components = []
    graph._component_of = {}
    for i in emitted:
        comp = Component(
            nodes=tuple(sorted((graph._by_name[m] for m in comps[i]),
                               key=lambda n: n.name)),
            cycle_id=cycle_ids[i],
        )
        graph.components.append(comp)
        for n in comp.nodes:
            graph._component_of[n.name] = comp
    return graph


def propagate_times(graph: CallGraph) -> CallGraph:
    """Push totals bottom-up through the condensation.

    total(c) = prop_self(c) + prop_child(c); a caller receives
    total(callee_component) * count / calls_into_component. Cycle members
    pool their self time and intra-cycle arcs carry no attribution.
    """
    for comp in graph.components:
        members = {n.name for n in comp.nodes}
        comp.external_calls_in = sum(
            e.count
            for n in comp.nodes
            for e in graph.in_edges(n)
            if e.caller.name not in members
        )
        comp.prop_self = sum((n.self_time for n in comp.nodes), ZERO)
        for n in comp.nodes:
            n.prop_self = n.self_time
            n.prop_child = ZERO

        child_total = ZERO
        for n in comp.nodes:
            for e in graph.out_edges(n):
                if e.callee.name in members:
                    e.cycle_internal = True
                    e.attributed_time = ZERO
                    continue
                callee_comp = graph.component_of(e.callee)
                share = (
                    callee_comp.total
                    * Fraction(e.count, callee_comp.external_calls_in)
                )
                e.attributed_time = share
                n.prop_child += share
                child_total += share
        comp.prop_child = child_total

    graph.spontaneous = [
        n for n in graph.nodes if n.calls_in == 0 and n.total > 0
    ]
    return graph


def total_time(graph: CallGraph) -> Fraction:
    """Whole-program seconds: every function's self time plus samples that
    landed outside all symbols."""
    return sum((n.prop_self for n in graph.nodes), ZERO) + graph.unattributed_time


def analyze(
    profile: RawProfile,
    table: SymbolTable,
    *,
    self_samples_override: dict[str, Fraction] | None = None,
    unattributed_override: Fraction | None = None,
) -> CallGraph:
    """Full pipeline: build, find cycles, order, propagate.

    self_samples_override substitutes per-function self samples (used when
    re-evaluating an edited profile); the histogram is ignored for those
    functions' self time but arc structure is unchanged.
    """
    graph = build_call_graph(profile, table)
    if self_samples_override is not None:
        for node in graph.nodes:
            samples = self_samples_override.get(node.name, ZERO)
            node.self_samples = Fraction(samples)
            node.self_time = samples * graph.quantum
    if unattributed_override is not None:
        graph.unattributed_time = unattributed_override
    find_cycles(graph)
    topo_order(graph)
    propagate_times(graph)
    return graph
