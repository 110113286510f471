"""
Acyclic preparation of a citation graph and SPC main-path extraction.

Preparation runs in a fixed order: keep the largest weak component, shrink
every strong component to one vertex, drop loops.  On the resulting DAG the
search path count (SPC) of an arc is the number of source-to-sink paths
through it, counted with a virtual source feeding every vertex of in-degree
zero and a virtual sink fed by every vertex of out-degree zero.

Counts are Python ints, so they never overflow.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Literal

from .citegraph import CitationGraph

Variant = Literal["local", "global_standard", "key_route"]


class CycleError(ValueError):
    def __init__(self, cycle: list[int], labels: tuple[str, ...] = ()) -> None:
        shown = [labels[v] for v in cycle] if labels else cycle
        super().__init__(f"graph is not acyclic; cycle: {' -> '.join(map(str, shown + shown[:1]))}")
        self.cycle = cycle


@dataclass
class AcyclicPrepReport:
    n_input_vertices: int = 0
    n_weak_components: int = 0
    largest_component_size: int = 0
    n_strong_components_shrunk: int = 0
    n_loops_removed: int = 0
    vertex_map: dict[str, str] = field(default_factory=dict)
    members: dict[str, list[str]] = field(default_factory=dict)

    def rows(self) -> list[tuple[str, int]]:
        return [
            ("input_vertices", self.n_input_vertices),
            ("weak_components", self.n_weak_components),
            ("largest_component_size", self.largest_component_size),
            ("strong_components_shrunk", self.n_strong_components_shrunk),
            ("loops_removed", self.n_loops_removed),
        ]


@dataclass(frozen=True)
class SpcWeights:
    source_counts: tuple[int, ...]
    sink_counts: tuple[int, ...]
    arc_weights: dict[tuple[int, int], int]
    total_paths: int = 0


@dataclass(frozen=True)
class MainPathResult:
    variant: Variant
    arcs: frozenset[tuple[int, int]]
    vertices: frozenset[int]
    k: int = 1
    total_weight: int | None = None
    path: tuple[int, ...] = ()

    def labelled_arcs(self, g: CitationGraph) -> list[tuple[str, str]]:
        return [(g.vertices[a], g.vertices[b]) for a, b in sorted(self.arcs)]


def _subgraph(g: CitationGraph, keep: list[int]) -> CitationGraph:
    pos = {v: i for i, v in enumerate(keep)}
    arcs = frozenset((pos[a], pos[b]) for a, b in g.arcs if a in pos and b in pos)
    years = tuple(g.years[v] for v in keep) if g.years else ()
    return CitationGraph(tuple(g.vertices[v] for v in keep), arcs, years)


def weak_components(g: CitationGraph) -> list[list[int]]:
    """Weakly connected vertex sets, each sorted, ordered by smallest member."""
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in g.arcs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values(), key=lambda c: c[0])


def extract_largest_weak_component(g: CitationGraph, report: AcyclicPrepReport | None = None) -> CitationGraph:
    if g.n == 0:
        raise ValueError("empty graph")
    comps = weak_components(g)
    # sorted by smallest member, so max() keeps the first of equal sizes
    largest = max(comps, key=len)
    if report is not None:
        report.n_input_vertices = g.n
        report.n_weak_components = len(comps)
        report.largest_component_size = len(largest)
    return _subgraph(g, largest)


def strong_components(g: CitationGraph) -> list[list[int]]:
    """Tarjan's algorithm, iterative; components in reverse topological order."""
    succ = g.successors()
    index = [-1] * g.n
    low = [0] * g.n
    on_stack = [False] * g.n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(g.n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def _pmid_order(label: str) -> tuple[int, int, str]:
    return (0, int(label), label) if label.isdigit() else (1, 0, label)


def _representative(g: CitationGraph, members: list[int]) -> int:
    def key(v: int):
        y = g.year(v)
        return (y is None, y if y is not None else 0, _pmid_order(g.vertices[v]))
    return min(members, key=key)


def condense_strong_components(g: CitationGraph, report: AcyclicPrepReport | None = None) -> CitationGraph:
    """Shrink each strong component of two or more vertices into one.

    The shrunk vertex is labelled by its earliest-published member (ties go
    to the smallest PMID); arcs inside a component disappear and parallel
    arcs collapse.  Self-arcs of untouched vertices are kept.
    """
    comps = sorted(strong_components(g), key=lambda c: c[0])
    comp_of = [0] * g.n
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    arcs = set()
    for a, b in g.arcs:
        ca, cb = comp_of[a], comp_of[b]
        if ca != cb or (a == b and len(comps[ca]) == 1):
            arcs.add((ca, cb))
    reps = [_representative(g, c) for c in comps]
    labels = tuple(g.vertices[r] for r in reps)
    years = tuple(g.years[r] for r in reps) if g.years else ()
    if report is not None:
        shrunk = [c for c in comps if len(c) > 1]
        report.n_strong_components_shrunk += len(shrunk)
        old = dict(report.vertex_map) if report.vertex_map else {v: v for v in g.vertices}
        by_old_label = {g.vertices[v]: labels[comp_of[v]] for v in range(g.n)}
        report.vertex_map = {orig: by_old_label[cur] for orig, cur in old.items() if cur in by_old_label}
        for ci in range(len(comps)):
            if len(comps[ci]) > 1:
                report.members[labels[ci]] = [g.vertices[v] for v in comps[ci]]
    return CitationGraph(labels, frozenset(arcs), years)


def remove_loops(g: CitationGraph, report: AcyclicPrepReport | None = None) -> CitationGraph:
    loops = sum(1 for a, b in g.arcs if a == b)
    if report is not None:
        report.n_loops_removed += loops
    if not loops:
        return g
    return CitationGraph(g.vertices, frozenset((a, b) for a, b in g.arcs if a != b), g.years)


def make_acyclic(g: CitationGraph) -> tuple[CitationGraph, AcyclicPrepReport]:
    """Largest weak component, then strong-component shrinking, then loop removal."""
    report = AcyclicPrepReport()
    h = extract_largest_weak_component(g, report)
    report.vertex_map = {v: v for v in h.vertices}
    h = condense_strong_components(h, report)
    h = remove_loops(h, report)
    return h, report


def topological_order(g: CitationGraph) -> list[int]:
    """Kahn's algorithm, smallest ready vertex first; CycleError if cyclic."""
    succ = g.successors()
    indeg = [0] * g.n
    for _, b in g.arcs:
        indeg[b] += 1
    ready = [v for v in range(g.n) if indeg[v] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(ready, w)
    if len(order) < g.n:
        raise CycleError(_find_cycle(g, {v for v in range(g.n) if indeg[v] > 0}), g.vertices)
    return order


def _find_cycle(g: CitationGraph, candidates: set[int]) -> list[int]:
    succ = g.successors()
    # every leftover vertex has a leftover predecessor; walk backwards until a repeat
    pred = {b: a for a, b in sorted(g.arcs, reverse=True) if a in candidates and b in candidates}
    v = min(candidates)
    seen: dict[int, int] = {}
    walk = []
    while v not in seen:
        seen[v] = len(walk)
        walk.append(v)
        v = pred[v]
    cycle = walk[seen[v]:]
    cycle.reverse()
    assert all(cycle[(i + 1) % len(cycle)] in succ[cycle[i]] for i in range(len(cycle)))
    return cycle


def spc(g: CitationGraph) -> SpcWeights:
    """Search path counts on an acyclic graph."""
    order = topological_order(g)
    succ, pred = g.successors(), g.predecessors()
    from_source = [0] * g.n
    to_sink = [0] * g.n
    for v in order:
        from_source[v] = sum(from_source[u] for u in pred[v]) if pred[v] else 1
    for v in reversed(order):
        to_sink[v] = sum(to_sink[w] for w in succ[v]) if succ[v] else 1
    weights = {(a, b): from_source[a] * to_sink[b] for a, b in g.arcs}
    total = sum(to_sink[v] for v in range(g.n) if not pred[v])
    return SpcWeights(tuple(from_source), tuple(to_sink), weights, total)


def _best_to_sink(g: CitationGraph, w: SpcWeights, order: list[int]) -> tuple[list[int], list[int | None]]:
    succ = g.successors()
    best = [0] * g.n
    nxt: list[int | None] = [None] * g.n
    for v in reversed(order):
        for x in succ[v]:  # ascending, so strict > keeps the smallest on ties
            cand = w.arc_weights[(v, x)] + best[x]
            if nxt[v] is None or cand > best[v]:
                best[v], nxt[v] = cand, x
    return best, nxt


def _best_from_source(g: CitationGraph, w: SpcWeights, order: list[int]) -> tuple[list[int], list[int | None]]:
    pred = g.predecessors()
    best = [0] * g.n
    prv: list[int | None] = [None] * g.n
    for v in order:
        for u in pred[v]:
            cand = best[u] + w.arc_weights[(u, v)]
            if prv[v] is None or cand > best[v]:
                best[v], prv[v] = cand, u
    return best, prv


def _walk(start: int, step: list[int | None]) -> list[int]:
    path = [start]
    while step[path[-1]] is not None:
        path.append(step[path[-1]])
    return path


def _arcs_of(path: list[int]) -> set[tuple[int, int]]:
    return set(zip(path, path[1:]))


def main_path(g: CitationGraph, w: SpcWeights, variant: Variant = "global_standard", k: int = 1) -> MainPathResult:
    """Main path(s) of an SPC-weighted DAG.

    local
        From the virtual source, repeatedly follow every maximum-weight
        outgoing arc of each frontier vertex until sinks are reached.
    global_standard
        The source-to-sink path of largest total arc weight; among equals the
        lexicographically smallest vertex sequence.
    key_route
        The k heaviest arcs (ties: smallest (tail, head)), each extended by
        the heaviest path back to a source and forward to a sink.  Ties on
        those extensions go to the smallest neighbouring vertex index.
    """
    if g.n == 0:
        raise ValueError("empty graph")
    order = topological_order(g)
    succ, pred = g.successors(), g.predecessors()
    sources = [v for v in range(g.n) if not pred[v]]

    if variant == "local":
        top = max(w.sink_counts[v] for v in sources)
        frontier = [v for v in sources if w.sink_counts[v] == top]
        arcs: set[tuple[int, int]] = set()
        visited = set(frontier)
        while frontier:
            nxt = []
            for u in frontier:
                if not succ[u]:
                    continue
                m = max(w.arc_weights[(u, x)] for x in succ[u])
                for x in succ[u]:
                    if w.arc_weights[(u, x)] == m:
                        arcs.add((u, x))
                        if x not in visited:
                            visited.add(x)
                            nxt.append(x)
            frontier = sorted(nxt)
        return MainPathResult("local", frozenset(arcs), frozenset(visited))

    if variant == "global_standard":
        best, nxt = _best_to_sink(g, w, order)
        start = max(sources, key=lambda v: (best[v], -v))
        path = _walk(start, nxt)
        return MainPathResult("global_standard", frozenset(_arcs_of(path)), frozenset(path),
                              total_weight=best[start], path=tuple(path))

    if variant == "key_route":
        if k < 1:
            raise ValueError("k must be >= 1")
        if not w.arc_weights:
            return MainPathResult("key_route", frozenset(), frozenset(sources[:1]), k=k)
        fwd_best, nxt = _best_to_sink(g, w, order)
        back_best, prv = _best_from_source(g, w, order)
        ranked = sorted(w.arc_weights, key=lambda a: (-w.arc_weights[a], a))[:k]
        arcs = set()
        for tail, head in ranked:
            back = _walk(tail, prv)[::-1]
            fwd = _walk(head, nxt)
            arcs |= _arcs_of(back + fwd)
        vertices = {v for a in arcs for v in a}
        return MainPathResult("key_route", frozenset(arcs), frozenset(vertices), k=k)

    raise ValueError(f"unknown main-path variant {variant!r}")
