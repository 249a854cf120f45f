"""Identifiability decisions for mixed-graph SEMs.

Three routes are implemented: the greedy half-trek fixpoint, the
counting-only quasi-linear fixpoint, and a recursive criterion that
re-decides each candidate source set with its own flow check.  The
first and third must always agree; the acceptance census enforces this.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .graphs import MixedGraph, Trek

__all__ = [
    "Certificate",
    "edge_count_bound",
    "has_subset_cycles",
    "htc_admissible_set",
    "htc_identify",
    "linear_identify",
    "quasi_linear_vertices",
    "verify_certificate",
]


@dataclass(frozen=True)
class Certificate:
    """Witness of identifiability: one source set per vertex plus a
    compatible total ordering (a permutation of 1..n).

    Whenever w lies in sets[v] and is half-trek reachable from v, w must
    come before v in the ordering.
    """

    sets: dict[int, frozenset[int]]
    ordering: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {
            "order": list(self.ordering),
            "sets": {str(v): sorted(self.sets[v])
                     for v in sorted(self.sets)},
        }


class _FlowNet:
    """Unit-capacity max flow with BFS augmentation (Edmonds-Karp).

    Adjacency order is the edge insertion order, which callers keep
    sorted, so augmentation and therefore the chosen flow paths are
    deterministic.
    """

    __slots__ = ("adj",)

    def __init__(self, nodes: int):
        self.adj: list[list[list[int]]] = [[] for _ in range(nodes)]

    def add_edge(self, u: int, v: int, cap: int = 1) -> list[int]:
        fwd = [v, cap, len(self.adj[v])]
        rev = [u, 0, len(self.adj[u])]
        self.adj[u].append(fwd)
        self.adj[v].append(rev)
        return fwd

    def max_flow(self, s: int, t: int, limit: int) -> int:
        flow = 0
        adj = self.adj
        while flow < limit:
            parent: list[tuple[int, list[int]] | None] = [None] * len(adj)
            parent[s] = (s, None)  # sentinel
            queue = deque([s])
            reached = False
            while queue:
                u = queue.popleft()
                if u == t:
                    reached = True
                    break
                for edge in adj[u]:
                    v = edge[0]
                    if edge[1] > 0 and parent[v] is None:
                        parent[v] = (u, edge)
                        queue.append(v)
            if not reached:
                break
            v = t
            while v != s:
                u, edge = parent[v]
                edge[1] -= 1
                adj[edge[0]][edge[2]][1] += 1
                v = u
            flow += 1
        return flow


def _half_trek_flow(g: MixedGraph, v: int, sources) -> tuple[int, dict[int, Trek]]:
    """Largest sided-intersection-free half-trek system from ``sources``
    onto pa(v), as (flow value, {chosen source: half-trek}).

    Network: source -> L(y) for each y; L(y) -> R(y) (a directed walk
    starting at y itself, length zero allowed); L(y) -> R(w) for each
    sibling w of y (bidirected bridge); R(a) -> R(b) for each a -> b;
    R(p) -> sink for p in pa(v).  Every L and R node has unit capacity,
    realized by splitting the R nodes.
    """
    pa = g.parents(v)
    k = len(pa)
    if k == 0:
        return 0, {}
    n = g.n
    src = 0
    sink = 3 * n + 1

    def l_node(y):
        return y

    def r_in(w):
        return n + w

    def r_out(w):
        return 2 * n + w

    net = _FlowNet(3 * n + 2)
    for w in range(1, n + 1):
        net.add_edge(r_in(w), r_out(w), 1)
    step_edges: dict[int, list[tuple[list[int], int]]] = \
        {w: [] for w in range(1, n + 1)}
    for a, b in sorted(g.directed):
        step_edges[a].append((net.add_edge(r_out(a), r_in(b), 1), b))
    src_edges: dict[int, list[int]] = {}
    start_edges: dict[int, list[tuple[list[int], int]]] = {}
    for y in sorted(sources):
        src_edges[y] = net.add_edge(src, l_node(y), 1)
        starts = [(net.add_edge(l_node(y), r_in(y), 1), y)]
        starts += [(net.add_edge(l_node(y), r_in(w), 1), w)
                   for w in g.siblings(y)]
        start_edges[y] = starts
    sink_edges: dict[int, list[int]] = {}
    for p in pa:
        sink_edges[p] = net.add_edge(r_out(p), sink, 1)

    value = net.max_flow(src, sink, limit=k)
    if value < k:
        return value, {}

    system: dict[int, Trek] = {}
    for y in sorted(sources):
        if src_edges[y][1] != 0:
            continue  # this source carries no flow
        first = next(w for edge, w in start_edges[y] if edge[1] == 0)
        path = [first]
        while True:
            w = path[-1]
            exit_edge = sink_edges.get(w)
            if exit_edge is not None and exit_edge[1] == 0:
                break
            nxt = next(u for edge, u in step_edges[w] if edge[1] == 0)
            path.append(nxt)
        bridge: int | tuple[int, int] = y if first == y else (y, first)
        system[y] = Trek(left=(y,), right=tuple(path), bridge=bridge)
    return value, system


def htc_admissible_set(g: MixedGraph, v: int, allowed):
    """A subset S of ``allowed`` of size |pa(v)| admitting a half-trek
    system with no sided intersection onto pa(v), plus the system, or
    None when no such subset exists.

    The flow's fixed BFS augmentation order makes the returned set
    deterministic, preferring low-index sources.
    """
    allowed = frozenset(allowed)
    forbidden = allowed & ({v} | set(g.siblings(v)))
    if forbidden:
        raise ValueError(f"allowed set may not contain {sorted(forbidden)} "
                         f"(vertex {v} or its siblings)")
    k = len(g.parents(v))
    if k == 0:
        return frozenset(), ()
    if len(allowed) < k:
        return None
    value, system = _half_trek_flow(g, v, allowed)
    if value < k:
        return None
    chosen = frozenset(system)
    treks = tuple(system[y] for y in sorted(system))
    return chosen, treks


def _allowed_for(g: MixedGraph, v: int, solved: set[int]) -> frozenset[int]:
    htr = g.half_trek_reachable(v)
    excl = {v} | set(g.siblings(v))
    free = set(g.vertices()) - htr - excl
    return frozenset(free | (solved - excl))


def htc_identify(g: MixedGraph) -> Certificate | None:
    """Greedy fixpoint over vertices in index order.

    A vertex is solved once an admissible source set exists inside the
    vertices that are either not half-trek reachable from it or already
    solved (its siblings and itself excluded).  The ordering of the
    certificate is the solve order.
    """
    solved: set[int] = set()
    order: list[int] = []
    sets: dict[int, frozenset[int]] = {}
    changed = True
    while changed and len(solved) < g.n:
        changed = False
        for v in g.vertices():
            if v in solved:
                continue
            result = htc_admissible_set(g, v, _allowed_for(g, v, solved))
            if result is not None:
                sets[v] = result[0]
                solved.add(v)
                order.append(v)
                changed = True
    if len(solved) != g.n:
        return None
    return Certificate(sets=sets, ordering=tuple(order))


def quasi_linear_vertices(g: MixedGraph) -> frozenset[int]:
    """Fixpoint of the counting-only solvability test.

    A vertex joins once enough candidate sources exist: vertices that
    are already in the set or have no half-trek from v, with v and its
    siblings excluded.  No rank condition is checked at this stage.
    """
    q: set[int] = set()
    changed = True
    while changed:
        changed = False
        for v in g.vertices():
            if v in q:
                continue
            excl = {v} | set(g.siblings(v))
            candidates = (q | (set(g.vertices()) - g.half_trek_reachable(v))) - excl
            if len(candidates) >= len(g.parents(v)):
                q.add(v)
                changed = True
    return frozenset(q)


def _set_passes_htc(g: MixedGraph, v: int, s) -> bool:
    s = frozenset(s)
    if len(s) != len(g.parents(v)):
        return False
    if s & ({v} | set(g.siblings(v))):
        return False
    if not s:
        return True
    value, _ = _half_trek_flow(g, v, s)
    return value == len(g.parents(v))


def linear_identify(g: MixedGraph) -> Certificate | None:
    """Recursive criterion, decided independently of htc_identify.

    Uses the same greedy loop but enumerates candidate source subsets
    explicitly (ascending lexicographic) and accepts the first one that
    passes its own half-trek flow check.  Must agree with htc_identify
    on every graph.
    """
    solved: set[int] = set()
    order: list[int] = []
    sets: dict[int, frozenset[int]] = {}
    changed = True
    while changed and len(solved) < g.n:
        changed = False
        for v in g.vertices():
            if v in solved:
                continue
            k = len(g.parents(v))
            allowed = sorted(_allowed_for(g, v, solved))
            if len(allowed) < k:
                continue
            for cand in combinations(allowed, k):
                if _set_passes_htc(g, v, cand):
                    sets[v] = frozenset(cand)
                    solved.add(v)
                    order.append(v)
                    changed = True
                    break
    if len(solved) != g.n:
        return None
    return Certificate(sets=sets, ordering=tuple(order))


def has_subset_cycles(cert: Certificate) -> bool:
    """True iff the digraph with an edge w -> v for every w in sets[v]
    contains a directed cycle."""
    succ: dict[int, list[int]] = {}
    for v, s in cert.sets.items():
        for w in s:
            succ.setdefault(w, []).append(v)
    WHITE, GREY, BLACK = 0, 1, 2
    color = {v: WHITE for v in cert.sets}
    for w in succ:
        color.setdefault(w, WHITE)

    def dfs(start: int) -> bool:
        stack = [(start, iter(succ.get(start, ())))]
        color[start] = GREY
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                c = color.get(nxt, WHITE)
                if c == GREY:
                    return True
                if c == WHITE:
                    color[nxt] = GREY
                    stack.append((nxt, iter(succ.get(nxt, ()))))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                stack.pop()
        return False

    return any(color[v] == 0 and dfs(v) for v in sorted(color))


def edge_count_bound(g: MixedGraph) -> bool:
    """True iff |D| + |B| <= C(n, 2); False certifies non-identifiability."""
    return len(g.directed) + len(g.bidirected) <= g.n * (g.n - 1) // 2


def verify_certificate(g: MixedGraph, cert: Certificate) -> bool:
    """Re-check every certificate invariant from scratch.

    Sizes, disjointness from the vertex and its siblings, the ordering
    constraint on half-trek reachable sources, and a fresh flow check
    that each source set really supports a half-trek system onto the
    parents.
    """
    if sorted(cert.ordering) != list(g.vertices()):
        return False
    if set(cert.sets) != set(g.vertices()):
        return False
    position = {v: idx for idx, v in enumerate(cert.ordering)}
    for v in g.vertices():
        s = cert.sets[v]
        if len(s) != len(g.parents(v)):
            return False
        if s & ({v} | set(g.siblings(v))):
            return False
        for w in s & g.half_trek_reachable(v):
            if position[w] >= position[v]:
                return False
        if not _set_passes_htc(g, v, s):
            return False
    return True
