"""Mixed graphs with directed and bidirected edges on vertices 1..n.

Graph values are immutable after construction; all queries are pure, so
instances are safe to share between threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = [
    "GraphParseError",
    "MixedGraph",
    "Trek",
    "enumerate_treks",
    "parse_graph",
    "serialize_graph",
]

_EDGE_RE = re.compile(r"(\d+)\s*(<->|->)\s*(\d+)")
_HEADER_RE = re.compile(r"vertices\s+(\d+)")


class GraphParseError(ValueError):
    """Malformed graph text; the message names the 1-based line number."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class MixedGraph:
    """A loop-free mixed graph (V, D, B) on vertices 1..n.

    Directed edges are ordered pairs (i, j) meaning i -> j; bidirected
    edges are unordered and stored canonically as (i, j) with i < j.
    Duplicate edges in the input collapse silently (sets); the file
    parser is the place where duplicates are rejected.
    """

    __slots__ = ("n", "directed", "bidirected", "_parents", "_children",
                 "_siblings", "_htr_cache", "_paths_cache")

    def __init__(self, n: int, directed=(), bidirected=()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        self.n = n

        dset: set[tuple[int, int]] = set()
        for i, j in directed:
            self._check_vertex(i)
            self._check_vertex(j)
            if i == j:
                raise ValueError(f"loop edge {i} -> {j} is not allowed")
            dset.add((i, j))
        bset: set[tuple[int, int]] = set()
        for i, j in bidirected:
            self._check_vertex(i)
            self._check_vertex(j)
            if i == j:
                raise ValueError(f"loop edge {i} <-> {j} is not allowed")
            bset.add((min(i, j), max(i, j)))

        self.directed = frozenset(dset)
        self.bidirected = frozenset(bset)

        parents = {v: [] for v in range(1, n + 1)}
        children = {v: [] for v in range(1, n + 1)}
        siblings = {v: [] for v in range(1, n + 1)}
        for i, j in sorted(dset):
            parents[j].append(i)
            children[i].append(j)
        for i, j in sorted(bset):
            siblings[i].append(j)
            siblings[j].append(i)
        self._parents = {v: tuple(sorted(parents[v])) for v in parents}
        self._children = {v: tuple(sorted(children[v])) for v in children}
        self._siblings = {v: tuple(sorted(siblings[v])) for v in siblings}
        self._htr_cache: dict[int, frozenset[int]] = {}
        self._paths_cache: dict[tuple[int, int], list[tuple[int, ...]]] = {}

    def _check_vertex(self, v: int) -> None:
        if not isinstance(v, int) or not 1 <= v <= self.n:
            raise ValueError(f"vertex {v!r} outside 1..{self.n}")

    # -- structural queries -------------------------------------------------

    def parents(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return self._parents[v]

    def children(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return self._children[v]

    def siblings(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return self._siblings[v]

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def has_directed(self, i: int, j: int) -> bool:
        return (i, j) in self.directed

    def has_bidirected(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.bidirected

    def is_bow_free(self) -> bool:
        """True iff no vertex pair carries both a directed and a bidirected edge."""
        return not any((min(i, j), max(i, j)) in self.bidirected
                       for i, j in self.directed)

    def is_acyclic(self) -> bool:
        return self.topological_order() is not None

    def topological_order(self) -> list[int] | None:
        """Smallest-index-first topological order of D, or None if cyclic."""
        indeg = {v: len(self._parents[v]) for v in self.vertices()}
        ready = sorted(v for v in self.vertices() if indeg[v] == 0)
        order: list[int] = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for c in self._children[v]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    # keep the ready list sorted for a deterministic order
                    lo, hi = 0, len(ready)
                    while lo < hi:
                        mid = (lo + hi) // 2
                        if ready[mid] < c:
                            lo = mid + 1
                        else:
                            hi = mid
                    ready.insert(lo, c)
        return order if len(order) == self.n else None

    def half_trek_reachable(self, v: int) -> frozenset[int]:
        """htr(v): endpoints of half-treks from v with at least one edge.

        Either a proper directed-walk descendant of v, or any vertex
        reached by a directed walk of length >= 0 from a sibling of v.
        v itself can be a member when it lies on a directed cycle or is
        reachable from one of its own siblings.
        """
        self._check_vertex(v)
        cached = self._htr_cache.get(v)
        if cached is not None:
            return cached
        seed = list(self._children[v]) + list(self._siblings[v])
        seen: set[int] = set(seed)
        stack = list(seed)
        while stack:
            w = stack.pop()
            for c in self._children[w]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        result = frozenset(seen)
        self._htr_cache[v] = result
        return result

    # -- trek enumeration helpers ------------------------------------------

    def _directed_paths(self, s: int, t: int) -> list[tuple[int, ...]]:
        """All simple directed paths s -> .. -> t (acyclic graphs only)."""
        key = (s, t)
        cached = self._paths_cache.get(key)
        if cached is not None:
            return cached
        paths: list[tuple[int, ...]] = []

        def walk(cur: int, trail: list[int]) -> None:
            if cur == t:
                paths.append(tuple(trail))
            for c in self._children[cur]:
                if c not in trail:
                    trail.append(c)
                    walk(c, trail)
                    trail.pop()

        walk(s, [s])
        paths.sort()
        self._paths_cache[key] = paths
        return paths

    # -- dunder -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, MixedGraph):
            return NotImplemented
        return (self.n == other.n and self.directed == other.directed
                and self.bidirected == other.bidirected)

    def __hash__(self) -> int:
        return hash((self.n, self.directed, self.bidirected))

    def __repr__(self) -> str:
        return (f"MixedGraph(n={self.n}, directed={sorted(self.directed)}, "
                f"bidirected={sorted(self.bidirected)})")


@dataclass(frozen=True)
class Trek:
    """A collider-free walk, as a left side walked against the arrows, a
    bridge, and a right side walked along the arrows.

    ``left`` runs from the left endpoint back to the source or the left
    end of the bidirected bridge.  ``bridge`` is the shared source
    vertex, or the bidirected pair (x, y) as traversed.  A half-trek has
    a left side with zero edges, so ``left`` is a single vertex.
    """

    left: tuple[int, ...]
    right: tuple[int, ...]
    bridge: int | tuple[int, int]

    @property
    def is_half_trek(self) -> bool:
        return len(self.left) == 1

    def omega_index(self) -> tuple[int, int]:
        if isinstance(self.bridge, tuple):
            x, y = self.bridge
            return (min(x, y), max(x, y))
        return (self.bridge, self.bridge)

    def lambda_edges(self) -> tuple[tuple[int, int], ...]:
        """Directed edges traversed, with multiplicity, sorted."""
        edges = [(self.left[t + 1], self.left[t])
                 for t in range(len(self.left) - 1)]
        edges += [(self.right[t], self.right[t + 1])
                  for t in range(len(self.right) - 1)]
        return tuple(sorted(edges))

    def monomial(self) -> tuple[tuple[int, int], tuple[tuple[int, int], ...]]:
        return (self.omega_index(), self.lambda_edges())

    def value(self, lam, omega) -> float:
        """Numeric trek monomial at coefficient matrices (1-based vertices)."""
        oi, oj = self.omega_index()
        val = omega[oi - 1, oj - 1]
        for a, b in self.lambda_edges():
            val *= lam[a - 1, b - 1]
        return val


def enumerate_treks(g: MixedGraph, v: int, w: int) -> list[Trek]:
    """Every trek from v to w in an acyclic mixed graph, in a fixed
    lexicographic order on (left, right) vertex sequences.

    Rejects cyclic graphs, where the trek set is infinite.
    """
    g._check_vertex(v)
    g._check_vertex(w)
    if not g.is_acyclic():
        raise ValueError("trek enumeration requires an acyclic graph")
    treks: list[Trek] = []
    for s in g.vertices():
        for p_left in g._directed_paths(s, v):
            for p_right in g._directed_paths(s, w):
                treks.append(Trek(left=tuple(reversed(p_left)),
                                  right=p_right, bridge=s))
    for x, y in sorted(g.bidirected):
        for bx, by in ((x, y), (y, x)):
            for p_left in g._directed_paths(bx, v):
                for p_right in g._directed_paths(by, w):
                    treks.append(Trek(left=tuple(reversed(p_left)),
                                      right=p_right, bridge=(bx, by)))
    treks.sort(key=lambda t: (t.left, t.right,
                              t.bridge if isinstance(t.bridge, tuple)
                              else (t.bridge,)))
    return treks


def parse_graph(text: str) -> MixedGraph:
    """Parse the graph file format.

    First non-comment line is ``vertices N``; each following line is an
    edge ``i -> j`` or ``i <-> j``.  ``#`` starts a comment, whitespace
    is incidental, duplicate edges are rejected.
    """
    n: int | None = None
    directed: list[tuple[int, int]] = []
    bidirected: list[tuple[int, int]] = []
    seen_d: set[tuple[int, int]] = set()
    seen_b: set[tuple[int, int]] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            m = _HEADER_RE.fullmatch(line)
            if m is None:
                raise GraphParseError("expected 'vertices N' header", line_no)
            n = int(m.group(1))
            continue
        m = _EDGE_RE.fullmatch(line)
        if m is None:
            raise GraphParseError(f"unrecognized edge syntax {line!r}", line_no)
        i, arrow, j = int(m.group(1)), m.group(2), int(m.group(3))
        for end in (i, j):
            if not 1 <= end <= n:
                raise GraphParseError(f"vertex {end} outside 1..{n}", line_no)
        if i == j:
            raise GraphParseError(f"loop edge {i} {arrow} {j}", line_no)
        if arrow == "->":
            if (i, j) in seen_d:
                raise GraphParseError(f"duplicate edge {i} -> {j}", line_no)
            seen_d.add((i, j))
            directed.append((i, j))
        else:
            key = (min(i, j), max(i, j))
            if key in seen_b:
                raise GraphParseError(f"duplicate edge {i} <-> {j}", line_no)
            seen_b.add(key)
            bidirected.append(key)
    if n is None:
        raise GraphParseError("missing 'vertices N' header")
    return MixedGraph(n, directed, bidirected)


def serialize_graph(g: MixedGraph) -> str:
    """Canonical text form; parse(serialize(g)) == g."""
    lines = [f"vertices {g.n}"]
    lines += [f"{i} -> {j}" for i, j in sorted(g.directed)]
    lines += [f"{i} <-> {j}" for i, j in sorted(g.bidirected)]
    return "\n".join(lines) + "\n"
