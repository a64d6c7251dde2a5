"""Simple bipartite host graphs, colour degrees and edge connectivity."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .errors import (
    DuplicateEdge,
    NotBipartite,
    PartitionMismatch,
    SelfLoop,
    TooSmall,
    UncolouredEdge,
    UnknownVertex,
)

A, B = 0, 1
CLASS_NAMES = ("A", "B")


@dataclass(frozen=True)
class Graph:
    """Simple bipartite graph with dense vertex ids and stable edge ids.

    ``side[v]`` is 0 for the A class and 1 for the B class. Edge ``k`` is
    ``edges[k]``, stored in input orientation.
    """

    names: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    side: tuple[int, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)
    incident: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    edge_id: dict[tuple[int, int], int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        inc: list[list[int]] = [[] for _ in self.names]
        eid: dict[tuple[int, int], int] = {}
        for k, (u, v) in enumerate(self.edges):
            inc[u].append(k)
            inc[v].append(k)
            eid[(u, v)] = k
            eid[(v, u)] = k
        object.__setattr__(self, "index", {n: i for i, n in enumerate(self.names)})
        object.__setattr__(self, "incident", tuple(tuple(x) for x in inc))
        object.__setattr__(self, "edge_id", eid)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def size(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.incident[v])

    def other(self, k: int, v: int) -> int:
        a, b = self.edges[k]
        return b if a == v else a

    def vertex(self, v: int | str) -> int:
        if isinstance(v, str):
            try:
                return self.index[v]
            except KeyError:
                raise UnknownVertex(v) from None
        if not 0 <= v < self.n:
            raise UnknownVertex(str(v))
        return v

    def class_members(self, cls: int) -> list[int]:
        return [v for v in range(self.n) if self.side[v] == cls]

    def edge_names(self, k: int) -> tuple[str, str]:
        u, v = self.edges[k]
        return self.names[u], self.names[v]


def load_graph(
    pairs: Iterable[tuple[str, str]],
    partition: Mapping[str, str] | None = None,
) -> Graph:
    """Build a Graph from named vertex pairs.

    Vertices are indexed in order of first appearance. The bipartition is
    found by BFS 2-colouring; the first-seen vertex of each component goes to
    A unless ``partition`` (name -> "A"/"B") says otherwise, in which case the
    declared classes are checked against the 2-colouring.
    """
    index: dict[str, int] = {}
    names: list[str] = []
    edges: list[tuple[int, int]] = []
    seen: set[frozenset[int]] = set()

    def vid(name: str) -> int:
        if name not in index:
            index[name] = len(names)
            names.append(name)
        return index[name]

    for a, b in pairs:
        if not a or not b:
            raise ValueError("empty vertex name")
        if a == b:
            raise SelfLoop(f"self-loop at {a}")
        u, v = vid(a), vid(b)
        key = frozenset((u, v))
        if key in seen:
            raise DuplicateEdge(f"duplicate edge {a} {b}")
        seen.add(key)
        edges.append((u, v))
    if partition:
        for name in partition:
            vid(name)

    adj: list[list[int]] = [[] for _ in names]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    side = _two_colour(names, adj)
    if partition:
        side = _apply_partition(names, adj, side, partition)
    return Graph(tuple(names), tuple(edges), tuple(side))


def _two_colour(names: Sequence[str], adj: list[list[int]]) -> list[int]:
    side = [-1] * len(names)
    parent = [-1] * len(names)
    for root in range(len(names)):
        if side[root] != -1:
            continue
        side[root] = A
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if side[w] == -1:
                    side[w] = 1 - side[u]
                    parent[w] = u
                    queue.append(w)
                elif side[w] == side[u]:
                    raise NotBipartite(_odd_cycle(names, parent, u, w))
    return side


def _odd_cycle(names, parent, u, w) -> list[str]:
    def path_to_root(x):
        out = [x]
        while parent[x] != -1:
            x = parent[x]
            out.append(x)
        return out

    pu, pw = path_to_root(u), path_to_root(w)
    on_w = set(pw)
    lca = next(x for x in pu if x in on_w)
    down = pu[: pu.index(lca) + 1][::-1]
    up = pw[: pw.index(lca)]
    cycle = down + up + [lca]
    return [names[x] for x in cycle]


def _apply_partition(names, adj, side, partition):
    declared = {}
    for name, cls in partition.items():
        c = cls.upper()
        if c not in CLASS_NAMES:
            raise PartitionMismatch(f"unknown class {cls!r} for {name}")
        declared[name] = CLASS_NAMES.index(c)
    comp = [-1] * len(names)
    for root in range(len(names)):
        if comp[root] != -1:
            continue
        members = [root]
        comp[root] = root
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if comp[w] == -1:
                    comp[w] = root
                    members.append(w)
                    queue.append(w)
        flips = {declared[names[x]] != side[x] for x in members if names[x] in declared}
        if len(flips) > 1:
            bad = [names[x] for x in members if names[x] in declared]
            raise PartitionMismatch("declared classes contradict the 2-colouring near " + ", ".join(bad[:4]))
        if flips == {True}:
            for x in members:
                side[x] = 1 - side[x]
    return side


def edge_connectivity(g: Graph) -> int:
    """Global minimum edge cut: n-1 unit-capacity max flows from vertex 0."""
    if g.n < 2:
        raise TooSmall("edge connectivity needs at least 2 vertices")
    dg = nx.DiGraph()
    dg.add_nodes_from(range(g.n))
    for u, v in g.edges:
        dg.add_edge(u, v, capacity=1)
        dg.add_edge(v, u, capacity=1)
    best = min(g.degree(v) for v in range(g.n))
    for t in range(1, g.n):
        if best == 0:
            break
        best = min(best, nx.maximum_flow_value(dg, 0, t))
    return int(best)


def check_colouring(g: Graph, col: Sequence[int | None]) -> tuple[int, ...]:
    if len(col) != g.size:
        raise UncolouredEdge(f"colouring covers {len(col)} of {g.size} edges")
    for k, c in enumerate(col):
        if c is None:
            raise UncolouredEdge(f"edge {' '.join(g.edge_names(k))} has no colour")
    return tuple(col)  # type: ignore[arg-type]


def colour_degree(g: Graph, col: Sequence[int | None], v: int | str, i: int) -> int:
    """Number of edges at ``v`` with colour ``i``."""
    col = check_colouring(g, col)
    v = g.vertex(v)
    return sum(1 for k in g.incident[v] if col[k] == i)


def colour_degree_table(g: Graph, col: Sequence[int | None]) -> Counter:
    """(vertex, colour) -> count, for every nonzero entry."""
    col = check_colouring(g, col)
    table: Counter = Counter()
    for k, (u, v) in enumerate(g.edges):
        table[(u, col[k])] += 1
        table[(v, col[k])] += 1
    return table


def colour_edges(g: Graph, col: Sequence[int], v: int, i: int) -> list[int]:
    """Edge ids at ``v`` coloured ``i``, ascending."""
    return [k for k in g.incident[v] if col[k] == i]
