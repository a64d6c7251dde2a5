"""The pattern tree T with BFS labels t_0..t_m and edge labels e_1..e_m."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import IndexOutOfRange, NoLeafInTB, NotATree, RootUnknown, UnknownTreeVertex
from .graph import A, B, CLASS_NAMES


@dataclass(frozen=True)
class LabelledTree:
    """Tree on vertices 0..m where ``parent[i] < i`` joins t_i to the tree.

    Edge label ``i`` (1..m) is the edge {t_i, t_parent[i]}. ``side[j]`` is 0
    when t_j lies in T_A and 1 for T_B.
    """

    names: tuple[str, ...]
    parent: tuple[int, ...]
    side: tuple[int, ...]
    incident: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)
    children: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        inc: list[set[int]] = [set() for _ in self.names]
        kids: list[list[int]] = [[] for _ in self.names]
        for i in range(1, len(self.names)):
            p = self.parent[i]
            inc[i].add(i)
            inc[p].add(i)
            kids[p].append(i)
        object.__setattr__(self, "incident", tuple(frozenset(s) for s in inc))
        object.__setattr__(self, "children", tuple(tuple(k) for k in kids))

    @property
    def m(self) -> int:
        return len(self.names) - 1

    def edge(self, i: int) -> tuple[int, int]:
        """Endpoints (t_i, t_parent) of edge label i."""
        return i, self.parent[i]

    def endpoint_in(self, i: int, cls: int) -> int:
        """The endpoint of e_i lying in tree class ``cls``."""
        a, b = i, self.parent[i]
        return a if self.side[a] == cls else b

    def class_vertices(self, cls: int) -> list[int]:
        return [j for j in range(self.m + 1) if self.side[j] == cls]

    def vertex(self, v: int | str) -> int:
        if isinstance(v, str):
            if v in self.names:
                return self.names.index(v)
            raise UnknownTreeVertex(v)
        if not 0 <= v <= self.m:
            raise UnknownTreeVertex(str(v))
        return v

    @cached_property
    def subtree(self) -> tuple[frozenset[int], ...]:
        """Vertex sets of the subtrees hanging below each t_j."""
        out: list[set[int]] = [{j} for j in range(self.m + 1)]
        for j in range(self.m, 0, -1):
            out[self.parent[j]] |= out[j]
        return tuple(frozenset(s) for s in out)

    def edges(self) -> list[tuple[str, str]]:
        return [(self.names[self.parent[i]], self.names[i]) for i in range(1, self.m + 1)]


@dataclass(frozen=True)
class TreeSplit:
    """T - e_i split into the t_0 side (minus) and the rest (plus)."""

    i: int
    minus_edges: frozenset[int]
    plus_edges: frozenset[int]
    minus_vertices: frozenset[int]
    plus_vertices: frozenset[int]


def _tree_adjacency(edges: Sequence[tuple[str, str]]):
    names: list[str] = []
    index: dict[str, int] = {}
    for a, b in edges:
        for x in (a, b):
            if x not in index:
                index[x] = len(names)
                names.append(x)
    adj: list[list[int]] = [[] for _ in names]
    seen = set()
    for a, b in edges:
        u, v = index[a], index[b]
        if u == v:
            raise NotATree(f"self-loop at {a}")
        if frozenset((u, v)) in seen:
            raise NotATree(f"repeated edge {a} {b}")
        seen.add(frozenset((u, v)))
        adj[u].append(v)
        adj[v].append(u)
    if not edges:
        raise NotATree("a tree needs at least one edge")
    if len(edges) != len(names) - 1:
        raise NotATree(f"{len(names)} vertices but {len(edges)} edges")
    # connectivity
    mark = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in mark:
                mark.add(w)
                queue.append(w)
    if len(mark) != len(names):
        raise NotATree("tree is disconnected")
    return names, index, adj


def label_tree(edges: Iterable[tuple[str, str]], root: str, root_class: str = "A") -> LabelledTree:
    """BFS-label a tree from ``root``; children are visited in input order.

    The root's class is T_A unless ``root_class="B"``. Raises NoLeafInTB when
    the resulting T_B has no leaf.
    """
    edges = list(edges)
    names, index, adj = _tree_adjacency(edges)
    if root not in index:
        raise RootUnknown(root)
    rc = CLASS_NAMES.index(root_class.upper()) if isinstance(root_class, str) else int(root_class)

    r = index[root]
    order = [r]
    parent_of = {r: -1}
    queue = deque([r])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in parent_of:
                parent_of[w] = u
                order.append(w)
                queue.append(w)
    label = {v: j for j, v in enumerate(order)}
    parent = tuple(-1 if parent_of[v] == -1 else label[parent_of[v]] for v in order)
    side = [rc] * len(order)
    for j in range(1, len(order)):
        side[j] = 1 - side[parent[j]]
    degrees = [len(adj[v]) for v in order]
    if not any(side[j] == B and degrees[j] == 1 for j in range(len(order))):
        raise NoLeafInTB(f"rooting at {root} in class {CLASS_NAMES[rc]} leaves T_B without a leaf")
    return LabelledTree(tuple(names[v] for v in order), parent, tuple(side))


def auto_root(edges: Iterable[tuple[str, str]], root_class: str = "A") -> LabelledTree:
    """Label from the lowest-index vertex whose rooting gives T_B a leaf."""
    edges = list(edges)
    names, _, _ = _tree_adjacency(edges)
    for name in names:
        try:
            return label_tree(edges, name, root_class)
        except NoLeafInTB:
            continue
    raise NoLeafInTB("no root gives T_B a leaf")  # pragma: no cover - every tree has one


def incident_colours(t: LabelledTree, v: int | str) -> frozenset[int]:
    """S(v): edge labels at tree vertex v."""
    return t.incident[t.vertex(v)]


def split(t: LabelledTree, i: int) -> TreeSplit:
    if not 1 <= i <= t.m:
        raise IndexOutOfRange(f"edge index {i} not in 1..{t.m}")
    below = t.subtree[i]
    plus_edges = frozenset({i} | {k for k in below if k != i})
    minus_edges = frozenset(range(1, t.m + 1)) - plus_edges
    plus_vertices = frozenset(below | {t.parent[i]})
    minus_vertices = frozenset(range(t.m + 1)) - below
    return TreeSplit(i, minus_edges, plus_edges, minus_vertices, plus_vertices)


def path_tree(m: int, root_class: str = "A") -> LabelledTree:
    """Path on m edges rooted at its first vertex (test and CLI convenience)."""
    edges = [(f"p{k}", f"p{k + 1}") for k in range(m)]
    return label_tree(edges, "p0", root_class)
